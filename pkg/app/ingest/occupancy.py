"""Occupancy records to probability traces.

Availability is proxied by ``1 - occupied / capacity``, clamped into
``[eps, 1]`` so a full lot keeps a small positive probability.
"""
import logging
from typing import Any, Dict, Mapping, Optional

import numpy as np
import pandas as pd

from app.config import Config
from app.errors import DataFileError
from app.models.observer.traces import ProbabilityTrace, TraceKind
from .records import occupancy_frame

logger = logging.getLogger(__name__)


def day_origin(frame: pd.DataFrame) -> pd.Timestamp:
    """Midnight of the first day in ``frame``; trace minutes count from here."""
    return pd.Timestamp(frame["timestamp"].min()).normalize()


def to_minutes(timestamps: pd.Series, origin: pd.Timestamp) -> np.ndarray:
    return ((pd.to_datetime(timestamps) - origin) / pd.Timedelta(minutes=1)).to_numpy(dtype=float)


def apply_lot_map(frame: pd.DataFrame, lot_map: Mapping[str, str]) -> pd.DataFrame:
    """Merge source lots into model lots by summing occupied and capacity per timestamp.

    Source lots missing from the map are dropped.
    """
    if not lot_map:
        return frame
    mapped = frame.assign(lot_id=frame["lot_id"].map(lot_map)).dropna(subset=["lot_id"])
    return (mapped.groupby(["lot_id", "timestamp"], sort=True)[["occupied", "capacity"]]
            .sum().reset_index())


def occupancy_to_trace(records: Any, lot_id: str, origin: Optional[pd.Timestamp] = None,
                       eps: Optional[float] = None, lot: Optional[int] = None) -> ProbabilityTrace:
    """Piecewise-constant availability trace of one lot.

    Args:
        records: Canonical occupancy frame or sequence of OccupancyRecord.
        lot_id: Source lot to extract.
        origin: Time zero of the trace; midnight of the first day by default.
        eps: Lower clamp; ``Config.PROB_EPSILON`` by default.
        lot: Model lot index recorded on the trace.

    Raises:
        DataFileError: if ``lot_id`` has no records.
    """
    frame = occupancy_frame(records)
    eps = Config.PROB_EPSILON if eps is None else eps
    rows = frame[frame["lot_id"].astype(str) == str(lot_id)]
    if rows.empty:
        raise DataFileError(f"no occupancy records for lot '{lot_id}'")
    origin = day_origin(frame) if origin is None else origin

    rows = rows.sort_values("timestamp", kind="mergesort").drop_duplicates("timestamp", keep="last")
    occupied = rows["occupied"].to_numpy(dtype=float)
    capacity = rows["capacity"].to_numpy(dtype=float)
    over = occupied > capacity
    if over.any():
        logger.warning(f"Lot {lot_id}: {int(over.sum())} records report more occupied spaces than capacity; "
                       f"clamping availability to {eps}")
    probs = np.clip(1.0 - occupied / capacity, eps, 1.0)
    return ProbabilityTrace(to_minutes(rows["timestamp"], origin), probs, TraceKind.EMPIRICAL,
                            {"lot_id": str(lot_id)}, lot)


def traces_by_lot(records: Any, lot_ids: Optional[Mapping[str, int]] = None,
                  eps: Optional[float] = None) -> Dict[str, ProbabilityTrace]:
    """Traces of every lot in ``records`` on a shared day origin."""
    frame = occupancy_frame(records)
    origin = day_origin(frame)
    ids = sorted(frame["lot_id"].astype(str).unique())
    return {lid: occupancy_to_trace(frame, lid, origin, eps, (lot_ids or {}).get(lid)) for lid in ids}
