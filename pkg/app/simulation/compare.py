"""Time-to-arrive against time-to-drive and public transit."""
import logging
from typing import Mapping, Union

import numpy as np
import pandas as pd

from app.errors import ModelAssumptionError

logger = logging.getLogger(__name__)

BEST_PA = "best-pa"


def _as_frame(results: Union[pd.DataFrame, Mapping[str, float]]) -> pd.DataFrame:
    if isinstance(results, Mapping):
        frame = pd.DataFrame({"policy": list(results.keys()), "mean": [float(v) for v in results.values()]})
    else:
        frame = results.copy()
    if frame.empty:
        raise ModelAssumptionError("compare_modes needs at least one result")
    if "adoption" not in frame.columns:
        frame["adoption"] = np.nan
    return frame[["policy", "adoption", "mean"]]


def _with_best_pa(frame: pd.DataFrame) -> pd.DataFrame:
    is_pa = frame["policy"].str.match(r"^pa\d$")
    if not is_pa.any():
        return frame
    pa = frame[is_pa]
    best = pa.loc[pa.groupby("adoption", dropna=False)["mean"].idxmin()].copy()
    best["best_of"] = best["policy"]
    best["policy"] = BEST_PA
    return pd.concat([frame, best], ignore_index=True)


def compare_modes(results: Union[pd.DataFrame, Mapping[str, float]], time_to_drive: float,
                  transit_time: float) -> pd.DataFrame:
    """Absolute and percentage gaps of each mean time-to-arrive against two references.

    Args:
        results: Aggregate frame with ``policy`` and ``mean`` (and optionally
            ``adoption``) columns, or a mapping of policy name to mean.
        time_to_drive: Uncongested drive time straight to the destination.
        transit_time: Public transit time-to-arrive.

    Returns:
        One row per policy plus a ``best-pa`` row per adoption rate when PA
        policies are present. Gaps are ``mean - reference`` in minutes and
        ``100 * gap / reference`` in percent.

    Raises:
        ModelAssumptionError: if a reference is not positive or results are empty.
    """
    for label, ref in (("time_to_drive", time_to_drive), ("transit_time", transit_time)):
        if not ref > 0:
            raise ModelAssumptionError(f"{label} must be > 0 minutes, got {ref}")
    frame = _with_best_pa(_as_frame(results))
    if "best_of" not in frame.columns:
        frame["best_of"] = ""
    frame["best_of"] = frame["best_of"].fillna("")

    out = frame.assign(
        time_to_drive=float(time_to_drive),
        drive_gap_min=frame["mean"] - time_to_drive,
        drive_gap_pct=100.0 * (frame["mean"] - time_to_drive) / time_to_drive,
        transit_time=float(transit_time),
        transit_gap_min=frame["mean"] - transit_time,
        transit_gap_pct=100.0 * (frame["mean"] - transit_time) / transit_time,
    )
    return out.reset_index(drop=True)
