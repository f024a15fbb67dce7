"""Payment transactions as evidence of arrivals, thinned to connected users."""
import logging
from typing import Any, Optional

import numpy as np
import pandas as pd

from app.errors import ModelAssumptionError
from app.models.observer.sampling import ObservationStream, observe_at
from app.models.observer.traces import ProbabilityTrace
from app.utils.seeding import rng
from .occupancy import to_minutes
from .records import transaction_frame

logger = logging.getLogger(__name__)


def sample_connected_users(txns: Any, r: float, seed: int) -> pd.DataFrame:
    """Keep each transaction independently with probability ``r``.

    Raises:
        ModelAssumptionError: unless ``0 < r <= 1``.
    """
    if not 0.0 < r <= 1.0:
        raise ModelAssumptionError(f"adoption rate must lie in (0, 1], got {r}")
    frame = transaction_frame(txns)
    if frame.empty:
        logger.warning("No transactions to sample; estimates stay at their initial value")
        return frame.copy()
    keep = rng(seed, "connected-users").random(len(frame)) < r
    return frame[keep].reset_index(drop=True)


def arrival_minutes(txns: Any, lot_id: str, origin: pd.Timestamp) -> np.ndarray:
    frame = transaction_frame(txns)
    rows = frame[frame["lot_id"].astype(str) == str(lot_id)]
    return np.sort(to_minutes(rows["timestamp"], origin)) if len(rows) else np.empty(0)


def connected_stream(trace: ProbabilityTrace, txns: Any, lot_id: str, r: float, seed: int,
                     origin: pd.Timestamp, initial: Optional[float] = None) -> ObservationStream:
    """Hold-last stream of ``trace`` read at the retained arrivals of ``lot_id``."""
    kept = sample_connected_users(txns, r, seed)
    return observe_at(trace, arrival_minutes(kept, lot_id, origin), initial)
