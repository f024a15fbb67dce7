"""True parking-probability traces.

A trace is a right-continuous step function: ``values[k]`` holds on
``[times[k], times[k+1])`` and the last value holds up to and including
``times[-1]``, which is the end of the trace.
"""
import enum
import logging
from dataclasses import dataclass, field
from typing import Any, Dict, Optional, Union

import numpy as np
import pandas as pd

from app.errors import ModelAssumptionError, TraceExhaustedError
from app.utils.seeding import rng

logger = logging.getLogger(__name__)

STEP = 0.01
_DECIMALS = 10


class TraceKind(enum.Enum):
    CONSTANT = "constant"
    LINEAR = "linear"
    EXPONENTIAL = "exponential"
    RANDOM_WALK = "random-walk"
    EMPIRICAL = "empirical"


@dataclass(frozen=True, eq=False)
class ProbabilityTrace:
    """Time series of a lot's true parking probability (minutes, probability)."""
    times: np.ndarray
    values: np.ndarray
    kind: TraceKind = TraceKind.EMPIRICAL
    params: Dict[str, Any] = field(default_factory=dict)
    lot: Optional[int] = None

    def __post_init__(self):
        times = np.array(self.times, dtype=float)
        values = np.array(self.values, dtype=float)
        if times.ndim != 1 or times.shape != values.shape or times.size == 0:
            raise ModelAssumptionError(
                f"trace needs matching non-empty 1-d times and values, got {times.shape} and {values.shape}"
            )
        if np.any(np.diff(times) <= 0):
            raise ModelAssumptionError("trace times must be strictly increasing")
        if np.any(values < 0.0) or np.any(values > 1.0):
            raise ModelAssumptionError("trace probabilities must lie in [0, 1]")
        times.setflags(write=False)
        values.setflags(write=False)
        object.__setattr__(self, "times", times)
        object.__setattr__(self, "values", values)

    @property
    def start(self) -> float:
        return float(self.times[0])

    @property
    def end(self) -> float:
        return float(self.times[-1])

    @property
    def span(self) -> float:
        return self.end - self.start

    def covers(self, start: float, end: float) -> bool:
        return self.start <= start and end <= self.end

    def value_at(self, t: float) -> float:
        """Step (previous-sample) lookup.

        Raises:
            TraceExhaustedError: if ``t`` lies outside the trace.
        """
        if t < self.start or t > self.end:
            raise TraceExhaustedError(self.lot if self.lot is not None else -1, t, self.end)
        idx = int(np.searchsorted(self.times, t, side="right")) - 1
        return float(self.values[idx])

    def values_at(self, ts: Union[np.ndarray, list]) -> np.ndarray:
        ts = np.asarray(ts, dtype=float)
        if ts.size and (ts.min() < self.start or ts.max() > self.end):
            bad = ts.max() if ts.max() > self.end else ts.min()
            raise TraceExhaustedError(self.lot if self.lot is not None else -1, float(bad), self.end)
        idx = np.searchsorted(self.times, ts, side="right") - 1
        return self.values[idx]

    def shifted(self, offset: float) -> "ProbabilityTrace":
        return ProbabilityTrace(self.times + offset, self.values, self.kind, dict(self.params), self.lot)

    def for_lot(self, lot: int) -> "ProbabilityTrace":
        return ProbabilityTrace(self.times, self.values, self.kind, dict(self.params), lot)

    def to_frame(self) -> pd.DataFrame:
        frame = pd.DataFrame({"minute": self.times, "p": self.values})
        if self.lot is not None:
            frame.insert(1, "lot_id", self.lot)
        return frame


def _grid(minutes: float, start: float, step: float) -> np.ndarray:
    if minutes <= 0:
        raise ModelAssumptionError(f"trace length must be positive, got {minutes} minutes")
    n = int(round(minutes / step))
    return start + step * np.arange(n + 1)


def constant_trace(p: float, minutes: float, start: float = 0.0, lot: Optional[int] = None) -> ProbabilityTrace:
    """Two-sample trace holding ``p`` over ``[start, start + minutes]``."""
    if minutes <= 0:
        raise ModelAssumptionError(f"trace length must be positive, got {minutes} minutes")
    return ProbabilityTrace(np.array([start, start + minutes]), np.array([p, p]),
                            TraceKind.CONSTANT, {"p": p}, lot)


def linear_trace(p0: float, slope: float, minutes: float, start: float = 0.0,
                 step: float = 1.0, lot: Optional[int] = None) -> ProbabilityTrace:
    """``p0 + slope * t`` sampled every ``step`` minutes and clipped to [0, 1].

    A negative slope gives a falling trace.
    """
    times = _grid(minutes, start, step)
    values = np.clip(p0 + slope * (times - start), 0.0, 1.0)
    return ProbabilityTrace(times, values, TraceKind.LINEAR, {"p0": p0, "slope": slope}, lot)


def exponential_trace(p0: float, coefficient: float, exponent: float, minutes: float,
                      start: float = 0.0, step: float = 1.0, lot: Optional[int] = None) -> ProbabilityTrace:
    """``p0 + coefficient * t ** exponent`` sampled every ``step`` minutes and clipped to [0, 1]."""
    if exponent < 1:
        raise ModelAssumptionError(f"exponent must be >= 1, got {exponent}")
    times = _grid(minutes, start, step)
    values = np.clip(p0 + coefficient * (times - start) ** exponent, 0.0, 1.0)
    return ProbabilityTrace(times, values, TraceKind.EXPONENTIAL,
                            {"p0": p0, "coefficient": coefficient, "exponent": exponent}, lot)


def bounded_random_walk(start: float, minutes: int, seed: int, lot: Optional[int] = None) -> ProbabilityTrace:
    """Per-minute walk of one percentage point up or down, kept inside [0, 1].

    A step that would leave [0, 1] is replaced by the step in the other
    direction. Values are rounded to 10 decimals after each step so repeated
    additions of 0.01 do not drift.

    Args:
        start: Initial probability.
        minutes: Number of steps; the trace has ``minutes + 1`` samples.
        seed: Seed of the step directions.
        lot: Optional lot the trace belongs to.
    """
    if not 0.0 <= start <= 1.0:
        raise ModelAssumptionError(f"random walk must start inside [0, 1], got {start}")
    if minutes < 1:
        raise ModelAssumptionError(f"random walk needs at least one minute, got {minutes}")
    ups = rng(seed, "random-walk").random(int(minutes)) < 0.5
    values = np.empty(int(minutes) + 1)
    values[0] = start
    v = float(start)
    for k, up in enumerate(ups, start=1):
        can_up = v + STEP <= 1.0 + 1e-12
        can_down = v - STEP >= -1e-12
        if up and not can_up:
            up = False
        elif not up and not can_down:
            up = True
        v = round(v + STEP if up else v - STEP, _DECIMALS)
        values[k] = min(max(v, 0.0), 1.0)
    times = np.arange(int(minutes) + 1, dtype=float)
    return ProbabilityTrace(times, values, TraceKind.RANDOM_WALK, {"start": start, "seed": seed}, lot)


def trace_from_frame(frame: pd.DataFrame, lot: Optional[int] = None,
                     time_col: str = "minute", value_col: str = "p") -> ProbabilityTrace:
    """Empirical trace from a frame with minute and probability columns."""
    if frame.empty:
        raise ModelAssumptionError("cannot build a trace from an empty frame")
    ordered = frame.sort_values(time_col, kind="mergesort").drop_duplicates(time_col, keep="last")
    return ProbabilityTrace(ordered[time_col].to_numpy(dtype=float), ordered[value_col].to_numpy(dtype=float),
                            TraceKind.EMPIRICAL, {}, lot)
