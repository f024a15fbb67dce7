"""Connected-user observations of a trace and the resulting estimation error.

Connected users arrive as a Poisson process of rate lambda * r per hour.
Each arrival reads the lot's true probability; the believed value is held
until the next arrival.
"""
import logging
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

import numpy as np
import pandas as pd

from app.errors import ModelAssumptionError
from app.utils.seeding import derive_seed, rng
from .traces import ProbabilityTrace, bounded_random_walk

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class ObservationStream:
    """Observation instants and values with a hold-last estimate.

    Before the first observation the estimate is ``initial``.
    """
    times: np.ndarray
    values: np.ndarray
    initial: float
    start: float
    end: float
    rate_per_hour: float = float("nan")
    lot: Optional[int] = None

    def __post_init__(self):
        times = np.array(self.times, dtype=float)
        values = np.array(self.values, dtype=float)
        if times.shape != values.shape:
            raise ModelAssumptionError("observation times and values must have the same length")
        if times.size and np.any(np.diff(times) < 0):
            raise ModelAssumptionError("observation times must be nondecreasing")
        times.setflags(write=False)
        values.setflags(write=False)
        object.__setattr__(self, "times", times)
        object.__setattr__(self, "values", values)

    def __len__(self) -> int:
        return int(self.times.size)

    def estimate_at(self, t: float) -> float:
        idx = int(np.searchsorted(self.times, t, side="right")) - 1
        return float(self.values[idx]) if idx >= 0 else float(self.initial)

    def estimates_at(self, ts: Sequence[float]) -> np.ndarray:
        ts = np.asarray(ts, dtype=float)
        idx = np.searchsorted(self.times, ts, side="right") - 1
        if self.times.size == 0:
            return np.full(ts.shape, float(self.initial))
        held = self.values[np.clip(idx, 0, None)]
        return np.where(idx >= 0, held, float(self.initial))

    def to_frame(self) -> pd.DataFrame:
        frame = pd.DataFrame({"minute": self.times, "observed_p": self.values})
        if self.lot is not None:
            frame.insert(1, "lot_id", self.lot)
        return frame


def _rate_per_minute(lambda_per_hour: float, r: float) -> float:
    rate = lambda_per_hour * r / 60.0
    if not rate > 0:
        raise ModelAssumptionError(
            f"observation rate lambda*r must be > 0, got lambda={lambda_per_hour}/h, r={r}"
        )
    return rate


def poisson_times(rate_per_minute: float, start: float, end: float, gen: np.random.Generator) -> np.ndarray:
    """Event times of a homogeneous Poisson process on ``(start, end]``."""
    span = end - start
    if span <= 0:
        return np.empty(0)
    expected = rate_per_minute * span
    batch = int(expected + 10.0 * np.sqrt(expected) + 10)
    gaps = gen.exponential(1.0 / rate_per_minute, batch)
    arrivals = np.cumsum(gaps)
    while arrivals[-1] <= span:
        more = np.cumsum(gen.exponential(1.0 / rate_per_minute, batch)) + arrivals[-1]
        arrivals = np.concatenate([arrivals, more])
    return start + arrivals[arrivals <= span]


def observe_at(trace: ProbabilityTrace, times: Iterable[float], initial: Optional[float] = None,
               rate_per_hour: float = float("nan")) -> ObservationStream:
    """Stream reading ``trace`` at the given instants (those inside the trace only)."""
    ts = np.sort(np.asarray(list(times), dtype=float))
    ts = ts[(ts >= trace.start) & (ts <= trace.end)]
    return ObservationStream(
        times=ts,
        values=trace.values_at(ts),
        initial=trace.values[0] if initial is None else initial,
        start=trace.start,
        end=trace.end,
        rate_per_hour=rate_per_hour,
        lot=trace.lot,
    )


def observe(trace: ProbabilityTrace, lambda_per_hour: float, r: float, seed: int,
            initial: Optional[float] = None) -> ObservationStream:
    """Poisson-sampled connected-user view of ``trace``.

    Args:
        trace: True probability trace.
        lambda_per_hour: Arrival rate of all vehicles.
        r: Fraction of arrivals that report availability.
        seed: Seed of the observation instants.
        initial: Estimate before the first observation; the trace's initial
            value when omitted.
    """
    rate = _rate_per_minute(lambda_per_hour, r)
    times = poisson_times(rate, trace.start, trace.end, rng(seed, "observe"))
    stream = observe_at(trace, times, initial, rate_per_hour=lambda_per_hour * r)
    logger.debug(f"Observed trace over {trace.span:.0f} min with {len(stream)} observations")
    return stream


def _breakpoints(trace: ProbabilityTrace, stream: ObservationStream) -> np.ndarray:
    obs = stream.times[(stream.times > trace.start) & (stream.times < trace.end)]
    return np.unique(np.concatenate([trace.times, obs]))


def mae(trace: ProbabilityTrace, stream: ObservationStream) -> float:
    """Time-weighted mean of |true - hold-last estimate| over the trace span.

    Both functions are piecewise constant, so the integral is exact.
    """
    points = _breakpoints(trace, stream)
    if points.size < 2:
        return abs(trace.values[0] - stream.estimate_at(trace.start))
    left = points[:-1]
    widths = np.diff(points)
    gap = np.abs(trace.values_at(left) - stream.estimates_at(left))
    return float(np.sum(gap * widths) / (points[-1] - points[0]))


def interval_errors(trace: ProbabilityTrace, stream: ObservationStream) -> np.ndarray:
    """Integrated absolute error over each complete interval between observations."""
    if len(stream) < 2:
        return np.empty(0)
    points = _breakpoints(trace, stream)
    left = points[:-1]
    widths = np.diff(points)
    area = np.abs(trace.values_at(left) - stream.estimates_at(left)) * widths
    # assign each slab to the observation interval it starts in
    owner = np.searchsorted(stream.times, left, side="right") - 1
    n_intervals = len(stream) - 1
    inside = (owner >= 0) & (owner < n_intervals)
    return np.bincount(owner[inside], weights=area[inside], minlength=n_intervals)


def walk_seed(master_seed: int, index: int) -> int:
    return derive_seed(master_seed, "walk", index)


def observation_seed(master_seed: int, lambda_per_hour: float, r: float, index: int) -> int:
    return derive_seed(master_seed, "observe", float(lambda_per_hour), float(r), index)


def random_walk_mae(lambdas: Sequence[float], adoptions: Sequence[float], seeds: int, master_seed: int,
                    start: float = 0.5, minutes: int = 720) -> pd.DataFrame:
    """MAE of hold-last estimates of bounded random walks, one row per (lambda, r, seed).

    The walk of seed index i is shared across every (lambda, r) so rows differ
    only by their observation streams.
    """
    rows = []
    walks = [bounded_random_walk(start, minutes, walk_seed(master_seed, i)) for i in range(seeds)]
    for lam in lambdas:
        for r in adoptions:
            for i, walk in enumerate(walks):
                stream = observe(walk, lam, r, observation_seed(master_seed, lam, r, i))
                rows.append({
                    "lambda_per_hour": float(lam),
                    "adoption": float(r),
                    "seed_index": i,
                    "n_observations": len(stream),
                    "mae": mae(walk, stream),
                })
    logger.info(f"Computed {len(rows)} random-walk MAEs over {seeds} seeds")
    return pd.DataFrame(rows)
