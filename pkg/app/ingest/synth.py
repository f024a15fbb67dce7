"""Synthetic occupancy and transaction files.

Arrivals are an inhomogeneous Poisson process generated by thinning. An
arrival that finds a free space parks, produces a transaction and stays for
an exponential duration; an arrival at a full lot leaves without a record.
Occupancy is written once per minute from the resulting event sequence, so
the files reconstruct the generator's own availability trace exactly.
"""
import heapq
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd
from pydantic import BaseModel, ConfigDict, Field, field_validator

from app.config import Config
from app.models.observer.traces import ProbabilityTrace, TraceKind
from app.utils.io import PathLike, write_csv
from app.utils.seeding import derive_seed, rng

logger = logging.getLogger(__name__)

TIMESTAMP_FORMAT = "%Y-%m-%dT%H:%M:%S"


class LotProfile(BaseModel):
    """Demand profile of one synthetic lot.

    ``arrival_curve`` lists ``[hour, arrivals_per_hour]`` points, linearly
    interpolated and held flat outside the listed hours.
    """
    model_config = ConfigDict(extra="forbid")

    lot_id: str
    capacity: int = Field(ge=1)
    arrival_curve: List[Tuple[float, float]]
    mean_stay_minutes: float = Field(default=90.0, gt=0)
    initial_occupied: int = Field(default=0, ge=0)

    @field_validator("arrival_curve")
    @classmethod
    def _curve(cls, value):
        if not value:
            raise ValueError("arrival_curve needs at least one point")
        if any(rate < 0 for _, rate in value):
            raise ValueError("arrival rates must be >= 0")
        hours = [h for h, _ in value]
        if hours != sorted(hours):
            raise ValueError("arrival_curve hours must be increasing")
        return value

    def rate_at(self, minutes: np.ndarray) -> np.ndarray:
        hours, rates = zip(*self.arrival_curve)
        return np.interp(np.asarray(minutes) / 60.0, hours, rates)


class SynthProfile(BaseModel):
    """A study window and the lots observed in it."""
    model_config = ConfigDict(extra="forbid")

    name: str = "synthetic"
    date: str = "2024-06-01"
    start_hour: float = 8.0
    end_hour: float = 20.0
    lots: List[LotProfile]


@dataclass(frozen=True)
class SynthDataset:
    occupancy: pd.DataFrame
    transactions: pd.DataFrame
    traces: Dict[str, ProbabilityTrace]
    arrivals: Dict[str, np.ndarray]
    occupancy_path: Optional[Path] = None
    transactions_path: Optional[Path] = None


def inhomogeneous_arrivals(lot: LotProfile, start: float, end: float, gen: np.random.Generator) -> np.ndarray:
    """Arrival minutes on ``(start, end]`` by thinning a homogeneous process at the peak rate."""
    grid = np.linspace(start, end, int(end - start) + 1)
    peak = float(np.max(lot.rate_at(grid))) / 60.0
    if peak <= 0:
        return np.empty(0)
    candidates = []
    t = start
    while True:
        t += gen.exponential(1.0 / peak)
        if t > end:
            break
        candidates.append(t)
    times = np.asarray(candidates)
    if times.size == 0:
        return times
    accept = gen.random(times.size) < lot.rate_at(times) / 60.0 / peak
    return times[accept]


def _simulate_lot(lot: LotProfile, start: float, end: float, seed: int) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Event times with occupancy after each event, plus the parked arrival minutes."""
    gen = rng(seed, "synth", lot.lot_id)
    stay = lot.mean_stay_minutes
    departures: List[float] = []
    occupied = min(lot.initial_occupied, lot.capacity)
    for _ in range(occupied):
        heapq.heappush(departures, start + gen.exponential(stay))

    change_times = [start]
    change_levels = [occupied]
    parked_at = []
    for a in inhomogeneous_arrivals(lot, start, end, gen):
        while departures and departures[0] <= a:
            occupied -= 1
            change_times.append(heapq.heappop(departures))
            change_levels.append(occupied)
        if occupied < lot.capacity:
            occupied += 1
            parked_at.append(a)
            heapq.heappush(departures, a + gen.exponential(stay))
            change_times.append(a)
            change_levels.append(occupied)
    while departures and departures[0] <= end:
        occupied -= 1
        change_times.append(heapq.heappop(departures))
        change_levels.append(occupied)
    return np.asarray(change_times), np.asarray(change_levels), np.asarray(parked_at)


def synth_dataset(profile: SynthProfile, seed: int, out_dir: Optional[PathLike] = None,
                  eps: Optional[float] = None) -> SynthDataset:
    """Generate consistent occupancy and transaction data for ``profile``.

    Args:
        profile: Lots, capacities, demand curves and window.
        seed: Master seed; each lot draws from its own derived stream.
        out_dir: When given, ``occupancy.csv`` and ``transactions.csv`` are written there.
        eps: Availability clamp for the returned traces.

    Returns:
        Frames, per-lot traces on minutes since midnight, and parked arrival minutes.
    """
    eps = Config.PROB_EPSILON if eps is None else eps
    day = pd.Timestamp(profile.date)
    start, end = profile.start_hour * 60.0, profile.end_hour * 60.0
    minutes = np.arange(int(np.ceil(start)), int(np.floor(end)) + 1, dtype=float)

    occ_parts, txn_parts = [], []
    traces, arrivals = {}, {}
    for lot in profile.lots:
        times, levels, parked = _simulate_lot(lot, start, end, derive_seed(seed, "lot", lot.lot_id))
        idx = np.searchsorted(times, minutes, side="right") - 1
        occupied = levels[idx]
        stamps = (day + pd.to_timedelta(minutes, unit="min")).strftime(TIMESTAMP_FORMAT)
        occ_parts.append(pd.DataFrame({
            "timestamp": stamps,
            "lot_id": lot.lot_id,
            "occupied": occupied.astype(int),
            "capacity": lot.capacity,
        }))
        parked_stamps = day + pd.to_timedelta(np.round(parked * 60.0), unit="s")
        txn_parts.append(pd.DataFrame({"timestamp": parked_stamps.strftime(TIMESTAMP_FORMAT), "lot_id": lot.lot_id}))
        probs = np.clip(1.0 - occupied / lot.capacity, eps, 1.0)
        traces[lot.lot_id] = ProbabilityTrace(minutes, probs, TraceKind.EMPIRICAL, {"lot_id": lot.lot_id})
        arrivals[lot.lot_id] = np.round(parked * 60.0) / 60.0
        logger.debug(f"Synthetic lot {lot.lot_id}: {parked.size} parked arrivals")

    occupancy = pd.concat(occ_parts, ignore_index=True)
    transactions = pd.concat(txn_parts, ignore_index=True).sort_values(
        ["timestamp", "lot_id"], kind="mergesort").reset_index(drop=True)

    occ_path = txn_path = None
    if out_dir is not None:
        out = Path(out_dir)
        occ_path = write_csv(occupancy, out / Config.OCCUPANCY_FILE)
        txn_path = write_csv(transactions, out / Config.TRANSACTIONS_FILE)
        logger.info(f"Wrote synthetic dataset '{profile.name}' to {out}")
    return SynthDataset(occupancy, transactions, traces, arrivals, occ_path, txn_path)


def high_demand_profile(lot_ids: Sequence[str] = ("A", "B", "C")) -> SynthProfile:
    """Busy weekend: demand peaks mid-day well above what the lots can absorb."""
    capacities = [20, 25, 61]
    peaks = [22.0, 24.0, 40.0]
    lots = [
        LotProfile(lot_id=lid, capacity=cap, mean_stay_minutes=120.0, initial_occupied=cap // 4,
                   arrival_curve=[(8.0, peak * 0.3), (12.0, peak), (15.0, peak), (20.0, peak * 0.4)])
        for lid, cap, peak in zip(lot_ids, capacities, peaks)
    ]
    return SynthProfile(name="high-demand", date="2024-06-01", lots=lots)


def light_demand_profile(lot_ids: Sequence[str] = ("A", "B", "C")) -> SynthProfile:
    """Quiet weekday with ample free space all day."""
    lots = [
        LotProfile(lot_id=lid, capacity=cap, mean_stay_minutes=60.0,
                   arrival_curve=[(8.0, 3.0), (12.0, 8.0), (16.0, 4.0)])
        for lid, cap in zip(lot_ids, [30, 30, 61])
    ]
    return SynthProfile(name="light-demand", date="2024-06-04", lots=lots)
