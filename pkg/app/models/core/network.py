"""Static network geometry: lots, drive/walk/wait times and base probabilities.

Network files are YAML with a top-level ``network`` mapping (or the mapping
itself)::

    network:
      n_lots: 2
      drive_time: [[0, 10, 10], [10, 0, 6], [10, 6, 0]]   # (N+1) x (N+1), row/col 0 = origin
      walk_time: [5, 8]                                   # lot j -> destination, length N
      wait_time: 5                                        # minutes, > 0
      initial_probs: [0.5, 0.9]                           # each in (0, 1]
"""
import logging
from dataclasses import dataclass, replace
from typing import Any, Dict, Iterable, List, Sequence

import numpy as np
import yaml
from pydantic import BaseModel, ConfigDict, Field, ValidationError

from app.errors import ConfigError, ModelAssumptionError
from .types import LotIndex, ORIGIN

logger = logging.getLogger(__name__)


class NetworkSchema(BaseModel):
    """Key-value schema of a network definition."""
    model_config = ConfigDict(extra="forbid")

    n_lots: int = Field(ge=1)
    drive_time: List[List[float]]
    walk_time: List[float]
    wait_time: float
    initial_probs: List[float]


def _readonly(values: Any, ndim: int) -> np.ndarray:
    arr = np.array(values, dtype=float)
    if arr.ndim != ndim:
        raise ModelAssumptionError(f"expected a {ndim}-dimensional array, got shape {arr.shape}")
    arr.setflags(write=False)
    return arr


def semantic_violations(n_lots: int, drive_time: Any, walk_time: Any,
                        wait_time: float, initial_probs: Any) -> List[str]:
    """Model-assumption violations of a network definition; empty when valid."""
    violations = []
    drive = np.asarray(drive_time, dtype=float)
    walk = np.asarray(walk_time, dtype=float)
    probs = np.asarray(initial_probs, dtype=float)

    if n_lots < 1:
        violations.append(f"n_lots must be >= 1, got {n_lots}")
    if drive.shape != (n_lots + 1, n_lots + 1):
        violations.append(
            f"drive_time must be (N+1)x(N+1) = {n_lots + 1}x{n_lots + 1}, got shape {drive.shape}"
        )
    elif np.any(drive < 0):
        violations.append("drive_time contains negative times")
    if walk.shape != (n_lots,):
        violations.append(f"walk_time must have length N = {n_lots}, got shape {walk.shape}")
    elif np.any(walk < 0):
        violations.append("walk_time contains negative times")
    if not wait_time > 0:
        violations.append(f"wait_time must be > 0, got {wait_time}")
    if probs.shape != (n_lots,):
        violations.append(f"initial_probs must have length N = {n_lots}, got shape {probs.shape}")
    else:
        bad = [j + 1 for j, p in enumerate(probs) if not (0.0 < p <= 1.0)]
        if bad:
            violations.append(
                f"initial_probs for lots {bad} lie outside (0, 1]; the model assumes p_i in (0, 1]"
            )
    return violations


@dataclass(frozen=True, eq=False)
class ParkingNetwork:
    """Lots, drive-time matrix, walk times, wait time and base probabilities.

    Arrays are read-only. ``walk_time`` and ``initial_probs`` are indexed by
    ``lot - 1``; use :meth:`walk` and :meth:`prob` with lot indices.
    """
    n_lots: int
    drive_time: np.ndarray
    walk_time: np.ndarray
    wait_time: float
    initial_probs: np.ndarray

    def __post_init__(self):
        violations = semantic_violations(
            self.n_lots, self.drive_time, self.walk_time, self.wait_time, self.initial_probs
        )
        if violations:
            raise ModelAssumptionError("invalid parking network: " + "; ".join(violations))
        object.__setattr__(self, "drive_time", _readonly(self.drive_time, 2))
        object.__setattr__(self, "walk_time", _readonly(self.walk_time, 1))
        object.__setattr__(self, "initial_probs", _readonly(self.initial_probs, 1))
        object.__setattr__(self, "wait_time", float(self.wait_time))

    @classmethod
    def build(cls, drive_time: Sequence[Sequence[float]], walk_time: Sequence[float],
              wait_time: float, initial_probs: Sequence[float]) -> "ParkingNetwork":
        """Construct a network, inferring N from ``walk_time``."""
        return cls(len(walk_time), np.asarray(drive_time, dtype=float),
                   np.asarray(walk_time, dtype=float), wait_time,
                   np.asarray(initial_probs, dtype=float))

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "ParkingNetwork":
        raw = data.get("network", data)
        try:
            schema = NetworkSchema.model_validate(raw)
        except ValidationError as e:
            raise ConfigError("network definition failed schema validation",
                              [f"{'.'.join(map(str, err['loc']))}: {err['msg']}" for err in e.errors()])
        violations = semantic_violations(schema.n_lots, schema.drive_time, schema.walk_time,
                                         schema.wait_time, schema.initial_probs)
        if violations:
            raise ConfigError("network definition violates model assumptions", violations)
        return cls(schema.n_lots, np.asarray(schema.drive_time), np.asarray(schema.walk_time),
                   schema.wait_time, np.asarray(schema.initial_probs))

    def to_dict(self) -> Dict[str, Any]:
        return {
            "n_lots": self.n_lots,
            "drive_time": self.drive_time.tolist(),
            "walk_time": self.walk_time.tolist(),
            "wait_time": self.wait_time,
            "initial_probs": self.initial_probs.tolist(),
        }

    @property
    def lots(self) -> range:
        return range(1, self.n_lots + 1)

    def check_lot(self, lot: LotIndex, allow_origin: bool = False) -> None:
        low = ORIGIN if allow_origin else 1
        if not (low <= lot <= self.n_lots):
            if lot == ORIGIN:
                raise ModelAssumptionError(
                    "the origin is not an action target: a vehicle cannot stay at or return to the origin"
                )
            raise ModelAssumptionError(f"lot index {lot} outside {low}..{self.n_lots}")

    def drive(self, i: LotIndex, j: LotIndex) -> float:
        return float(self.drive_time[i, j])

    def walk(self, j: LotIndex) -> float:
        return float(self.walk_time[j - 1])

    def prob(self, j: LotIndex) -> float:
        return float(self.initial_probs[j - 1])

    def step_time(self, i: LotIndex, j: LotIndex) -> float:
        """Time to reach lot j from i: the wait time when staying, drive time otherwise."""
        return self.wait_time if i == j else self.drive(i, j)

    def step_matrix(self) -> np.ndarray:
        """(N+1) x N matrix of step times, column j-1 for lot j."""
        steps = np.array(self.drive_time[:, 1:], dtype=float)
        idx = np.arange(self.n_lots)
        steps[idx + 1, idx] = self.wait_time
        return steps

    def with_probs(self, probs: Iterable[float]) -> "ParkingNetwork":
        return replace(self, initial_probs=np.asarray(list(probs), dtype=float))


def load_network(path: str) -> ParkingNetwork:
    """Load a network definition from a YAML file."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            data = yaml.safe_load(fh) or {}
    except OSError as e:
        raise ConfigError(f"cannot read network file {path}: {e}")
    except yaml.YAMLError as e:
        raise ConfigError(f"cannot parse network file {path}: {e}")
    net = ParkingNetwork.from_dict(data)
    logger.info(f"Loaded network with {net.n_lots} lots from {path}")
    return net
