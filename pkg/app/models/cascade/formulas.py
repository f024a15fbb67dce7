"""Ego parking probability when other arrivals compete for the same lot.

Three mechanisms are covered. In the first, n vehicles flip at lot 1 and the
ego, arriving last, parks only if every flip succeeds. In the second,
competitors fail at their own first-choice lot and divert to lot 1 ahead of
the ego. In the third, a vehicle that never targets lot 1 pushes a second
vehicle there through a failed flip at lot 2.

All flips are independent Bernoulli trials.
"""
import enum
import logging
from dataclasses import dataclass
from typing import Sequence, Tuple

import numpy as np

from app.errors import ModelAssumptionError

logger = logging.getLogger(__name__)


class CascadeCase(enum.Enum):
    FIRST_ORDER = "first"
    SECOND_ORDER = "second"
    THIRD_ORDER = "third"


def validate_probs(probs: Sequence[float]) -> np.ndarray:
    arr = np.asarray(probs, dtype=float)
    if arr.size == 0 or np.any(arr <= 0.0) or np.any(arr > 1.0):
        raise ModelAssumptionError(f"cascade probabilities must lie in (0, 1], got {arr.tolist()}")
    return arr


def first_order(p1: float, n: int) -> float:
    """Probability that all ``n`` flips at lot 1 succeed; the ego is the nth."""
    if n < 1:
        raise ModelAssumptionError(f"first-order cascade needs n >= 1 flips, got {n}")
    validate_probs([p1])
    return float(p1 ** n)


def second_order_formula(probs: Sequence[float]) -> float:
    """Closed form for competitors diverted to lot 1 after failing elsewhere.

    ``probs[0]`` is lot 1's probability and ``probs[k-1]`` vehicle k's
    first-choice probability, k = 2..n. The k-th term charges ``p1 ** k``
    when vehicle k diverts and every later vehicle parks first-choice; the
    trailing product is 1 when empty.
    """
    p = validate_probs(probs)
    n = p.size
    if n < 2:
        raise ModelAssumptionError(f"second-order cascade needs at least 2 probabilities, got {n}")
    p1 = p[0]
    total = float(np.prod(p))
    for k in range(2, n + 1):
        tail = float(np.prod(p[k:])) if k < n else 1.0
        total += p1 ** k * (1.0 - p[k - 1]) * tail
    return total


def second_order_behavioral(probs: Sequence[float]) -> float:
    """Exact success probability under the diversion model the oracle samples.

    Every competitor that fails first-choice adds one lot-1 flip that must
    succeed before the ego's own flip.
    """
    p = validate_probs(probs)
    if p.size < 2:
        raise ModelAssumptionError(f"second-order cascade needs at least 2 probabilities, got {p.size}")
    p1 = p[0]
    return float(p1 * np.prod(p[1:] + (1.0 - p[1:]) * p1))


def third_order(p1: float, p2: float, p3: float) -> float:
    """Knock-on case: vehicle 3 spills into lot 2, vehicle 2 into lot 1, ego last at lot 1."""
    validate_probs([p1, p2, p3])
    both_or_neither = 1.0 - p2 ** 2 - (1.0 - p2) ** 2
    settled = p3 * (p2 * p1 + (1.0 - p2) * p1 ** 2)
    spilled = (1.0 - p3) * (p1 * p2 ** 2 + p1 ** 2 * both_or_neither + (1.0 - p2) ** 2 * p1 ** 3)
    return float(settled + spilled)


@dataclass(frozen=True)
class CascadeScenario:
    """One cascade case with its inputs.

    For the first order ``probs`` holds p1 alone and ``n_vehicles`` counts the
    flips including the ego's. For the second order ``n_vehicles`` equals
    ``len(probs)``. The third order always has three vehicles.
    """
    case: CascadeCase
    probs: Tuple[float, ...]
    n_vehicles: int = 1

    def __post_init__(self):
        object.__setattr__(self, "probs", tuple(float(p) for p in self.probs))
        validate_probs(self.probs)
        if self.case is CascadeCase.FIRST_ORDER:
            if self.n_vehicles < 1:
                raise ModelAssumptionError(f"first-order cascade needs n_vehicles >= 1, got {self.n_vehicles}")
        elif self.case is CascadeCase.SECOND_ORDER:
            object.__setattr__(self, "n_vehicles", len(self.probs))
            if self.n_vehicles < 2:
                raise ModelAssumptionError("second-order cascade needs at least 2 probabilities")
        else:
            if len(self.probs) != 3:
                raise ModelAssumptionError(f"third-order cascade takes exactly 3 probabilities, got {len(self.probs)}")
            object.__setattr__(self, "n_vehicles", 3)

    def formula(self) -> float:
        if self.case is CascadeCase.FIRST_ORDER:
            return first_order(self.probs[0], self.n_vehicles)
        if self.case is CascadeCase.SECOND_ORDER:
            return second_order_formula(self.probs)
        return third_order(*self.probs)
