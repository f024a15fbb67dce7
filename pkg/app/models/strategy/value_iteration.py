"""Exact solver for the static-probability parking process.

States are ``(i, unparked)`` for i in 0..N. From state i the vehicle picks a
lot j, pays the step time (wait if ``i == j``, drive otherwise), parks with
probability ``p_j`` and walks, or stays unparked at j. The expected cost of
the best action satisfies::

    C[i] = min_j  step[i, j] + p_j * walk_j + (1 - p_j) * C[j]

Values are reported as rewards, i.e. negated costs.
"""
import logging
import time
from dataclasses import dataclass
from typing import Optional

import numpy as np

from app.config import Config
from app.errors import ModelAssumptionError, SolverError
from app.models.core.network import ParkingNetwork
from app.monitoring.metrics import record_solve

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ValueIterationResult:
    """Optimal policy and values for every unparked state.

    ``policy[i]`` is the lot chosen from location i (0 = origin) and
    ``values[i]`` the optimal expected reward there.
    """
    policy: np.ndarray
    values: np.ndarray
    q_costs: np.ndarray
    sweeps: int
    residual: float

    @property
    def costs(self) -> np.ndarray:
        return -self.values

    def action(self, location: int) -> int:
        return int(self.policy[location])

    def switches_after_failure(self, lot: int) -> bool:
        """Whether the policy leaves ``lot`` after failing there."""
        return self.action(lot) != lot


def _check_static(net: ParkingNetwork) -> None:
    if np.any(net.initial_probs <= 0.0):
        bad = [j for j in net.lots if net.prob(j) <= 0.0]
        raise ModelAssumptionError(f"value iteration needs p > 0 for every lot; lots {bad} are not")


def _q_costs(net: ParkingNetwork, costs: np.ndarray, steps: np.ndarray) -> np.ndarray:
    p = net.initial_probs
    return steps + p * net.walk_time + (1.0 - p) * costs[1:]


def bellman_residual(net: ParkingNetwork, costs: np.ndarray) -> float:
    """Largest violation of the optimality equation by a cost vector."""
    q = _q_costs(net, np.asarray(costs, dtype=float), net.step_matrix())
    return float(np.max(np.abs(q.min(axis=1) - costs)))


def value_iteration(net: ParkingNetwork, tol: Optional[float] = None,
                    max_sweeps: Optional[int] = None) -> ValueIterationResult:
    """Solve the instance by synchronous sweeps from zero.

    Args:
        net: Network with static probabilities, all strictly positive.
        tol: Stop when the largest value change in a sweep is below this.
        max_sweeps: Give up after this many sweeps.

    Returns:
        A ValueIterationResult with the greedy policy (ties to the lowest lot).

    Raises:
        ModelAssumptionError: if any probability is not positive.
        SolverError: if the sweep limit is reached first.
    """
    tol = Config.VI_TOL if tol is None else tol
    max_sweeps = Config.VI_MAX_SWEEPS if max_sweeps is None else max_sweeps
    _check_static(net)

    started = time.perf_counter()
    steps = net.step_matrix()
    costs = np.zeros(net.n_lots + 1)
    delta = np.inf
    sweeps = 0
    while sweeps < max_sweeps:
        q = _q_costs(net, costs, steps)
        updated = q.min(axis=1)
        delta = float(np.max(np.abs(updated - costs)))
        costs = updated
        sweeps += 1
        if delta < tol:
            break
    else:
        raise SolverError(
            f"value iteration did not converge within {max_sweeps} sweeps (last change {delta:.3e})"
        )

    q = _q_costs(net, costs, steps)
    policy = np.argmin(q, axis=1) + 1
    residual = bellman_residual(net, costs)
    elapsed = time.perf_counter() - started
    record_solve(sweeps, elapsed)
    logger.debug(f"Value iteration converged in {sweeps} sweeps, residual {residual:.2e}")

    values = -costs
    policy.setflags(write=False)
    values.setflags(write=False)
    return ValueIterationResult(policy=policy, values=values, q_costs=q, sweeps=sweeps, residual=residual)
