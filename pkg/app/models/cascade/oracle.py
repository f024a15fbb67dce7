"""Monte Carlo behavioural oracles for the cascade closed forms.

Samples are drawn in shards. Each shard has its own generator derived from
``(seed, oracle name, shard index)`` so the estimate does not depend on the
number of workers, and shard counts are summed in shard order.
"""
import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from functools import partial
from typing import Callable, Dict, List, Optional, Sequence

import numpy as np

from app.config import Config
from app.errors import ModelAssumptionError
from app.monitoring.metrics import record_samples
from app.utils.seeding import rng
from .formulas import (
    CascadeCase,
    CascadeScenario,
    validate_probs,
    second_order_behavioral,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class OracleEstimate:
    """Success frequency over ``samples`` Monte Carlo draws."""
    successes: int
    samples: int

    @property
    def estimate(self) -> float:
        return self.successes / self.samples

    @property
    def stderr(self) -> float:
        p = self.estimate
        return math.sqrt(p * (1.0 - p) / self.samples)

    def agrees_with(self, value: float, k: float = 3.0) -> bool:
        """Whether ``value`` lies within ``k`` standard errors of the estimate."""
        return abs(self.estimate - value) <= k * self.stderr + 1e-12


# --- shard kernels (module level so they pickle) ---

def _first_order_shard(gen: np.random.Generator, size: int, p1: float, n: int) -> int:
    flips = gen.random((size, n)) < p1
    return int(np.count_nonzero(flips.all(axis=1)))


def _second_order_shard(gen: np.random.Generator, size: int, probs: Sequence[float]) -> int:
    p = np.asarray(probs, dtype=float)
    p1, rivals = p[0], p[1:]
    first_choice = gen.random((size, rivals.size)) < rivals
    diverted_ok = gen.random((size, rivals.size)) < p1
    ego = gen.random(size) < p1
    rivals_ok = (first_choice | diverted_ok).all(axis=1)
    return int(np.count_nonzero(ego & rivals_ok))


def _third_order_shard(gen: np.random.Generator, size: int, p1: float, p2: float, p3: float) -> int:
    u = gen.random((size, 6))
    # vehicle 3: lot 3, then lot 2, then lot 1
    v3_lot3 = u[:, 0] < p3
    v3_lot2 = u[:, 1] < p2
    v3_lot1 = u[:, 2] < p1
    v3_ok = v3_lot3 | v3_lot2 | v3_lot1
    # vehicle 2: lot 2, then lot 1
    v2_ok = (u[:, 3] < p2) | (u[:, 4] < p1)
    ego = u[:, 5] < p1
    return int(np.count_nonzero(ego & v2_ok & v3_ok))


def _run_shard(kernel: Callable[..., int], seed: int, label: str, size: int, index: int) -> int:
    return kernel(rng(seed, "cascade", label, index), size)


def _sharded(kernel: Callable[..., int], label: str, samples: int, seed: int,
             workers: Optional[int] = None) -> OracleEstimate:
    if samples < 1:
        raise ModelAssumptionError(f"oracle needs at least one sample, got {samples}")
    shard = max(1, Config.MC_SHARD_SIZE)
    sizes = [shard] * (samples // shard)
    if samples % shard:
        sizes.append(samples % shard)
    workers = Config.WORKERS if workers is None else workers

    if workers > 1 and len(sizes) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            counts = list(pool.map(partial(_run_shard, kernel, seed, label), sizes, range(len(sizes))))
    else:
        counts = [_run_shard(kernel, seed, label, size, i) for i, size in enumerate(sizes)]

    record_samples(label, samples)
    return OracleEstimate(successes=int(sum(counts)), samples=samples)


def first_order_sim(p1: float, n: int, samples: int, seed: int, workers: Optional[int] = None) -> OracleEstimate:
    """n independent flips at lot 1; success iff all succeed."""
    if n < 1:
        raise ModelAssumptionError(f"first-order cascade needs n >= 1 flips, got {n}")
    validate_probs([p1])
    return _sharded(partial(_first_order_shard, p1=p1, n=n), "first", samples, seed, workers)


def second_order_sim(probs: Sequence[float], samples: int, seed: int,
                     workers: Optional[int] = None) -> OracleEstimate:
    """Competitors flip first-choice, failures divert to lot 1 ahead of the ego."""
    p = validate_probs(probs)
    if p.size < 2:
        raise ModelAssumptionError(f"second-order cascade needs at least 2 probabilities, got {p.size}")
    return _sharded(partial(_second_order_shard, probs=tuple(p.tolist())), "second", samples, seed, workers)


def third_order_sim(p1: float, p2: float, p3: float, samples: int, seed: int,
                    workers: Optional[int] = None) -> OracleEstimate:
    validate_probs([p1, p2, p3])
    return _sharded(partial(_third_order_shard, p1=p1, p2=p2, p3=p3), "third", samples, seed, workers)


def simulate(scenario: CascadeScenario, samples: int, seed: int,
             workers: Optional[int] = None) -> OracleEstimate:
    if scenario.case is CascadeCase.FIRST_ORDER:
        return first_order_sim(scenario.probs[0], scenario.n_vehicles, samples, seed, workers)
    if scenario.case is CascadeCase.SECOND_ORDER:
        return second_order_sim(scenario.probs, samples, seed, workers)
    return third_order_sim(*scenario.probs, samples=samples, seed=seed, workers=workers)


def cascade_report(scenario: CascadeScenario, samples: int, seed: int,
                   workers: Optional[int] = None) -> Dict[str, object]:
    """Formula value, oracle estimate and their gap for one scenario.

    For the second order the exact expectation of the sampled model is
    reported too, since the closed form and the diversion model need not agree
    beyond two vehicles.
    """
    formula = scenario.formula()
    oracle = simulate(scenario, samples, seed, workers)
    report: Dict[str, object] = {
        "case": scenario.case.value,
        "probs": list(scenario.probs),
        "n_vehicles": scenario.n_vehicles,
        "samples": samples,
        "seed": seed,
        "formula": formula,
        "oracle": oracle.estimate,
        "oracle_stderr": oracle.stderr,
        "gap": abs(formula - oracle.estimate),
        "within_3_stderr": oracle.agrees_with(formula),
    }
    if scenario.case is CascadeCase.SECOND_ORDER:
        report["behavioral_expectation"] = second_order_behavioral(scenario.probs)
    if not report["within_3_stderr"]:
        logger.warning(
            f"{scenario.case.value}-order formula {formula:.6f} differs from oracle "
            f"{oracle.estimate:.6f} by more than 3 standard errors"
        )
    return report


def cascade_grid(settings: List[CascadeScenario], samples: int, seed: int) -> List[Dict[str, object]]:
    return [cascade_report(s, samples, seed) for s in settings]
