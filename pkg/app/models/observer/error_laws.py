"""Expected integrated observation error per renewal interval.

Between two observations the estimate is frozen while the true value keeps
moving. With observation rate mu per minute the interval length T is
Exponential(mu). For a linear drift of slope m the shaded error area is
``m * T**2 / 2``, with expectation ``m / mu**2``. For growth ``t**b`` the area
is ``T**(b+1) / (b+1)`` with expectation ``Gamma(b+1) / mu**(b+1)``; the
published constant for this case is ``b / mu**(b+1)``, and the two agree only
for b in {1, 2}.
"""
import enum
import logging
import math
from dataclasses import dataclass
from typing import Dict

import numpy as np
from scipy.special import gamma

from app.errors import ModelAssumptionError
from app.models.core.network import ParkingNetwork
from app.monitoring.metrics import record_samples
from app.utils.seeding import rng

logger = logging.getLogger(__name__)


class RateUnit(enum.Enum):
    PER_HOUR = "per-hour"
    PER_MINUTE = "per-minute"


def observation_rate(lam: float, r: float, unit: RateUnit = RateUnit.PER_HOUR) -> float:
    """lambda * r converted to events per minute."""
    rate = lam * r
    if unit is RateUnit.PER_HOUR:
        rate /= 60.0
    if not rate > 0:
        raise ModelAssumptionError(f"lambda*r must be > 0 (no observations would ever arrive), got {lam}*{r}")
    return rate


def linear_error_expectation(m: float, lam: float, r: float, unit: RateUnit = RateUnit.PER_HOUR) -> float:
    """Expected error area per interval for a trace drifting with slope ``m`` per minute."""
    if m < 0:
        raise ModelAssumptionError(f"slope magnitude must be >= 0, got {m}")
    mu = observation_rate(lam, r, unit)
    return m / mu ** 2


def _check_exponent(b: float) -> None:
    if b < 1:
        raise ModelAssumptionError(f"exponent must be >= 1, got {b}")


def exponential_error_expectation(b: float, lam: float, r: float, unit: RateUnit = RateUnit.PER_HOUR) -> float:
    """Published constant ``b / mu**(b+1)`` for growth ``t**b``."""
    _check_exponent(b)
    mu = observation_rate(lam, r, unit)
    return b / mu ** (b + 1)


def exponential_moment_expectation(b: float, lam: float, r: float, unit: RateUnit = RateUnit.PER_HOUR) -> float:
    """``Gamma(b+1) / mu**(b+1)``, the expectation of ``T**(b+1) / (b+1)``."""
    _check_exponent(b)
    mu = observation_rate(lam, r, unit)
    return float(gamma(b + 1.0)) / mu ** (b + 1)


@dataclass(frozen=True)
class RenewalEstimate:
    mean: float
    stderr: float
    draws: int

    def relative_gap(self, value: float) -> float:
        return abs(self.mean - value) / abs(value) if value else abs(self.mean)


def _renewal_draws(mu: float, draws: int, seed: int, label: str) -> np.ndarray:
    if draws < 2:
        raise ModelAssumptionError(f"renewal oracle needs at least 2 draws, got {draws}")
    record_samples(label, draws)
    return rng(seed, "renewal", label).exponential(1.0 / mu, draws)


def _summarise(areas: np.ndarray) -> RenewalEstimate:
    return RenewalEstimate(float(areas.mean()), float(areas.std(ddof=1) / math.sqrt(areas.size)), int(areas.size))


def linear_renewal_oracle(m: float, lam: float, r: float, draws: int, seed: int,
                          unit: RateUnit = RateUnit.PER_HOUR) -> RenewalEstimate:
    """Monte Carlo mean of ``m * T**2 / 2`` with T ~ Exponential(lambda*r)."""
    mu = observation_rate(lam, r, unit)
    t = _renewal_draws(mu, draws, seed, "linear")
    return _summarise(m * t ** 2 / 2.0)


def exponential_renewal_oracle(b: float, lam: float, r: float, draws: int, seed: int,
                               unit: RateUnit = RateUnit.PER_HOUR) -> RenewalEstimate:
    """Monte Carlo mean of ``T**(b+1) / (b+1)`` with T ~ Exponential(lambda*r)."""
    _check_exponent(b)
    mu = observation_rate(lam, r, unit)
    t = _renewal_draws(mu, draws, seed, "exponential")
    return _summarise(t ** (b + 1) / (b + 1))


def linear_law_report(m: float, lam: float, r: float, draws: int, seed: int,
                      unit: RateUnit = RateUnit.PER_HOUR) -> Dict[str, object]:
    closed = linear_error_expectation(m, lam, r, unit)
    oracle = linear_renewal_oracle(m, lam, r, draws, seed, unit)
    return {
        "law": "linear",
        "m": m,
        "lambda": lam,
        "r": r,
        "unit": unit.value,
        "closed_form": closed,
        "oracle": oracle.mean,
        "oracle_stderr": oracle.stderr,
        "draws": draws,
        "relative_gap": oracle.relative_gap(closed),
        "within_5pct": oracle.relative_gap(closed) <= 0.05,
    }


def exponential_law_report(b: float, lam: float, r: float, draws: int, seed: int,
                           unit: RateUnit = RateUnit.PER_HOUR) -> Dict[str, object]:
    """Oracle against both constants; ``matches`` names the closer one."""
    published = exponential_error_expectation(b, lam, r, unit)
    moment = exponential_moment_expectation(b, lam, r, unit)
    oracle = exponential_renewal_oracle(b, lam, r, draws, seed, unit)
    gap_published = oracle.relative_gap(published)
    gap_moment = oracle.relative_gap(moment)
    if math.isclose(published, moment, rel_tol=1e-12):
        matches = "both"
    else:
        matches = "published" if gap_published < gap_moment else "moment"
    if matches == "moment":
        logger.info(f"Exponential law b={b}: oracle {oracle.mean:.4f} follows the moment value {moment:.4f}, "
                    f"not the published {published:.4f}")
    return {
        "law": "exponential",
        "b": b,
        "lambda": lam,
        "r": r,
        "unit": unit.value,
        "published": published,
        "moment": moment,
        "oracle": oracle.mean,
        "oracle_stderr": oracle.stderr,
        "draws": draws,
        "relative_gap_published": gap_published,
        "relative_gap_moment": gap_moment,
        "matches": matches,
    }


def expected_time_error(p_true: float, p_obs: float, net: ParkingNetwork, lot: int) -> float:
    """Error in the patient value of ``lot`` when ``p_obs`` is believed instead of ``p_true``."""
    net.check_lot(lot)
    for name, p in (("p_true", p_true), ("p_obs", p_obs)):
        if not 0.0 < p <= 1.0:
            raise ModelAssumptionError(f"{name} must lie in (0, 1], got {p}")
    return net.wait_time * abs(1.0 / p_true - 1.0 / p_obs)
