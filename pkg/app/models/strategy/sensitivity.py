"""Stability of the best patient lot under probability changes."""
import logging
from typing import Iterable, Optional

import numpy as np
import pandas as pd

from app.models.core.network import ParkingNetwork
from app.models.core.types import LotIndex, ORIGIN
from .closed_form import best_patient_lot

logger = logging.getLogger(__name__)


def sensitivity_margin(net: ParkingNetwork, i_star: LotIndex, j: LotIndex) -> float:
    """Left side minus right side of the stability condition; >= 0 means i_star stays best against j."""
    net.check_lot(i_star)
    net.check_lot(j)
    lhs = net.wait_time * (1.0 / net.prob(j) - 1.0 / net.prob(i_star))
    rhs = (net.drive(ORIGIN, i_star) - net.drive(ORIGIN, j)) + (net.walk(i_star) - net.walk(j))
    return lhs - rhs


def sensitivity_holds(net: ParkingNetwork, i_star: LotIndex, j: LotIndex) -> bool:
    """Whether ``i_star`` remains preferable to ``j`` at the current probabilities.

    The condition compares the extra expected waiting at j with the drive and
    walk that j would save::

        wait * (1/p_j - 1/p_i*) >= (t_0i* - t_0j) + (t_i*D - t_jD)
    """
    if i_star == j:
        net.check_lot(j)
        return True
    return bool(sensitivity_margin(net, i_star, j) >= 0.0)


def sensitivity_table(net: ParkingNetwork, i_star: Optional[LotIndex] = None) -> pd.DataFrame:
    """Margin and verdict of every lot against the best patient lot."""
    if i_star is None:
        i_star, _ = best_patient_lot(net)
    rows = []
    for j in net.lots:
        rows.append({
            "i_star": i_star,
            "lot": j,
            "p_i_star": net.prob(i_star),
            "p_lot": net.prob(j),
            "margin": 0.0 if j == i_star else sensitivity_margin(net, i_star, j),
            "holds": sensitivity_holds(net, i_star, j),
        })
    return pd.DataFrame(rows)


def sensitivity_sweep(net: ParkingNetwork, j: LotIndex, grid: Iterable[float]) -> pd.DataFrame:
    """Vary ``p_j`` over ``grid`` and record the best lot and the stability verdict.

    ``i_star`` is the best patient lot of the unmodified network. The frame
    has one row per grid value with columns ``p_j``, ``best_lot``,
    ``i_star``, ``holds`` and ``best_changed``.
    """
    net.check_lot(j)
    i_star, _ = best_patient_lot(net)
    probs = np.array(net.initial_probs, dtype=float)
    rows = []
    for p in grid:
        probs[j - 1] = p
        variant = net.with_probs(probs)
        best, value = best_patient_lot(variant)
        rows.append({
            "p_j": float(p),
            "best_lot": best,
            "best_value": value,
            "i_star": i_star,
            "holds": sensitivity_holds(variant, i_star, j),
            "best_changed": best != i_star,
        })
    frame = pd.DataFrame(rows)
    if len(frame) > 1:
        flips = np.flatnonzero(np.diff(frame["holds"].to_numpy(dtype=int)))
        if flips.size:
            logger.info(f"Stability of lot {i_star} against lot {j} flips at p_j={frame['p_j'].iloc[flips[0] + 1]:.4f}")
    return frame
