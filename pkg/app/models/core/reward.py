"""Reward cases and time-to-arrive accounting."""
import logging
from typing import Sequence

from app.errors import ModelAssumptionError
from .network import ParkingNetwork
from .types import LotIndex, RewardBreakdown

logger = logging.getLogger(__name__)


def reward(from_lot: LotIndex, to_lot: LotIndex, parked: bool, net: ParkingNetwork) -> RewardBreakdown:
    """Time components of one attempt.

    Moving (``from_lot != to_lot``) charges the drive time, staying charges
    the wait time. A successful attempt adds the walk from ``to_lot`` to the
    destination.

    Args:
        from_lot: Current location, 0 for the origin.
        to_lot: Lot where parking is attempted, 1..N.
        parked: Whether the attempt succeeded.
        net: Network supplying the times.

    Returns:
        The breakdown; ``reward`` on it is the negated total.

    Raises:
        ModelAssumptionError: if ``to_lot`` is the origin or out of range.
    """
    net.check_lot(from_lot, allow_origin=True)
    net.check_lot(to_lot)

    walk = net.walk(to_lot) if parked else 0.0
    if from_lot == to_lot:
        return RewardBreakdown(drive=0.0, wait=net.wait_time, walk=walk, parked=parked)
    return RewardBreakdown(drive=net.drive(from_lot, to_lot), wait=0.0, walk=walk, parked=parked)


def time_to_arrive(legs: Sequence[RewardBreakdown]) -> float:
    """Total trip time of a trajectory that ends parked: the magnitude of its cumulative reward."""
    if not legs:
        raise ModelAssumptionError("time_to_arrive needs at least one leg; an empty trajectory never parks")
    if not legs[-1].parked:
        raise ModelAssumptionError("time_to_arrive needs a trajectory whose last leg parks")
    return float(sum(leg.total for leg in legs))


def time_to_drive(net: ParkingNetwork, target: LotIndex) -> float:
    """Uncongested travel time from the origin straight to ``target``."""
    net.check_lot(target)
    return net.drive(0, target)
