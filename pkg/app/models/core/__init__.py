"""
Core decision-process types, the parking network and the reward function.

Everything in this package is an immutable value type or a pure function and
can be shared read-only across worker processes.
"""

from .network import ParkingNetwork, load_network, semantic_violations
from .reward import reward, time_to_arrive, time_to_drive
from .types import (
    LotIndex,
    ORIGIN,
    ParkingStatus,
    RewardBreakdown,
    VehicleState,
    WaitConvention,
)

__all__ = [
    'ParkingNetwork',
    'load_network',
    'semantic_violations',
    'reward',
    'time_to_arrive',
    'time_to_drive',
    'LotIndex',
    'ORIGIN',
    'ParkingStatus',
    'RewardBreakdown',
    'VehicleState',
    'WaitConvention',
]
