"""Type definitions for the parking-selection decision process."""
import enum
from dataclasses import dataclass, field, replace
from typing import FrozenSet

# 0 is the origin, 1..N are parking lots
LotIndex = int

ORIGIN: LotIndex = 0


class ParkingStatus(enum.Enum):
    """Enum for the vehicle's parking status."""
    UNPARKED = "unparked"
    PARKED = "parked"


class WaitConvention(enum.Enum):
    """How the patient strategy charges the wait before a successful flip.

    CHARGE_FIRST_FLIP charges t_wait on every flip including the first, which
    gives the textbook t_wait / p term. FREE_FIRST_FLIP follows the reward
    table, where a move-and-park leg carries no wait, giving t_wait * (1/p - 1).
    The two differ by exactly t_wait for every lot.
    """
    CHARGE_FIRST_FLIP = "charge-first-flip"
    FREE_FIRST_FLIP = "free-first-flip"


@dataclass(frozen=True)
class RewardBreakdown:
    """Time components of one leg, in minutes. The reward is the negated total."""
    drive: float = 0.0
    wait: float = 0.0
    walk: float = 0.0
    parked: bool = False

    @property
    def total(self) -> float:
        return self.drive + self.wait + self.walk

    @property
    def reward(self) -> float:
        return -self.total


@dataclass(frozen=True)
class VehicleState:
    """Position and search bookkeeping of the ego vehicle.

    ``visited`` and ``clock`` do not affect rewards; policies use them
    (search cycles, trace lookup).
    """
    location: LotIndex = ORIGIN
    status: ParkingStatus = ParkingStatus.UNPARKED
    visited: FrozenSet[LotIndex] = field(default_factory=frozenset)
    clock: float = 0.0

    @classmethod
    def origin(cls, clock: float = 0.0) -> "VehicleState":
        return cls(location=ORIGIN, status=ParkingStatus.UNPARKED, visited=frozenset(), clock=clock)

    @property
    def is_terminal(self) -> bool:
        return self.status is ParkingStatus.PARKED

    def moved(self, location: LotIndex, parked: bool, clock: float,
              visited: FrozenSet[LotIndex]) -> "VehicleState":
        status = ParkingStatus.PARKED if parked else ParkingStatus.UNPARKED
        return replace(self, location=location, status=status, clock=clock, visited=visited)
