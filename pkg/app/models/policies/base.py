"""Policy interface, beliefs and policy specifications."""
import enum
import logging
from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Any, Dict, Optional, Sequence

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator

from app.config import Config
from app.errors import ConfigError, ModelAssumptionError
from app.models.core.network import ParkingNetwork
from app.models.core.types import LotIndex, VehicleState

logger = logging.getLogger(__name__)


class BeliefSource(enum.Enum):
    OBSERVED = "observed"
    ORACLE_TRUE = "oracle-true"


@dataclass(frozen=True, eq=False)
class Belief:
    """Believed parking probability of every lot, index ``lot - 1``."""
    probs: np.ndarray
    source: BeliefSource = BeliefSource.OBSERVED

    def __post_init__(self):
        probs = np.array(self.probs, dtype=float)
        if probs.ndim != 1 or probs.size == 0:
            raise ModelAssumptionError(f"belief must be a non-empty vector, got shape {probs.shape}")
        if np.any(probs <= 0.0) or np.any(probs > 1.0):
            raise ModelAssumptionError(
                f"believed probabilities must lie in (0, 1]; got {probs.tolist()}"
            )
        probs.setflags(write=False)
        object.__setattr__(self, "probs", probs)

    @classmethod
    def clamped(cls, probs: Sequence[float], source: BeliefSource = BeliefSource.OBSERVED,
                eps: Optional[float] = None) -> "Belief":
        """Belief with entries clipped into [eps, 1] so heuristics never divide by zero."""
        eps = Config.PROB_EPSILON if eps is None else eps
        return cls(np.clip(np.asarray(probs, dtype=float), eps, 1.0), source)

    def prob(self, lot: LotIndex) -> float:
        return float(self.probs[lot - 1])


class PolicyKind(enum.Enum):
    PA = "pa"
    BASELINE_PATIENT = "baseline-patient"
    BASELINE_IMPATIENT = "baseline-impatient"


@dataclass(frozen=True)
class PolicySpec:
    """A named decision rule with its parameters.

    ``cap`` applies to the patient baseline only (``None`` disables it);
    ``oracle`` binds beliefs to the true probabilities.
    """
    kind: PolicyKind
    steps: int = 1
    cap: Optional[float] = None
    oracle: bool = False
    exclude_failed_on_reset: bool = True

    def __post_init__(self):
        if self.kind is PolicyKind.PA and self.steps not in (1, 2, 3):
            raise ModelAssumptionError(f"lookahead depth must be 1, 2 or 3, got {self.steps}")
        if self.cap is not None and not self.cap > 0:
            raise ModelAssumptionError(f"patient cap must be > 0 minutes, got {self.cap}")

    @property
    def base_name(self) -> str:
        if self.kind is PolicyKind.PA:
            return f"pa{self.steps}"
        return self.kind.value

    @property
    def name(self) -> str:
        return self.base_name + ("-oracle" if self.oracle else "")

    @property
    def belief_source(self) -> BeliefSource:
        return BeliefSource.ORACLE_TRUE if self.oracle else BeliefSource.OBSERVED

    def twin(self, oracle: bool) -> "PolicySpec":
        return PolicySpec(self.kind, self.steps, self.cap, oracle, self.exclude_failed_on_reset)

    @classmethod
    def parse(cls, entry: Any) -> "PolicySpec":
        """Build a spec from a config entry: a name or a mapping with ``name``."""
        if isinstance(entry, str):
            entry = {"name": entry}
        try:
            cfg = PolicyEntry.model_validate(entry)
        except ValidationError as e:
            raise ConfigError("invalid policy entry",
                              [f"{'.'.join(map(str, err['loc']))}: {err['msg']}" for err in e.errors()])
        name = cfg.name
        oracle = cfg.oracle
        if name.endswith("-oracle"):
            name, oracle = name[: -len("-oracle")], True
        if name in ("pa1", "pa2", "pa3"):
            return cls(PolicyKind.PA, steps=int(name[-1]), oracle=oracle)
        if name == PolicyKind.BASELINE_PATIENT.value:
            cap = Config.PATIENT_CAP_MIN if cfg.cap == "default" else cfg.cap
            return cls(PolicyKind.BASELINE_PATIENT, cap=cap, oracle=oracle)
        return cls(PolicyKind.BASELINE_IMPATIENT, oracle=oracle,
                   exclude_failed_on_reset=cfg.exclude_failed_on_reset)


POLICY_NAMES = ("pa1", "pa2", "pa3", "baseline-patient", "baseline-impatient")


class PolicyEntry(BaseModel):
    """Config schema of one policy entry."""
    model_config = ConfigDict(extra="forbid")

    name: str
    oracle: bool = False
    cap: Any = Field(default="default")
    exclude_failed_on_reset: bool = True

    @field_validator("name")
    @classmethod
    def _known_name(cls, value: str) -> str:
        bare = value[: -len("-oracle")] if value.endswith("-oracle") else value
        if bare not in POLICY_NAMES:
            raise ValueError(f"unknown policy '{value}', expected one of {', '.join(POLICY_NAMES)}")
        return value

    @field_validator("cap")
    @classmethod
    def _cap(cls, value: Any) -> Any:
        if value is None or value == "default":
            return value
        value = float(value)
        if value <= 0:
            raise ValueError("cap must be > 0 minutes")
        return value


class Policy(ABC):
    """A decision rule mapping (state, network, belief) to the next lot."""

    # baselines decide from the geometry alone
    uses_belief = True

    def __init__(self, spec: PolicySpec):
        self.spec = spec

    @property
    def name(self) -> str:
        return self.spec.name

    @abstractmethod
    def decide(self, state: VehicleState, net: ParkingNetwork, belief: Belief) -> LotIndex:
        """Lot to attempt next from an unparked state."""

    def describe(self) -> Dict[str, Any]:
        return {"name": self.name, "kind": self.spec.kind.value, "steps": self.spec.steps,
                "cap": self.spec.cap, "oracle": self.spec.oracle}


def lowest_index_argmin(values: np.ndarray) -> int:
    """Position of the minimum, first position on ties."""
    return int(np.argmin(values))
