"""Registry system for decision policies."""
import logging
from typing import Callable, Dict, List, Optional, Type

from app.errors import ConfigError
from app.models.core.network import ParkingNetwork
from app.models.core.types import LotIndex, VehicleState
from .base import Belief, Policy, PolicyKind, PolicySpec

logger = logging.getLogger(__name__)


class PolicyRegistry:
    """Registry for policy classes."""

    # Dictionary mapping policy kinds to their classes
    _policy_classes: Dict[PolicyKind, Type[Policy]] = {}

    @classmethod
    def register(cls, kind: PolicyKind, policy_class: Type[Policy]) -> None:
        """Register a policy class.

        Args:
            kind: The kind identifier for the policy
            policy_class: The policy class to register
        """
        cls._policy_classes[kind] = policy_class
        logger.debug(f"Registered policy: {kind.value} -> {policy_class.__name__}")

    @classmethod
    def get_policy_class(cls, kind: PolicyKind) -> Optional[Type[Policy]]:
        return cls._policy_classes.get(kind)

    @classmethod
    def get_registered_policies(cls) -> List[PolicyKind]:
        return list(cls._policy_classes.keys())

    @classmethod
    def is_registered(cls, kind: PolicyKind) -> bool:
        return kind in cls._policy_classes

    @classmethod
    def create(cls, spec: PolicySpec) -> Policy:
        """Instantiate the policy registered for ``spec.kind``.

        Raises:
            ConfigError: if no policy class is registered for the kind.
        """
        policy_class = cls.get_policy_class(spec.kind)
        if policy_class is None:
            raise ConfigError(f"no policy registered for kind '{spec.kind.value}'")
        return policy_class(spec)


def register_policy(kind: PolicyKind) -> Callable:
    """Decorator for registering policy classes.

    Args:
        kind: The kind identifier for the policy

    Returns:
        Decorator function that registers the decorated class
    """
    def decorator(cls):
        PolicyRegistry.register(kind, cls)
        return cls
    return decorator


def decide(spec: PolicySpec, state: VehicleState, net: ParkingNetwork, belief: Belief) -> LotIndex:
    """Next lot chosen by the policy described by ``spec``."""
    return PolicyRegistry.create(spec).decide(state, net, belief)
