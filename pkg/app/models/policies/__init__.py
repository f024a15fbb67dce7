"""Decision policies: lookahead heuristics and baselines.

Importing this package registers every policy class with PolicyRegistry.
"""

from .base import Belief, BeliefSource, Policy, PolicyEntry, PolicyKind, PolicySpec, POLICY_NAMES
from .baselines import BaselineImpatient, BaselinePatient, closest_to_destination
from .lookahead import LookaheadPolicy, pa_cost, pa_cost_matrix
from .registry import PolicyRegistry, decide, register_policy

__all__ = [
    'Belief',
    'BeliefSource',
    'Policy',
    'PolicyEntry',
    'PolicyKind',
    'PolicySpec',
    'POLICY_NAMES',
    'BaselineImpatient',
    'BaselinePatient',
    'closest_to_destination',
    'LookaheadPolicy',
    'pa_cost',
    'pa_cost_matrix',
    'PolicyRegistry',
    'decide',
    'register_policy',
]
