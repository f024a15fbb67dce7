"""Dynamic-probability cascades: closed forms and behavioural oracles."""

from .formulas import (
    CascadeCase,
    CascadeScenario,
    first_order,
    second_order_behavioral,
    second_order_formula,
    third_order,
)
from .oracle import (
    OracleEstimate,
    cascade_report,
    first_order_sim,
    second_order_sim,
    simulate,
    third_order_sim,
)

__all__ = [
    'CascadeCase',
    'CascadeScenario',
    'first_order',
    'second_order_behavioral',
    'second_order_formula',
    'third_order',
    'OracleEstimate',
    'cascade_report',
    'first_order_sim',
    'second_order_sim',
    'simulate',
    'third_order_sim',
]
