"""Closed-form strategy values, the exact solver and sensitivity analysis."""

from .closed_form import (
    Cluster,
    StrategyValue,
    best_patient_lot,
    cluster_expected_time,
    cluster_value,
    joint_success,
    patient_expected_time,
    patient_values,
    validate_cluster,
)
from .sensitivity import sensitivity_holds, sensitivity_margin, sensitivity_sweep, sensitivity_table
from .value_iteration import ValueIterationResult, bellman_residual, value_iteration

__all__ = [
    'Cluster',
    'StrategyValue',
    'best_patient_lot',
    'cluster_expected_time',
    'cluster_value',
    'joint_success',
    'patient_expected_time',
    'patient_values',
    'validate_cluster',
    'sensitivity_holds',
    'sensitivity_margin',
    'sensitivity_sweep',
    'sensitivity_table',
    'ValueIterationResult',
    'bellman_residual',
    'value_iteration',
]
