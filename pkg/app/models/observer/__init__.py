"""Probability traces, connected-user observation and observation-error laws."""

from .error_laws import (
    RateUnit,
    RenewalEstimate,
    exponential_error_expectation,
    exponential_law_report,
    exponential_moment_expectation,
    exponential_renewal_oracle,
    expected_time_error,
    linear_error_expectation,
    linear_law_report,
    linear_renewal_oracle,
    observation_rate,
)
from .sampling import (
    ObservationStream,
    interval_errors,
    mae,
    observation_seed,
    observe,
    observe_at,
    poisson_times,
    random_walk_mae,
    walk_seed,
)
from .traces import (
    ProbabilityTrace,
    TraceKind,
    bounded_random_walk,
    constant_trace,
    exponential_trace,
    linear_trace,
    trace_from_frame,
)

__all__ = [
    'RateUnit',
    'RenewalEstimate',
    'exponential_error_expectation',
    'exponential_law_report',
    'exponential_moment_expectation',
    'exponential_renewal_oracle',
    'expected_time_error',
    'linear_error_expectation',
    'linear_law_report',
    'linear_renewal_oracle',
    'observation_rate',
    'ObservationStream',
    'interval_errors',
    'mae',
    'observe',
    'observe_at',
    'poisson_times',
    'random_walk_mae',
    'observation_seed',
    'walk_seed',
    'ProbabilityTrace',
    'TraceKind',
    'bounded_random_walk',
    'constant_trace',
    'exponential_trace',
    'linear_trace',
    'trace_from_frame',
]
