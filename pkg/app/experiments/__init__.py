"""Scenario files, built-in sites and named experiment presets."""

from .presets import ExperimentPreset, PresetOutcome, preset_names, run_preset
from .scenarios import (
    DEFAULT_POLICIES,
    SITES,
    ScenarioFile,
    Site,
    dense_network,
    dense_site,
    load_scenario,
    policy_violations,
    read_scenario_file,
    sparse_network,
    sparse_site,
)

__all__ = [
    'ExperimentPreset',
    'PresetOutcome',
    'preset_names',
    'run_preset',
    'DEFAULT_POLICIES',
    'SITES',
    'ScenarioFile',
    'Site',
    'dense_network',
    'dense_site',
    'load_scenario',
    'policy_violations',
    'read_scenario_file',
    'sparse_network',
    'sparse_site',
]
