"""Episode simulation, batch runs and mode comparison."""

from .batch import BatchResult, aggregate, episode_seed, run_batch, stream_seed
from .compare import BEST_PA, compare_modes
from .engine import EpisodeResult, Leg, ScenarioConfig, build_streams, run_episode

__all__ = [
    'BatchResult',
    'aggregate',
    'episode_seed',
    'run_batch',
    'stream_seed',
    'BEST_PA',
    'compare_modes',
    'EpisodeResult',
    'Leg',
    'ScenarioConfig',
    'build_streams',
    'run_episode',
]
