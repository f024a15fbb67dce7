"""Utility modules for park-sim.

This package provides utilities for:
- Deterministic seed derivation
- Rounded CSV/JSON output
- Caching of parsed input files
"""

from app.utils.infrastructure.cache import cached_parse, invalidate_cache
from app.utils.io import round_frame, write_csv, write_json
from app.utils.seeding import derive_seed, rng

__all__ = [
    # Seeding
    'derive_seed',
    'rng',

    # Output
    'round_frame',
    'write_csv',
    'write_json',

    # Caching
    'cached_parse',
    'invalidate_cache',
]
