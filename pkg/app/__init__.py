"""park-sim: parking-lot selection when availability is uncertain.

The package is organised as

- ``app.models``: the parking MDP, closed-form strategies, cascades,
  observation error and the decision policies
- ``app.simulation``: episodes, batches and comparisons with other modes
- ``app.ingest``: occupancy and transaction data, real or synthetic
- ``app.experiments``: scenario files, built-in sites and presets
- ``app.cli``: the ``park-sim`` command
"""
import logging

from app.config import Config

__version__ = "0.1.0"

logger = logging.getLogger(__name__)
logger.addHandler(logging.NullHandler())

__all__ = ["Config", "__version__"]
