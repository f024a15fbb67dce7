"""Occupancy/transaction ingestion and synthetic data generation."""

from .occupancy import apply_lot_map, day_origin, occupancy_to_trace, to_minutes, traces_by_lot
from .records import (
    SDOT_COLUMNS,
    ColumnMap,
    OccupancyRecord,
    TransactionRecord,
    load_lot_map,
    read_occupancy,
    read_transactions,
)
from .synth import (
    LotProfile,
    SynthDataset,
    SynthProfile,
    high_demand_profile,
    light_demand_profile,
    synth_dataset,
)
from .transactions import arrival_minutes, connected_stream, sample_connected_users

__all__ = [
    'apply_lot_map',
    'day_origin',
    'occupancy_to_trace',
    'to_minutes',
    'traces_by_lot',
    'SDOT_COLUMNS',
    'ColumnMap',
    'OccupancyRecord',
    'TransactionRecord',
    'load_lot_map',
    'read_occupancy',
    'read_transactions',
    'LotProfile',
    'SynthDataset',
    'SynthProfile',
    'high_demand_profile',
    'light_demand_profile',
    'synth_dataset',
    'arrival_minutes',
    'connected_stream',
    'sample_connected_users',
]
