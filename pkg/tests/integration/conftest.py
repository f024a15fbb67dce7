"""Fixtures for simulator, ingest and scenario integration tests."""
import pandas as pd
import pytest
import yaml

from app.models.core import ParkingNetwork
from app.models.observer import constant_trace
from app.simulation import ScenarioConfig


@pytest.fixture
def constant_scenario():
    """Factory for a scenario whose true probabilities never change."""

    def _make(net: ParkingNetwork, probs=None, policies=(), minutes=2000.0, **kwargs):
        probs = list(net.initial_probs) if probs is None else probs
        traces = {j: constant_trace(probs[j - 1], minutes, lot=j) for j in net.lots}
        return ScenarioConfig(network=net, traces=traces, policies=tuple(policies), **kwargs)

    return _make


@pytest.fixture
def one_lot():
    return ParkingNetwork.build([[0, 10], [10, 0]], [5], 5, [0.5])


@pytest.fixture
def three_lots():
    return ParkingNetwork.build(
        [[0, 10, 10, 10], [10, 0, 3, 5], [10, 3, 0, 3], [10, 5, 3, 0]], [2, 5, 8], 5, [0.4, 0.6, 0.9])


@pytest.fixture
def write_yaml(tmp_path):
    def _write(name, data):
        path = tmp_path / name
        path.write_text(yaml.safe_dump(data), encoding="utf-8")
        return path
    return _write


@pytest.fixture
def occupancy_csv(tmp_path):
    """Small occupancy export with one duplicate timestamp and one over-capacity row."""
    frame = pd.DataFrame({
        "timestamp": ["2024-06-01T08:00:00", "2024-06-01T08:10:00", "2024-06-01T08:10:00",
                      "2024-06-01T08:20:00", "2024-06-01T08:00:00", "2024-06-01T08:20:00"],
        "lot_id": ["A", "A", "A", "A", "B", "B"],
        "occupied": [5, 8, 9, 12, 0, 3],
        "capacity": [10, 10, 10, 10, 4, 4],
    })
    path = tmp_path / "occupancy.csv"
    frame.to_csv(path, index=False)
    return path


@pytest.fixture
def transactions_csv(tmp_path):
    frame = pd.DataFrame({
        "timestamp": [f"2024-06-01T08:{m:02d}:00" for m in range(0, 60, 3)],
        "lot_id": ["A", "B"] * 10,
    })
    path = tmp_path / "transactions.csv"
    frame.to_csv(path, index=False)
    return path
