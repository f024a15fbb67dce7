"""Fixtures shared by the model tests."""
import pytest

from app.models.core import ParkingNetwork


@pytest.fixture
def single_lot():
    """One lot ten minutes away, five-minute walk, p = 0.5."""
    return ParkingNetwork.build(drive_time=[[0, 10], [10, 0]], walk_time=[5], wait_time=5, initial_probs=[0.5])


@pytest.fixture
def two_lots():
    """Equal drives of 10, walks 5 and 8, p = 0.5 and 0.9."""
    return ParkingNetwork.build(
        drive_time=[[0, 10, 10], [10, 0, 6], [10, 6, 0]],
        walk_time=[5, 8],
        wait_time=5,
        initial_probs=[0.5, 0.9],
    )


@pytest.fixture
def lookahead_net():
    """Two lots six minutes apart with p = 0.5 / 0.8 and walks 5 / 7."""
    return ParkingNetwork.build(
        drive_time=[[0, 10, 10], [10, 0, 6], [10, 6, 0]],
        walk_time=[5, 7],
        wait_time=5,
        initial_probs=[0.5, 0.8],
    )


@pytest.fixture
def cluster_net():
    """Two scarce lots one minute apart: cycling beats waiting."""
    return ParkingNetwork.build(
        drive_time=[[0, 10, 10], [10, 0, 1], [10, 1, 0]],
        walk_time=[5, 5],
        wait_time=5,
        initial_probs=[0.3, 0.3],
    )


@pytest.fixture
def network_dict():
    return {
        "n_lots": 3,
        "drive_time": [[0, 10, 10, 10], [10, 0, 6, 4], [10, 6, 0, 3], [10, 4, 3, 0]],
        "walk_time": [5, 8, 9],
        "wait_time": 5,
        "initial_probs": [0.5, 0.6, 0.9],
    }
