"""Tests for the parking network, states and rewards."""
import numpy as np
import pytest

from app.errors import ConfigError, ModelAssumptionError, ParkSimError
from app.models.core import (
    ORIGIN,
    ParkingNetwork,
    ParkingStatus,
    RewardBreakdown,
    VehicleState,
    reward,
    time_to_arrive,
    time_to_drive,
)


@pytest.mark.smoke
def test_network_from_dict_round_trip(network_dict):
    net = ParkingNetwork.from_dict(network_dict)
    assert net.n_lots == 3
    assert list(net.lots) == [1, 2, 3]
    assert net.drive(0, 2) == 10
    assert net.walk(3) == 9
    assert net.prob(1) == 0.5
    assert net.to_dict() == {k: network_dict[k] for k in network_dict}


def test_network_accepts_nested_network_section(network_dict):
    net = ParkingNetwork.from_dict({"network": network_dict})
    assert net.n_lots == 3


def test_network_arrays_are_read_only(network_dict):
    net = ParkingNetwork.from_dict(network_dict)
    with pytest.raises(ValueError):
        net.drive_time[0, 1] = 3


def test_zero_probability_names_the_assumption(network_dict):
    network_dict["initial_probs"] = [0.0, 0.6, 0.9]
    with pytest.raises(ConfigError) as info:
        ParkingNetwork.from_dict(network_dict)
    assert any("(0, 1]" in v for v in info.value.violations)


def test_shape_mismatch_is_reported(network_dict):
    network_dict["walk_time"] = [5, 8]
    with pytest.raises(ConfigError) as info:
        ParkingNetwork.from_dict(network_dict)
    assert any("walk_time" in v for v in info.value.violations)


def test_unknown_key_fails_schema(network_dict):
    network_dict["speed"] = 30
    with pytest.raises(ConfigError):
        ParkingNetwork.from_dict(network_dict)


def test_build_rejects_negative_drive():
    with pytest.raises(ModelAssumptionError):
        ParkingNetwork.build([[0, -1], [1, 0]], [2], 5, [0.5])


def test_step_matrix_uses_wait_on_diagonal(two_lots):
    steps = two_lots.step_matrix()
    assert steps.shape == (3, 2)
    np.testing.assert_allclose(steps, [[10, 10], [5, 6], [6, 5]])


def test_reward_cases(two_lots):
    assert reward(ORIGIN, 1, False, two_lots) == RewardBreakdown(drive=10.0)
    assert reward(ORIGIN, 1, True, two_lots).total == 15.0
    assert reward(1, 1, False, two_lots) == RewardBreakdown(wait=5.0)
    assert reward(1, 1, True, two_lots).total == 10.0
    assert reward(1, 2, True, two_lots).reward == -14.0


def test_origin_is_not_an_action_target(two_lots):
    with pytest.raises(ModelAssumptionError, match="origin"):
        reward(1, ORIGIN, False, two_lots)


def test_time_to_arrive_sums_legs():
    legs = [RewardBreakdown(drive=10), RewardBreakdown(wait=5), RewardBreakdown(wait=5, walk=5, parked=True)]
    assert time_to_arrive(legs) == 25.0


def test_time_to_arrive_needs_a_leg():
    with pytest.raises(ModelAssumptionError):
        time_to_arrive([])


def test_time_to_arrive_rejects_an_unparked_ending(two_lots):
    legs = [reward(ORIGIN, 1, False, two_lots), reward(1, 1, False, two_lots)]
    with pytest.raises(ParkSimError, match="last leg parks"):
        time_to_arrive(legs)
    assert time_to_arrive(legs + [reward(1, 2, True, two_lots)]) == 10.0 + 5.0 + 6.0 + two_lots.walk(2)


def test_time_to_drive(two_lots):
    assert time_to_drive(two_lots, 2) == 10.0


def test_vehicle_state_transitions():
    state = VehicleState.origin(clock=480.0)
    assert state.location == ORIGIN and not state.is_terminal
    moved = state.moved(2, True, 490.0, frozenset({2}))
    assert moved.status is ParkingStatus.PARKED
    assert moved.is_terminal
    assert moved.clock == 490.0
