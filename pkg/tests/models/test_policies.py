"""Tests for beliefs, policy specifications, lookahead costs and baselines."""
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from app.config import Config
from app.errors import ConfigError, ModelAssumptionError
from app.models.core import ORIGIN, ParkingNetwork, VehicleState
from app.models.policies import (
    BaselineImpatient,
    BaselinePatient,
    Belief,
    BeliefSource,
    LookaheadPolicy,
    PolicyKind,
    PolicyRegistry,
    PolicySpec,
    decide,
    pa_cost,
    pa_cost_matrix,
)


def at(location, visited=()):
    return VehicleState(location=location, visited=frozenset(visited))


class TestBelief:
    def test_rejects_zero(self):
        with pytest.raises(ModelAssumptionError):
            Belief(np.array([0.0, 0.5]))

    def test_clamped_clips_into_range(self):
        belief = Belief.clamped([0.0, 0.5], BeliefSource.ORACLE_TRUE)
        assert belief.prob(1) == Config.PROB_EPSILON
        assert belief.prob(2) == 0.5
        assert belief.source is BeliefSource.ORACLE_TRUE


class TestPolicySpec:
    def test_parse_names(self):
        spec = PolicySpec.parse("pa2-oracle")
        assert spec.kind is PolicyKind.PA and spec.steps == 2 and spec.oracle
        assert spec.name == "pa2-oracle"
        assert spec.base_name == "pa2"

    def test_patient_cap_defaults_from_config(self):
        assert PolicySpec.parse("baseline-patient").cap == Config.PATIENT_CAP_MIN
        assert PolicySpec.parse({"name": "baseline-patient", "cap": None}).cap is None
        assert PolicySpec.parse({"name": "baseline-patient", "cap": 30}).cap == 30.0

    def test_impatient_reset_toggle(self):
        spec = PolicySpec.parse({"name": "baseline-impatient", "exclude_failed_on_reset": False})
        assert not spec.exclude_failed_on_reset

    def test_unknown_policy(self):
        with pytest.raises(ConfigError):
            PolicySpec.parse("pa4")

    def test_depth_is_bounded(self):
        with pytest.raises(ModelAssumptionError):
            PolicySpec(PolicyKind.PA, steps=4)

    def test_twin_shares_everything_but_beliefs(self):
        spec = PolicySpec.parse("pa3")
        twin = spec.twin(oracle=True)
        assert twin.base_name == spec.base_name
        assert twin.belief_source is BeliefSource.ORACLE_TRUE


class TestRegistry:
    def test_every_kind_is_registered(self):
        for kind in PolicyKind:
            assert PolicyRegistry.is_registered(kind)

    def test_create_builds_the_registered_class(self):
        assert isinstance(PolicyRegistry.create(PolicySpec.parse("pa1")), LookaheadPolicy)
        assert isinstance(PolicyRegistry.create(PolicySpec.parse("baseline-patient")), BaselinePatient)
        assert isinstance(PolicyRegistry.create(PolicySpec.parse("baseline-impatient")), BaselineImpatient)


class TestLookahead:
    def test_one_step_costs_from_origin(self, two_lots):
        belief = Belief(two_lots.initial_probs)
        assert pa_cost(1, ORIGIN, 1, two_lots, belief) == pytest.approx(25.0)
        assert pa_cost(1, ORIGIN, 2, two_lots, belief) == pytest.approx(19.11, abs=0.01)
        assert decide(PolicySpec.parse("pa1"), at(ORIGIN), two_lots, belief) == 2

    def test_two_step_costs_at_a_lot(self, lookahead_net):
        belief = Belief(lookahead_net.initial_probs)
        assert pa_cost(2, 1, 1, lookahead_net, belief) == pytest.approx(14.75)
        assert pa_cost(2, 1, 2, lookahead_net, belief) == pytest.approx(14.25)
        assert decide(PolicySpec.parse("pa2"), at(1, {1}), lookahead_net, belief) == 2

    def test_matrix_shape(self, lookahead_net):
        belief = Belief(lookahead_net.initial_probs)
        assert pa_cost_matrix(3, lookahead_net, belief).shape == (3, 2)

    def test_belief_size_must_match(self, lookahead_net):
        with pytest.raises(ModelAssumptionError):
            pa_cost_matrix(1, lookahead_net, Belief(np.array([0.5])))

    def test_origin_is_not_a_target(self, lookahead_net):
        with pytest.raises(ModelAssumptionError):
            pa_cost(1, 1, ORIGIN, lookahead_net, Belief(lookahead_net.initial_probs))

    @settings(max_examples=50, deadline=None)
    @given(
        st.lists(st.floats(min_value=0.01, max_value=1.0), min_size=3, max_size=3),
        st.integers(min_value=1, max_value=3),
        st.integers(min_value=0, max_value=3),
    )
    def test_lookahead_always_returns_a_lot(self, probs, steps, location):
        net = ParkingNetwork.build(
            [[0, 10, 10, 10], [10, 0, 3, 5], [10, 3, 0, 3], [10, 5, 3, 0]], [2, 5, 8], 5, probs)
        spec = PolicySpec(PolicyKind.PA, steps=steps)
        choice = decide(spec, at(location), net, Belief(np.array(probs)))
        assert choice in net.lots
        assert choice == decide(spec, at(location), net, Belief(np.array(probs)))


    @settings(max_examples=50, deadline=None)
    @given(
        st.lists(st.integers(min_value=1, max_value=30), min_size=12, max_size=12),
        st.lists(st.floats(min_value=0.0, max_value=20.0), min_size=3, max_size=3),
        st.integers(min_value=0, max_value=3),
    )
    def test_certain_lots_make_every_depth_agree(self, drives, walks, location):
        drive = np.zeros((4, 4))
        drive[~np.eye(4, dtype=bool)] = drives
        net = ParkingNetwork.build(drive, walks, 5, [1.0, 1.0, 1.0])
        belief = Belief(net.initial_probs)
        steps = net.step_matrix()
        for j in net.lots:
            direct = steps[location, j - 1] + net.walk(j)
            for depth in (1, 2, 3):
                assert pa_cost(depth, location, j, net, belief) == pytest.approx(direct)
        choices = {decide(PolicySpec(PolicyKind.PA, steps=k), at(location), net, belief) for k in (1, 2, 3)}
        assert len(choices) == 1

    @settings(max_examples=50, deadline=None)
    @given(
        st.lists(st.integers(min_value=1, max_value=30), min_size=12, max_size=12),
        st.floats(min_value=0.0, max_value=20.0),
        st.floats(min_value=0.01, max_value=1.0),
        st.floats(min_value=0.01, max_value=1.0),
        st.integers(min_value=0, max_value=3),
    )
    def test_shared_probability_level_does_not_move_the_one_step_choice(self, drives, walk, p, q, location):
        drive = np.zeros((4, 4))
        drive[~np.eye(4, dtype=bool)] = drives
        net = ParkingNetwork.build(drive, [walk] * 3, 5, [p] * 3)
        spec = PolicySpec.parse("pa1")
        low = decide(spec, at(location), net, Belief(np.full(3, p)))
        high = decide(spec, at(location), net, Belief(np.full(3, q)))
        assert low == high


class TestBaselines:
    def test_patient_stays_at_the_closest_lot(self, two_lots):
        spec = PolicySpec.parse("baseline-patient")
        belief = Belief(two_lots.initial_probs)
        assert decide(spec, at(ORIGIN), two_lots, belief) == 1
        assert decide(spec, at(1, {1}), two_lots, belief) == 1

    def test_impatient_walks_the_cycle(self, two_lots):
        spec = PolicySpec.parse("baseline-impatient")
        belief = Belief(two_lots.initial_probs)
        assert decide(spec, at(ORIGIN), two_lots, belief) == 1
        assert decide(spec, at(1, {1}), two_lots, belief) == 2
        # every lot visited: reset, never retrying the lot that just failed
        assert decide(spec, at(2, {1, 2}), two_lots, belief) == 1

    def test_impatient_reset_may_stay_when_toggled_off(self, two_lots):
        spec = PolicySpec.parse({"name": "baseline-impatient", "exclude_failed_on_reset": False})
        # staying costs the 5-minute wait, moving the 6-minute drive
        assert decide(spec, at(2, {1, 2}), two_lots, Belief(two_lots.initial_probs)) == 2

    def test_impatient_single_lot_stays(self, single_lot):
        spec = PolicySpec.parse("baseline-impatient")
        assert decide(spec, at(1, {1}), single_lot, Belief(single_lot.initial_probs)) == 1

    def test_impatient_picks_the_nearest_unvisited_of_three(self, network_dict):
        net = ParkingNetwork.from_dict(network_dict)
        spec = PolicySpec.parse("baseline-impatient")
        # from lot 1: six minutes to lot 2, four to lot 3
        assert decide(spec, at(1, {1}), net, Belief(net.initial_probs)) == 3

    def test_baselines_ignore_beliefs(self, two_lots):
        spec = PolicySpec.parse("baseline-impatient")
        a = decide(spec, at(1, {1}), two_lots, Belief(np.array([0.01, 0.01])))
        b = decide(spec, at(1, {1}), two_lots, Belief(np.array([1.0, 1.0])))
        assert a == b
