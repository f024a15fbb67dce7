"""Tests for probability traces, connected-user observation and error laws."""
import numpy as np
import pandas as pd
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from app.errors import ModelAssumptionError, TraceExhaustedError
from app.models.observer import (
    ObservationStream,
    ProbabilityTrace,
    RateUnit,
    bounded_random_walk,
    constant_trace,
    expected_time_error,
    exponential_error_expectation,
    exponential_law_report,
    exponential_moment_expectation,
    exponential_trace,
    interval_errors,
    linear_error_expectation,
    linear_law_report,
    linear_renewal_oracle,
    linear_trace,
    mae,
    observation_rate,
    observe,
    observe_at,
    poisson_times,
    random_walk_mae,
    trace_from_frame,
)
from app.utils.seeding import rng


@pytest.fixture
def step_trace():
    return ProbabilityTrace(np.array([0.0, 5.0, 10.0]), np.array([0.2, 0.8, 0.8]), lot=1)


class TestTraces:
    def test_step_lookup(self, step_trace):
        assert step_trace.value_at(0.0) == 0.2
        assert step_trace.value_at(4.999) == 0.2
        assert step_trace.value_at(5.0) == 0.8
        assert step_trace.value_at(10.0) == 0.8

    def test_lookup_past_the_end_raises(self, step_trace):
        with pytest.raises(TraceExhaustedError) as info:
            step_trace.value_at(10.5)
        assert info.value.lot == 1
        assert info.value.trace_end == 10.0

    def test_constant_trace(self):
        trace = constant_trace(0.4, 60.0, start=480.0, lot=2)
        assert trace.covers(480.0, 540.0)
        assert trace.value_at(500.0) == 0.4
        assert trace.lot == 2

    def test_linear_trace_falls_and_clips(self):
        trace = linear_trace(0.5, -0.01, 100.0)
        assert trace.value_at(10.0) == pytest.approx(0.4)
        assert trace.value_at(100.0) == 0.0

    def test_exponential_trace(self):
        trace = exponential_trace(0.1, 0.001, 2.0, 20.0)
        assert trace.value_at(10.0) == pytest.approx(0.2)
        with pytest.raises(ModelAssumptionError):
            exponential_trace(0.1, 0.001, 0.5, 20.0)

    def test_invalid_traces_are_rejected(self):
        with pytest.raises(ModelAssumptionError):
            ProbabilityTrace(np.array([0.0, 0.0]), np.array([0.5, 0.5]))
        with pytest.raises(ModelAssumptionError):
            ProbabilityTrace(np.array([0.0, 1.0]), np.array([0.5, 1.5]))

    def test_trace_from_frame_keeps_the_last_duplicate(self):
        frame = pd.DataFrame({"minute": [10, 0, 10], "p": [0.3, 0.9, 0.6]})
        trace = trace_from_frame(frame, lot=3)
        np.testing.assert_array_equal(trace.times, [0.0, 10.0])
        np.testing.assert_array_equal(trace.values, [0.9, 0.6])


class TestRandomWalk:
    def test_shape_and_start(self):
        walk = bounded_random_walk(0.5, 720, seed=1)
        assert walk.times.size == 721
        assert walk.values[0] == 0.5

    def test_steps_are_one_point(self):
        walk = bounded_random_walk(0.5, 720, seed=2)
        np.testing.assert_allclose(np.abs(np.diff(walk.values)), 0.01, atol=1e-9)

    def test_walk_reflects_at_the_bounds(self):
        walk = bounded_random_walk(0.0, 200, seed=3)
        assert walk.values[1] == pytest.approx(0.01)
        assert walk.values.min() >= 0.0
        assert walk.values.max() <= 1.0

    def test_same_seed_same_walk(self):
        a = bounded_random_walk(0.5, 100, seed=9)
        b = bounded_random_walk(0.5, 100, seed=9)
        np.testing.assert_array_equal(a.values, b.values)

    @settings(max_examples=30, deadline=None)
    @given(st.floats(min_value=0.0, max_value=1.0), st.integers(min_value=0, max_value=10_000))
    def test_walk_stays_inside_unit_interval(self, start, seed):
        walk = bounded_random_walk(round(start, 2), 300, seed=seed)
        assert np.all((walk.values >= 0.0) & (walk.values <= 1.0))


class TestObservation:
    def test_poisson_count_is_near_its_mean(self):
        times = poisson_times(0.5, 0.0, 10_000.0, rng(4, "test"))
        assert np.all(np.diff(times) >= 0)
        assert times.min() > 0.0 and times.max() <= 10_000.0
        assert abs(times.size - 5000) < 5 * np.sqrt(5000)

    def test_estimate_holds_the_last_observation(self, step_trace):
        stream = observe_at(step_trace, [2.0, 7.0])
        assert stream.estimate_at(1.0) == 0.2
        assert stream.estimate_at(6.0) == 0.2
        assert stream.estimate_at(7.0) == 0.8
        np.testing.assert_array_equal(stream.estimates_at([1.0, 6.0, 8.0]), [0.2, 0.2, 0.8])

    def test_initial_estimate_before_any_observation(self, step_trace):
        stream = ObservationStream(np.empty(0), np.empty(0), initial=0.7, start=0.0, end=10.0)
        assert stream.estimate_at(3.0) == 0.7
        assert len(stream) == 0

    def test_mae_is_the_exact_time_average(self, step_trace):
        stream = observe_at(step_trace, [2.0, 7.0])
        # wrong by 0.6 on [5, 7) out of 10 minutes
        assert mae(step_trace, stream) == pytest.approx(0.12)
        np.testing.assert_allclose(interval_errors(step_trace, stream), [1.2])

    def test_mae_is_zero_for_a_constant_trace(self):
        trace = constant_trace(0.4, 600.0)
        assert mae(trace, observe(trace, 20.0, 0.2, seed=1)) == 0.0

    def test_observe_is_deterministic(self):
        walk = bounded_random_walk(0.5, 720, seed=5)
        a = observe(walk, 20.0, 0.2, seed=6)
        b = observe(walk, 20.0, 0.2, seed=6)
        np.testing.assert_array_equal(a.times, b.times)
        assert a.rate_per_hour == pytest.approx(4.0)

    def test_zero_rate_is_rejected(self):
        with pytest.raises(ModelAssumptionError):
            observe(constant_trace(0.5, 60.0), 20.0, 0.0, seed=1)

    @settings(max_examples=25, deadline=None)
    @given(st.integers(min_value=0, max_value=1000), st.floats(min_value=0.05, max_value=1.0))
    def test_mae_is_bounded(self, seed, r):
        walk = bounded_random_walk(0.5, 240, seed=seed)
        assert 0.0 <= mae(walk, observe(walk, 20.0, r, seed=seed + 1)) <= 1.0

    @settings(max_examples=25, deadline=None)
    @given(
        st.integers(min_value=0, max_value=1000),
        st.lists(st.floats(min_value=0.0, max_value=240.0), min_size=1, max_size=40),
        st.data(),
    )
    def test_repeated_observations_leave_the_mae_unchanged(self, seed, times, data):
        walk = bounded_random_walk(0.5, 240, seed=seed)
        repeats = data.draw(st.lists(st.sampled_from(times), max_size=20))
        once = observe_at(walk, times)
        twice = observe_at(walk, times + repeats)
        assert mae(walk, twice) == pytest.approx(mae(walk, once))

    @settings(max_examples=25, deadline=None)
    @given(st.integers(min_value=0, max_value=1000), st.sampled_from([(40.0, 0.25), (20.0, 0.5), (10.0, 1.0)]))
    def test_only_the_product_of_rate_and_adoption_matters(self, seed, rate):
        lam, r = rate
        walk = bounded_random_walk(0.5, 240, seed=seed)
        reference = observe(walk, 10.0, 1.0, seed=seed + 1)
        stream = observe(walk, lam, r, seed=seed + 1)
        np.testing.assert_array_equal(stream.times, reference.times)
        assert mae(walk, stream) == mae(walk, reference)

    @pytest.mark.slow
    def test_random_walk_mae_stays_below_five_points(self):
        frame = random_walk_mae([20.0], [0.2], seeds=100, master_seed=20250130)
        assert len(frame) == 100
        assert frame["mae"].mean() < 0.05

    @pytest.mark.slow
    def test_mae_falls_with_adoption(self):
        frame = random_walk_mae([20.0], [0.1, 0.2, 0.3, 0.5], seeds=100, master_seed=20250130)
        means = frame.groupby("adoption")["mae"].mean().to_numpy()
        assert np.all(np.diff(means) <= 0)


class TestErrorLaws:
    def test_rate_units(self):
        assert observation_rate(20.0, 0.2) == pytest.approx(4.0 / 60.0)
        assert observation_rate(2.0, 1.0, RateUnit.PER_MINUTE) == 2.0

    @pytest.mark.oracle
    def test_linear_oracle_error_shrinks_with_the_square_root_of_draws(self):
        closed = linear_error_expectation(0.01, 0.5, 1.0, RateUnit.PER_MINUTE)
        estimates = [linear_renewal_oracle(0.01, 0.5, 1.0, n, seed=31, unit=RateUnit.PER_MINUTE)
                     for n in (1_000, 10_000, 100_000)]
        for est in estimates:
            assert abs(est.mean - closed) <= 4.0 * est.stderr
        for coarse, fine in zip(estimates, estimates[1:]):
            assert 2.0 < coarse.stderr / fine.stderr < 5.0

    def test_linear_expectation(self):
        assert linear_error_expectation(1.0, 2.0, 1.0, RateUnit.PER_MINUTE) == pytest.approx(0.25)

    @settings(max_examples=100)
    @given(
        st.floats(min_value=0.1, max_value=60.0),
        st.floats(min_value=0.05, max_value=1.0),
        st.floats(min_value=0.05, max_value=1.0),
        st.floats(min_value=1.0, max_value=3.0),
    )
    def test_laws_depend_on_rate_and_adoption_only_through_their_product(self, lam, r, r2, b):
        lam2 = lam * r / r2
        assert linear_error_expectation(0.01, lam, r) == pytest.approx(linear_error_expectation(0.01, lam2, r2))
        assert exponential_error_expectation(b, lam, r) == pytest.approx(exponential_error_expectation(b, lam2, r2))

    def test_exponential_constants_agree_for_small_exponents(self):
        for b in (1.0, 2.0):
            published = exponential_error_expectation(b, 2.0, 1.0, RateUnit.PER_MINUTE)
            moment = exponential_moment_expectation(b, 2.0, 1.0, RateUnit.PER_MINUTE)
            assert published == pytest.approx(moment)
        assert exponential_error_expectation(1.0, 2.0, 1.0, RateUnit.PER_MINUTE) == pytest.approx(0.25)

    def test_exponential_constants_split_at_three(self):
        assert exponential_error_expectation(3.0, 1.0, 1.0, RateUnit.PER_MINUTE) == pytest.approx(3.0)
        assert exponential_moment_expectation(3.0, 1.0, 1.0, RateUnit.PER_MINUTE) == pytest.approx(6.0)

    @pytest.mark.oracle
    @pytest.mark.parametrize("m,lam,r,unit", [
        (1.0, 2.0, 1.0, RateUnit.PER_MINUTE),
        (0.01, 0.5, 1.0, RateUnit.PER_MINUTE),
        (0.05, 20.0, 0.2, RateUnit.PER_HOUR),
    ])
    def test_linear_law_matches_renewal_oracle(self, m, lam, r, unit):
        report = linear_law_report(m, lam, r, draws=100_000, seed=77, unit=unit)
        assert report["within_5pct"], report

    @pytest.mark.oracle
    @pytest.mark.parametrize("b", [1.0, 2.0])
    def test_exponential_law_matches_for_small_exponents(self, b):
        report = exponential_law_report(b, 1.0, 1.0, draws=200_000, seed=78, unit=RateUnit.PER_MINUTE)
        assert report["matches"] == "both"
        assert report["relative_gap_published"] <= 0.05

    @pytest.mark.oracle
    def test_exponential_law_follows_the_moment_at_three(self):
        report = exponential_law_report(3.0, 1.0, 1.0, draws=200_000, seed=79, unit=RateUnit.PER_MINUTE)
        assert report["matches"] == "moment"
        assert report["published"] == pytest.approx(3.0)
        assert report["moment"] == pytest.approx(6.0)

    def test_expected_time_error(self, two_lots):
        assert expected_time_error(0.45, 0.50, two_lots, 1) == pytest.approx(5 * (1 / 0.45 - 1 / 0.5))
        assert expected_time_error(0.45, 0.50, two_lots, 1) == pytest.approx(1.111, abs=1e-3)

    def test_expected_time_error_rejects_zero(self, two_lots):
        with pytest.raises(ModelAssumptionError):
            expected_time_error(0.0, 0.5, two_lots, 1)
