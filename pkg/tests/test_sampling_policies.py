import math

import numpy as np
import pytest

from soisim.errors import DomainError, UnsupportedPolicyError
from soisim.models import OrnsteinUhlenbeck, SamplePath, WienerFamily, simulate_path
from soisim.policies import (
    ConstantThreshold,
    ElapsedTimeThreshold,
    ExitScanner,
    ResetRule,
    ThresholdTable,
    UniformSchedule,
    detect_stopping_times,
    empirical_frequency,
    ou_optimal_threshold,
    optimal_policy,
    wiener_optimal_threshold,
)


def test_wiener_optimal_threshold_examples():
    assert wiener_optimal_threshold(1.0, 1.0, 1.0) == 1.0
    assert wiener_optimal_threshold(2.0, 1.0, 4.0) == 1.0
    assert wiener_optimal_threshold(0.0, 3.0, 2.0) == 0.0


@pytest.mark.parametrize("frequency, a_scale", [(0.0, 1.0), (-1.0, 1.0), (1.0, 0.0)])
def test_wiener_optimal_threshold_rejects_bad_arguments(frequency, a_scale):
    with pytest.raises(DomainError):
        wiener_optimal_threshold(1.0, a_scale, frequency)


def test_ou_optimal_threshold_matches_root_oracle(golden):
    assert ou_optimal_threshold(1.0, 1.0, 1.0) == pytest.approx(math.sqrt(golden["v_star"]), rel=1e-10)


def test_ou_optimal_threshold_limits():
    assert ou_optimal_threshold(1.0, 1.0, 1e12) == pytest.approx(0.0, abs=1e-5)
    assert ou_optimal_threshold(1e-3, 1.0, 1.0) == pytest.approx(1.0, rel=1e-3)
    assert ou_optimal_threshold(1e-3, 2.0, 4.0) == pytest.approx(1.0, rel=1e-3)


def test_optimal_policy_dispatches_on_model():
    assert optimal_policy(WienerFamily(c=2.0, a=1.0), 4.0) == ConstantThreshold(1.0)
    assert optimal_policy(OrnsteinUhlenbeck(), 1.0).a == pytest.approx(ou_optimal_threshold(1.0, 1.0, 1.0))


def test_detects_hand_traced_exit(standard_wiener):
    path = SamplePath(dt=1.0, values=np.array([0.0, 0.5, 1.2, 0.3]))
    record = detect_stopping_times(path, standard_wiener, ConstantThreshold(1.0))
    np.testing.assert_array_equal(record.times, [2.0])
    np.testing.assert_array_equal(record.signs, [1])
    np.testing.assert_array_equal(record.sample_values, [1.2])
    assert record.overshoots[0] == pytest.approx(0.2)


def test_huge_threshold_never_fires(standard_wiener):
    path = simulate_path(standard_wiener, 10.0, 1e-3, seed=0)
    record = detect_stopping_times(path, standard_wiener, ConstantThreshold(1e18))
    assert len(record) == 0
    assert empirical_frequency(record, 5.0) == 0.0


def test_uniform_schedule_snaps_to_grid(standard_wiener):
    path = simulate_path(standard_wiener, 1.0, 0.25, seed=0)
    record = detect_stopping_times(path, standard_wiener, UniformSchedule(0.5))
    np.testing.assert_allclose(record.times, [0.5, 1.0])
    np.testing.assert_array_equal(record.signs, [1, 1])
    np.testing.assert_array_equal(record.sample_values, path.values[[2, 4]])


def test_uniform_schedule_on_a_coarser_grid_deduplicates(standard_wiener):
    path = simulate_path(standard_wiener, 1.0, 0.5, seed=0)
    record = detect_stopping_times(path, standard_wiener, UniformSchedule(0.3))
    assert np.all(np.diff(record.times) > 0)
    assert record.times[-1] <= 1.0


def test_crossing_consistency(unit_ou):
    policy = ConstantThreshold(0.4)
    path = simulate_path(unit_ou, 50.0, 1e-3, seed=2)
    record = detect_stopping_times(path, unit_ou, policy)
    assert len(record) > 20

    previous_index, reference = 0, 0.0
    for index, sample in zip(record.indices, record.sample_values):
        steps = np.arange(1, index - previous_index + 1)
        innovation = path.values[previous_index + 1:index + 1] - unit_ou.mean_after(reference, steps * path.dt)
        assert np.all(np.abs(innovation[:-1]) < policy.a)
        assert abs(innovation[-1]) >= policy.a
        previous_index, reference = index, sample


def test_reconstruction_reset_tracks_the_decoder(unit_ou):
    path = simulate_path(unit_ou, 50.0, 1e-3, seed=4)
    record = detect_stopping_times(path, unit_ou, ConstantThreshold(0.5), reset=ResetRule.RECONSTRUCTION)
    assert record.reset is ResetRule.RECONSTRUCTION
    np.testing.assert_allclose(np.abs(record.references - record.sample_values), record.overshoots, atol=1e-12)


def test_sign_symmetry_for_driftless_wiener(standard_wiener):
    path = simulate_path(standard_wiener, 4000.0, 1e-3, seed=6)
    record = detect_stopping_times(path, standard_wiener, ConstantThreshold(1.0))
    n = len(record)
    positive = np.mean(record.signs == 1)
    assert abs(positive - 0.5) < 4 * math.sqrt(0.25 / n)


def test_wiener_unit_threshold_samples_about_once_per_second(standard_wiener):
    path = simulate_path(standard_wiener, 2000.0, 1e-3, seed=8)
    record = detect_stopping_times(path, standard_wiener, ConstantThreshold(1.0))
    # grid detection exits a little late, so the frequency sits slightly below 1
    assert empirical_frequency(record, path.horizon) == pytest.approx(0.965, abs=0.07)


def test_empirical_frequency_counts_per_second(standard_wiener):
    path = simulate_path(standard_wiener, 10.0, 1e-3, seed=0)
    record = detect_stopping_times(path, standard_wiener, UniformSchedule(1.0))
    assert len(record) == 10
    assert empirical_frequency(record, 10.0) == 1.0
    with pytest.raises(DomainError):
        empirical_frequency(record, 0.0)


def test_elapsed_time_threshold_matches_constant(unit_ou):
    path = simulate_path(unit_ou, 20.0, 1e-3, seed=3)
    constant = detect_stopping_times(path, unit_ou, ConstantThreshold(0.6))
    elapsed = detect_stopping_times(path, unit_ou, ElapsedTimeThreshold(lambda t: 0.6))
    np.testing.assert_array_equal(constant.indices, elapsed.indices)


def test_growing_threshold_samples_less_often(unit_ou):
    path = simulate_path(unit_ou, 50.0, 1e-3, seed=3)
    constant = detect_stopping_times(path, unit_ou, ConstantThreshold(0.5))
    growing = detect_stopping_times(path, unit_ou, ElapsedTimeThreshold(lambda t: 0.5 + 0.5 * t))
    assert len(growing) < len(constant)


def test_elapsed_time_threshold_validation():
    with pytest.raises(DomainError):
        ElapsedTimeThreshold(lambda t: -1.0)
    with pytest.raises(DomainError):
        # left-continuous downward jump at t = 0.5
        ElapsedTimeThreshold(lambda t: 1.0 if t <= 0.5 else 0.5)
    # right-continuous downward jump and upward jumps are allowed
    ElapsedTimeThreshold(lambda t: 1.0 if t < 0.5 else 0.5)
    ElapsedTimeThreshold(lambda t: 0.5 if t <= 0.5 else 1.0)


@pytest.mark.parametrize("drop_at", [0.5003, 0.25, 2.71828, 9.9985])
def test_elapsed_time_threshold_finds_jumps_between_check_points(drop_at):
    with pytest.raises(DomainError, match="left-continuous"):
        ElapsedTimeThreshold(lambda t: 1.0 if t <= drop_at else 0.5)
    ElapsedTimeThreshold(lambda t: 1.0 if t < drop_at else 0.5)


def test_elapsed_time_threshold_accepts_continuous_decrease():
    ElapsedTimeThreshold(lambda t: 1.0 / (1.0 + t))
    ElapsedTimeThreshold(lambda t: max(0.2, 1.0 - 100.0 * t))


def test_policy_validation():
    with pytest.raises(DomainError):
        ConstantThreshold(-0.1)
    with pytest.raises(DomainError):
        UniformSchedule(0.0)
    with pytest.raises(UnsupportedPolicyError):
        UniformSchedule(1.0).threshold_at(np.array([0.0]))
    with pytest.raises(UnsupportedPolicyError):
        ThresholdTable(UniformSchedule(1.0), 1e-3)


def test_threshold_table_grows_with_long_intervals():
    table = ThresholdTable(ElapsedTimeThreshold(lambda t: 1.0 + t), 0.1)
    np.testing.assert_allclose(table.at(np.array([0, 5000])), [1.0, 501.0])
    assert table.scalar(10) == pytest.approx(2.0)


def test_scanner_is_chunk_invariant(unit_ou):
    path = simulate_path(unit_ou, 30.0, 1e-3, seed=12)
    whole = detect_stopping_times(path, unit_ou, ConstantThreshold(0.3))

    scanner = ExitScanner(unit_ou, ConstantThreshold(0.3), path.dt, horizon=path.horizon)
    for start in range(0, len(path.values), 777):
        scanner.feed(path.values[start:start + 777])
    chunked = scanner.finish()
    np.testing.assert_array_equal(whole.indices, chunked.indices)
    np.testing.assert_array_equal(whole.signs, chunked.signs)


def test_scanner_error_integral_is_left_riemann(standard_wiener):
    path = SamplePath(dt=0.5, values=np.array([0.0, 0.5, 1.2, 0.3, 0.5]))
    scanner = ExitScanner(standard_wiener, ConstantThreshold(1.0), path.dt, track_error=True)
    scanner.feed(path.values)
    record = scanner.finish()
    # reference 0 until index 2, then 1.2; the last grid point carries no weight
    errors = np.array([0.0, 0.5, 0.0, 0.3 - 1.2])
    assert scanner.error_integral() == pytest.approx(np.sum(errors ** 2) * 0.5)
    np.testing.assert_allclose(scanner.interval_rewards(), [0.25 * 0.5])
    assert scanner.truncated_reward() == pytest.approx(0.81 * 0.5)
    assert len(record) == 1


def test_scanner_rejects_paths_not_starting_at_zero(standard_wiener):
    scanner = ExitScanner(standard_wiener, ConstantThreshold(1.0), 0.1)
    with pytest.raises(DomainError):
        scanner.feed(np.array([1.0, 2.0]))


def test_uniform_schedule_cannot_reset_to_reconstruction(standard_wiener):
    with pytest.raises(UnsupportedPolicyError):
        ExitScanner(standard_wiener, UniformSchedule(1.0), 0.1, horizon=1.0, reset=ResetRule.RECONSTRUCTION)


@pytest.mark.slow
def test_optimal_ou_intervals_look_iid():
    from soisim.evaluators import iid_interval_diagnostic

    model = OrnsteinUhlenbeck()
    path = simulate_path(model, 12_000.0, 1e-3, seed=21)
    record = detect_stopping_times(path, model, optimal_policy(model, 1.0))
    intervals = record.intervals[:10_000]
    assert len(intervals) == 10_000
    diagnostic = iid_interval_diagnostic(intervals)
    assert diagnostic.ks_p > 0.01
    assert abs(diagnostic.lag1) < 0.04
