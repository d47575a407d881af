import math

import numpy as np
import pandas as pd
import pytest

from soisim.codec import decode, empirical_mse, encode
from soisim.control import (
    ControlTrajectory,
    control_cost,
    decompose_control,
    export_trajectory,
    reintegrate,
    run_control,
)
from soisim.errors import DomainError, UnsupportedPolicyError
from soisim.models import simulate_path
from soisim.policies import ConstantThreshold, ResetRule, UniformSchedule, detect_stopping_times


def _manual(z, dt, horizon, events=(), y=None):
    z = np.asarray(z, dtype=float)
    y = np.zeros_like(z) if y is None else np.asarray(y, dtype=float)
    return ControlTrajectory(dt=dt, horizon=horizon, y_values=y, z_values=z,
                             event_times=np.asarray(events, dtype=float))


@pytest.mark.parametrize("family", ["wiener", "ou"])
def test_cost_equals_estimation_mse(family, standard_wiener, unit_ou):
    model = standard_wiener if family == "wiener" else unit_ou
    policy = ConstantThreshold(0.6)
    horizon, dt, seed = 50.0, 1e-3, 11

    traj = run_control(model, policy, horizon, dt, seed)

    path = simulate_path(model, horizon, dt, seed)
    record = detect_stopping_times(path, model, policy, reset=ResetRule.RECONSTRUCTION)
    estimate = decode(encode(record, policy, path.horizon), model, policy, dt)

    assert len(traj.event_times) == len(record)
    assert control_cost(traj) == pytest.approx(empirical_mse(path, estimate), rel=1e-12, abs=1e-15)
    np.testing.assert_array_equal(traj.y_values, path.values - estimate.values)


def test_wiener_control_is_piecewise_constant(standard_wiener):
    traj = run_control(standard_wiener, ConstantThreshold(0.5), 20.0, 1e-3, seed=2)
    changes = np.flatnonzero(np.diff(traj.z_values)) + 1
    indices = np.rint(traj.event_times / traj.dt).astype(int)
    assert set(changes.tolist()) <= set(indices.tolist())
    assert traj.z_values[0] == 0.0


def test_plant_state_stays_inside_the_band_between_codewords(standard_wiener):
    threshold = 0.5
    traj = run_control(standard_wiener, ConstantThreshold(threshold), 20.0, 1e-3, seed=4)
    indices = np.rint(traj.event_times / traj.dt).astype(int)
    inside = np.ones(len(traj.y_values), dtype=bool)
    inside[indices] = False
    assert np.all(np.abs(traj.y_values[inside]) < threshold)
    # right after a codeword only the overshoot is left
    assert np.all(np.abs(traj.y_values[indices]) < 0.2)


def test_no_codewords_leaves_the_disturbance_uncontrolled(standard_wiener):
    traj = run_control(standard_wiener, ConstantThreshold(1e6), 2.0, 1e-2, seed=0)
    assert len(traj.event_times) == 0
    assert not np.any(traj.z_values)
    np.testing.assert_array_equal(traj.y_values, traj.x_values)


def test_control_cost_examples():
    assert control_cost(_manual(np.zeros(5), 0.25, 1.0)) == 0.0
    assert control_cost(_manual(np.zeros(5), 0.25, 1.0, y=np.full(5, 2.0))) == 4.0


def test_trajectory_grids_must_agree():
    with pytest.raises(DomainError):
        _manual(np.zeros(5), 0.25, 1.0, y=np.zeros(4))


def test_uniform_schedule_cannot_drive_the_loop(standard_wiener):
    with pytest.raises(UnsupportedPolicyError):
        run_control(standard_wiener, UniformSchedule(0.1), 1.0, 1e-2, seed=0)


def test_impulse_weights_undo_the_reconstruction_steps(standard_wiener):
    threshold = 0.5
    traj = run_control(standard_wiener, ConstantThreshold(threshold), 20.0, 1e-3, seed=6)
    decomp = decompose_control(traj)

    previous = np.concatenate(([0.0], traj.recovered_samples[:-1]))
    np.testing.assert_allclose(decomp.impulse_weights, -(traj.recovered_samples - previous), atol=1e-12)
    np.testing.assert_allclose(np.abs(decomp.impulse_weights), threshold, rtol=1e-12)
    assert not np.any(decomp.derivative_values)
    assert decomp.impulses[0] == (traj.event_times[0], decomp.impulse_weights[0])


def test_ou_smooth_part_follows_the_mean_reversion(unit_ou):
    dt = 1e-5
    traj = run_control(unit_ou, ConstantThreshold(0.5), 5.0, dt, seed=3)
    decomp = decompose_control(traj)
    assert len(decomp.impulse_times) > 0

    smooth = np.ones(len(traj.z_values), dtype=bool)
    smooth[0] = False
    smooth[np.rint(traj.event_times / dt).astype(int)] = False
    # the left difference is the derivative at the midpoint t - dt/2, where Z = Z_t e^{theta dt / 2}
    expected = -unit_ou.theta * traj.z_values[smooth] * math.exp(unit_ou.theta * dt / 2)
    np.testing.assert_allclose(decomp.derivative_values[smooth], expected, rtol=1e-6, atol=1e-12)


@pytest.mark.parametrize("family", ["wiener", "ou"])
def test_reintegration_recovers_the_control(family, standard_wiener, unit_ou):
    model = standard_wiener if family == "wiener" else unit_ou
    dt = 1e-3
    traj = run_control(model, ConstantThreshold(0.4), 30.0, dt, seed=9)
    decomp = decompose_control(traj)
    rebuilt = reintegrate(decomp, dt, traj.horizon)

    bound = 1e-9 + 2 * dt * np.max(np.abs(decomp.derivative_values))
    assert len(rebuilt) == len(traj.z_values)
    assert np.max(np.abs(rebuilt - traj.z_values)) <= bound


def test_reintegrate_step_and_ramp():
    step = _manual([0.0, 0.0, -1.0, -1.0, -1.0], 0.5, 2.0, events=[1.0])
    decomp = decompose_control(step)
    np.testing.assert_array_equal(decomp.impulse_weights, [-1.0])
    np.testing.assert_array_equal(decomp.derivative_values, np.zeros(5))
    np.testing.assert_array_equal(reintegrate(decomp, 0.5, 2.0), step.z_values)

    ramp = _manual([0.0, 0.5, 1.0, 1.5, 2.0], 0.5, 2.0)
    decomp = decompose_control(ramp)
    assert decomp.impulses == []
    np.testing.assert_array_equal(decomp.derivative_values, [0.0, 1.0, 1.0, 1.0, 1.0])
    np.testing.assert_allclose(reintegrate(decomp, 0.5, 2.0), ramp.z_values)


def test_export_writes_both_tables(tmp_path, standard_wiener):
    traj = run_control(standard_wiener, ConstantThreshold(0.5), 2.0, 1e-2, seed=1)
    decomp = decompose_control(traj)
    trajectory_csv = tmp_path / "trajectory.csv"
    impulse_csv = tmp_path / "impulses.csv"

    export_trajectory(traj, decomp, trajectory_csv, impulse_csv)

    frame = pd.read_csv(trajectory_csv)
    assert list(frame.columns) == ["t", "x", "z", "y"]
    assert len(frame) == len(traj.y_values)
    np.testing.assert_allclose(frame["y"], frame["x"] + frame["z"], atol=1e-10)
    impulses = pd.read_csv(impulse_csv)
    assert list(impulses.columns) == ["time", "weight"]
    assert len(impulses) == len(decomp.impulse_times)
