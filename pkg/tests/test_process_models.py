import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from soisim.errors import ConfigError, DomainError
from soisim.models import (
    ModelFactory,
    OrnsteinUhlenbeck,
    SamplePath,
    WienerFamily,
    conditional_mean,
    exact_step,
    iter_path_chunks,
    residual_spec,
    simulate_path,
)


finite = st.floats(min_value=-50, max_value=50, allow_nan=False)
elapsed = st.floats(min_value=0, max_value=20, allow_nan=False)


def test_conditional_mean_examples():
    assert conditional_mean(OrnsteinUhlenbeck(theta=1.0, mu=0.0, sigma=1.0), 1.0, 0.0, 0.0) == 1.0
    assert conditional_mean(OrnsteinUhlenbeck(theta=1.0, mu=2.0, sigma=1.0), 0.0, 0.0, math.log(2)) == pytest.approx(1.0)
    assert conditional_mean(WienerFamily(c=1.0, a=1.0, b=2.0), 3.0, 1.0, 2.0) == 5.0


def test_conditional_mean_rejects_time_before_sample(unit_ou):
    with pytest.raises(DomainError):
        conditional_mean(unit_ou, 1.0, 2.0, 1.0)


@given(x=finite, first=elapsed, second=elapsed,
       theta=st.floats(min_value=1e-3, max_value=5), mu=finite)
def test_conditional_mean_tower_property(x, first, second, theta, mu):
    for model in (OrnsteinUhlenbeck(theta=theta, mu=mu, sigma=1.0), WienerFamily(c=1.0, a=2.0, b=mu)):
        two_steps = conditional_mean(model, conditional_mean(model, x, 0.0, first), first, first + second)
        direct = conditional_mean(model, x, 0.0, first + second)
        assert math.isclose(two_steps, direct, rel_tol=1e-12, abs_tol=1e-9)


def test_exact_step_examples(unit_ou, standard_wiener):
    assert exact_step(unit_ou, 1.0, math.log(2), 0.0) == pytest.approx(0.5)
    assert exact_step(standard_wiener, 0.0, 1.0, 1.0) == 1.0
    assert exact_step(unit_ou, 0.7, 1e-14, 2.5) == pytest.approx(0.7, abs=1e-6)


@pytest.mark.parametrize("dt", [0.0, -1e-3])
def test_exact_step_rejects_non_positive_step(unit_ou, dt):
    with pytest.raises(DomainError):
        exact_step(unit_ou, 0.0, dt, 0.0)


def test_residual_spec_examples():
    spec = residual_spec(WienerFamily(c=2.0, a=3.0), 1.0, 2.0, 0.0)
    assert (spec.q, spec.r_variance) == (1.0, 12.0)

    at_same_time = residual_spec(OrnsteinUhlenbeck(), 1.5, 1.5, 0.5)
    assert (at_same_time.q, at_same_time.r_variance) == (1.0, 0.0)

    stationary = residual_spec(OrnsteinUhlenbeck(theta=1.0, sigma=math.sqrt(2)), 0.0, 60.0, 0.0)
    assert stationary.q == pytest.approx(0.0, abs=1e-20)
    assert stationary.r_variance == pytest.approx(1.0)


def test_residual_spec_rejects_bad_ordering(unit_ou):
    with pytest.raises(DomainError):
        residual_spec(unit_ou, 0.5, 1.0, 0.7)


@pytest.mark.parametrize("model", [
    WienerFamily(c=1.5, a=0.5, b=-1.0),
    OrnsteinUhlenbeck(theta=2.0, mu=1.0, sigma=0.5),
])
def test_residual_variance_matches_transition_samples(model):
    n = 100_000
    h = 0.3
    draws = np.random.default_rng(11).standard_normal(n)
    residual = model.exact_step(0.4, h, draws) - model.mean_after(0.4, h)
    expected = model.residual_spec(0.0, h, 0.0).r_variance
    standard_error = expected * math.sqrt(2.0 / (n - 1))
    assert abs(np.var(residual, ddof=1) - expected) < 4 * standard_error


def test_simulate_path_grid_and_determinism(standard_wiener):
    path = simulate_path(standard_wiener, 1.0, 0.5, seed=3)
    assert len(path) == 3
    assert path.values[0] == 0.0
    assert path.horizon == 1.0

    again = simulate_path(standard_wiener, 1.0, 0.5, seed=3)
    assert np.array_equal(path.values, again.values)
    other_trial = simulate_path(standard_wiener, 1.0, 0.5, seed=3, trial=1)
    assert not np.array_equal(path.values, other_trial.values)


@pytest.mark.parametrize("horizon, dt", [(0.0, 0.1), (1.0, 0.0), (-1.0, 0.1), (0.05, 0.1)])
def test_simulate_path_rejects_bad_grid(unit_ou, horizon, dt):
    with pytest.raises(DomainError):
        simulate_path(unit_ou, horizon, dt, seed=0)


def test_simulate_path_follows_exact_steps(unit_ou):
    path = simulate_path(unit_ou, 0.05, 0.01, seed=5, trial=2)
    draws = np.random.Generator(np.random.PCG64(np.random.SeedSequence(5, spawn_key=(2,)))).standard_normal(5)
    x = 0.0
    for k, xi in enumerate(draws, start=1):
        x = unit_ou.exact_step(x, 0.01, xi)
        assert path.values[k] == pytest.approx(x, rel=1e-12, abs=1e-15)


def test_chunked_paths_concatenate_to_the_full_path(unit_ou, standard_wiener):
    for model in (unit_ou, standard_wiener):
        full = simulate_path(model, 30.0, 1e-3, seed=9, trial=4).values
        chunked = np.concatenate(list(iter_path_chunks(model, 30.0, 1e-3, 9, 4, chunk_size=4096)))
        assert len(chunked) == len(full)
        np.testing.assert_allclose(chunked, full, rtol=0, atol=1e-9)


def test_wiener_variance_at_unit_time(standard_wiener):
    seeds = 4000
    endpoints = np.array([simulate_path(standard_wiener, 1.0, 0.5, seed=s).values[-1] for s in range(seeds)])
    assert abs(np.var(endpoints, ddof=1) - 1.0) < 4 * math.sqrt(2.0 / (seeds - 1))


@pytest.mark.slow
def test_wiener_variance_at_unit_time_many_seeds(standard_wiener):
    seeds = 100_000
    endpoints = np.array([simulate_path(standard_wiener, 1.0, 0.5, seed=s).values[-1] for s in range(seeds)])
    assert abs(np.var(endpoints, ddof=1) - 1.0) < 3 * math.sqrt(2.0 / (seeds - 1))


def test_max_increment_shrinks_like_sqrt_dt(standard_wiener):
    def median_max_increment(dt):
        return np.median([np.max(np.abs(np.diff(simulate_path(standard_wiener, 1.0, dt, seed=s).values)))
                          for s in range(60)])

    ratio = median_max_increment(1e-3) / median_max_increment(2.5e-4)
    assert 1.7 < ratio < 2.6


def test_ou_long_run_variance(unit_ou):
    values = simulate_path(unit_ou, 2000.0, 0.01, seed=1).values
    assert np.var(values[1000:]) == pytest.approx(0.5, rel=0.15)


def test_sample_path_invariants():
    with pytest.raises(DomainError):
        SamplePath(dt=0.1, values=np.array([0.0]))
    with pytest.raises(DomainError):
        SamplePath(dt=0.1, values=np.array([1.0, 2.0]))


def test_model_parameters_must_be_positive():
    with pytest.raises(DomainError):
        WienerFamily(a=0.0)
    with pytest.raises(DomainError):
        OrnsteinUhlenbeck(theta=-1.0)
    with pytest.raises(DomainError):
        OrnsteinUhlenbeck(sigma=0.0)


def test_model_factory_builds_both_families():
    wiener = ModelFactory.create_model({"model": "wiener", "c": "2", "a": "0.5"})
    assert wiener == WienerFamily(c=2.0, a=0.5, b=0.0)
    ou = ModelFactory.create_model({"model": "OU", "theta": 3, "mu": -1, "sigma": 0.2})
    assert ou.parameters() == {"theta": 3.0, "mu": -1.0, "sigma": 0.2}


@pytest.mark.parametrize("config", [
    {"model": "levy"},
    {},
    {"model": "ou", "theta": "fast"},
    {"model": "wiener", "a": -1},
])
def test_model_factory_rejects_bad_configs(config):
    with pytest.raises(ConfigError):
        ModelFactory.create_model(config)
