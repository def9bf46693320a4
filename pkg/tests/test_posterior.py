"""Posterior conditioning, residual variances, and their cross-checks."""

import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from gp_acquire import (
    ProcessSpec,
    SignalHistory,
    SignalRecord,
    SingularSystemError,
    TimeGrid,
    gram_plus_noise,
    posterior_at,
    posterior_variance_at,
    prior_cov,
    residual_variance_brownian,
    residual_variance_general,
    residual_variance_markov,
    residual_variance_markov_closed,
)

BROWNIAN = ProcessSpec.brownian(mu=0.0, sigma=1.0, sigma0=1.0)
OU = ProcessSpec.ou(sigma=1.0, sigma0=1.0)


def test_gram_plus_noise_worked_example():
    history = SignalHistory.from_arrays([1.0, 2.0], [1.0, 2.0])
    mat = gram_plus_noise(BROWNIAN, history)
    assert np.array_equal(mat, [[3.0, 2.0], [2.0, 3.5]])


def test_gram_plus_noise_rejects_zero_precision():
    history = SignalHistory.from_arrays([1.0, 2.0], [1.0, 0.0])
    with pytest.raises(ValueError, match=r"\[2\.0\]"):
        gram_plus_noise(BROWNIAN, history)


def test_posterior_without_signals_is_the_prior():
    spec = ProcessSpec.brownian(mu=0.7, sigma=1.0, sigma0=1.0)
    empty = SignalHistory(())
    summary = posterior_at(spec, empty, 2.0)
    assert summary.mean == pytest.approx(1.4)
    assert summary.variance == pytest.approx(3.0)
    # zero-precision records carry no information either
    silent = SignalHistory.from_arrays([1.0], [0.0])
    assert posterior_variance_at(spec, silent, 2.0) == pytest.approx(3.0)


def test_single_signal_adds_precision_at_its_own_time():
    # At the signal's own time, precisions add: post = 1/(1/k + p).
    for p in (0.5, 1.0, 4.0):
        history = SignalHistory.from_arrays([2.0], [p])
        k = prior_cov(BROWNIAN, 2.0, 2.0)
        got = posterior_variance_at(BROWNIAN, history, 2.0)
        assert got == pytest.approx(1.0 / (1.0 / k + p), rel=1e-12)


def test_posterior_mean_interpolates_linearly_between_signals():
    # Brownian posterior means are linear between observed times and flat after
    # the last one.
    history = SignalHistory.from_arrays([1.0, 2.0], [3.0, 5.0], [0.8, -0.4])
    at1 = posterior_at(BROWNIAN, history, 1.0).mean
    at2 = posterior_at(BROWNIAN, history, 2.0).mean
    mid = posterior_at(BROWNIAN, history, 1.5).mean
    assert mid == pytest.approx(0.5 * (at1 + at2), rel=1e-10)
    assert posterior_at(BROWNIAN, history, 3.7).mean == pytest.approx(at2, rel=1e-10)
    assert posterior_at(BROWNIAN, history, 9.0).mean == pytest.approx(at2, rel=1e-10)


def test_posterior_mean_requires_values():
    history = SignalHistory.from_arrays([1.0, 2.0], [1.0, 1.0], [0.5, None])
    with pytest.raises(ValueError, match=r"\[2\.0\]"):
        posterior_at(BROWNIAN, history, 1.5)
    # the variance route never needs them
    posterior_variance_at(BROWNIAN, history, 1.5)


def test_variance_dips_at_signal_times():
    history = SignalHistory.from_arrays([1.0, 2.0, 3.0], [2.0, 2.0, 2.0])
    for t in (1.0, 2.0, 3.0):
        at = posterior_variance_at(BROWNIAN, history, t)
        before = posterior_variance_at(BROWNIAN, history, t - 0.25)
        after = posterior_variance_at(BROWNIAN, history, t + 0.25)
        assert at < before
        assert at < after


def test_more_information_never_hurts():
    base = SignalHistory.from_arrays([1.0, 2.0], [1.0, 1.0])
    more = SignalHistory.from_arrays([1.0, 2.0, 2.5], [1.0, 1.0, 3.0])
    for t in np.linspace(0.0, 4.0, 17):
        assert posterior_variance_at(BROWNIAN, more, t) <= posterior_variance_at(
            BROWNIAN, base, t
        ) + 1e-12


def test_residual_variance_brownian_worked_values():
    # With sigma0 = sigma = 1 and unit spacing from t=0: the first residual is
    # the prior variance 1; buying down to 0.5 and diffusing one unit gives 1.5.
    history = SignalHistory.from_arrays([0.0, 1.0], [1.0, 0.0])
    assert residual_variance_general(BROWNIAN, history, 1).value == pytest.approx(1.0)
    assert residual_variance_general(BROWNIAN, history, 2).value == pytest.approx(1.5, abs=1e-12)
    assert residual_variance_brownian(0.5, 1.0, 1.0) == pytest.approx(1.5)


def test_residual_variance_ou_worked_value():
    # Stationary OU with sigma0 = sigma = 1 (alpha = 1/2), unit spacing, and a
    # first purchase leaving posterior variance 1/2: the next residual is
    # 1 - e^{-1}/2.
    grid = TimeGrid((0.0, 1.0))
    got = residual_variance_markov(OU, grid, [0.5], 2)
    assert got == pytest.approx(1.0 - 0.5 * math.exp(-1.0), abs=1e-15)
    history = SignalHistory.from_arrays([0.0, 1.0], [1.0, 0.0])
    via_matrix = residual_variance_general(OU, history, 2).value
    assert via_matrix == pytest.approx(got, abs=1e-12)


def test_residual_ignores_the_current_steps_own_precision():
    history_a = SignalHistory.from_arrays([0.0, 1.0], [1.0, 50.0])
    history_b = SignalHistory.from_arrays([0.0, 1.0], [1.0, 0.0])
    a = residual_variance_general(BROWNIAN, history_a, 2).value
    b = residual_variance_general(BROWNIAN, history_b, 2).value
    assert a == pytest.approx(b, rel=1e-14)


def test_residual_variance_degenerate_state_is_zero():
    spec = ProcessSpec.brownian(mu=0.0, sigma=0.0, sigma0=0.0)
    history = SignalHistory.from_arrays([0.0, 1.0], [1.0, 1.0])
    assert residual_variance_general(spec, history, 2).value == 0.0


def test_residual_variance_argument_validation():
    history = SignalHistory.from_arrays([0.0, 1.0], [1.0, 1.0])
    with pytest.raises(ValueError):
        residual_variance_general(BROWNIAN, history, 0)
    with pytest.raises(ValueError):
        residual_variance_general(BROWNIAN, history, 3)
    with pytest.raises(ValueError):
        residual_variance_brownian(0.0, 1.0, 1.0)
    with pytest.raises(ValueError):
        residual_variance_brownian(0.5, 0.0, 1.0)


def test_markov_recursion_rejects_linear_kernel():
    spec = ProcessSpec.linear()
    grid = TimeGrid((1.0, 2.0))
    with pytest.raises(ValueError, match="not Markov"):
        residual_variance_markov(spec, grid, [0.5], 2)


precision_strategy = st.one_of(st.just(0.0), st.floats(min_value=0.01, max_value=5.0))
history_strategy = st.tuples(
    st.lists(st.floats(min_value=0.05, max_value=0.9), min_size=2, max_size=7),
    st.lists(precision_strategy, min_size=7, max_size=7),
)


@given(data=history_strategy, kind=st.sampled_from(["brownian", "ou"]))
def test_matrix_and_recursion_agree_for_markov_kernels(data, kind):
    increments, precisions = data
    times = np.cumsum(increments)
    spec = BROWNIAN if kind == "brownian" else OU
    grid = TimeGrid(tuple(times))
    history = SignalHistory.from_arrays(list(times), precisions[: len(times)])
    posterior_vars = [
        posterior_variance_at(spec, history.prefix(k + 1), grid[k]) for k in range(len(grid))
    ]
    for n in range(2, len(grid) + 1):
        via_matrix = residual_variance_general(spec, history, n).value
        via_recursion = residual_variance_markov(spec, grid, posterior_vars, n)
        assert via_matrix == pytest.approx(via_recursion, abs=1e-8)


@given(
    increments=st.lists(st.floats(min_value=0.05, max_value=0.9), min_size=1, max_size=8),
    c=st.floats(min_value=0.05, max_value=1.0),
    kind=st.sampled_from(["brownian", "ou"]),
)
def test_closed_form_matches_iterated_recursion_under_optimal_play(increments, c, kind):
    times = np.cumsum(increments)
    spec = BROWNIAN if kind == "brownian" else OU
    grid = TimeGrid(tuple(times))
    root = math.sqrt(c)
    posts: list[float] = []
    for n in range(1, len(grid) + 1):
        if n == 1:
            running = prior_cov(spec, grid[0], grid[0])
        else:
            running = residual_variance_markov(spec, grid, posts, n)
        posts.append(min(running, root))
        closed = residual_variance_markov_closed(spec, grid, c, n)
        assert closed == pytest.approx(running, abs=1e-10)


def test_singular_system_error_names_the_times():
    # A frozen state observed twice with near-infinite precision produces a
    # numerically singular signal covariance.
    spec = ProcessSpec.brownian(mu=0.0, sigma=0.0, sigma0=1.0)
    history = SignalHistory.from_arrays([1.0, 2.0], [1e16, 1e16])
    with pytest.raises(SingularSystemError) as excinfo:
        posterior_variance_at(spec, history, 1.5)
    assert excinfo.value.times == (1.0, 2.0)
    assert "singular" in str(excinfo.value)


def test_history_validation_and_helpers():
    with pytest.raises(ValueError):
        SignalHistory.from_arrays([1.0, 1.0], [1.0, 1.0])
    with pytest.raises(ValueError):
        SignalHistory.from_arrays([2.0, 1.0], [1.0, 1.0])
    with pytest.raises(ValueError):
        SignalHistory.from_arrays([1.0], [1.0, 2.0])
    with pytest.raises(ValueError):
        SignalRecord(time=-1.0, precision=1.0)
    with pytest.raises(ValueError):
        SignalRecord(time=1.0, precision=-0.5)
    history = SignalHistory.from_arrays([1.0, 2.0, 3.0], [1.0, 0.0, 2.0])
    assert len(history) == 3
    assert len(history.prefix(2)) == 2
    assert [r.time for r in history.informative()] == [1.0, 3.0]
