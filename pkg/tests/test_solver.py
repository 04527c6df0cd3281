"""Triplet search, trace invariants, and the convergence detector."""

import io

import numpy as np
import pytest

from csbound.errors import ResourceGuardError
from csbound.operators import OperatorContext
from csbound.solver import (
    SolverConfig,
    check_convergence,
    feasible_triplet,
    guard_memory,
    iterate_trace,
    required_bytes,
)


def test_trace_first_iterates():
    trace = iterate_trace(SolverConfig(2, 2, 1), 4)
    np.testing.assert_array_equal(trace[0], [0, 0, 0, 0])
    np.testing.assert_array_equal(trace[1], [0, 0, 0, 0])
    np.testing.assert_array_equal(trace[2], [1, 0, 0, 1])
    np.testing.assert_allclose(trace[3], [1, 0.5, 0.5, 1])
    np.testing.assert_allclose(trace[4], [1.5, 0.75, 0.75, 1.5])


@pytest.mark.parametrize("sigma,d,l", [(2, 2, 1), (2, 2, 2), (3, 2, 1), (2, 3, 1)])
def test_trace_monotone_and_nonnegative(sigma, d, l):
    trace = iterate_trace(SolverConfig(sigma, d, l), 30)
    for prev, nxt in zip(trace, trace[1:]):
        assert np.all(nxt >= prev - 1e-12)
        assert np.all(nxt >= 0)


def test_trace_guards():
    with pytest.raises(ResourceGuardError):
        iterate_trace(SolverConfig(2, 2, 10), 3)  # 2**20 states
    with pytest.raises(ValueError):
        iterate_trace(SolverConfig(2, 2, 1), 101)


def test_binary_two_string_fixed_point():
    result = feasible_triplet(SolverConfig(2, 2, 1, stagnation_tol=1e-12))
    assert result.bound == pytest.approx(2 / 3, abs=1e-9)
    assert result.r == pytest.approx(1 / 3, abs=1e-9)
    assert result.epsilon <= 1e-9
    assert result.bound == result.d * (result.r - result.epsilon)


def test_best_so_far_is_history_maximum():
    result = feasible_triplet(SolverConfig(2, 2, 2))
    best = max(r - e for _, r, e in result.history)
    assert result.bound == pytest.approx(result.d * best, abs=0)


def test_epsilon_nonnegative_and_bound_definition():
    result = feasible_triplet(SolverConfig(3, 2, 1))
    assert result.epsilon >= 0
    assert result.bound == result.d * (result.r - result.epsilon)


def test_accepted_triplets_reproduce_their_slack():
    # re-derive every accepted (v_i, R, E) from the exact trace and check the
    # feasibility probe reproduces E bit-for-bit
    config = SolverConfig(2, 2, 2, max_iterations=40)
    result = feasible_triplet(config)
    trace = iterate_trace(config, result.iterations_run)
    ctx = OperatorContext(2, 2, 2)
    best = 0.0
    accepted = []
    for i, r_i, e_i in result.history:
        if r_i - e_i >= best:
            best = r_i - e_i
            accepted.append((i, r_i, e_i))
    assert accepted
    for i, r_i, e_i in accepted:
        vi = trace[i]
        growth = float(np.max(vi - trace[i - 1]))
        assert growth == r_i
        probe = ctx.apply_f([vi] * 2, arg_offsets=[growth, 0.0])
        slack = max(0.0, float(np.max(vi + 2 * growth - probe)))
        assert slack == e_i


def test_progress_stream_receives_lines():
    stream = io.StringIO()
    result = feasible_triplet(SolverConfig(2, 2, 1, max_iterations=10), progress=stream)
    lines = [line for line in stream.getvalue().splitlines() if line]
    assert len(lines) == len(result.history)
    assert lines[0].startswith("iter=2 ")
    assert "R=" in lines[0] and "E=" in lines[0] and "bound=" in lines[0]


def test_memory_guard_fires_before_allocation():
    config = SolverConfig(2, 2, 10, memory_budget=1024)
    assert required_bytes(2, 2, 10) > 1024
    with pytest.raises(ResourceGuardError):
        guard_memory(config)
    with pytest.raises(ResourceGuardError):
        feasible_triplet(config)


def test_config_validation():
    with pytest.raises(ValueError):
        SolverConfig(1, 2, 1)
    with pytest.raises(ValueError):
        SolverConfig(2, 2, 1, max_iterations=1)
    with pytest.raises(ValueError):
        SolverConfig(2, 2, 1, stagnation_tol=0.0)


def test_resolved_iteration_budget():
    assert SolverConfig(2, 2, 1).resolved_max_iterations() == 200
    assert SolverConfig(2, 2, 10).resolved_max_iterations() == 5000
    assert SolverConfig(2, 2, 1, max_iterations=37).resolved_max_iterations() == 37


def test_resolved_stagnation_window():
    assert SolverConfig(2, 2, 1).resolved_stagnation_window() == 60
    assert SolverConfig(2, 14, 1).resolved_stagnation_window() == 420
    assert SolverConfig(2, 2, 1, stagnation_window=10).resolved_stagnation_window() == 10
    with pytest.raises(ValueError):
        SolverConfig(2, 2, 1, stagnation_window=0)


def test_check_convergence_constant_window():
    v = np.ones(4)
    assert check_convergence([v, v, v], r=0.0, epsilon=0.0, d=2)


def test_check_convergence_linear_window():
    v = np.zeros(4)
    window = [v, v + 0.3, v + 0.6]
    assert check_convergence(window, r=0.3, epsilon=0.0, d=2)
    assert not check_convergence(window, r=0.2, epsilon=0.1, d=2)


def test_check_convergence_on_real_iterates():
    # once consecutive differences sit within eps/(2d) of 1/3, the window
    # certifies feasibility at that epsilon
    trace = iterate_trace(SolverConfig(2, 2, 1), 40)
    epsilon = 0.01
    hit = None
    for i in range(2, len(trace) - 2):
        window = trace[i : i + 3]
        if check_convergence(window, r=1 / 3, epsilon=epsilon, d=2):
            hit = i
            break
    assert hit is not None
    deltas = [np.max(np.abs(b - a - 1 / 3)) for a, b in zip(trace[hit:], trace[hit + 1 : hit + 3])]
    assert max(deltas) <= epsilon / 4


def test_check_convergence_window_length():
    v = np.zeros(4)
    with pytest.raises(ValueError):
        check_convergence([v, v], r=0.0, epsilon=0.0, d=2)
