import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fkdv.fraclap import build_operator
from fkdv.grid import GridFn, build_grid, norm_l2
from fkdv.linsolve import Backend, SolverError, build_system, residual, solve, solve_array


def _system(N=128, alpha=1.5, theta=0.01, backend=None, mode="periodic"):
    op = build_operator(build_grid(-5, 5, N, mode), alpha)
    return build_system(op, theta, backend)


def test_default_backends():
    assert _system().backend is Backend.SPECTRAL
    assert _system(mode="truncated").backend is Backend.DENSE


def test_spectral_needs_periodic_grid():
    with pytest.raises(ValueError):
        _system(mode="truncated", backend="circulant_spectral")


@pytest.mark.parametrize("theta", [0.0, np.nan, np.inf])
def test_theta_validated(theta):
    with pytest.raises(ValueError):
        _system(theta=theta)


def test_tiny_theta_is_identity(rng):
    s = _system(theta=1e-300)
    rhs = rng.standard_normal(128)
    np.testing.assert_allclose(solve_array(s, rhs), rhs, rtol=0, atol=1e-14)


def test_symbol_modulus_at_least_one():
    s = _system(N=128)
    assert np.all(np.abs(s.symbol()) >= 1 - 1e-15)
    assert np.all(np.abs(s.symbol().real - 1) == 0)


@pytest.mark.parametrize("backend", list(Backend))
def test_zero_rhs(backend):
    s = _system(N=64, backend=backend)
    assert np.all(solve_array(s, np.zeros(64)) == 0)


@pytest.mark.parametrize("backend", list(Backend))
def test_solution_satisfies_system(backend, rng):
    s = _system(N=256, backend=backend)
    rhs = rng.standard_normal(256)
    w = solve_array(s, rhs)
    assert residual(s, w, rhs) <= 1e-10
    assert np.linalg.norm(w) <= np.linalg.norm(rhs) * (1 + 1e-10)


def test_dense_matches_spectral_small(rng):
    a, b = _system(N=64, backend="dense_lu"), _system(N=64, backend="circulant_spectral")
    rhs = rng.standard_normal(64)
    np.testing.assert_allclose(solve_array(a, rhs), solve_array(b, rhs), atol=1e-11)


@settings(max_examples=15, deadline=None)
@given(st.sampled_from([32, 100, 257]), st.sampled_from([1e-3, 1e-2]), st.integers(0, 2**32 - 1))
def test_backends_agree(N, theta, seed):
    r = np.random.default_rng(seed)
    rhs = r.standard_normal(N)
    sols = [solve_array(_system(N, 1.3, theta, b), rhs) for b in Backend]
    for w in sols[1:]:
        assert np.linalg.norm(w - sols[0]) <= 1e-10 * np.linalg.norm(rhs)


def test_truncated_dense_vs_iterative(rng):
    rhs = rng.standard_normal(200)
    a = solve_array(_system(200, 1.5, 0.05, "dense_lu", "truncated"), rhs)
    b = solve_array(_system(200, 1.5, 0.05, "iterative", "truncated"), rhs)
    assert np.linalg.norm(a - b) <= 1e-10 * np.linalg.norm(rhs)


def test_energy_identity(rng):
    s = _system(N=96)
    w = rng.standard_normal(96)
    assert np.dot(s.matvec(w), w) == pytest.approx(np.dot(w, w), rel=1e-12)


def test_iterative_failure_reports_residual(rng):
    op = build_operator(build_grid(-5, 5, 256), 1.9)
    s = build_system(op, 50.0, "iterative", tol=1e-15)
    object.__setattr__(s, "max_iter", 1)
    with pytest.raises(SolverError) as info:
        solve_array(s, rng.standard_normal(256))
    assert info.value.residual > 0


def test_solve_is_deterministic(rng):
    s = _system(N=128)
    u = GridFn(s.grid, rng.standard_normal(128))
    assert np.array_equal(solve(s, u).values, solve(s, u).values)
    assert norm_l2(solve(s, u)) <= norm_l2(u) * (1 + 1e-12)


def test_solve_rejects_other_grid():
    s = _system(N=64)
    with pytest.raises(ValueError):
        solve(s, GridFn.zeros(build_grid(0, 1, 64)))
