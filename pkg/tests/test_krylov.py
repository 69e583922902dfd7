import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pslr.errors import DimensionError, InvalidInput
from pslr.factor import ic0
from pslr.generators import gen_banded
from pslr.krylov import LinearOperator, Status, arnoldi, as_operator, cg, gmres, pcg
from pslr.sparse import from_dense

from conftest import random_spd_dense


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**31), st.integers(5, 30), st.integers(1, 8))
def test_arnoldi_relation(seed, n, k):
    rng = np.random.default_rng(seed)
    a = rng.standard_normal((n, n))
    k = min(k, n)
    res = arnoldi(a, rng.standard_normal(n), k)
    V, H = res.V, res.H
    np.testing.assert_allclose(V.T @ V, np.eye(res.k), atol=1e-10)
    np.testing.assert_allclose(V.T @ a @ V, H, atol=1e-9)
    assert np.allclose(np.tril(H, -2), 0.0)
    if res.v_next is not None:
        # A V_k = V_k H_k + h e_k^T v_{k+1}
        resid = a @ V - V @ H
        expected = np.outer(res.v_next, np.eye(res.k)[-1]) * res.h_next
        np.testing.assert_allclose(resid, expected, atol=1e-9)


def test_arnoldi_breakdown_on_invariant_subspace():
    a = np.diag([1.0, 2.0, 3.0, 4.0])
    res = arnoldi(a, np.array([1.0, 1.0, 0.0, 0.0]), 4)
    assert res.k == 2
    assert res.v_next is None
    np.testing.assert_allclose(np.sort(np.linalg.eigvals(res.H).real), [1.0, 2.0])


def test_arnoldi_deflated_continuation():
    rng = np.random.default_rng(2)
    u = rng.standard_normal((10, 2))
    a = u @ rng.standard_normal((2, 10))  # rank two
    res = arnoldi(a, np.ones(10), 10, deflate=True)
    assert res.k == 10 and res.restarts >= 1
    np.testing.assert_allclose(res.V.T @ res.V, np.eye(10), atol=1e-10)
    np.testing.assert_allclose(res.V @ res.H @ res.V.T, a, atol=1e-10)


def test_arnoldi_zero_start():
    with pytest.raises(InvalidInput):
        arnoldi(np.eye(3), np.zeros(3), 2)


def test_gmres_tridiag(tridiag128):
    b = np.ones(128)
    x, rep = gmres(tridiag128, b, tol=1e-6)
    assert rep.status is Status.CONVERGED
    np.testing.assert_allclose(x, np.linalg.solve(tridiag128.to_dense(), b), atol=1e-5)
    assert rep.true_residual <= 1e-5 * np.linalg.norm(b)
    assert len(rep.residual_history) == rep.iterations + 1


def test_gmres_history_monotone(rng):
    a = np.eye(40) + 0.3 * rng.standard_normal((40, 40))
    _, rep = gmres(a, rng.standard_normal(40), tol=1e-10, maxit=40)
    h = np.array(rep.residual_history)
    assert np.all(np.diff(h) <= 1e-12 * h[0])


def test_gmres_exact_in_n_steps(rng):
    a = rng.standard_normal((12, 12)) + 5 * np.eye(12)
    b = rng.standard_normal(12)
    x, rep = gmres(a, b, tol=1e-12, maxit=12)
    np.testing.assert_allclose(x, np.linalg.solve(a, b), atol=1e-8)


def test_gmres_right_preconditioned(tridiag128):
    d = tridiag128.diagonal()
    prec = LinearOperator(128, lambda v: v / d)
    x, rep = gmres(tridiag128, np.ones(128), precond=prec, tol=1e-8)
    assert rep.converged
    np.testing.assert_allclose(tridiag128 @ x, np.ones(128), atol=1e-6)


def test_gmres_exact_preconditioner_one_step(rng):
    a = random_spd_dense(rng, 20) + np.triu(rng.standard_normal((20, 20)), 1)
    inv = np.linalg.inv(a)
    _, rep = gmres(a, rng.standard_normal(20), precond=inv, tol=1e-8)
    assert rep.iterations == 1


def test_gmres_max_iterations(tridiag128):
    _, rep = gmres(tridiag128, np.ones(128), maxit=2)
    assert rep.status is Status.MAX_ITERATIONS
    assert rep.iterations == 2


def test_gmres_zero_rhs():
    x, rep = gmres(np.eye(4), np.zeros(4))
    assert rep.converged and rep.iterations == 0 and not x.any()


@pytest.mark.parametrize("bad", [dict(tol=0.0), dict(maxit=0)])
def test_gmres_bad_params(bad):
    with pytest.raises(InvalidInput):
        gmres(np.eye(3), np.ones(3), **bad)


def test_dimension_checks():
    with pytest.raises(DimensionError):
        gmres(np.eye(3), np.ones(4))
    with pytest.raises(DimensionError):
        as_operator(np.ones((2, 3)))


def test_cg_and_pcg():
    a = gen_banded(128, (-1, 0, 1), (2.0, 6.0, 2.0))
    b = np.ones(128)
    ref = np.linalg.solve(a.to_dense(), b)
    x, rep = cg(a, b, tol=1e-6)
    assert rep.converged
    np.testing.assert_allclose(x, ref, atol=1e-5)
    f = ic0(a)
    x2, rep2 = pcg(a, b, tol=1e-10, m_inv=LinearOperator(128, f.solve))
    assert rep2.iterations <= 2  # IC0 of a tridiagonal matrix is exact
    np.testing.assert_allclose(x2, ref, atol=1e-8)


def test_cg_breakdown_on_indefinite():
    a = from_dense(np.diag([1.0, -1.0]))
    _, rep = cg(a, np.array([1.0, 1.0]))
    assert rep.status is Status.BREAKDOWN


def test_operator_todense(rng):
    a = rng.standard_normal((5, 5))
    np.testing.assert_allclose(as_operator(a).todense(), a)
