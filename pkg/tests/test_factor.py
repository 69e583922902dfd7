import numpy as np
import pytest

from pslr.errors import ConfigError, PivotBreakdown, SingularMatrix
from pslr.factor import FactorKind, apply_inverse, factor_dense, factorize, ic0, ilu0
from pslr.generators import gen_banded, gen_random_saddle
from pslr.sparse import from_dense

from conftest import random_spd_dense


@pytest.mark.parametrize(
    "offsets, vals",
    [((-1, 0, 1), (1.0, 4.0, 1.0)), ((-1, 0, 1), (-1.0, 2.0, 0.5)), ((-1, 0, 1), (2.0, 6.0, 2.0))],
)
def test_ilu0_exact_on_tridiagonal(offsets, vals):
    a = gen_banded(64, offsets, vals)
    f = ilu0(a)
    np.testing.assert_allclose(f.reconstruct(), a.to_dense(), atol=1e-12)
    b = np.arange(64.0)
    np.testing.assert_allclose(apply_inverse(f, b), np.linalg.solve(a.to_dense(), b), rtol=1e-10)


def test_ilu0_keeps_pattern():
    a = gen_banded(30, (-3, -1, 0, 1, 3), (1.0, 1.0, 8.0, 1.0, 1.0))
    f = ilu0(a)
    lu_pattern = (f.lower.to_dense() != 0) | (f.upper.to_dense() != 0)
    assert np.all(lu_pattern <= (a.to_dense() != 0))
    # incomplete: L U matches a on its pattern but drops fill
    lu = f.lower.to_dense() @ f.upper.to_dense()
    mask = a.to_dense() != 0
    np.testing.assert_allclose(lu[mask], a.to_dense()[mask], atol=1e-12)
    x = np.ones(30)
    assert np.linalg.norm(a @ apply_inverse(f, x) - x) > 0


@pytest.mark.parametrize("seed", range(4))
def test_ic0_on_sparse_spd(seed):
    sys = gen_random_saddle(40, 10, seed)
    f = ic0(sys.ata)
    assert f.kind is FactorKind.IC0
    lt = f.lower.to_dense()
    assert np.allclose(lt, np.tril(lt))
    mask = sys.ata.to_dense() != 0
    np.testing.assert_allclose((lt @ lt.T)[mask], sys.ata.to_dense()[mask], atol=1e-10)


def test_ic0_exact_on_tridiagonal():
    a = gen_banded(50, (-1, 0, 1), (-1.0, 2.0, -1.0))
    np.testing.assert_allclose(ic0(a).reconstruct(), a.to_dense(), atol=1e-12)


def test_ic0_rejects_indefinite():
    with pytest.raises(PivotBreakdown):
        ic0(from_dense(np.array([[1.0, 2.0], [2.0, 1.0]])))


def test_ilu0_zero_pivot():
    with pytest.raises(PivotBreakdown):
        ilu0(from_dense(np.array([[1.0, 1.0], [1.0, 1.0]])))


def test_missing_diagonal():
    with pytest.raises(PivotBreakdown):
        ilu0(from_dense(np.array([[0.0, 1.0], [1.0, 0.0]])))


@pytest.mark.parametrize("kind", ["lu", "cholesky"])
def test_dense_factorizations(rng, kind):
    a = random_spd_dense(rng, 25)
    if kind == "lu":
        a = a + np.triu(rng.standard_normal((25, 25)), 1)
    f = factor_dense(a, kind)
    np.testing.assert_allclose(f.reconstruct(), a, atol=1e-10)
    b = rng.standard_normal(25)
    np.testing.assert_allclose(apply_inverse(f, b), np.linalg.solve(a, b), rtol=1e-9, atol=1e-12)


def test_lu_with_pivoting(rng):
    a = rng.standard_normal((12, 12))
    a[0, 0] = 0.0
    f = factor_dense(a, "lu")
    assert f.perm is not None
    b = rng.standard_normal(12)
    np.testing.assert_allclose(a @ f.solve(b), b, atol=1e-9)


def test_dense_singular():
    with pytest.raises(SingularMatrix):
        factor_dense(np.ones((3, 3)), "lu")
    with pytest.raises(SingularMatrix):
        factor_dense(-np.eye(3), "cholesky")


def test_factorize_auto_picks_kind():
    sym = gen_banded(10, (-1, 0, 1), (1.0, 4.0, 1.0))
    nonsym = gen_banded(10, (-1, 0, 1), (-1.0, 2.0, 0.5))
    assert factorize(sym).kind is FactorKind.IC0
    assert factorize(nonsym).kind is FactorKind.ILU0
    with pytest.raises(ConfigError):
        factorize(sym, "magic")
