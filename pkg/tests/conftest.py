import numpy as np
import pytest

from pslr.generators import gen_random_saddle
from pslr.sparse import from_dense


def dense_saddle(seed, n, p, m_norm=0.5, **kw):
    """Small random saddle problem suited to exact (dense) factorizations."""
    return gen_random_saddle(n, p, seed, density=0.3, m_norm=m_norm, **kw)


def random_spd_dense(rng, n, shift=1.0):
    a = rng.standard_normal((n, n))
    return a @ a.T / n + shift * np.eye(n)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def tridiag128():
    from pslr.generators import gen_banded

    return gen_banded(128, (-1, 0, 1), (1.0, 4.0, 1.0))


def csr(a):
    return from_dense(np.asarray(a, dtype=float))
