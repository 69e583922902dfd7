"""Comparison methods: Jacobi scaling, the two-half-step ADI (HSS) iteration,
and reverse Cuthill-McKee reordering."""

from __future__ import annotations

import time
from dataclasses import dataclass

import numpy as np
from scipy.sparse.csgraph import reverse_cuthill_mckee

from .errors import ConfigError, DimensionError, SingularMatrix
from .factor import ic0
from .krylov import LinearOperator, SolveReport, Status, gmres, pcg
from .sparse import CsrMatrix, add, identity, spmv, transpose

__all__ = ["jacobi_inverse", "AdiConfig", "adi_solve", "rcm_order"]


def jacobi_inverse(a: CsrMatrix) -> LinearOperator:
    """``v -> D^{-1} v`` with ``D = diag(a)``."""
    d = a.diagonal()
    if a.nrows != a.ncols:
        raise DimensionError("jacobi_inverse needs a square matrix")
    if np.any(d == 0.0):
        raise SingularMatrix("zero on the diagonal")
    return LinearOperator(a.nrows, lambda v: v / d)


@dataclass(frozen=True)
class AdiConfig:
    alpha: float = 1.5
    tol: float = 1e-6
    maxit: int = 300
    inner_tol: float = 1e-8
    inner_maxit: int = 200

    def __post_init__(self):
        if not self.alpha > 0:
            raise ConfigError("ADI shift alpha must be positive")
        if self.maxit < 1:
            raise ConfigError("ADI maxit must be >= 1")


def adi_solve(a: CsrMatrix, b, cfg: AdiConfig = AdiConfig(), x0=None):
    """Alternate the two shifted half-steps of the Hermitian/skew-Hermitian split.

    With ``H = (a + a^T)/2`` and ``S = (a - a^T)/2``::

        (H + alpha I) x_half = (alpha I - S) x + b      # PCG, IC0 preconditioner
        (S + alpha I) x_new  = (alpha I - H) x_half + b  # GMRES

    For symmetric ``a`` the skew part vanishes and the second step is a
    scaling. Stops when ``||b - a x|| <= tol ||b||``.
    """
    t_start = time.perf_counter()
    b = np.asarray(b, dtype=np.float64)
    n = a.nrows
    if a.ncols != n or b.shape != (n,):
        raise DimensionError("adi_solve needs a square matrix and a matching rhs")
    at = transpose(a)
    h = add(a, at, 0.5, 0.5)
    s = add(a, at, 0.5, -0.5)
    alpha = cfg.alpha
    h_shift = add(h, identity(n), 1.0, alpha)
    has_skew = s.nnz > 0 and np.any(s.values != 0.0)
    s_shift = add(s, identity(n), 1.0, alpha)
    h_prec = ic0(h_shift)
    m_inv = LinearOperator(n, h_prec.solve)

    x = np.zeros(n) if x0 is None else np.array(x0, dtype=np.float64)
    bnorm = float(np.linalg.norm(b))
    history = [float(np.linalg.norm(b - spmv(a, x)))]
    status = Status.MAX_ITERATIONS
    inner_iters = [0, 0]
    it = 0
    if history[0] <= cfg.tol * bnorm:
        status = Status.CONVERGED
    else:
        for it in range(1, cfg.maxit + 1):
            rhs = alpha * x - spmv(s, x) + b
            x_half, rep = pcg(h_shift, rhs, None, cfg.inner_tol, cfg.inner_maxit, m_inv)
            inner_iters[0] += rep.iterations
            if rep.status is Status.BREAKDOWN:
                status = Status.BREAKDOWN
                break
            rhs = alpha * x_half - spmv(h, x_half) + b
            if has_skew:
                x, rep = gmres(s_shift, rhs, None, cfg.inner_tol, cfg.inner_maxit)
                inner_iters[1] += rep.iterations
                if rep.status is Status.BREAKDOWN:
                    status = Status.BREAKDOWN
                    break
            else:
                x = rhs / alpha
            history.append(float(np.linalg.norm(b - spmv(a, x))))
            if history[-1] <= cfg.tol * bnorm:
                status = Status.CONVERGED
                break
    rep = SolveReport(it, history, status, history[-1])
    rep.extra["inner_iterations"] = tuple(inner_iters)
    rep.time_iterate = time.perf_counter() - t_start
    return x, rep


def rcm_order(a: CsrMatrix) -> np.ndarray:
    """Reverse Cuthill-McKee permutation of the symmetrized pattern of ``a``.

    ``perm[i]`` is the original index placed at position ``i``.
    """
    if a.nrows != a.ncols:
        raise DimensionError("rcm_order needs a square matrix")
    pattern = a.to_scipy()
    pattern.data = np.ones_like(pattern.data)
    sym = (pattern + pattern.T).tocsr()
    return np.asarray(reverse_cuthill_mckee(sym, symmetric_mode=True), dtype=np.int64)
