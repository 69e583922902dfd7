"""Power-series Schur complement preconditioner with low-rank correction.

For a saddle system with blocks ``K = A^T A``, ``B`` and ``C`` the Schur
complement ``S = C + B K^{-1} B^T`` is written as ``S = C (I - M)`` with

    M = -C^{-1} B K^{-1} B^T.

Truncating the Neumann series after ``m`` terms leaves the exact residual

    I - S (sum_{i<=m} M^i) C^{-1} = C M^{m+1} C^{-1} =: E,

so ``S^{-1} = (sum_{i<=m} M^i C^{-1}) (I - E)^{-1}``. Arnoldi gives
``E ~= V H V^T`` with orthonormal ``V``, and the Woodbury identity turns the
remaining inverse into ``I + V G V^T`` with ``G = (I - H)^{-1} - I``.

The same construction applied to a splitting ``A = I - F`` gives an
approximate inverse of a general matrix (:func:`pinv_solve`).

All series are applied to vectors, never formed as matrices.
"""

from __future__ import annotations

import time
from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, CorrectionSingular, DimensionError, InvalidInput
from .factor import Factorization, apply_inverse, default_c_factor, factorize
from .krylov import LinearOperator, arnoldi, as_operator
from .saddle import SaddleSystem, Sign
from .sparse import CsrMatrix, spmv

__all__ = [
    "schur_m_operator",
    "power_series_apply",
    "build_errop",
    "woodbury_correction",
    "PslrPreconditioner",
    "build_pslr",
    "apply_pslr",
    "pslr_operator",
    "PinvOperator",
    "build_pinv",
    "pinv_solve",
    "jacobi_splitting",
    "ErrorDiagnostics",
    "error_diagnostics",
    "spectral_radius",
]

SINGULAR_RCOND = 1e-12


def schur_m_operator(sys: SaddleSystem, ata_fact: Factorization, c_fact: Factorization) -> LinearOperator:
    """``v -> -C^{-1} B K^{-1} B^T v`` using the given factorizations."""
    if ata_fact.n != sys.n or c_fact.n != sys.p:
        raise DimensionError("factorization orders do not match the saddle blocks")
    b, bt = sys.b_block, sys.b_transpose

    def apply(v):
        return -apply_inverse(c_fact, spmv(b, apply_inverse(ata_fact, spmv(bt, v))))

    return LinearOperator(sys.p, apply)


def _horner(op: LinearOperator, m: int, w: np.ndarray) -> np.ndarray:
    acc = w.copy()
    for _ in range(m):
        w = op(w)
        acc += w
    return acc


def power_series_apply(m_op: LinearOperator, c_fact: Factorization, m: int, v) -> np.ndarray:
    """``(sum_{i=0}^{m} M^i) C^{-1} v`` with exactly ``m`` applications of ``M``."""
    if m < 0:
        raise InvalidInput("number of series terms must be >= 0")
    return _horner(m_op, m, apply_inverse(c_fact, v))


def build_errop(m_op: LinearOperator, c_mat: CsrMatrix, c_fact: Factorization, m: int) -> LinearOperator:
    """Truncation residual ``E = C M^{m+1} C^{-1}`` as an operator."""
    if m < 0:
        raise InvalidInput("number of series terms must be >= 0")

    def apply(v):
        w = apply_inverse(c_fact, v)
        for _ in range(m + 1):
            w = m_op(w)
        return spmv(c_mat, w)

    return LinearOperator(m_op.dim, apply)


def woodbury_correction(H) -> np.ndarray:
    """``G = (I - H)^{-1} - I``, so that ``(I - V H V^T)^{-1} = I + V G V^T``
    for any ``V`` with orthonormal columns."""
    H = np.atleast_2d(np.asarray(H, dtype=np.float64))
    k = H.shape[0]
    eye = np.eye(k)
    ih = eye - H
    if k and 1.0 / np.linalg.cond(ih) < SINGULAR_RCOND:
        raise CorrectionSingular(
            "I - H is singular: the operator approximated by Arnoldi has an eigenvalue near 1"
        )
    return np.linalg.solve(ih, eye) - eye


def _lowrank_apply(V: np.ndarray, G: np.ndarray, v: np.ndarray) -> np.ndarray:
    return v + V @ (G @ (V.T @ v))


@dataclass(frozen=True, eq=False)
class PslrPreconditioner:
    ata_fact: Factorization
    c_fact: Factorization
    m: int
    r_k: int
    V: np.ndarray
    H: np.ndarray
    G: np.ndarray
    sign: Sign
    build_time: float = 0.0

    @property
    def rank(self) -> int:
        """Number of basis columns, ``min(r_k, p)``."""
        return self.V.shape[1]

    def m_operator(self, sys: SaddleSystem) -> LinearOperator:
        return schur_m_operator(sys, self.ata_fact, self.c_fact)

    def schur_inverse(self, sys: SaddleSystem, v) -> np.ndarray:
        """Approximate ``S^{-1} v``: low-rank correction first, then the series."""
        t = _lowrank_apply(self.V, self.G, np.asarray(v, dtype=np.float64))
        return power_series_apply(self.m_operator(sys), self.c_fact, self.m, t)


def build_pslr(
    sys: SaddleSystem,
    m: int = 5,
    r_k: int = 15,
    *,
    ata_kind: str = "auto",
    c_kind: str = "auto",
) -> PslrPreconditioner:
    """Factor the blocks, build ``E``, run Arnoldi on it and form ``G``.

    ``ata_kind`` is passed to :func:`pslr.factor.factorize` (IC0 for
    symmetric K by default). ``c_kind='auto'`` means exact Cholesky of ``C``
    up to order 2000 and IC0 above. Arnoldi starts from the normalized
    all-ones vector; if that Krylov space is invariant before ``r_k``
    columns (``E`` has low rank, e.g. ``p > n``), it continues from fresh
    orthogonal directions so that ``r_k = p`` always yields ``V H V^T = E``.
    """
    if m < 0:
        raise ConfigError("m must be >= 0")
    if not 1 <= r_k <= sys.p:
        raise ConfigError(f"r_k must lie in [1, {sys.p}], got {r_k}")
    t0 = time.perf_counter()
    ata_fact = factorize(sys.ata, ata_kind)
    c_fact = default_c_factor(sys.c_block) if c_kind == "auto" else factorize(sys.c_block, c_kind)
    m_op = schur_m_operator(sys, ata_fact, c_fact)
    err = build_errop(m_op, sys.c_block, c_fact, m)
    res = arnoldi(err, np.ones(sys.p), r_k, deflate=True)
    G = woodbury_correction(res.H)
    return PslrPreconditioner(
        ata_fact, c_fact, m, r_k, res.V, res.H, G, sys.sign, time.perf_counter() - t0
    )


def apply_pslr(P: PslrPreconditioner, sys: SaddleSystem, b) -> np.ndarray:
    """Approximate solve of the saddle system by block substitution.

    With ``b = (f, g)``:

    1. ``g_hat = g + B K^{-1} f`` (positive sign) or ``B K^{-1} f - g``
       (negative sign), so that ``S y = g_hat`` holds exactly;
    2. ``y = (sum M^i C^{-1}) (I + V G V^T) g_hat``;
    3. ``x = K^{-1} (f - B^T y)``.
    """
    f, g = sys.split(b)
    kf = apply_inverse(P.ata_fact, f)
    bkf = spmv(sys.b_block, kf)
    g_hat = g + bkf if sys.sign is Sign.POSITIVE else bkf - g
    y = P.schur_inverse(sys, g_hat)
    x = apply_inverse(P.ata_fact, f - spmv(sys.b_transpose, y))
    return np.concatenate([x, y])


def pslr_operator(P: PslrPreconditioner, sys: SaddleSystem) -> LinearOperator:
    return LinearOperator(sys.dim, lambda v: apply_pslr(P, sys, v))


@dataclass(frozen=True, eq=False)
class PinvOperator:
    """Approximate inverse ``(sum_{i<=m} F^i)(I + V G V^T)`` of ``I - F``."""

    f_op: LinearOperator
    m: int
    V: np.ndarray
    H: np.ndarray
    G: np.ndarray

    @property
    def dim(self) -> int:
        return self.f_op.dim

    def __call__(self, v) -> np.ndarray:
        t = _lowrank_apply(self.V, self.G, np.asarray(v, dtype=np.float64))
        return _horner(self.f_op, self.m, t)

    def as_operator(self) -> LinearOperator:
        return LinearOperator(self.dim, self.__call__)


def build_pinv(f_op, start, m: int = 5, r_k: int = 15) -> PinvOperator:
    """Arnoldi on ``F^{m+1}`` from ``start``, then the Woodbury factor ``G``."""
    f_op = as_operator(f_op)
    if m < 0:
        raise ConfigError("m must be >= 0")
    if not 1 <= r_k <= f_op.dim:
        raise ConfigError(f"r_k must lie in [1, {f_op.dim}], got {r_k}")

    def power(v):
        for _ in range(m + 1):
            v = f_op(v)
        return v

    res = arnoldi(LinearOperator(f_op.dim, power), start, r_k, deflate=True)
    return PinvOperator(f_op, m, res.V, res.H, woodbury_correction(res.H))


def pinv_solve(f_op, b, m: int = 5, r_k: int = 15):
    """Approximate solution of ``(I - F) x = b``.

    The Arnoldi start vector is ``b`` itself. Returns ``(x, operator)``; the
    operator can be reused as a preconditioner.
    """
    b = np.asarray(b, dtype=np.float64)
    op = build_pinv(f_op, b, m, r_k)
    return op(b), op


def jacobi_splitting(a: CsrMatrix) -> tuple[LinearOperator, np.ndarray]:
    """Splitting of the diagonally scaled matrix, ``D^{-1} a = I - F``.

    Returns ``(F, d)`` with ``d = diag(a)``; solve ``(I - F) x = b / d``.
    """
    d = a.diagonal()
    if a.nrows != a.ncols or np.any(d == 0.0):
        raise ConfigError("jacobi splitting needs a square matrix with a nonzero diagonal")

    def apply(v):
        return v - spmv(a, v) / d

    return LinearOperator(a.nrows, apply), d


@dataclass(frozen=True)
class ErrorDiagnostics:
    norm_X: float  # ||E - V H V^T||_2
    norm_Zinv: float  # ||(I - V H V^T)^{-1}||_2
    bound: float
    actual: float  # ||S^{-1} - S_app^{-1}||_2 / ||S^{-1}||_2
    approx_quality: float  # ||V H V^T - E||_F

    @property
    def holds(self) -> bool:
        # absolute slack covers rounding when both sides are at machine level
        return self.actual <= self.bound * (1 + 1e-8) + 1e-12


def error_diagnostics(sys: SaddleSystem, P: PslrPreconditioner, dense_cap: int = 500) -> ErrorDiagnostics:
    """Dense check of the relative error of the approximate Schur inverse.

    ``S`` is taken as ``C (I - M)`` with ``M`` built from the same
    factorizations as the preconditioner, so incomplete factorizations are
    accounted for consistently.
    """
    p = sys.p
    if p > dense_cap:
        raise ConfigError(f"error diagnostics densify order {p} > dense_cap={dense_cap}")
    m_dense = P.m_operator(sys).todense()
    c_dense = sys.c_block.to_dense()
    c_inv = np.column_stack([apply_inverse(P.c_fact, e) for e in np.eye(p)])
    eye = np.eye(p)
    s = c_dense @ (eye - m_dense)
    series = np.zeros((p, p))
    term = c_inv
    for _ in range(P.m + 1):
        series += term
        term = m_dense @ term
    e = c_dense @ np.linalg.matrix_power(m_dense, P.m + 1) @ c_inv
    vhv = P.V @ P.H @ P.V.T
    x = e - vhv
    z = eye - vhv
    s_inv = np.linalg.inv(s)
    s_app_inv = series @ (eye + P.V @ P.G @ P.V.T)
    norm_x = np.linalg.norm(x, 2)
    norm_zinv = np.linalg.norm(np.linalg.inv(z), 2)
    actual = np.linalg.norm(s_inv - s_app_inv, 2) / np.linalg.norm(s_inv, 2)
    return ErrorDiagnostics(
        float(norm_x), float(norm_zinv), float(norm_x * norm_zinv), float(actual),
        float(np.linalg.norm(x, "fro")),
    )


def spectral_radius(op, iters: int = 200) -> float:
    """Power-iteration estimate of the spectral radius.

    Starts from the normalized all-ones vector and returns the magnitude of
    the last Rayleigh quotient. This is an estimate: it converges slowly for
    a small eigenvalue gap and can oscillate when the dominant eigenvalues
    are a complex pair.
    """
    op = as_operator(op)
    if iters < 10:
        raise InvalidInput("use at least 10 power iterations")
    v = np.ones(op.dim) / np.sqrt(op.dim)
    rq = 0.0
    for _ in range(iters):
        w = op(v)
        rq = float(v @ w)
        nw = np.linalg.norm(w)
        if nw == 0.0:
            return 0.0
        v = w / nw
    return abs(rq)
