"""Krylov methods: Arnoldi, full GMRES and (preconditioned) conjugate gradients."""

from __future__ import annotations

import enum
import time
from dataclasses import dataclass, field
from typing import Callable, NamedTuple

import numpy as np

from .errors import DimensionError, InvalidInput
from .sparse import CsrMatrix, spmv

__all__ = [
    "LinearOperator",
    "as_operator",
    "identity_operator",
    "Status",
    "SolveReport",
    "ArnoldiResult",
    "arnoldi",
    "gmres",
    "cg",
    "pcg",
]

BREAKDOWN_RTOL = 1e-14


@dataclass(frozen=True)
class LinearOperator:
    """Matrix-free square operator ``v -> apply(v)`` of order ``dim``."""

    dim: int
    apply: Callable[[np.ndarray], np.ndarray]

    def __call__(self, v) -> np.ndarray:
        v = np.asarray(v, dtype=np.float64)
        if v.shape != (self.dim,):
            raise DimensionError(f"operator of order {self.dim} applied to shape {v.shape}")
        return self.apply(v)

    def __matmul__(self, v):
        return self(v)

    def todense(self) -> np.ndarray:
        """Apply to every unit vector. O(dim) applications."""
        eye = np.eye(self.dim)
        return np.column_stack([self(eye[:, j]) for j in range(self.dim)])


def as_operator(a) -> LinearOperator:
    if isinstance(a, LinearOperator):
        return a
    if isinstance(a, CsrMatrix):
        if a.nrows != a.ncols:
            raise DimensionError("operator must be square")
        return LinearOperator(a.nrows, lambda v: spmv(a, v))
    a = np.asarray(a, dtype=np.float64)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DimensionError(f"operator must be square, got {a.shape}")
    return LinearOperator(a.shape[0], lambda v: a @ v)


def identity_operator(n: int) -> LinearOperator:
    return LinearOperator(n, lambda v: v.copy())


class Status(enum.Enum):
    CONVERGED = "Converged"
    MAX_ITERATIONS = "MaxIterations"
    BREAKDOWN = "Breakdown"


@dataclass
class SolveReport:
    """Outcome of an iterative solve.

    ``residual_history[0]`` is the true initial residual norm; later entries
    are the residual norms the method tracks internally (the Givens estimate
    for GMRES, the recurrence residual for CG). ``true_residual`` is
    ``||b - A x||`` recomputed from the returned iterate.
    """

    iterations: int
    residual_history: list[float]
    status: Status
    true_residual: float = float("nan")
    time_order: float = 0.0
    time_precond: float = 0.0
    time_iterate: float = 0.0
    time_total: float = 0.0
    extra: dict = field(default_factory=dict)

    @property
    def converged(self) -> bool:
        return self.status is Status.CONVERGED

    @property
    def relative_residual(self) -> float:
        """Final tracked residual over the initial one."""
        r0 = self.residual_history[0]
        return self.residual_history[-1] / r0 if r0 > 0 else 0.0


class ArnoldiResult(NamedTuple):
    V: np.ndarray  # n x k, orthonormal columns
    H: np.ndarray  # k x k upper Hessenberg, V^T op V
    k: int
    h_next: float  # h_{k+1,k}; zero after a breakdown
    v_next: np.ndarray | None  # next basis vector, None after a breakdown
    restarts: int = 0  # deflated restarts performed (deflate=True only)


def _fresh_direction(V: np.ndarray) -> np.ndarray:
    """Unit vector orthogonal to the columns of ``V``.

    Starts from the coordinate direction least represented in ``V``, whose
    component outside the span has squared norm at least ``1 - k/n``.
    """
    i = int(np.argmin(np.einsum("ij,ij->i", V, V)))
    w = np.zeros(V.shape[0])
    w[i] = 1.0
    for _ in range(2):
        w -= V @ (V.T @ w)
    return w / np.linalg.norm(w)


def arnoldi(op, v1, r_k: int, deflate: bool = False) -> ArnoldiResult:
    """Build an orthonormal Krylov basis of ``op`` started at ``v1``.

    Modified Gram-Schmidt with one full reorthogonalization pass. A lucky
    breakdown (the new direction is negligible relative to ``||op v_j||``)
    means the basis spans an invariant subspace. By default the process
    stops there with ``k < r_k``. With ``deflate=True`` it records a zero
    subdiagonal entry and continues from a fresh direction orthogonal to the
    basis, so ``k = min(r_k, n)`` and ``H`` is block upper triangular.
    """
    op = as_operator(op)
    v1 = np.asarray(v1, dtype=np.float64)
    if v1.shape != (op.dim,):
        raise DimensionError(f"start vector shape {v1.shape} does not match operator order {op.dim}")
    if r_k < 1:
        raise InvalidInput("r_k must be at least 1")
    beta = np.linalg.norm(v1)
    if not beta > 0.0:
        raise InvalidInput("Arnoldi start vector is zero")
    n = op.dim
    r_k = min(r_k, n)
    V = np.zeros((n, r_k + 1))
    H = np.zeros((r_k + 1, r_k))
    V[:, 0] = v1 / beta
    restarts = 0
    for j in range(r_k):
        w = op(V[:, j])
        wnorm = np.linalg.norm(w)
        for _ in range(2):
            for i in range(j + 1):
                h = V[:, i] @ w
                H[i, j] += h
                w -= h * V[:, i]
        h_next = np.linalg.norm(w)
        if h_next <= BREAKDOWN_RTOL * wnorm:
            k = j + 1
            if not deflate or k == r_k:
                return ArnoldiResult(V[:, :k].copy(), H[:k, :k].copy(), k, 0.0, None, restarts)
            V[:, k] = _fresh_direction(V[:, :k])
            restarts += 1
            continue
        H[j + 1, j] = h_next
        V[:, j + 1] = w / h_next
    return ArnoldiResult(
        V[:, :r_k].copy(), H[:r_k, :r_k].copy(), r_k, float(H[r_k, r_k - 1]), V[:, r_k].copy(), restarts
    )


def _givens(a: float, b: float) -> tuple[float, float, float]:
    if b == 0.0:
        return 1.0, 0.0, a
    r = np.hypot(a, b)
    return a / r, b / r, r


def gmres(a, b, x0=None, tol: float = 1e-6, maxit: int = 500, precond=None):
    """Full (non-restarted) GMRES with optional right preconditioning.

    Solves ``A P u = b`` and returns ``x = x0 + P u``. Stops once the Givens
    residual estimate drops to ``tol * ||b - A x0||`` or after ``maxit``
    iterations.

    Returns
    -------
    x : ndarray
    report : SolveReport
    """
    t_start = time.perf_counter()
    op = as_operator(a)
    prec = None if precond is None else as_operator(precond)
    n = op.dim
    b = np.asarray(b, dtype=np.float64)
    if b.shape != (n,):
        raise DimensionError(f"rhs shape {b.shape} does not match operator order {n}")
    if not tol > 0 or maxit < 1:
        raise InvalidInput("gmres needs tol > 0 and maxit >= 1")
    x0 = np.zeros(n) if x0 is None else np.array(x0, dtype=np.float64)

    r0 = b - op(x0)
    beta = float(np.linalg.norm(r0))
    history = [beta]
    if beta == 0.0:
        rep = SolveReport(0, history, Status.CONVERGED, 0.0)
        rep.time_iterate = time.perf_counter() - t_start
        return x0, rep

    target = tol * beta
    V = np.zeros((maxit + 1, n))  # basis vectors stored as rows
    R = np.zeros((maxit + 1, maxit))
    cs = np.zeros(maxit)
    sn = np.zeros(maxit)
    g = np.zeros(maxit + 1)
    g[0] = beta
    V[0] = r0 / beta
    status = Status.MAX_ITERATIONS
    j = 0
    for j in range(maxit):
        w = op(V[j] if prec is None else prec(V[j]))
        wnorm = np.linalg.norm(w)
        col = np.zeros(j + 2)
        for i in range(j + 1):
            col[i] = V[i] @ w
            w -= col[i] * V[i]
        col[j + 1] = np.linalg.norm(w)
        for i in range(j):
            col[i], col[i + 1] = cs[i] * col[i] + sn[i] * col[i + 1], -sn[i] * col[i] + cs[i] * col[i + 1]
        cs[j], sn[j], col[j] = _givens(col[j], col[j + 1])
        col[j + 1] = 0.0
        g[j + 1] = -sn[j] * g[j]
        g[j] = cs[j] * g[j]
        R[: j + 1, j] = col[: j + 1]
        history.append(abs(g[j + 1]))
        lucky = np.linalg.norm(w) <= BREAKDOWN_RTOL * wnorm
        if abs(g[j + 1]) <= target:
            status = Status.CONVERGED
            break
        if lucky or col[j] == 0.0:
            status = Status.BREAKDOWN
            break
        V[j + 1] = w / np.linalg.norm(w)

    k = j + 1
    Rk = R[:k, :k]
    if np.any(np.diag(Rk) == 0.0):
        # singular least-squares problem: keep the usable leading block
        k = int(np.argmax(np.diag(Rk) == 0.0))
        Rk = R[:k, :k]
        status = Status.BREAKDOWN
    y = _back_substitute(Rk, g[:k])
    u = V[:k].T @ y
    x = x0 + (u if prec is None else prec(u))
    true_res = float(np.linalg.norm(b - op(x)))
    rep = SolveReport(j + 1, history, status, true_res)
    rep.time_iterate = time.perf_counter() - t_start
    return x, rep


def _back_substitute(r: np.ndarray, g: np.ndarray) -> np.ndarray:
    y = np.zeros_like(g)
    for i in range(len(g) - 1, -1, -1):
        y[i] = (g[i] - r[i, i + 1 :] @ y[i + 1 :]) / r[i, i]
    return y


def pcg(a, b, x0=None, tol: float = 1e-6, maxit: int = 500, m_inv=None):
    """Preconditioned conjugate gradients.

    ``a`` and ``m_inv`` must be symmetric positive definite; this is not
    checked, but a non-positive curvature ``p^T A p`` ends the run with
    ``Status.BREAKDOWN``. ``m_inv=None`` gives plain CG.
    """
    t_start = time.perf_counter()
    op = as_operator(a)
    prec = None if m_inv is None else as_operator(m_inv)
    n = op.dim
    b = np.asarray(b, dtype=np.float64)
    if b.shape != (n,):
        raise DimensionError(f"rhs shape {b.shape} does not match operator order {n}")
    if not tol > 0 or maxit < 1:
        raise InvalidInput("cg needs tol > 0 and maxit >= 1")
    x = np.zeros(n) if x0 is None else np.array(x0, dtype=np.float64)
    r = b - op(x)
    rnorm = float(np.linalg.norm(r))
    history = [rnorm]
    target = tol * rnorm
    status = Status.CONVERGED if rnorm == 0.0 else Status.MAX_ITERATIONS
    it = 0
    if rnorm > 0.0:
        z = r if prec is None else prec(r)
        p = z.copy()
        rz = r @ z
        for it in range(1, maxit + 1):
            q = op(p)
            curv = p @ q
            if not curv > 0.0:
                status = Status.BREAKDOWN
                break
            alpha = rz / curv
            x += alpha * p
            r -= alpha * q
            rnorm = float(np.linalg.norm(r))
            history.append(rnorm)
            if rnorm <= target:
                status = Status.CONVERGED
                break
            z = r if prec is None else prec(r)
            rz_new = r @ z
            p = z + (rz_new / rz) * p
            rz = rz_new
    rep = SolveReport(it, history, status, float(np.linalg.norm(b - op(x))))
    rep.time_iterate = time.perf_counter() - t_start
    return x, rep


def cg(a, b, x0=None, tol: float = 1e-6, maxit: int = 500):
    """Unpreconditioned conjugate gradients; see :func:`pcg`."""
    return pcg(a, b, x0, tol, maxit, m_inv=None)
