"""Exact and incomplete triangular factorizations.

``ilu0`` and ``ic0`` keep the sparsity pattern of the input matrix (no
fill-in). ``factor_dense`` wraps LAPACK for exact LU / Cholesky of small
matrices. Every factorization is applied through forward and back
substitution with :func:`apply_inverse`; inverses are never formed.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np
import scipy.linalg as sla
from scipy.sparse.linalg import splu

from .errors import ConfigError, DimensionError, PivotBreakdown, SingularMatrix
from .sparse import CsrMatrix, from_coo, from_dense, is_symmetric, transpose

__all__ = [
    "FactorKind",
    "Factorization",
    "ilu0",
    "ic0",
    "factor_dense",
    "apply_inverse",
    "factorize",
    "DENSE_LIMIT",
]

PIVOT_RTOL = 1e-14
# largest order for which exact (dense) factorizations are attempted
DENSE_LIMIT = 2000


class FactorKind(enum.Enum):
    LU = "lu"
    ILU0 = "ilu0"
    CHOLESKY = "cholesky"
    IC0 = "ic0"

    @property
    def incomplete(self) -> bool:
        return self in (FactorKind.ILU0, FactorKind.IC0)

    @property
    def symmetric(self) -> bool:
        return self in (FactorKind.CHOLESKY, FactorKind.IC0)


@dataclass(frozen=True, eq=False)
class Factorization:
    """Triangular factor pair.

    ``lower`` is unit lower triangular for LU/ILU0 (the unit diagonal is
    stored explicitly) and non-unit for Cholesky/IC0, where ``upper`` is its
    transpose. ``perm`` is the row permutation of a pivoted LU: the factors
    satisfy ``a[perm] == lower @ upper``.
    """

    kind: FactorKind
    lower: CsrMatrix
    upper: CsrMatrix
    perm: np.ndarray | None = None

    @property
    def n(self) -> int:
        return self.lower.nrows

    def solve(self, x) -> np.ndarray:
        return apply_inverse(self, x)

    @cached_property
    def _triangular_solvers(self):
        # SuperLU with natural ordering and no pivoting factors a triangular
        # matrix without fill; reusing it avoids per-call validation cost.
        opts = dict(permc_spec="NATURAL", diag_pivot_thresh=0.0, options=dict(SymmetricMode=True))
        try:
            return (
                splu(self.lower._scipy.tocsc(), **opts),
                splu(self.upper._scipy.tocsc(), **opts),
            )
        except RuntimeError as exc:
            raise SingularMatrix(f"triangular factor is singular: {exc}") from None

    def reconstruct(self) -> np.ndarray:
        """Dense ``P L U`` (or ``L L^T``); meant for tests and diagnostics."""
        lu = self.lower.to_dense() @ self.upper.to_dense()
        if self.perm is None:
            return lu
        out = np.empty_like(lu)
        out[self.perm] = lu
        return out


def _diag_positions(a: CsrMatrix) -> np.ndarray:
    rows = a.row_indices()
    hit = np.flatnonzero(rows == a.col_idx)
    if hit.size != a.nrows:
        missing = sorted(set(range(a.nrows)) - set(rows[hit].tolist()))
        raise PivotBreakdown(f"diagonal entries missing in rows {missing[:10]}")
    return hit


def ilu0(a: CsrMatrix) -> Factorization:
    """Incomplete LU with zero fill-in (IKJ ordering).

    Only positions present in ``a`` are updated, so ``L + U`` has the same
    pattern as ``a``. For matrices whose exact LU creates no fill (for
    example tridiagonal ones) this is the exact factorization.
    """
    if a.nrows != a.ncols:
        raise DimensionError("ilu0 needs a square matrix")
    n = a.nrows
    rp, ci = a.row_ptr, a.col_idx.tolist()
    vals = a.values.copy()
    dpos = _diag_positions(a)
    tol = PIVOT_RTOL * np.max(np.abs(vals[dpos]))

    for i in range(n):
        start, end = int(rp[i]), int(rp[i + 1])
        where = {ci[q]: q for q in range(start, end)}
        for q in range(start, int(dpos[i])):
            k = ci[q]
            lik = vals[q] / vals[dpos[k]]
            vals[q] = lik
            for q2 in range(int(dpos[k]) + 1, int(rp[k + 1])):
                t = where.get(ci[q2])
                if t is not None:
                    vals[t] -= lik * vals[q2]
        if not abs(vals[dpos[i]]) > tol:
            raise PivotBreakdown(f"ilu0: pivot {vals[dpos[i]]:.3e} in row {i}")

    rows = a.row_indices()
    cols = a.col_idx
    strict = cols < rows
    upper = cols >= rows
    lower = from_coo(
        n, n,
        np.concatenate([rows[strict], np.arange(n)]),
        np.concatenate([cols[strict], np.arange(n)]),
        np.concatenate([vals[strict], np.ones(n)]),
    )
    return Factorization(FactorKind.ILU0, lower, from_coo(n, n, rows[upper], cols[upper], vals[upper]))


def ic0(a: CsrMatrix) -> Factorization:
    """Incomplete Cholesky with zero fill-in, ``a ~= L L^T``.

    ``L`` lives on the lower-triangular pattern of ``a``. A non-positive
    pivot means the dropped fill destroyed positive definiteness (or ``a``
    was not SPD to begin with) and raises :class:`PivotBreakdown`.
    """
    if a.nrows != a.ncols:
        raise DimensionError("ic0 needs a square matrix")
    n = a.nrows
    _diag_positions(a)
    rp, ci, av = a.row_ptr, a.col_idx.tolist(), a.values.tolist()
    rows_l: list[dict[int, float]] = []
    out_r, out_c, out_v = [], [], []
    for i in range(n):
        li: dict[int, float] = {}
        diag = 0.0
        for q in range(int(rp[i]), int(rp[i + 1])):
            j = ci[q]
            if j > i:
                break
            if j == i:
                diag = av[q]
                break
            lj = rows_l[j]
            small, big = (li, lj) if len(li) < len(lj) else (lj, li)
            s = av[q] - sum(v * big[k] for k, v in small.items() if k < j and k in big)
            li[j] = s / lj[j]
        d = diag - sum(v * v for v in li.values())
        if not d > 0.0:
            raise PivotBreakdown(f"ic0: non-positive pivot {d:.3e} in row {i}")
        li[i] = math.sqrt(d)
        rows_l.append(li)
        for j, v in li.items():
            out_r.append(i)
            out_c.append(j)
            out_v.append(v)
    lower = from_coo(n, n, out_r, out_c, out_v)
    return Factorization(FactorKind.IC0, lower, transpose(lower))


def factor_dense(a, kind: FactorKind | str) -> Factorization:
    """Exact LU (partial pivoting) or Cholesky of a small matrix.

    ``a`` may be a dense array or a :class:`CsrMatrix`.
    """
    kind = FactorKind(kind)
    if isinstance(a, CsrMatrix):
        a = a.to_dense()
    a = np.asarray(a, dtype=np.float64)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DimensionError(f"factor_dense needs a square matrix, got {a.shape}")
    n = a.shape[0]
    if kind is FactorKind.CHOLESKY:
        try:
            l = sla.cholesky(a, lower=True)
        except np.linalg.LinAlgError as exc:
            raise SingularMatrix(f"Cholesky failed, matrix not SPD: {exc}") from None
        d = np.abs(np.diag(l))
        if d.min() <= n * np.finfo(float).eps * d.max():
            raise SingularMatrix("Cholesky factor is singular to machine precision")
        lower = from_dense(np.tril(l))
        return Factorization(kind, lower, transpose(lower))
    if kind is FactorKind.LU:
        p, l, u = sla.lu(a, p_indices=True)
        d = np.abs(np.diag(u))
        if d.max() == 0.0 or d.min() <= n * np.finfo(float).eps * np.abs(u).max():
            raise SingularMatrix("matrix is singular to machine precision")
        perm = np.argsort(p)
        if np.array_equal(perm, np.arange(n)):
            perm = None
        return Factorization(kind, from_dense(np.tril(l)), from_dense(np.triu(u)), perm)
    raise ConfigError(f"factor_dense supports LU and Cholesky, not {kind.value}")


def apply_inverse(f: Factorization, x) -> np.ndarray:
    """Return ``U^{-1} L^{-1} P^T x`` by forward then back substitution."""
    x = np.asarray(x, dtype=np.float64)
    if x.shape != (f.n,):
        raise DimensionError(f"apply_inverse: factor order {f.n}, vector shape {x.shape}")
    if f.perm is not None:
        x = x[f.perm]
    lower, upper = f._triangular_solvers
    return upper.solve(lower.solve(x))


def factorize(a: CsrMatrix, kind: str = "auto") -> Factorization:
    """Pick and build a factorization by name.

    ``auto`` uses IC0 for symmetric matrices with a positive diagonal and
    ILU0 otherwise. ``lu``/``cholesky`` are exact dense factorizations and
    are refused above :data:`DENSE_LIMIT`.
    """
    if kind == "auto":
        sym = is_symmetric(a) and np.all(a.diagonal() > 0)
        return ic0(a) if sym else ilu0(a)
    if kind == "ic0":
        return ic0(a)
    if kind == "ilu0":
        return ilu0(a)
    if kind in ("lu", "cholesky"):
        if a.nrows > DENSE_LIMIT:
            raise ConfigError(f"exact {kind} limited to order {DENSE_LIMIT}, got {a.nrows}")
        return factor_dense(a, kind)
    raise ConfigError(f"unknown factorization kind {kind!r}")


def default_c_factor(c: CsrMatrix) -> Factorization:
    """Exact Cholesky for blocks up to :data:`DENSE_LIMIT`, IC0 beyond."""
    return factor_dense(c, FactorKind.CHOLESKY) if c.nrows <= DENSE_LIMIT else ic0(c)
