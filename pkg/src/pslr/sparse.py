"""Compressed-row sparse matrices.

:class:`CsrMatrix` is the operand type used throughout the package. It is
immutable and always canonical: column indices strictly increase inside a
row, so there are no duplicates. Explicit zeros are allowed.

Matrix-vector products go through scipy's compiled CSR kernel, which walks
rows in order and each row's entries in ascending column order.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np
import scipy.sparse as sps

from .errors import DimensionError, InvalidInput

__all__ = [
    "CsrMatrix",
    "spmv",
    "transpose",
    "from_coo",
    "from_dense",
    "identity",
    "diagonal_matrix",
    "add",
    "permute_symmetric",
    "bandwidth",
    "is_symmetric",
]


def _frozen(a, dtype):
    a = np.ascontiguousarray(a, dtype=dtype)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class CsrMatrix:
    nrows: int
    ncols: int
    row_ptr: np.ndarray
    col_idx: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "row_ptr", _frozen(self.row_ptr, np.int64))
        object.__setattr__(self, "col_idx", _frozen(self.col_idx, np.int64))
        object.__setattr__(self, "values", _frozen(self.values, np.float64))
        self._validate()

    def _validate(self):
        rp, ci = self.row_ptr, self.col_idx
        if self.nrows < 0 or self.ncols < 0:
            raise InvalidInput("negative dimension")
        if rp.shape != (self.nrows + 1,):
            raise InvalidInput("row_ptr must have length nrows + 1")
        if rp[0] != 0 or np.any(np.diff(rp) < 0):
            raise InvalidInput("row_ptr must start at 0 and be non-decreasing")
        nnz = int(rp[-1])
        if ci.shape != (nnz,) or self.values.shape != (nnz,):
            raise InvalidInput("col_idx/values length must equal row_ptr[-1]")
        if nnz == 0:
            return
        if ci.min() < 0 or ci.max() >= self.ncols:
            raise InvalidInput("column index out of range")
        # strictly increasing within each row: every step inside a row is > 0
        step = np.diff(ci)
        row_start = np.zeros(nnz, dtype=bool)
        row_start[rp[:-1][rp[:-1] < nnz]] = True
        if np.any(step[~row_start[1:]] <= 0):
            raise InvalidInput("column indices must be strictly increasing within rows")

    @property
    def shape(self) -> tuple[int, int]:
        return (self.nrows, self.ncols)

    @property
    def nnz(self) -> int:
        return int(self.row_ptr[-1])

    @cached_property
    def _scipy(self) -> sps.csr_matrix:
        return sps.csr_matrix(
            (self.values, self.col_idx, self.row_ptr), shape=self.shape, copy=False
        )

    def to_scipy(self) -> sps.csr_matrix:
        return self._scipy.copy()

    def to_dense(self) -> np.ndarray:
        return self._scipy.toarray()

    def row_indices(self) -> np.ndarray:
        """Row index of every stored entry (COO row array)."""
        return np.repeat(np.arange(self.nrows), np.diff(self.row_ptr))

    def diagonal(self) -> np.ndarray:
        """Main diagonal; missing entries read as zero."""
        d = np.zeros(min(self.shape))
        rows = self.row_indices()
        on = rows == self.col_idx
        d[rows[on]] = self.values[on]
        return d

    def has_full_diagonal(self) -> bool:
        rows = self.row_indices()
        return np.count_nonzero(rows == self.col_idx) == min(self.shape)

    def scaled(self, alpha: float) -> "CsrMatrix":
        return CsrMatrix(self.nrows, self.ncols, self.row_ptr, self.col_idx, alpha * self.values)

    def __matmul__(self, x):
        return spmv(self, x)

    def __repr__(self):
        return f"CsrMatrix({self.nrows}x{self.ncols}, nnz={self.nnz})"


def spmv(a: CsrMatrix, x) -> np.ndarray:
    """Compute ``a @ x`` for a 1-D vector ``x``."""
    x = np.asarray(x, dtype=np.float64)
    if x.ndim != 1 or x.shape[0] != a.ncols:
        raise DimensionError(f"spmv: matrix is {a.nrows}x{a.ncols}, vector has shape {x.shape}")
    return a._scipy @ x


def from_coo(nrows, ncols, rows, cols, vals) -> CsrMatrix:
    """Build a canonical CSR matrix from triplets, summing duplicates."""
    rows = np.asarray(rows, dtype=np.int64)
    cols = np.asarray(cols, dtype=np.int64)
    vals = np.asarray(vals, dtype=np.float64)
    if not (rows.shape == cols.shape == vals.shape):
        raise DimensionError("row, column and value arrays differ in length")
    if rows.size and (rows.min() < 0 or rows.max() >= nrows or cols.min() < 0 or cols.max() >= ncols):
        raise DimensionError("triplet index outside matrix bounds")
    order = np.lexsort((cols, rows))
    rows, cols, vals = rows[order], cols[order], vals[order]
    if rows.size:
        new = np.ones(rows.size, dtype=bool)
        new[1:] = (rows[1:] != rows[:-1]) | (cols[1:] != cols[:-1])
        starts = np.flatnonzero(new)
        vals = np.add.reduceat(vals, starts)
        rows, cols = rows[starts], cols[starts]
    row_ptr = np.zeros(nrows + 1, dtype=np.int64)
    np.cumsum(np.bincount(rows, minlength=nrows), out=row_ptr[1:])
    return CsrMatrix(nrows, ncols, row_ptr, cols, vals)


def from_dense(a, keep_zeros: bool = False) -> CsrMatrix:
    a = np.atleast_2d(np.asarray(a, dtype=np.float64))
    if keep_zeros:
        rows, cols = np.indices(a.shape).reshape(2, -1)
    else:
        rows, cols = np.nonzero(a)
    return from_coo(a.shape[0], a.shape[1], rows, cols, a[rows, cols])


def identity(n: int) -> CsrMatrix:
    return diagonal_matrix(np.ones(n))


def diagonal_matrix(d) -> CsrMatrix:
    d = np.asarray(d, dtype=np.float64)
    n = d.size
    return CsrMatrix(n, n, np.arange(n + 1), np.arange(n), d)


def transpose(a: CsrMatrix) -> CsrMatrix:
    """Canonical CSR of ``a.T``.

    A stable counting sort on the column index keeps rows ascending inside
    each output row, so no re-sorting is needed and values are moved, not
    recomputed.
    """
    order = np.argsort(a.col_idx, kind="stable")
    counts = np.bincount(a.col_idx, minlength=a.ncols)
    row_ptr = np.zeros(a.ncols + 1, dtype=np.int64)
    np.cumsum(counts, out=row_ptr[1:])
    return CsrMatrix(a.ncols, a.nrows, row_ptr, a.row_indices()[order], a.values[order])


def add(a: CsrMatrix, b: CsrMatrix, alpha: float = 1.0, beta: float = 1.0) -> CsrMatrix:
    """``alpha * a + beta * b`` on the union of both patterns."""
    if a.shape != b.shape:
        raise DimensionError(f"cannot add {a.shape} and {b.shape}")
    rows = np.concatenate([a.row_indices(), b.row_indices()])
    cols = np.concatenate([a.col_idx, b.col_idx])
    vals = np.concatenate([alpha * a.values, beta * b.values])
    return from_coo(a.nrows, a.ncols, rows, cols, vals)


def permute_symmetric(a: CsrMatrix, perm) -> CsrMatrix:
    """Return ``P a P^T`` where row ``i`` of the result is row ``perm[i]`` of ``a``."""
    perm = np.asarray(perm, dtype=np.int64)
    if a.nrows != a.ncols or perm.shape != (a.nrows,):
        raise DimensionError("symmetric permutation needs a square matrix and matching permutation")
    inv = np.empty_like(perm)
    inv[perm] = np.arange(perm.size)
    return from_coo(a.nrows, a.ncols, inv[a.row_indices()], inv[a.col_idx], a.values)


def permute_columns(a: CsrMatrix, perm) -> CsrMatrix:
    """Return ``a P^T``: column ``j`` of the result is column ``perm[j]`` of ``a``."""
    perm = np.asarray(perm, dtype=np.int64)
    inv = np.empty_like(perm)
    inv[perm] = np.arange(perm.size)
    return from_coo(a.nrows, a.ncols, a.row_indices(), inv[a.col_idx], a.values)


def bandwidth(a: CsrMatrix) -> int:
    if a.nnz == 0:
        return 0
    return int(np.max(np.abs(a.row_indices() - a.col_idx)))


def is_symmetric(a: CsrMatrix, rtol: float = 1e-12) -> bool:
    if a.nrows != a.ncols:
        return False
    diff = add(a, transpose(a), 1.0, -1.0)
    scale = np.max(np.abs(a.values)) if a.nnz else 0.0
    return diff.nnz == 0 or np.max(np.abs(diff.values)) <= rtol * scale
