"""Two-by-two block saddle point systems.

A :class:`SaddleSystem` holds the blocks ``K = A^T A`` (n x n), ``B``
(p x n) and ``C`` (p x p). The sign decides where the minus goes::

    POSITIVE:  [[K, B^T], [-B,  C]]
    NEGATIVE:  [[K, B^T], [ B, -C]]
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import DimensionError, InvalidInput
from .sparse import CsrMatrix, from_coo, is_symmetric, transpose

__all__ = ["Sign", "SaddleSystem", "assemble_saddle"]


class Sign(enum.Enum):
    POSITIVE = "positive"
    NEGATIVE = "negative"


@dataclass(frozen=True, eq=False)
class SaddleSystem:
    ata: CsrMatrix
    b_block: CsrMatrix
    c_block: CsrMatrix
    sign: Sign = Sign.POSITIVE

    def __post_init__(self):
        n, p = self.ata.nrows, self.c_block.nrows
        if self.ata.shape != (n, n):
            raise DimensionError(f"ata must be square, got {self.ata.shape}")
        if self.c_block.shape != (p, p):
            raise DimensionError(f"c_block must be square, got {self.c_block.shape}")
        if self.b_block.shape != (p, n):
            raise DimensionError(f"b_block must be {p}x{n}, got {self.b_block.shape}")
        if not is_symmetric(self.ata):
            raise InvalidInput("ata is not symmetric")
        if not is_symmetric(self.c_block):
            raise InvalidInput("c_block is not symmetric")

    @property
    def n(self) -> int:
        return self.ata.nrows

    @property
    def p(self) -> int:
        return self.c_block.nrows

    @property
    def dim(self) -> int:
        return self.n + self.p

    @cached_property
    def b_transpose(self) -> CsrMatrix:
        return transpose(self.b_block)

    def split(self, v) -> tuple[np.ndarray, np.ndarray]:
        v = np.asarray(v, dtype=np.float64)
        if v.shape != (self.dim,):
            raise DimensionError(f"expected a vector of length {self.dim}, got {v.shape}")
        return v[: self.n], v[self.n :]


def assemble_saddle(sys: SaddleSystem) -> CsrMatrix:
    """Assemble the full (n+p) x (n+p) matrix for ``sys``."""
    n = sys.n
    k, b, bt, c = sys.ata, sys.b_block, sys.b_transpose, sys.c_block
    lower_sign, c_sign = (-1.0, 1.0) if sys.sign is Sign.POSITIVE else (1.0, -1.0)
    rows = np.concatenate([k.row_indices(), bt.row_indices(), b.row_indices() + n, c.row_indices() + n])
    cols = np.concatenate([k.col_idx, bt.col_idx + n, b.col_idx, c.col_idx + n])
    vals = np.concatenate([k.values, bt.values, lower_sign * b.values, c_sign * c.values])
    return from_coo(sys.dim, sys.dim, rows, cols, vals)
