"""Test problems: Toeplitz band matrices, the arbitrage-pricing saddle system,
and seeded random saddle systems."""

from __future__ import annotations

import numpy as np

from .errors import DimensionError, InvalidInput
from .saddle import SaddleSystem, Sign
from .sparse import CsrMatrix, add, from_coo, identity, transpose

__all__ = [
    "gen_banded",
    "gen_example1",
    "gen_random_saddle",
    "BANDED_PRESETS",
    "banded_preset",
    "PRESET_ALIASES",
]

# (offsets, values, default order)
BANDED_PRESETS = {
    "banded3": ([-1, 0, 1], [2.0, 6.0, 2.0], 128),
    "banded5": ([-2, -1, 0, 1, 2], [1.0, 2.0, 6.0, 2.0, 1.0], 128),
    "banded7": ([-3, -2, -1, 0, 1, 2, 3], [0.5, 1.0, 2.0, 6.0, 2.0, 1.0, 0.5], 256),
    # sub-diagonal -1, diagonal 2, super-diagonal 0.5
    "tridiag_nonsym": ([-1, 0, 1], [-1.0, 2.0, 0.5], 128),
}
# alternative spelling accepted on the command line
PRESET_ALIASES = {"tridiag_paper": "tridiag_nonsym"}


def gen_banded(n: int, offsets, vals) -> CsrMatrix:
    """Toeplitz band matrix with ``vals[k]`` on diagonal ``offsets[k]``.

    Negative offsets are below the main diagonal.
    """
    offsets = [int(o) for o in offsets]
    vals = [float(v) for v in vals]
    if len(offsets) != len(vals):
        raise DimensionError("offsets and vals must have equal length")
    if len(set(offsets)) != len(offsets):
        raise DimensionError("offsets must be distinct")
    if any(abs(o) >= n for o in offsets):
        raise DimensionError(f"offset out of range for order {n}")
    rows, cols, data = [], [], []
    for off, v in zip(offsets, vals):
        r = np.arange(max(0, -off), min(n, n - off))
        rows.append(r)
        cols.append(r + off)
        data.append(np.full(r.size, v))
    return from_coo(n, n, np.concatenate(rows), np.concatenate(cols), np.concatenate(data))


def banded_preset(name: str, n: int | None = None) -> CsrMatrix:
    offsets, vals, default_n = BANDED_PRESETS[PRESET_ALIASES.get(name, name)]
    return gen_banded(default_n if n is None else n, offsets, vals)


def gen_example1(order: int = 256) -> SaddleSystem:
    """Saddle system ``[[K, B^T], [-B, I]]`` with ``K = tridiag(1, 4, 1)``.

    ``B^T`` has a single unit entry in its bottom-left corner, so ``B`` has a
    one at (first row, last column). ``order`` is the assembled size; each
    block is ``order // 2`` square.
    """
    if order < 4 or order % 2:
        raise InvalidInput("order must be an even number >= 4")
    n = order // 2
    ata = gen_banded(n, [-1, 0, 1], [1.0, 4.0, 1.0])
    b = from_coo(n, n, [0], [n - 1], [1.0])
    return SaddleSystem(ata, b, identity(n), Sign.POSITIVE)


def _random_spd(n: int, density: float, rng: np.random.Generator) -> CsrMatrix:
    """Sparse symmetric, strictly diagonally dominant matrix with positive diagonal."""
    nnz = max(1, int(density * n * n / 2))
    r = rng.integers(0, n, nnz)
    c = rng.integers(0, n, nnz)
    off = r != c
    half = from_coo(n, n, r[off], c[off], rng.uniform(-1.0, 1.0, np.count_nonzero(off)))
    sym = add(half, transpose(half))
    rowsum = np.bincount(sym.row_indices(), weights=np.abs(sym.values), minlength=n)
    diag = rowsum + rng.uniform(0.5, 1.5, n)
    return add(sym, from_coo(n, n, np.arange(n), np.arange(n), diag))


def gen_random_saddle(
    n: int,
    p: int,
    seed: int,
    density: float = 0.1,
    m_norm: float | None = None,
    identity_c: bool = False,
) -> SaddleSystem:
    """Seeded random positive saddle system.

    ``K`` and ``C`` are sparse, symmetric and diagonally dominant (hence SPD);
    ``B`` is a sparse Gaussian p x n matrix with at least one entry per row.

    If ``m_norm`` is given, ``B`` is rescaled so that the Schur iteration
    matrix ``M = -C^{-1} B K^{-1} B^T`` has spectral norm exactly ``m_norm``.
    The calibration is dense and meant for desk-scale sizes.
    """
    if n < 1 or p < 1:
        raise InvalidInput("block sizes must be positive")
    rng = np.random.default_rng(seed)
    ata = _random_spd(n, density, rng)
    c = identity(p) if identity_c else _random_spd(p, min(density, 0.5), rng)
    nnz = max(p, int(density * n * p))
    r = np.concatenate([np.arange(p), rng.integers(0, p, nnz - p)])
    col = rng.integers(0, n, nnz)
    b = from_coo(p, n, r, col, rng.standard_normal(nnz))
    if m_norm is not None:
        kd, cd, bd = ata.to_dense(), c.to_dense(), b.to_dense()
        m = -np.linalg.solve(cd, bd @ np.linalg.solve(kd, bd.T))
        norm = np.linalg.norm(m, 2)
        if norm == 0.0:
            raise InvalidInput("cannot calibrate: M is zero")
        b = b.scaled(np.sqrt(m_norm / norm))
    return SaddleSystem(ata, b, c, Sign.POSITIVE)
