"""Matrix Market coordinate I/O (real/integer, general/symmetric)."""

from __future__ import annotations

from pathlib import Path

import numpy as np

from .errors import MatrixIOError, ParseError, UnsupportedFormat
from .sparse import CsrMatrix, from_coo

__all__ = ["mm_read", "mm_write"]

_BANNER = "%%matrixmarket"


def mm_read(path) -> CsrMatrix:
    """Read a coordinate Matrix Market file into canonical CSR.

    Symmetric files store one triangle; the mirror entries are added here.
    Indices in the file are 1-based. Repeated coordinates are summed.
    """
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise MatrixIOError(f"cannot read {path}: {exc}") from exc
    lines = text.splitlines()
    if not lines:
        raise ParseError(f"{path}: empty file")

    header = lines[0].split()
    if len(header) != 5 or header[0].lower() != _BANNER:
        raise ParseError(f"{path}: malformed header line {lines[0]!r}")
    obj, fmt, field, symmetry = (h.lower() for h in header[1:])
    if obj != "matrix":
        raise ParseError(f"{path}: object {obj!r} is not 'matrix'")
    if fmt != "coordinate":
        raise UnsupportedFormat(f"{path}: only coordinate format is supported, got {fmt!r}")
    if field not in ("real", "integer"):
        raise UnsupportedFormat(f"{path}: field {field!r} not supported")
    if symmetry not in ("general", "symmetric"):
        raise UnsupportedFormat(f"{path}: symmetry {symmetry!r} not supported")

    body = (ln for ln in lines[1:] if ln.strip() and not ln.lstrip().startswith("%"))
    try:
        size = next(body).split()
    except StopIteration:
        raise ParseError(f"{path}: missing size line") from None
    try:
        nrows, ncols, nnz = (int(s) for s in size)
    except ValueError:
        raise ParseError(f"{path}: bad size line {' '.join(size)!r}") from None

    entries = [ln.split() for ln in body]
    if len(entries) != nnz:
        raise ParseError(f"{path}: header declares {nnz} entries, found {len(entries)}")
    if any(len(e) != 3 for e in entries):
        raise ParseError(f"{path}: every entry line needs 'row col value'")
    try:
        rows = np.array([int(e[0]) for e in entries], dtype=np.int64) - 1
        cols = np.array([int(e[1]) for e in entries], dtype=np.int64) - 1
        vals = np.array([float(e[2]) for e in entries], dtype=np.float64)
    except ValueError as exc:
        raise ParseError(f"{path}: non-numeric entry ({exc})") from None
    if nnz and (rows.min() < 0 or cols.min() < 0 or rows.max() >= nrows or cols.max() >= ncols):
        raise ParseError(f"{path}: entry index outside declared {nrows}x{ncols}")

    if symmetry == "symmetric":
        off = rows != cols
        rows, cols, vals = (
            np.concatenate([rows, cols[off]]),
            np.concatenate([cols, rows[off]]),
            np.concatenate([vals, vals[off]]),
        )
    return from_coo(nrows, ncols, rows, cols, vals)


def mm_write(path, a: CsrMatrix, comment: str | None = None) -> None:
    """Write ``a`` as ``coordinate real general`` with 17 significant digits."""
    rows = a.row_indices() + 1
    cols = a.col_idx + 1
    out = ["%%MatrixMarket matrix coordinate real general"]
    if comment:
        out.extend(f"% {line}" for line in comment.splitlines())
    out.append(f"{a.nrows} {a.ncols} {a.nnz}")
    out.extend(f"{r} {c} {v:.17g}" for r, c, v in zip(rows, cols, a.values))
    try:
        Path(path).write_text("\n".join(out) + "\n")
    except OSError as exc:
        raise MatrixIOError(f"cannot write {path}: {exc}") from exc
