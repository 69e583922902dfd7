"""Experiment harness: build a test problem, run one solver on it, and turn the
result into a table row.

Method names:

``pslr_gmres``
    Saddle problems: PSLR built from the blocks. With ``pslr_side='initial'``
    (default) the PSLR approximate solve supplies the GMRES starting vector
    when ``x0='pre'`` and GMRES itself runs unpreconditioned; with
    ``pslr_side='right'`` PSLR is also the right preconditioner. Problems
    without block structure use the Pinv approximate inverse of the
    Jacobi-scaled matrix in the same two roles.
``pinv``
    GMRES right-preconditioned by the Pinv approximate inverse.
``gmres``, ``jacobi_gmres``, ``cg``, ``pcg_ic0``, ``adi``
    Baselines.
"""

from __future__ import annotations

import csv
import io
import os
import time
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from .baselines import AdiConfig, adi_solve, jacobi_inverse, rcm_order
from .errors import ConfigError, MatrixIOError
from .factor import ic0
from .generators import BANDED_PRESETS, PRESET_ALIASES, banded_preset, gen_example1, gen_random_saddle
from .krylov import LinearOperator, SolveReport, Status, as_operator, gmres, pcg
from .mmio import mm_read
from .precond import (
    apply_pslr,
    build_pinv,
    build_pslr,
    jacobi_splitting,
    pslr_operator,
    schur_m_operator,
)
from .saddle import SaddleSystem, assemble_saddle
from .sparse import CsrMatrix, from_coo, identity, is_symmetric, permute_columns, permute_symmetric, spmv

__all__ = [
    "PROBLEMS",
    "METHODS",
    "COLUMNS",
    "BenchConfig",
    "Problem",
    "BenchResult",
    "make_problem",
    "run_bench",
    "rows_to_csv",
    "rows_to_markdown",
    "emit_spectrum",
    "preconditioned_schur_operator",
    "default_seed",
]

PROBLEMS = ("example1", *BANDED_PRESETS, *PRESET_ALIASES, "mm_file", "mm_saddle", "random_saddle")
METHODS = ("pslr_gmres", "gmres", "cg", "pcg_ic0", "pinv", "adi", "jacobi_gmres")
X0_KINDS = ("pre", "zero", "random")
COLUMNS = (
    "problem", "method", "m", "r_k", "x0", "o-t", "p-t", "i-t", "t-t",
    "n-iter", "error", "status", "true_error",
)
TIMING_COLUMNS = ("o-t", "p-t", "i-t", "t-t")
MAX_SERIES_TERMS = 5


def default_seed() -> int:
    return int(os.environ.get("PSLR_SEED", "0"))


@dataclass
class BenchConfig:
    problem: str = "example1"
    method: str = "pslr_gmres"
    m: int = 5
    r_k: int = 15
    tol: float = 1e-6
    maxit: int = 500
    x0: str = "pre"
    reorder: bool = False
    seed: int = field(default_factory=default_seed)
    path: str | None = None
    n: int | None = None
    p: int | None = None
    m_norm: float | None = None
    pslr_side: str = "initial"
    ata_kind: str = "auto"
    alpha: float = 1.5
    allow_large_m: bool = False

    def validate(self) -> None:
        if self.problem not in PROBLEMS:
            raise ConfigError(f"unknown problem {self.problem!r}; choose from {', '.join(PROBLEMS)}")
        if self.method not in METHODS:
            raise ConfigError(f"unknown method {self.method!r}; choose from {', '.join(METHODS)}")
        if self.x0 not in X0_KINDS:
            raise ConfigError(f"x0 must be one of {X0_KINDS}")
        if not self.tol > 0:
            raise ConfigError("tol must be positive")
        if self.maxit < 1:
            raise ConfigError("maxit must be >= 1")
        if self.m < 0 or (self.m > MAX_SERIES_TERMS and not self.allow_large_m):
            raise ConfigError(f"m must lie in [0, {MAX_SERIES_TERMS}] (pass allow_large_m to exceed)")
        if self.r_k < 1:
            raise ConfigError("r_k must be >= 1")
        if self.pslr_side not in ("initial", "right"):
            raise ConfigError("pslr_side must be 'initial' or 'right'")
        if self.problem in ("mm_file", "mm_saddle") and not self.path:
            raise ConfigError(f"problem {self.problem} needs a path")
        if self.x0 == "pre" and self.method not in ("pslr_gmres", "pinv"):
            raise ConfigError(f"x0='pre' needs a preprocessing method, not {self.method}")


@dataclass
class Problem:
    name: str
    matrix: CsrMatrix
    rhs: np.ndarray
    saddle: SaddleSystem | None = None


def _rng(seed: int, stream: int) -> np.random.Generator:
    return np.random.default_rng([seed, stream])


def make_problem(cfg: BenchConfig) -> Problem:
    """Construct the matrix and right-hand side named by ``cfg``.

    Band matrices use the all-ones right-hand side; every other problem
    draws a standard normal one from the seeded generator.
    """
    name = cfg.problem
    if name in BANDED_PRESETS or name in PRESET_ALIASES:
        a = banded_preset(name, cfg.n)
        return Problem(name, a, np.ones(a.nrows))
    if name == "example1":
        sys = gen_example1(cfg.n or 256)
    elif name == "random_saddle":
        n = cfg.n or 64
        sys = gen_random_saddle(n, cfg.p or n, cfg.seed, m_norm=cfg.m_norm)
    elif name in ("mm_file", "mm_saddle"):
        if not Path(cfg.path).is_file():
            raise MatrixIOError(f"matrix file not found: {cfg.path}")
        a = mm_read(cfg.path)
        if name == "mm_file":
            return Problem(name, a, _rng(cfg.seed, 1).standard_normal(a.nrows))
        # the file matrix becomes the (1,1) block; B is dense Gaussian, C = I
        n = a.nrows
        p = cfg.p or n
        bd = _rng(cfg.seed, 3).standard_normal((p, n))
        rows, cols = np.indices(bd.shape).reshape(2, -1)
        sys = SaddleSystem(a, from_coo(p, n, rows, cols, bd.ravel()), identity(p))
    else:  # pragma: no cover - validate() guards this
        raise ConfigError(name)
    rhs = _rng(cfg.seed, 1).standard_normal(sys.dim)
    return Problem(name, assemble_saddle(sys), rhs, sys)


def _reorder(problem: Problem) -> tuple[Problem, np.ndarray]:
    """Apply RCM; returns the permuted problem and the full-length permutation."""
    if problem.saddle is None:
        perm = rcm_order(problem.matrix)
        a = permute_symmetric(problem.matrix, perm)
        return Problem(problem.name, a, problem.rhs[perm]), perm
    sys = problem.saddle
    perm_k = rcm_order(sys.ata)
    new = SaddleSystem(
        permute_symmetric(sys.ata, perm_k), permute_columns(sys.b_block, perm_k), sys.c_block, sys.sign
    )
    perm = np.concatenate([perm_k, np.arange(sys.n, sys.dim)])
    return Problem(problem.name, assemble_saddle(new), problem.rhs[perm], new), perm


@dataclass
class BenchResult:
    report: SolveReport
    row: dict
    x: np.ndarray


def _approx_inverse(cfg: BenchConfig, problem: Problem) -> LinearOperator:
    """Approximate inverse used by the PSLR/Pinv methods, built from scratch."""
    if cfg.method == "pslr_gmres" and problem.saddle is not None:
        P = build_pslr(problem.saddle, cfg.m, cfg.r_k, ata_kind=cfg.ata_kind)
        return pslr_operator(P, problem.saddle)
    f_op, d = jacobi_splitting(problem.matrix)
    pin = build_pinv(f_op, problem.rhs / d, cfg.m, cfg.r_k)
    return LinearOperator(problem.matrix.nrows, lambda v: pin(v / d))


def run_bench(cfg: BenchConfig) -> BenchResult:
    """Run one configuration end to end and build its table row."""
    cfg.validate()
    problem = make_problem(cfg)
    t_order = 0.0
    perm = None
    if cfg.reorder:
        t0 = time.perf_counter()
        problem, perm = _reorder(problem)
        t_order = time.perf_counter() - t0

    a, b = problem.matrix, problem.rhs
    n = a.nrows
    symmetric = is_symmetric(a)
    x0 = np.zeros(n) if cfg.x0 != "random" else _rng(cfg.seed, 2).standard_normal(n)

    t0 = time.perf_counter()
    precond = None
    method = cfg.method
    if method in ("pslr_gmres", "pinv"):
        approx = _approx_inverse(cfg, problem)
        if cfg.x0 == "pre":
            x0 = approx(b)
        if method == "pinv" or cfg.pslr_side == "right":
            precond = approx
    elif method == "jacobi_gmres":
        precond = jacobi_inverse(a)
    elif method == "pcg_ic0":
        if not symmetric:
            raise ConfigError("pcg_ic0 needs a symmetric matrix")
        precond = LinearOperator(n, ic0(a).solve)
    elif method == "cg" and not symmetric:
        raise ConfigError("cg needs a symmetric matrix")
    t_precond = time.perf_counter() - t0

    if method in ("cg", "pcg_ic0"):
        x, rep = pcg(a, b, x0, cfg.tol, cfg.maxit, precond)
    elif method == "adi":
        x, rep = adi_solve(a, b, AdiConfig(cfg.alpha, cfg.tol, cfg.maxit), x0)
    else:
        x, rep = gmres(a, b, x0, cfg.tol, cfg.maxit, precond)

    rep.time_order = t_order
    rep.time_precond = t_precond
    rep.time_total = t_order + t_precond + rep.time_iterate
    true_error = float(np.linalg.norm(b - spmv(a, x)) / np.linalg.norm(b))
    if perm is not None:
        unperm = np.empty_like(x)
        unperm[perm] = x
        x = unperm

    if rep.status is Status.MAX_ITERATIONS:
        n_iter = "-" if cfg.maxit >= 3000 else "F"
    else:
        n_iter = str(rep.iterations)
    uses_series = method in ("pslr_gmres", "pinv")
    row = {
        "problem": cfg.problem if cfg.n is None else f"{cfg.problem}[{cfg.n}]",
        "method": method,
        "m": cfg.m if uses_series else "",
        "r_k": cfg.r_k if uses_series else "",
        "x0": cfg.x0,
        "o-t": f"{rep.time_order:.6f}",
        "p-t": f"{rep.time_precond:.6f}",
        "i-t": f"{rep.time_iterate:.6f}",
        "t-t": f"{rep.time_total:.6f}",
        "n-iter": n_iter,
        "error": f"{rep.relative_residual:.6e}",
        "status": rep.status.value,
        "true_error": f"{true_error:.6e}",
    }
    return BenchResult(rep, row, x)


def rows_to_csv(rows, timings: bool = True) -> str:
    cols = [c for c in COLUMNS if timings or c not in TIMING_COLUMNS]
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=cols, extrasaction="ignore", lineterminator="\n")
    w.writeheader()
    w.writerows(rows)
    return buf.getvalue()


def rows_to_markdown(rows, timings: bool = True) -> str:
    cols = [c for c in COLUMNS if timings or c not in TIMING_COLUMNS]
    lines = ["| " + " | ".join(cols) + " |", "|" + "|".join("---" for _ in cols) + "|"]
    lines += ["| " + " | ".join(str(r[c]) for c in cols) + " |" for r in rows]
    return "\n".join(lines) + "\n"


def preconditioned_schur_operator(sys: SaddleSystem, P, lowrank: bool = True) -> LinearOperator:
    """``v -> S_app^{-1} S v``: the Schur complement after PSLR preconditioning.

    ``S`` is applied as ``C (I - M)`` with the preconditioner's own
    factorizations. ``lowrank=False`` drops the Woodbury correction and
    leaves the bare truncated series.
    """
    m_op = schur_m_operator(sys, P.ata_fact, P.c_fact)
    c = sys.c_block

    def apply(v):
        sv = spmv(c, v - m_op(v))
        if lowrank:
            return P.schur_inverse(sys, sv)
        from .precond import power_series_apply

        return power_series_apply(m_op, P.c_fact, P.m, sv)

    return LinearOperator(sys.p, apply)


def emit_spectrum(a, out, cap: int = 1024) -> np.ndarray:
    """Write the eigenvalues of ``a`` (densified) to a ``re,im`` CSV.

    Rows are sorted by real then imaginary part so the file is reproducible.
    Returns the sorted eigenvalues.
    """
    op = as_operator(a)
    if op.dim > cap:
        raise ConfigError(f"spectrum of order {op.dim} exceeds cap {cap}")
    dense = a.to_dense() if isinstance(a, CsrMatrix) else op.todense()
    eig = np.linalg.eigvals(dense)
    eig = eig[np.lexsort((eig.imag, eig.real))]
    lines = ["re,im"] + [f"{float(z.real)!r},{float(z.imag)!r}" for z in eig]
    Path(out).write_text("\n".join(lines) + "\n")
    return eig


def config_dict(cfg: BenchConfig) -> dict:
    return asdict(cfg)
