"""Command-line front end: ``pslr gen | solve | bench | spectrum``.

Exit codes: 0 when every run converged, 2 when some run hit its iteration
cap or broke down, 1 on errors, 64 on a usage error.
"""

from __future__ import annotations

import argparse
import itertools
import sys
from dataclasses import replace
from pathlib import Path

from .bench import (
    METHODS,
    PROBLEMS,
    BenchConfig,
    default_seed,
    emit_spectrum,
    make_problem,
    preconditioned_schur_operator,
    rows_to_csv,
    rows_to_markdown,
    run_bench,
)
from .errors import PslrError
from .mmio import mm_write
from .precond import build_pslr
from .sparse import from_dense

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_NOT_CONVERGED = 2
EXIT_USAGE = 64


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def parse_int_list(text: str) -> list[int]:
    """``"3"``, ``"1,3,5"`` or an inclusive range ``"0..5"``."""
    out = []
    for part in text.split(","):
        part = part.strip()
        if ".." in part:
            lo, hi = part.split("..", 1)
            out.extend(range(int(lo), int(hi) + 1))
        else:
            out.append(int(part))
    return out


def _problem_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--problem", choices=PROBLEMS, default="example1")
    p.add_argument("--path", help="Matrix Market file for mm_file / mm_saddle")
    p.add_argument("--n", type=int, help="problem order (assembled order for example1)")
    p.add_argument("--p", type=int, help="constraint block size for random problems")
    p.add_argument("--m-norm", type=float, help="target ||M||_2 for random_saddle")
    p.add_argument("--seed", type=int, default=None, help="RNG seed (default: $PSLR_SEED or 0)")


def _solver_args(p: argparse.ArgumentParser, lists: bool) -> None:
    conv = str if lists else int
    p.add_argument("--method", default="pslr_gmres", help=f"one of {', '.join(METHODS)}")
    p.add_argument("--m", type=conv, default="5" if lists else 5)
    p.add_argument("--rk", type=conv, default="15" if lists else 15)
    p.add_argument("--x0", default=None, help="pre, zero or random")
    p.add_argument("--tol", type=float, default=1e-6)
    p.add_argument("--maxit", type=int, default=500)
    p.add_argument("--reorder", action="store_true", help="apply RCM before solving")
    p.add_argument("--pslr-side", choices=("initial", "right"), default="initial")
    p.add_argument("--ata-kind", choices=("auto", "ic0", "ilu0", "lu", "cholesky"), default="auto")
    p.add_argument("--alpha", type=float, default=1.5, help="ADI shift")
    p.add_argument("--allow-large-m", action="store_true")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="pslr", description="PSLR saddle-point solver experiments")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    g = sub.add_parser("gen", help="write a test problem as Matrix Market files")
    _problem_args(g)
    g.add_argument("--out", required=True, help="output directory")

    s = sub.add_parser("solve", help="run one configuration and print its report")
    _problem_args(s)
    _solver_args(s, lists=False)

    b = sub.add_parser("bench", help="sweep methods / m / r_k / x0 and tabulate")
    _problem_args(b)
    _solver_args(b, lists=True)
    b.add_argument("--out", help="CSV output file (default: stdout)")
    b.add_argument("--md", help="Markdown table output file")
    b.add_argument("--no-timings", action="store_true", help="omit wall-clock columns")

    sp = sub.add_parser("spectrum", help="eigenvalues of a preconditioned Schur operator or a matrix")
    _problem_args(sp)
    sp.add_argument("--m", type=int, default=5)
    sp.add_argument("--rk", type=int, default=15)
    sp.add_argument("--no-lowrank", action="store_true", help="drop the low-rank correction")
    sp.add_argument("--matrix", action="store_true", help="spectrum of the problem matrix itself")
    sp.add_argument("--cap", type=int, default=1024)
    sp.add_argument("--ata-kind", choices=("auto", "ic0", "ilu0", "lu", "cholesky"), default="auto")
    sp.add_argument("--out", required=True)
    return parser


def _base_config(ns) -> BenchConfig:
    return BenchConfig(
        problem=ns.problem,
        path=ns.path,
        n=ns.n,
        p=ns.p,
        m_norm=ns.m_norm,
        seed=default_seed() if ns.seed is None else ns.seed,
    )


def _default_x0(method: str) -> str:
    return "pre" if method in ("pslr_gmres", "pinv") else "zero"


def _solver_config(ns, base: BenchConfig, method: str, m: int, r_k: int, x0: str | None) -> BenchConfig:
    return replace(
        base,
        method=method,
        m=m,
        r_k=r_k,
        x0=x0 or _default_x0(method),
        tol=ns.tol,
        maxit=ns.maxit,
        reorder=ns.reorder,
        pslr_side=ns.pslr_side,
        ata_kind=ns.ata_kind,
        alpha=ns.alpha,
        allow_large_m=ns.allow_large_m,
    )


def cmd_gen(ns) -> int:
    problem = make_problem(_base_config(ns))
    out = Path(ns.out)
    out.mkdir(parents=True, exist_ok=True)
    if problem.saddle is not None:
        sys_ = problem.saddle
        mm_write(out / "ata.mtx", sys_.ata)
        mm_write(out / "b.mtx", sys_.b_block)
        mm_write(out / "c.mtx", sys_.c_block)
    else:
        mm_write(out / "a.mtx", problem.matrix)
    mm_write(out / "rhs.mtx", from_dense(problem.rhs[:, None]))
    return EXIT_OK


def cmd_solve(ns) -> int:
    cfg = _solver_config(ns, _base_config(ns), ns.method, ns.m, ns.rk, ns.x0)
    res = run_bench(cfg)
    for key, value in res.row.items():
        print(f"{key}: {value}")
    return EXIT_OK if res.report.converged else EXIT_NOT_CONVERGED


def cmd_bench(ns) -> int:
    base = _base_config(ns)
    methods = [m.strip() for m in ns.method.split(",")]
    x0s = [x.strip() for x in ns.x0.split(",")] if ns.x0 else [None]
    rows, all_ok = [], True
    for method, m, r_k, x0 in itertools.product(
        methods, parse_int_list(ns.m), parse_int_list(ns.rk), x0s
    ):
        res = run_bench(_solver_config(ns, base, method, m, r_k, x0))
        rows.append(res.row)
        all_ok &= res.report.converged
    timings = not ns.no_timings
    text = rows_to_csv(rows, timings)
    if ns.out:
        Path(ns.out).write_text(text)
    else:
        sys.stdout.write(text)
    if ns.md:
        Path(ns.md).write_text(rows_to_markdown(rows, timings))
    return EXIT_OK if all_ok else EXIT_NOT_CONVERGED


def cmd_spectrum(ns) -> int:
    problem = make_problem(_base_config(ns))
    if ns.matrix or problem.saddle is None:
        emit_spectrum(problem.matrix, ns.out, ns.cap)
        return EXIT_OK
    P = build_pslr(problem.saddle, ns.m, ns.rk, ata_kind=ns.ata_kind)
    op = preconditioned_schur_operator(problem.saddle, P, lowrank=not ns.no_lowrank)
    emit_spectrum(op, ns.out, ns.cap)
    return EXIT_OK


COMMANDS = {"gen": cmd_gen, "solve": cmd_solve, "bench": cmd_bench, "spectrum": cmd_spectrum}


def main(argv=None) -> int:
    ns = build_parser().parse_args(argv)
    try:
        return COMMANDS[ns.command](ns)
    except (PslrError, OSError, ValueError) as exc:
        print(f"pslr: error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
