"""PSLR-GMRES against the shifted HSS (ADI) iteration on three band matrices.

All-ones right-hand side, shift alpha = 1.5, ADI capped at 300 sweeps.

    python scripts/adi_comparison.py
"""

from pslr.bench import BenchConfig, run_bench

from _common import parser, save


def main():
    p = parser(__doc__)
    p.add_argument("--alpha", type=float, default=1.5)
    args = p.parse_args()
    rows = []
    for problem in ("banded3", "banded5", "banded7"):
        rows.append(run_bench(BenchConfig(problem=problem, method="pslr_gmres", seed=args.seed)).row)
        rows.append(
            run_bench(BenchConfig(problem=problem, method="adi", x0="zero", alpha=args.alpha, maxit=300)).row
        )
    save(rows, args.out, "adi_comparison")


if __name__ == "__main__":
    main()
