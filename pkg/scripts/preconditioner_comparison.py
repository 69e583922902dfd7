"""PSLR-GMRES against Jacobi-preconditioned GMRES and plain GMRES on the
non-symmetric tridiagonal matrix tridiag(-1, 2, 0.5) of order 128.

    python scripts/preconditioner_comparison.py
"""

from pslr.bench import BenchConfig, run_bench

from _common import parser, save


def main():
    args = parser(__doc__).parse_args()
    rows = [
        run_bench(BenchConfig(problem="tridiag_nonsym", method="pslr_gmres", seed=args.seed)).row,
        run_bench(BenchConfig(problem="tridiag_nonsym", method="pinv", seed=args.seed)).row,
        run_bench(BenchConfig(problem="tridiag_nonsym", method="jacobi_gmres", x0="zero")).row,
        run_bench(BenchConfig(problem="tridiag_nonsym", method="gmres", x0="zero")).row,
        run_bench(BenchConfig(problem="tridiag_nonsym", method="adi", x0="zero", alpha=1.0)).row,
    ]
    save(rows, args.out, "preconditioner_comparison")


if __name__ == "__main__":
    main()
