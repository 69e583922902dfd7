"""PSLR-GMRES on the example1 saddle system with three starting vectors.

    python scripts/initial_guess_study.py --out results
"""

from pslr.bench import BenchConfig, run_bench

from _common import parser, save


def main():
    p = parser(__doc__)
    p.add_argument("--order", type=int, default=256)
    args = p.parse_args()
    rows = [
        run_bench(BenchConfig(problem="example1", n=args.order, m=5, r_k=15, x0=x0, seed=args.seed)).row
        for x0 in ("pre", "zero", "random")
    ]
    save(rows, args.out, "initial_guess")


if __name__ == "__main__":
    main()
