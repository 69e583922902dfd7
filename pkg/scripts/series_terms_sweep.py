"""Effect of the number of series terms m on PSLR-GMRES.

Uses example1 by default; ``--path file.mtx`` builds a saddle system whose
(1,1) block is read from a Matrix Market file, with a seeded Gaussian
coupling block and identity (2,2) block.

    python scripts/series_terms_sweep.py --path 494_bus.mtx --reorder --maxit 3000
"""

from pslr.bench import BenchConfig, run_bench

from _common import parser, save


def main():
    p = parser(__doc__)
    p.add_argument("--path")
    p.add_argument("--rk", type=int, default=15)
    p.add_argument("--maxit", type=int, default=500)
    p.add_argument("--reorder", action="store_true")
    args = p.parse_args()
    problem = "mm_saddle" if args.path else "example1"
    rows = []
    for m in range(6):
        cfg = BenchConfig(problem=problem, path=args.path, m=m, r_k=args.rk, maxit=args.maxit,
                          reorder=args.reorder, seed=args.seed)
        rows.append(run_bench(cfg).row)
    save(rows, args.out, "series_terms")


if __name__ == "__main__":
    main()
