"""Timing of PSLR-GMRES on example1 as the order doubles.

Reports the minimum over ``--repeats`` runs for each timing column; the
iteration count comes from the first run.

    python scripts/order_sweep.py --orders 128,256,512,1024,2048
"""

from pslr.bench import BenchConfig, run_bench
from pslr.cli import parse_int_list

from _common import parser, save


def main():
    p = parser(__doc__)
    p.add_argument("--orders", default="128,256,512,1024,2048")
    p.add_argument("--repeats", type=int, default=5)
    p.add_argument("--reorder", action="store_true")
    args = p.parse_args()
    rows = []
    for order in parse_int_list(args.orders):
        cfg = BenchConfig(problem="example1", n=order, seed=args.seed, reorder=args.reorder)
        runs = [run_bench(cfg).row for _ in range(args.repeats)]
        row = dict(runs[0])
        for col in ("o-t", "p-t", "i-t", "t-t"):
            row[col] = min(r[col] for r in runs)
        rows.append(row)
    save(rows, args.out, "order_sweep")


if __name__ == "__main__":
    main()
