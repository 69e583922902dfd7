"""Eigenvalue scatter data for the PSLR-preconditioned Schur complement.

Writes four ``re,im`` CSV files for one random saddle instance:

* ``spectrum_m5_lowrank.csv`` / ``spectrum_m5_series.csv``: m = 5 with and
  without the low-rank correction;
* ``spectrum_m3_lowrank.csv``: m = 3 with the correction, for comparison
  with m = 5.

It also prints how many eigenvalues lie within 0.1 of 1 for each variant.

    python scripts/spectrum_scatter.py --n 128 --m-norm 0.9
"""

from pathlib import Path

import numpy as np

from pslr.bench import emit_spectrum, preconditioned_schur_operator
from pslr.generators import gen_random_saddle
from pslr.precond import build_pslr

from _common import parser


def main():
    p = parser(__doc__)
    p.add_argument("--n", type=int, default=128)
    p.add_argument("--m-norm", type=float, default=0.9)
    p.add_argument("--rk", type=int, default=15)
    args = p.parse_args()
    sys = gen_random_saddle(args.n, args.n, args.seed, m_norm=args.m_norm)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    for m, lowrank in ((5, True), (5, False), (3, True), (3, False)):
        P = build_pslr(sys, m, args.rk)
        tag = "lowrank" if lowrank else "series"
        ev = emit_spectrum(preconditioned_schur_operator(sys, P, lowrank), out / f"spectrum_m{m}_{tag}.csv")
        near = int(np.sum(np.abs(ev - 1.0) < 0.1))
        print(f"m={m} {tag:8s} |lambda-1|<0.1: {near}/{ev.size}  max|lambda-1| = {np.max(np.abs(ev - 1)):.3e}")


if __name__ == "__main__":
    main()
