"""Extrapolated classical limit of Y_N against f_h, by parity of h.

For each (N, n, h) cell prints both extrapolated readings of the limit as
the worst relative gap to f_h over a few random points.  Points where the
default beta steps are too coarse (large |f_h| near x^2 = 1) are redone
with steps 100 times smaller; the count is in the last column.

    python scripts/poisson_table.py [--points 5] [--seed 0] [--csv out.csv]
"""

import argparse
import csv

import numpy as np

from wqp.errors import ConvergenceError, Refusal
from wqp.params import DEFAULT_REGION
from wqp.poisson import DEFAULT_BETAS, check_poisson_limit

FINE_BETAS = tuple(b / 100 for b in DEFAULT_BETAS)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--points", type=int, default=5)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--csv", default=None)
    args = ap.parse_args()

    rng = np.random.default_rng(args.seed)
    rows = []
    for h in (1, 2, 3, 4):
        for N in (2, 3):
            for n in (-2, -1, 1, 2, 3):
                worst = worst_alt = 0.0
                last = None
                done = retried = 0
                while done < args.points:
                    zeta = DEFAULT_REGION.sample_zeta(rng)
                    xi = DEFAULT_REGION.sample_point(rng)
                    try:
                        rep = check_poisson_limit(N, n, h, xi, zeta)
                    except Refusal:
                        continue
                    except ConvergenceError:
                        rep = check_poisson_limit(N, n, h, xi, zeta, FINE_BETAS)
                        retried += 1
                    worst = max(worst, rep.residual)
                    worst_alt = max(worst_alt, rep.detail["alt_residual"])
                    last = rep
                    done += 1
                f = complex(*last.detail["f_h"])
                rows.append((last.detail["parity"], h, N, n, worst, worst_alt, f, retried))
    print(f"{'parity':6s} {'h':>2s} {'N':>2s} {'n':>3s} {'(1-1/Y)/b':>10s} {'(Y-1)/b':>10s}  {'last f_h':>28s} fine")
    for parity, h, N, n, w, wa, f, k in rows:
        print(f"{parity:6s} {h:2d} {N:2d} {n:3d} {w:10.2e} {wa:10.2e}  {f.real:+.6e}{f.imag:+.6e}j {k:4d}")
    if args.csv:
        with open(args.csv, "w", newline="") as fh:
            out = csv.writer(fh, lineterminator="\n")
            out.writerow(["parity", "h", "N", "n", "worst_residual", "worst_alt_residual", "fine_retries"])
            for parity, h, N, n, w, wa, _, k in rows:
                out.writerow([parity, h, N, n, repr(w), repr(wa), k])


if __name__ == "__main__":
    main()
