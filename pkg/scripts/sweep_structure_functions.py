"""Tabulate F_N, Y_N, G_N and f_h along a ray, one CSV per function.

    python scripts/sweep_structure_functions.py --out sweeps/ [--N 3 --r 2]
"""

import argparse
from pathlib import Path

from wqp.runner import run_sweep, sweep_filename
from wqp.structfn import write_sweep_csv


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", default="sweeps")
    ap.add_argument("--N", type=int, default=3)
    ap.add_argument("--r", type=int, default=2)
    ap.add_argument("--h", type=int, default=2)
    ap.add_argument("--steps", type=int, default=201)
    args = ap.parse_args()

    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    common = {"N": args.N, "r": args.r, "zeta": [0.05, 0.3], "tau": [0.1, 0.9],
              "ray": {"start": [-0.5, 0.02], "end": [0.5, 0.02], "steps": args.steps}}
    entries = [dict(common, function=f) for f in ("F", "Y", "G", "tau_n")]
    entries.append(dict(common, function="f_h", h=args.h))
    entries.append(dict(common, function="Y_classical", h=args.h))
    for k, entry in enumerate(entries):
        rows = run_sweep(entry)
        path = out / sweep_filename(k, entry)
        write_sweep_csv(path, rows)
        refused = sum(v is None for _, v in rows)
        print(f"{path}: {len(rows)} points, {refused} refused")


if __name__ == "__main__":
    main()
