"""Worst residual per check and rank over the bundled suite.

    python scripts/residual_survey.py [--tail-eps 1e-18] [--jobs 4]
"""

import argparse
from collections import defaultdict
from dataclasses import replace

from wqp.runner import load_bundled, run_manifest


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--tail-eps", type=float, default=None)
    ap.add_argument("--jobs", type=int, default=1)
    args = ap.parse_args()

    manifest = load_bundled()
    if args.tail_eps is not None:
        manifest = replace(manifest, trunc=replace(manifest.trunc, tail_eps=args.tail_eps))
    reports = run_manifest(manifest, jobs=args.jobs).reports

    table = defaultdict(list)
    for r in reports:
        table[(r.name, r.N)].append(r)
    print(f"{'check':22s} {'N':>3s} {'cells':>6s} {'worst':>10s} {'tol':>8s} {'margin':>8s} {'max cond':>9s}")
    for (name, N), rs in sorted(table.items(), key=lambda kv: (kv[0][0], kv[0][1] or 0)):
        res = [r.residual for r in rs if r.residual is not None]
        conds = [r.cond for r in rs if r.cond is not None]
        worst = max(res) if res else float("nan")
        tol = rs[0].tol
        cond = f"{max(conds):9.1e}" if conds else f"{'-':>9s}"
        print(f"{name:22s} {N if N else '-':>3} {len(rs):6d} {worst:10.2e} {tol:8.0e} {tol / max(worst, 1e-300):8.1e} {cond}")
    counts = {s: sum(r.status == s for r in reports) for s in ("pass", "fail", "refused")}
    print(counts)


if __name__ == "__main__":
    main()
