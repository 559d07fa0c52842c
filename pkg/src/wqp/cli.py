"""Command-line front end: ``wqp check|quick|sweep|dump-r``.

Exit status is 0 when nothing failed, 1 when some check failed and 2 for a
bad manifest, bad arguments or an I/O error.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import replace
from pathlib import Path

import numpy as np
import yaml

from .errors import ParameterError, Refusal, WqpError
from .params import LogParams
from .rmatrix import build_r, build_r_hat, build_r_tilde
from .runner import SWEEPS, RunManifest, bundled_manifest_path, run_manifest, run_sweep, verify_quick, write_reports
from .specfun import DEFAULT_TRUNC
from .structfn import write_sweep_csv


def parse_complex(text: str) -> complex:
    """``"re,im"`` or anything ``complex()`` accepts (``0.1+0.9j``)."""
    text = text.strip()
    if "," in text:
        re_, im = text.split(",", 1)
        return complex(float(re_), float(im))
    return complex(text.replace(" ", ""))


def _globals(parser, suppress: bool):
    d = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
    parser.add_argument("--out", default=d(None), help="output directory (check/quick) or file (sweep/dump-r)")
    parser.add_argument("--seed", type=int, default=d(None), help="override the manifest seed")
    parser.add_argument("--tol", type=float, default=d(None), help="override every check tolerance")
    parser.add_argument("--tail-eps", type=float, default=d(None), help="series truncation threshold")
    parser.add_argument("--jobs", type=int, default=d(1), help="worker processes")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="wqp", description=__doc__.splitlines()[0])
    _globals(parser, suppress=False)
    common = argparse.ArgumentParser(add_help=False)
    _globals(common, suppress=True)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", parents=[common], help="run a YAML manifest")
    p.add_argument("manifest", nargs="?", help="manifest path (default: bundled acceptance suite)")

    p = sub.add_parser("quick", parents=[common], help="smoke checks at fixed parameters")
    p.add_argument("N", type=int)

    p = sub.add_parser("sweep", parents=[common], help="tabulate a function along a ray to CSV")
    p.add_argument("function", choices=SWEEPS)
    p.add_argument("--N", type=int, default=2)
    p.add_argument("--r", type=int, default=1, help="r or n")
    p.add_argument("--h", type=int, default=2)
    p.add_argument("--s", type=int, default=1)
    p.add_argument("--i", type=int, default=1)
    p.add_argument("--j", type=int, default=2)
    p.add_argument("--beta", type=float, default=0.0)
    p.add_argument("--zeta", type=parse_complex, default=complex(0.05, 0.3))
    p.add_argument("--tau", type=parse_complex, default=complex(0.1, 0.9))
    p.add_argument("--start", type=parse_complex, default=complex(0.05, 0.0))
    p.add_argument("--end", type=parse_complex, default=complex(0.45, 0.0))
    p.add_argument("--steps", type=int, default=41)

    p = sub.add_parser("dump-r", parents=[common], help="print an R-matrix as text")
    p.add_argument("--N", type=int, default=2)
    p.add_argument("--zeta", type=parse_complex, default=complex(0.05, 0.3))
    p.add_argument("--tau", type=parse_complex, default=complex(0.1, 0.9))
    p.add_argument("--c", type=parse_complex, default=None)
    p.add_argument("--xi", type=parse_complex, default=complex(0.13, 0.04))
    p.add_argument("--kind", choices=("tilde", "r", "hat", "hat-star"), default="r")
    return parser


def format_matrix(M, header: dict) -> str:
    lines = [f"# {k}: {v}" for k, v in header.items()]
    lines.append(f"# shape: {M.shape[0]} {M.shape[1]}")
    for row in np.asarray(M):
        lines.append(" ".join(f"{z.real:+.17e}{z.imag:+.17e}j" for z in row))
    return "\n".join(lines) + "\n"


def _emit(text: str, out) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _trunc(args):
    if args.tail_eps is None:
        return DEFAULT_TRUNC
    return replace(DEFAULT_TRUNC, tail_eps=args.tail_eps)


def _print_counts(counts, where=None):
    print(json.dumps(counts))
    if where:
        print(f"reports: {where}", file=sys.stderr)


def cmd_check(args) -> int:
    path = args.manifest or bundled_manifest_path()
    manifest = RunManifest.load(path)
    if args.seed is not None:
        manifest = replace(manifest, seed=args.seed)
    if args.tail_eps is not None:
        manifest = replace(manifest, trunc=replace(manifest.trunc, tail_eps=args.tail_eps))
    out = args.out if args.out is not None else (manifest.out_dir or "reports")
    summary = run_manifest(manifest, out, jobs=args.jobs, tol=args.tol)
    _print_counts(summary.counts, summary.report_path)
    return summary.exit_code


def cmd_quick(args) -> int:
    summary = verify_quick(args.N, _trunc(args), args.tol)
    for rep in summary.reports:
        res = "-" if rep.residual is None else f"{rep.residual:.3e}"
        print(f"{rep.name:20s} {rep.status:8s} residual={res} tol={rep.tol:g}")
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        write_reports(out / "quick.jsonl", summary.reports)
    _print_counts(summary.counts)
    return summary.exit_code


def cmd_sweep(args) -> int:
    entry = {
        "function": args.function, "N": args.N, "r": args.r, "h": args.h, "s": args.s,
        "i": args.i, "j": args.j, "beta": args.beta,
        "zeta": [args.zeta.real, args.zeta.imag], "tau": [args.tau.real, args.tau.imag],
        "ray": {"start": [args.start.real, args.start.imag], "end": [args.end.real, args.end.imag],
                "steps": args.steps},
    }
    rows = run_sweep(entry, _trunc(args))
    write_sweep_csv(args.out or sys.stdout, rows)
    return 0


def cmd_dump_r(args) -> int:
    trunc = _trunc(args)
    params = LogParams(args.N, args.zeta, args.tau, args.c)
    if args.kind == "tilde":
        M = build_r_tilde(args.xi, params, trunc)
    elif args.kind == "r":
        M = build_r(args.xi, params, trunc)
    else:
        M = build_r_hat(args.xi, params, starred=args.kind == "hat-star", trunc=trunc)
    header = {"kind": args.kind, "N": args.N, "zeta": args.zeta, "tau": args.tau,
              "c": args.c, "xi": args.xi, "legs": "leg 1 slowest (kron order)"}
    _emit(format_matrix(M.data, header), args.out)
    return 0


COMMANDS = {"check": cmd_check, "quick": cmd_quick, "sweep": cmd_sweep, "dump-r": cmd_dump_r}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else 2
    try:
        return COMMANDS[args.command](args)
    except (OSError, yaml.YAMLError, ParameterError, Refusal, WqpError, ValueError, TypeError) as err:
        print(f"wqp: error: {err}", file=sys.stderr)
        return 2
