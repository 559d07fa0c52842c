"""Manifest-driven execution of identity checks and function sweeps.

A manifest is a YAML document::

    seed: 1234
    trunc: {tail_eps: 1.0e-18, max_terms: 400}
    tol_overrides: {ybe: 1.0e-9}
    checks:
      - {name: lemma_key, N: [2, 3], n: [-1, 1, 2], points: 10}
    sweeps:
      - {function: Y, N: 3, r: 2, zeta: [0.05, 0.3], tau: [0.1, 0.9],
         ray: {start: [0.05, 0.0], end: [0.45, 0.0], steps: 41}}

Complex numbers are ``[re, im]`` pairs and spectral points are log
coordinates.  Each grid combination of ``N``/``n``/``h``/``s``/``c`` times
``points`` gives one cell, i.e. one report line.  Parameters a cell does not
fix are drawn from the default region with a generator seeded by
``(seed, check name, cell index)``; draws that land near a pole or an
ill-conditioned matrix are redrawn.
"""

from __future__ import annotations

import itertools
import json
import zlib
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from importlib import resources
from pathlib import Path

import numpy as np
import yaml

from . import identities as ids
from .errors import ConvergenceError, ParameterError, Refusal, WqpError
from .params import DEFAULT_REGION, LogParams, SurfaceSpec, classical_tau
from .poisson import DEFAULT_BETAS, bracket_factor, check_poisson_limit, f_h
from .report import FAIL, PASS, REFUSED, CheckReport
from .specfun import DEFAULT_TRUNC, TruncationPolicy, tau_n
from .structfn import (
    check_abelian,
    check_fg_duality,
    check_fy_ratio,
    f_multi,
    f_struct,
    g_struct,
    sweep_ray,
    write_sweep_csv,
    y_struct,
)

# guard used while drawing random points: reject anything within 1e-6 of a zero
SAMPLING_GUARD = 1e-6
MAX_DRAWS = 50

DEFAULT_TOLS = {
    "ybe": 1e-8,
    "unitarity": 1e-8,
    "crossing": 1e-8,
    "antisymmetry": 1e-8,
    "zn_symmetry": 1e-8,
    "quasi_periodicity": 1e-8,
    "r_identity": 1e-10,
    "tau_n": 1e-10,
    "t_relations": 1e-9,
    "quasi_shift_n": 1e-8,
    "lemma_key": 1e-8,
    "trace_transposition": 1e-12,
    "transposed_ybe": 1e-8,
    "fg_duality": 1e-9,
    "fy_ratio": 1e-9,
    "abelian": 1e-9,
    "commuting": 1e-9,
    "poisson_limit": 1e-5,
}

CHECK_NAMES = tuple(DEFAULT_TOLS)
AXES = ("N", "n", "h", "s", "c")


class ManifestError(WqpError, ValueError):
    pass


def _complex(v, what="value"):
    if isinstance(v, (int, float)):
        return complex(v)
    if isinstance(v, (list, tuple)) and len(v) == 2:
        return complex(float(v[0]), float(v[1]))
    raise ManifestError(f"{what}: expected a number or [re, im], got {v!r}")


def _axis(entry, key):
    v = entry.get(key)
    if v is None:
        return [None]
    if key == "c":
        if isinstance(v, list) and v and isinstance(v[0], list):
            return [_complex(x, "c") for x in v]
        if isinstance(v, list) and len(v) == 2 and all(isinstance(x, (int, float)) for x in v):
            # ambiguous: a single [re, im] pair
            return [_complex(v, "c")]
        return [_complex(x, "c") for x in (v if isinstance(v, list) else [v])]
    vals = v if isinstance(v, list) else [v]
    if not vals or not all(isinstance(x, int) and not isinstance(x, bool) for x in vals):
        raise ManifestError(f"grid axis {key!r} must be an integer or a list of integers")
    return vals


@dataclass(frozen=True)
class Cell:
    name: str
    index: int
    seed: int
    N: int | None = None
    n: int | None = None
    h: int | None = None
    s: int | None = None
    c: complex | None = None
    zeta: complex | None = None
    tau: complex | None = None
    points: tuple | None = None
    betas: tuple = DEFAULT_BETAS
    tol: float = 1e-8
    trunc: TruncationPolicy = DEFAULT_TRUNC


@dataclass
class RunManifest:
    checks: list = field(default_factory=list)
    sweeps: list = field(default_factory=list)
    tol_overrides: dict = field(default_factory=dict)
    trunc: TruncationPolicy = DEFAULT_TRUNC
    out_dir: Path | None = None
    seed: int = 0

    @classmethod
    def from_dict(cls, doc: dict | None) -> RunManifest:
        doc = doc or {}
        if not isinstance(doc, dict):
            raise ManifestError("manifest must be a mapping")
        trunc = TruncationPolicy(**(doc.get("trunc") or {}))
        checks = list(doc.get("checks") or [])
        for entry in checks:
            if not isinstance(entry, dict) or entry.get("name") not in CHECK_NAMES:
                raise ManifestError(f"unknown check {entry!r}")
        sweeps = list(doc.get("sweeps") or [])
        for entry in sweeps:
            if not isinstance(entry, dict) or entry.get("function") not in SWEEPS:
                raise ManifestError(f"unknown sweep function in {entry!r}")
            steps = (entry.get("ray") or {}).get("steps", 0)
            if not isinstance(steps, int) or steps < 2:
                raise ManifestError("sweep ray needs steps >= 2")
        tols = {k: float(v) for k, v in (doc.get("tol_overrides") or {}).items()}
        for k in tols:
            if k not in CHECK_NAMES:
                raise ManifestError(f"tol override for unknown check {k!r}")
        out = doc.get("out_dir")
        return cls(checks, sweeps, tols, trunc, Path(out) if out else None, int(doc.get("seed", 0)))

    @classmethod
    def load(cls, path) -> RunManifest:
        with open(path) as fh:
            return cls.from_dict(yaml.safe_load(fh))

    def cells(self, tol: float | None = None) -> list[Cell]:
        out = []
        counters: dict[str, int] = {}
        for entry in self.checks:
            name = entry["name"]
            check_tol = tol if tol is not None else self.tol_overrides.get(name, DEFAULT_TOLS[name])
            zeta = _complex(entry["zeta"], "zeta") if "zeta" in entry else None
            tau = _complex(entry.get("tau", [0.0, 0.9]), "tau")
            betas = tuple(float(b) for b in entry.get("betas", DEFAULT_BETAS))
            explicit = [_complex(x, "xi") for x in entry["xi"]] if "xi" in entry else None
            need = 2 if name in ("ybe", "transposed_ybe") else 1
            if explicit is not None:
                if len(explicit) % need:
                    raise ManifestError(f"{name}: xi list length must be a multiple of {need}")
                point_sets = [tuple(explicit[i:i + need]) for i in range(0, len(explicit), need)]
            else:
                count = entry.get("points", 1)
                if not isinstance(count, int) or count < 1:
                    raise ManifestError(f"{name}: points must be a positive integer")
                point_sets = [None] * count
            grid = [_axis(entry, k) for k in AXES]
            for combo in itertools.product(*grid):
                axes = dict(zip(AXES, combo))
                if name not in ("trace_transposition", "abelian", "commuting", "poisson_limit") and axes["N"] is None:
                    raise ManifestError(f"{name}: N is required")
                for pts in point_sets:
                    idx = counters.get(name, 0)
                    counters[name] = idx + 1
                    out.append(Cell(name, idx, self.seed, zeta=zeta, tau=tau, points=pts,
                                    betas=betas, tol=check_tol, trunc=self.trunc, **axes))
        return out


# --- per-check evaluation ---------------------------------------------------


def _rng(cell: Cell) -> np.random.Generator:
    return np.random.default_rng([cell.seed, zlib.crc32(cell.name.encode()), cell.index])


def _draw_params(cell, rng, N):
    zeta = cell.zeta if cell.zeta is not None else DEFAULT_REGION.sample_zeta(rng)
    tau = cell.tau if cell.tau is not None else DEFAULT_REGION.sample_tau(rng)
    return LogParams(N, zeta, tau)


def _draw_points(cell, rng, k):
    if cell.points is not None:
        return list(cell.points)
    return [DEFAULT_REGION.sample_point(rng) for _ in range(k)]


def _draw_c(cell, rng):
    if cell.c is not None:
        return cell.c
    return complex(rng.uniform(-1.0, 1.0), rng.uniform(-0.3, 0.3))


def _attempt(cell: Cell, rng: np.random.Generator, trunc: TruncationPolicy) -> CheckReport:
    name, N, tol = cell.name, cell.N, cell.tol
    if name in ids.R_PROPERTIES:
        params = _draw_params(cell, rng, N)
        pts = _draw_points(cell, rng, 2 if name == "ybe" else 1)
        return ids.check_r_property(name, params, pts, trunc, tol)
    if name == "r_identity":
        return ids.check_r_identity(_draw_params(cell, rng, N), trunc, tol)
    if name == "tau_n":
        params = _draw_params(cell, rng, N)
        return ids.check_tau_n(params, _draw_points(cell, rng, 1)[0], trunc, tol)
    if name in ("t_relations", "transposed_ybe"):
        params = _draw_params(cell, rng, N)
        if cell.n is not None:
            params = SurfaceSpec(N, cell.n).solve(params)
        else:
            params = params.with_c(_draw_c(cell, rng))
        if name == "t_relations":
            return ids.check_t_relations(params, _draw_points(cell, rng, 1)[0], trunc, tol)
        x1, x2 = _draw_points(cell, rng, 2)
        return ids.check_transposed_ybe(params, x1, x2, trunc, tol)
    if name == "quasi_shift_n":
        params = _draw_params(cell, rng, N)
        return ids.check_quasi_shift_n(params, cell.n, _draw_points(cell, rng, 1)[0], trunc, tol)
    if name in ("lemma_key", "fg_duality", "fy_ratio"):
        params = _draw_params(cell, rng, N)
        surface = SurfaceSpec(N, cell.n)
        xi = _draw_points(cell, rng, 1)[0]
        if name == "lemma_key":
            return ids.check_lemma_key(surface, params, xi, trunc, tol)
        if name == "fg_duality":
            return check_fg_duality(surface, params, xi, trunc, tol)
        return check_fy_ratio(surface, params, cell.s or 1, xi, trunc, tol)
    if name == "trace_transposition":
        sub = int(rng.integers(0, 2**31 - 1))
        rep = ids.check_trace_transposition(N, cell.s or 2, sub, tol)
        rep.detail["matrix_seed"] = sub
        return rep
    if name in ("abelian", "commuting"):
        zeta = cell.zeta if cell.zeta is not None else DEFAULT_REGION.sample_zeta(rng)
        xi = _draw_points(cell, rng, 1)[0]
        if name == "abelian":
            return check_abelian(N, cell.n, cell.h, zeta, xi, trunc, tol)
        tau = cell.tau if cell.tau is not None else DEFAULT_REGION.sample_tau(rng)
        return check_abelian(N, -1, cell.h, zeta, xi, trunc, tol, tau=tau)
    if name == "poisson_limit":
        zeta = cell.zeta if cell.zeta is not None else DEFAULT_REGION.sample_zeta(rng)
        xi = _draw_points(cell, rng, 1)[0]
        return check_poisson_limit(N, cell.n, cell.h, xi, zeta, cell.betas, trunc, tol)
    raise ManifestError(f"unknown check {name!r}")


def _blank(cell: Cell, err: Exception, status: str) -> CheckReport:
    rep = CheckReport(cell.name, N=cell.N, n=cell.n, h=cell.h, c=cell.c, seed=cell.seed,
                      tol=cell.tol, status=status)
    rep.detail["reason"] = f"{type(err).__name__}: {err}"
    return rep


def run_cell(cell: Cell) -> CheckReport:
    """Evaluate one cell, redrawing random inputs that land on a refusal."""
    fixed = cell.points is not None and (cell.zeta is not None or cell.name == "trace_transposition")
    rng = _rng(cell)
    trunc = cell.trunc if fixed else replace(cell.trunc, pole_guard=max(cell.trunc.pole_guard, SAMPLING_GUARD))
    last: Exception | None = None
    for attempt in range(1 if fixed else MAX_DRAWS):
        try:
            rep = _attempt(cell, rng, trunc)
        except (Refusal, ParameterError) as err:
            last = err
            continue
        except ConvergenceError as err:
            return _blank(cell, err, FAIL)
        rep.name = cell.name
        rep.seed = cell.seed
        rep.detail["cell"] = cell.index
        if cell.s is not None:
            rep.detail["s"] = cell.s
        if attempt:
            rep.detail["redraws"] = attempt
        return rep
    return _blank(cell, last, REFUSED)


# --- sweeps -------------------------------------------------------------------


def _sweep_fn(entry: dict, trunc: TruncationPolicy):
    fn = entry["function"]
    N = int(entry.get("N", 2))
    zeta = _complex(entry.get("zeta", [0.0, 0.4]), "zeta")
    tau = _complex(entry.get("tau", [0.0, 0.9]), "tau")
    r = int(entry.get("r", entry.get("n", 1)))
    if fn == "F":
        return lambda xi: f_struct(N, r, xi, zeta, tau, trunc)
    if fn == "Y":
        return lambda xi: y_struct(N, r, xi, zeta, tau, trunc)
    if fn == "G":
        return lambda xi: g_struct(N, r, xi, zeta, tau, trunc)
    if fn == "F_multi":
        s = int(entry.get("s", 1))
        return lambda xi: f_multi(N, r, xi, zeta, tau, s, trunc)
    if fn == "tau_n":
        return lambda xi: tau_n(xi, zeta, N, trunc)
    h = int(entry.get("h", 2))
    if fn == "f_h":
        return lambda xi: f_h(N, r, h, xi, zeta, trunc)
    if fn == "Y_classical":
        t0 = classical_tau(N, h, zeta, float(entry.get("beta", 0.0)))
        return lambda xi: y_struct(N, r, xi, zeta, t0, trunc)
    i, j = int(entry.get("i", 1)), int(entry.get("j", 1))
    return lambda xi: bracket_factor(N, i, j, r, h, xi, zeta, trunc)


SWEEPS = ("F", "Y", "G", "F_multi", "tau_n", "f_h", "Y_classical", "bracket")


def run_sweep(entry: dict, trunc: TruncationPolicy = DEFAULT_TRUNC):
    ray = entry["ray"]
    fn = _sweep_fn(entry, trunc)
    return sweep_ray(fn, _complex(ray["start"], "start"), _complex(ray["end"], "end"), int(ray["steps"]))


def sweep_filename(k: int, entry: dict) -> str:
    if entry.get("file"):
        return str(entry["file"])
    tag = "_".join(f"{key}{entry[key]}" for key in ("N", "r", "n", "h", "s") if key in entry)
    return f"sweep{k:02d}_{entry['function']}{'_' + tag if tag else ''}.csv"


# --- driver ---------------------------------------------------------------------


@dataclass
class RunSummary:
    reports: list
    sweep_files: list = field(default_factory=list)
    report_path: Path | None = None

    @property
    def counts(self) -> dict:
        out = {PASS: 0, FAIL: 0, REFUSED: 0}
        for r in self.reports:
            out[r.status] += 1
        return out

    @property
    def exit_code(self) -> int:
        return 0 if self.counts[FAIL] == 0 else 1


def _sort_key(rep: CheckReport):
    return (rep.name, rep.detail.get("cell", 0), rep.seed or 0)


def run_cells(cells, jobs: int = 1) -> list[CheckReport]:
    if jobs > 1 and len(cells) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            reports = list(pool.map(run_cell, cells, chunksize=max(1, len(cells) // (4 * jobs))))
    else:
        reports = [run_cell(c) for c in cells]
    return sorted(reports, key=_sort_key)


def run_manifest(manifest: RunManifest, out_dir=None, jobs: int = 1, tol: float | None = None,
                 report_name: str = "report.jsonl") -> RunSummary:
    """Run every check cell and sweep; write ``report.jsonl`` and one CSV per sweep."""
    out = Path(out_dir) if out_dir is not None else manifest.out_dir
    reports = run_cells(manifest.cells(tol), jobs)
    summary = RunSummary(reports)
    if out is not None:
        out.mkdir(parents=True, exist_ok=True)
        summary.report_path = out / report_name
        write_reports(summary.report_path, reports)
    for k, entry in enumerate(manifest.sweeps):
        rows = run_sweep(entry, manifest.trunc)
        if out is not None:
            path = out / sweep_filename(k, entry)
            write_sweep_csv(path, rows)
            summary.sweep_files.append(path)
    return summary


def write_reports(path, reports) -> None:
    with open(path, "w") as fh:
        for rep in reports:
            fh.write(rep.to_json() + "\n")


def bundled_manifest_path(name: str = "identity_suite.yaml") -> Path:
    return Path(str(resources.files("wqp") / "manifests" / name))


def load_bundled(name: str = "identity_suite.yaml") -> RunManifest:
    return RunManifest.load(bundled_manifest_path(name))


# baked-in point for the smoke suite
QUICK_ZETA = 0.05 + 0.3j
QUICK_TAU = 0.1 + 0.9j
QUICK_XI = (0.13 + 0.04j, -0.08 + 0.03j)


def verify_quick(N: int, trunc: TruncationPolicy = DEFAULT_TRUNC, tol: float | None = None) -> RunSummary:
    """Smoke subset at fixed parameters: ybe, unitarity, quasi-periodicity,
    the key lemma at n = 1, the F/Y ratio at s = 1 and one Poisson-limit cell.
    """
    if N < 2:
        raise ValueError("N must be >= 2")
    base = dict(seed=0, zeta=QUICK_ZETA, tau=QUICK_TAU, trunc=trunc)

    def cell(name, idx, pts, **kw):
        t = tol if tol is not None else DEFAULT_TOLS[name]
        return Cell(name, idx, N=N, points=pts, tol=t, **base, **kw)

    cells = [
        cell("ybe", 0, QUICK_XI),
        cell("unitarity", 0, QUICK_XI[:1]),
        cell("quasi_periodicity", 0, QUICK_XI[:1]),
        cell("lemma_key", 0, QUICK_XI[:1], n=1),
        cell("fy_ratio", 0, QUICK_XI[:1], n=1, s=1),
        cell("poisson_limit", 0, (0.17 + 0.05j,), n=1, h=2),
    ]
    return RunSummary(run_cells(cells))


def summary_json(summary: RunSummary) -> str:
    return json.dumps(summary.counts)
