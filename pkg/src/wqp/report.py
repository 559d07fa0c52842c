"""Check reports and the residual convention shared by every identity."""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .legs import LegMatrix

PASS = "pass"
FAIL = "fail"
REFUSED = "refused"


def _as_array(x):
    if isinstance(x, LegMatrix):
        return x.data
    return np.atleast_1d(np.asarray(x, dtype=complex))


def residual(lhs, rhs) -> tuple[float, float]:
    """``max|lhs - rhs| / max(1, max|lhs|)`` and the scale it was divided by."""
    a = _as_array(lhs)
    b = _as_array(rhs)
    scale = max(1.0, float(np.abs(a).max()))
    return float(np.abs(a - b).max()) / scale, scale


def _pair(z):
    if z is None:
        return None
    z = complex(z)
    return [z.real, z.imag]


@dataclass
class CheckReport:
    name: str
    N: int | None = None
    n: int | None = None
    h: int | None = None
    zeta: complex | None = None
    tau: complex | None = None
    c: complex | None = None
    points: list = field(default_factory=list)
    seed: int | None = None
    residual: float | None = None
    scale: float | None = None
    tol: float | None = None
    status: str = REFUSED
    cond: float | None = None
    detail: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.status == PASS

    def grade(self, res: float, scale: float, tol: float) -> CheckReport:
        self.residual = res
        self.scale = scale
        self.tol = tol
        self.status = PASS if res < tol else FAIL
        return self

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "N": self.N,
            "n": self.n,
            "h": self.h,
            "zeta": _pair(self.zeta),
            "tau": _pair(self.tau),
            "c": _pair(self.c),
            "points": [_pair(x) for x in self.points],
            "seed": self.seed,
            "residual": self.residual,
            "scale": self.scale,
            "tol": self.tol,
            "pass": self.passed,
            "status": self.status,
            "cond": self.cond,
            "detail": self.detail,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=False, default=_json_default)


def _json_default(obj):
    if isinstance(obj, complex):
        return [obj.real, obj.imag]
    if isinstance(obj, np.generic):
        return obj.item()
    raise TypeError(f"cannot serialise {type(obj).__name__}")
