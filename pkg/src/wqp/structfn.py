"""Scalar structure functions F_N, G_N, Y_N, F_N^(s) and the w-exchange factor.

Points are passed as log coordinates ``xi`` (``x = exp(i pi xi)``).  Every
shift by ``q^a`` adds ``a * zeta`` to ``xi`` and every shift by
``(-p^{1/2})^k`` adds ``k * (tau + 1)``.  The label ``r = 0`` gives 1 for
F, G and Y alike (empty products).
"""

from __future__ import annotations

import csv
from fractions import Fraction

import numpy as np

from .errors import NearPoleError
from .params import LogParams, SurfaceSpec, classical_tau, eipi, surface_residual, validate
from .report import CheckReport, residual
from .specfun import DEFAULT_TRUNC, TruncationPolicy, tau_n, theta_ratio


def _nome(N, zeta):
    return eipi(2 * N * zeta)


def f_struct(N: int, r: int, xi: complex, zeta: complex, tau: complex,
             trunc: TruncationPolicy = DEFAULT_TRUNC) -> complex:
    """Exchange factor ``F_N(r, x)`` between the traced generator and ``L``."""
    if r == 0:
        return 1.0 + 0j
    t = _nome(N, zeta)
    value = eipi(zeta * 2 * r * (1 - 1 / N))
    if r > 0:
        for k in range(r):
            num = [eipi(-2 * xi - 2 * k * tau), eipi(2 * xi + 2 * k * tau)]
            den = [eipi(-2 * xi + 2 * zeta - 2 * k * tau), eipi(2 * xi + 2 * zeta + 2 * k * tau)]
            value *= theta_ratio(num, den, t, trunc, what=f"F_{N}({r},x)")
    else:
        for k in range(1, -r + 1):
            num = [eipi(-2 * xi + 2 * zeta + 2 * k * tau), eipi(2 * xi + 2 * zeta - 2 * k * tau)]
            den = [eipi(-2 * xi + 2 * k * tau), eipi(2 * xi - 2 * k * tau)]
            value *= theta_ratio(num, den, t, trunc, what=f"F_{N}({r},x)")
    return value


def _y_factor(N, k, xi, zeta, tau, trunc):
    if k == 0:
        # numerator and denominator are the same four Thetas
        return 1.0 + 0j
    t = _nome(N, zeta)
    up = eipi(2 * xi + 2 * k * tau)
    down = eipi(2 * xi - 2 * k * tau)
    q2 = eipi(2 * zeta)
    iq2 = eipi(-2 * zeta)
    num = [down, down, up * q2, up * iq2]
    den = [up, up, down * q2, down * iq2]
    return theta_ratio(num, den, t, trunc, what=f"Y_{N}")


def y_struct(N: int, r: int, xi: complex, zeta: complex, tau: complex,
             trunc: TruncationPolicy = DEFAULT_TRUNC) -> complex:
    """Quadratic exchange factor ``Y_N(r, x)`` of ``t(z) t(w) = Y t(w) t(z)``.

    For r > 0 the product runs over k = 1..r, for r < 0 over k = 0..|r|-1.
    The k = 0 factor has identical numerator and denominator, which makes
    ``Y_N(-1, x)`` exactly 1.
    """
    if r > 0:
        ks = range(1, r + 1)
    elif r < 0:
        ks = range(0, -r)
    else:
        return 1.0 + 0j
    value = 1.0 + 0j
    for k in ks:
        value *= _y_factor(N, k, xi, zeta, tau, trunc)
    return value


def g_struct(N: int, n: int, xi: complex, zeta: complex, tau: complex,
             trunc: TruncationPolicy = DEFAULT_TRUNC) -> complex:
    """Scalar ``G_N(n, z)`` picked up by n quasi-periodic shifts of R^."""
    shift = tau + 1
    value = 1.0 + 0j
    if n > 0:
        for k in range(n):
            value *= tau_n(xi + zeta / 2 - k * shift, zeta, N, trunc)
            value *= tau_n(-xi + zeta / 2 + k * shift, zeta, N, trunc)
    elif n < 0:
        # 1/tau_N(z) = tau_N(1/z): a zero of tau_N becomes a guarded denominator
        for k in range(1, -n + 1):
            value *= tau_n(-xi - zeta / 2 - k * shift, zeta, N, trunc)
            value *= tau_n(xi - zeta / 2 + k * shift, zeta, N, trunc)
    return value


def g_inverse(N: int, n: int, xi: complex, zeta: complex, tau: complex,
              trunc: TruncationPolicy = DEFAULT_TRUNC) -> complex:
    """``1 / G_N(n, z)``, computed as ``G_N(-n, z / (-p^{1/2})^n)``.

    Zeros of G_N become guarded denominators instead of a division.
    """
    return g_struct(N, -n, xi - n * (tau + 1), zeta, tau, trunc)


def _centered(s: int) -> list[Fraction]:
    """``i - (s+1)/2`` for i = 1..s, as exact rationals."""
    return [Fraction(2 * i - s - 1, 2) for i in range(1, s + 1)]


def f_multi(N: int, n: int, xi: complex, zeta: complex, tau: complex, s: int,
            trunc: TruncationPolicy = DEFAULT_TRUNC) -> complex:
    """``F_N^(s)(n, x) = prod_i F_N(n, x / q^{i-(s+1)/2})``."""
    if s < 1:
        raise ValueError("s must be >= 1")
    value = 1.0 + 0j
    for a in _centered(s):
        value *= f_struct(N, n, xi - float(a) * zeta, zeta, tau, trunc)
    return value


def y_multi(N: int, n: int, xi: complex, zeta: complex, tau: complex, s: int,
            trunc: TruncationPolicy = DEFAULT_TRUNC) -> complex:
    value = 1.0 + 0j
    for a in _centered(s):
        value *= y_struct(N, n, xi - float(a) * zeta, zeta, tau, trunc)
    return value


def w_exchange_factor(N: int, i: int, j: int, n: int, xi: complex, zeta: complex, tau: complex,
                      trunc: TruncationPolicy = DEFAULT_TRUNC) -> complex:
    """``prod_u prod_v Y_N(n, q^{v-u} x)`` with u, v half-integer steps."""
    if i < 1 or j < 1:
        raise ValueError("i and j must be >= 1")
    value = 1.0 + 0j
    for u in _centered(i):
        for v in _centered(j):
            value *= y_struct(N, n, xi + float(v - u) * zeta, zeta, tau, trunc)
    return value


# --- checks -----------------------------------------------------------------


def _surface_report(name, surface, params, points, seed):
    return CheckReport(name, N=params.N, n=surface.n, h=surface.h, zeta=params.zeta,
                       tau=params.tau, c=params.c, points=list(points), seed=seed)


def check_fg_duality(surface: SurfaceSpec, params: LogParams, xi: complex,
                     trunc: TruncationPolicy = DEFAULT_TRUNC, tol: float = 1e-9,
                     seed=None) -> CheckReport:
    """``G_N^{-1}(n, q^{c/2}(-p^{1/2})^n / x) = F_N(n, q^{c/2} x)`` on the surface."""
    params = surface.solve(params)
    validate(params)
    N, n, zeta, tau, c = params.N, surface.n, params.zeta, params.tau, params.c
    rep = _surface_report("fg_duality", surface, params, [xi], seed)
    lhs = g_inverse(N, n, c * zeta / 2 + n * (tau + 1) - xi, zeta, tau, trunc)
    rhs = f_struct(N, n, c * zeta / 2 + xi, zeta, tau, trunc)
    rep.detail["on_surface"] = surface_residual(params, n)
    return rep.grade(*residual(lhs, rhs), tol)


def check_fy_ratio(surface: SurfaceSpec, params: LogParams, s: int, xi: complex,
                   trunc: TruncationPolicy = DEFAULT_TRUNC, tol: float = 1e-9,
                   seed=None) -> CheckReport:
    """``F^(s)(n, q^c x) / F^(s)(n, -p^{1/2} x) = prod_i Y_N(n, x / q^{i-(s+1)/2})``."""
    params = surface.solve(params)
    validate(params)
    N, n, zeta, tau, c = params.N, surface.n, params.zeta, params.tau, params.c
    rep = _surface_report("fy_ratio", surface, params, [xi], seed)
    rep.detail["s"] = s
    den = f_multi(N, n, xi + tau + 1, zeta, tau, s, trunc)
    if den == 0:
        raise NearPoleError("F^(s) vanishes", xi)
    lhs = f_multi(N, n, xi + c * zeta, zeta, tau, s, trunc) / den
    rhs = y_multi(N, n, xi, zeta, tau, s, trunc)
    return rep.grade(*residual(lhs, rhs), tol)


def check_abelian(N: int, n: int, h: int, zeta: complex, xi: complex,
                  trunc: TruncationPolicy = DEFAULT_TRUNC, tol: float = 1e-9,
                  tau: complex | None = None, seed=None) -> CheckReport:
    """``|Y_N(n, x) - 1|`` and ``|prod Y (i=2, j=3) - 1|`` on the classical line.

    With ``tau`` given the classical line is not imposed; that is the
    setting of the n = -1 commutation check.
    """
    if tau is None:
        tau = classical_tau(N, h, zeta, 0.0)
    validate(LogParams(N, zeta, tau))
    rep = CheckReport("abelian", N=N, n=n, h=h, zeta=zeta, tau=tau, points=[xi], seed=seed)
    y = y_struct(N, n, xi, zeta, tau, trunc)
    w = w_exchange_factor(N, 2, 3, n, xi, zeta, tau, trunc)
    rep.detail["y"] = [y.real, y.imag]
    rep.detail["w23"] = [w.real, w.imag]
    res = max(abs(y - 1), abs(w - 1))
    return rep.grade(res, 1.0, tol)


# --- sweeps -----------------------------------------------------------------


def sweep_ray(fn, start: complex, end: complex, steps: int):
    """Evaluate ``fn(xi)`` at ``steps`` equally spaced points from start to end.

    Points where ``fn`` refuses (near a pole) are returned with value None.
    """
    if steps < 2:
        raise ValueError("a ray needs at least 2 steps")
    rows = []
    for xi in np.linspace(complex(start), complex(end), steps):
        xi = complex(xi)
        try:
            rows.append((xi, complex(fn(xi))))
        except NearPoleError:
            rows.append((xi, None))
    return rows


def write_sweep_csv(path, rows) -> None:
    """Write sweep rows to ``path`` (a file path or an open text stream)."""
    if hasattr(path, "write"):
        _write_rows(path, rows)
        return
    with open(path, "w", newline="") as fh:
        _write_rows(fh, rows)


def _write_rows(fh, rows) -> None:
    out = csv.writer(fh, lineterminator="\n")
    out.writerow(["x_re", "x_im", "value_re", "value_im"])
    for xi, v in rows:
        if v is None:
            out.writerow([repr(xi.real), repr(xi.imag), "nan", "nan"])
        else:
            out.writerow([repr(xi.real), repr(xi.imag), repr(v.real), repr(v.imag)])
