"""Classical limit on the line ``p = q^{Nh}``: the Poisson structure function
``f_h``, the bracket factor for ``{w_i, w_j}``, and the extrapolated limit of
the quantum exchange factor against which ``f_h`` is certified.
"""

from __future__ import annotations

from collections.abc import Sequence
from fractions import Fraction

from .errors import ConvergenceError, NearPoleError, TruncationError
from .params import IPI, LogParams, classical_tau, eipi, validate
from .report import CheckReport
from .specfun import DEFAULT_TRUNC, TruncationPolicy
from .structfn import _centered, y_struct

DEFAULT_BETAS = (1e-4, 5e-5, 2.5e-5)


def _frac(xi, a, zeta, trunc):
    """``y / (1 - y)`` with ``y = x^2 q^a``."""
    y = eipi(2 * xi + a * zeta)
    d = 1 - y
    if abs(d) < trunc.pole_guard:
        raise NearPoleError(f"f_h pole x^2 q^{a} = 1", xi)
    return y / d


def _group(xi, a, zeta, trunc):
    return 2 * _frac(xi, a, zeta, trunc) - _frac(xi, a + 2, zeta, trunc) - _frac(xi, a - 2, zeta, trunc)


def _half_body(N, xi, zeta, coeffs, trunc):
    """``sum_l sum_j c_j G(2Nl + o_j) - 1/2 c_0 G(0)`` for coeffs [(o_j, c_j)]."""
    total = 0j
    scale = 0.0
    ell = 0
    while True:
        if ell >= trunc.max_terms:
            raise TruncationError(f"f_h sum needs more than {trunc.max_terms} terms")
        inc = sum(c * _group(xi, 2 * N * ell + off, zeta, trunc) for off, c in coeffs if c)
        total += inc
        scale += abs(inc)
        if ell > 0 and abs(inc) <= trunc.tail_eps * max(scale, 1.0):
            break
        ell += 1
    c0 = dict(coeffs).get(0, 0)
    if c0:
        total -= 0.5 * c0 * _group(xi, 0, zeta, trunc)
    return total


def f_h(N: int, n: int, h: int, xi: complex, zeta: complex,
        trunc: TruncationPolicy = DEFAULT_TRUNC) -> complex:
    """Poisson structure function ``f_h(x)`` of ``{t(z), t(w)} = f_h(w/z) t(z) t(w)``.

    The parity of h picks the branch; ``E`` is the floor.  Both branches
    are antisymmetrised under ``x -> 1/x``.
    """
    if h == 0:
        raise ValueError("h must be nonzero")
    lnq = IPI * zeta
    if h % 2:
        e_half = n // 2
        a = e_half * (e_half + 1)
        b = ((n + 1) // 2) ** 2
        coeffs = [(0, a), (N, b)]
        pref = 2 * N * h * lnq
    else:
        coeffs = [(0, 1)]
        pref = N * h * n * (n + 1) * lnq
    if pref == 0 or not any(c for _, c in coeffs):
        return 0j
    body = _half_body(N, xi, zeta, coeffs, trunc) - _half_body(N, -xi, zeta, coeffs, trunc)
    return complex(pref * body)


def bracket_factor(N: int, i: int, j: int, n: int, h: int, xi: complex, zeta: complex,
                   trunc: TruncationPolicy = DEFAULT_TRUNC) -> complex:
    """``sum_u sum_v f_h(q^{v-u} x)`` for the bracket ``{w_i(z), w_j(w)}``."""
    if i < 1 or j < 1:
        raise ValueError("i and j must be >= 1")
    total = 0j
    for u in _centered(i):
        for v in _centered(j):
            total += f_h(N, n, h, xi + float(Fraction(v - u)) * zeta, zeta, trunc)
    return total


def richardson(betas: Sequence[float], values: Sequence[complex]) -> list[complex]:
    """Diagonal of the polynomial extrapolation tableau to ``beta = 0``.

    Assumes an error expansion in integer powers of beta.  Element k uses
    the first k+1 samples.
    """
    rows = [[complex(v)] for v in values]
    for i in range(1, len(values)):
        for k in range(1, i + 1):
            ratio = betas[i - k] / betas[i]
            prev = rows[i][k - 1]
            rows[i].append(prev + (prev - rows[i - 1][k - 1]) / (ratio - 1))
    return [rows[i][i] for i in range(len(values))]


def check_poisson_limit(N: int, n: int, h: int, xi: complex, zeta: complex,
                        beta_seq: Sequence[float] = DEFAULT_BETAS,
                        trunc: TruncationPolicy = DEFAULT_TRUNC, tol: float = 1e-5,
                        seed=None) -> CheckReport:
    """Compare ``lim_{beta->0} (1 - Y_N(n,x)^{-1}) / beta`` with ``f_h(x)``.

    ``tau(beta)`` solves ``q^{Nh} = p^{1-beta}``.  The limit is extrapolated
    from ``beta_seq``; the reading ``(Y - 1) / beta`` is extrapolated too
    and stored in ``detail`` for comparison.
    """
    betas = [float(b) for b in beta_seq]
    if len(betas) < 2:
        raise ValueError("need at least two beta values")
    if any(b <= 0 for b in betas) or any(b2 >= b1 for b1, b2 in zip(betas, betas[1:])):
        raise ValueError("beta_seq must be positive and strictly decreasing")
    tau0 = classical_tau(N, h, zeta, 0.0)
    validate(LogParams(N, zeta, tau0))
    rep = CheckReport("poisson_limit", N=N, n=n, h=h, zeta=zeta, tau=tau0, points=[xi], seed=seed)

    quot, alt = [], []
    for b in betas:
        y = y_struct(N, n, xi, zeta, classical_tau(N, h, zeta, b), trunc)
        if y == 0:
            raise NearPoleError("Y_N vanishes", xi)
        quot.append((1 - 1 / y) / b)
        alt.append((y - 1) / b)
    diag = richardson(betas, quot)
    limit = diag[-1]
    limit_alt = richardson(betas, alt)[-1]
    f = f_h(N, n, h, xi, zeta, trunc)
    norm = max(1.0, abs(f))

    step = abs(diag[-1] - diag[-2]) / norm
    if step > 10 * tol:
        raise ConvergenceError(f"extrapolants differ by {step:.3e} (> 10 x tol)")

    diffs = [abs(q1 - q2) for q1, q2 in zip(quot, quot[1:])]
    rep.detail.update(
        parity="odd" if h % 2 else "even",
        betas=betas,
        f_h=[f.real, f.imag],
        limit=[limit.real, limit.imag],
        limit_alt=[limit_alt.real, limit_alt.imag],
        alt_residual=abs(limit_alt - f) / norm,
        # (1 - 1/Y)/beta and (Y - 1)/beta differ by (Y-1)^2/(beta Y) = O(beta)
        alt_gap=[abs(q - a) for q, a in zip(quot, alt)],
        difference_ratios=[d1 / d2 if d2 else None for d1, d2 in zip(diffs, diffs[1:])],
        extrapolant_step=step,
    )
    return rep.grade(abs(limit - f) / norm, norm, tol)
