"""Scalar special functions: theta with characteristics, q-Pochhammer
products, the triple product Theta_t, tau_N and the R-matrix normalisation.

All infinite sums and products are truncated adaptively under a
:class:`TruncationPolicy`; hitting the term cap raises instead of silently
returning a truncated value.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

from .errors import DivergenceError, NearPoleError, TruncationError
from .params import IPI, eipi


@dataclass(frozen=True)
class TruncationPolicy:
    """Truncation and pole-guard settings shared by every series.

    ``pole_guard`` is the relative size below which a denominator counts as
    zero; evaluation there is refused.
    """

    tail_eps: float = 1e-18
    max_terms: int = 400
    pole_guard: float = 1e-13

    def __post_init__(self):
        if not self.tail_eps > 0:
            raise ValueError("tail_eps must be positive")
        if self.max_terms < 1:
            raise ValueError("max_terms must be >= 1")
        if not self.pole_guard >= 0:
            raise ValueError("pole_guard must be non-negative")


DEFAULT_TRUNC = TruncationPolicy()


def guard(value: complex, scale: float, trunc: TruncationPolicy, what: str, point=None) -> complex:
    if abs(value) < trunc.pole_guard * scale:
        raise NearPoleError(what, point)
    return value


# --- theta with characteristics -------------------------------------------


def theta_scaled(g1, g2, xi: complex, tau: complex, trunc: TruncationPolicy = DEFAULT_TRUNC):
    """Theta with characteristics plus the sum of term moduli.

    The second value measures cancellation: a result much smaller than it
    sits next to a zero of the function.
    """
    if complex(tau).imag <= 0:
        raise DivergenceError(f"theta series diverges for Im tau = {complex(tau).imag}")
    g1 = float(g1)
    xi = complex(xi)
    tau = complex(tau)
    arg = xi + float(g2)

    def term(m):
        k = m + g1
        return cmath.exp(IPI * k * k * tau + 2 * IPI * k * arg)

    total = term(0)
    mass = abs(total)
    # terms are a gaussian in m; never stop before its peak
    peak = abs(g1) + abs(xi.imag) / tau.imag + 1
    M = 1
    while True:
        if M > trunc.max_terms:
            raise TruncationError(f"theta series needs more than {trunc.max_terms} terms")
        up, down = term(M), term(-M)
        size = abs(up) + abs(down)
        total += up + down
        mass += size
        if M > peak and size < trunc.tail_eps * (abs(total) + 1):
            break
        M += 1
    return total, mass


def theta_char(g1, g2, xi: complex, tau: complex, trunc: TruncationPolicy = DEFAULT_TRUNC) -> complex:
    r"""Jacobi theta function with rational characteristics.

    .. math::
        \vartheta[g_1, g_2](\xi, \tau) = \sum_m
        \exp\bigl(i\pi(m+g_1)^2\tau + 2i\pi(m+g_1)(\xi+g_2)\bigr)

    Parameters
    ----------
    g1, g2 : rational or float
        Characteristics.
    xi : complex
        Argument.
    tau : complex
        Modulus, ``Im tau > 0``.

    Raises
    ------
    DivergenceError
        ``Im tau <= 0``.
    TruncationError
        More than ``trunc.max_terms`` symmetric pairs needed.
    """
    return theta_scaled(g1, g2, complex(xi), complex(tau), trunc)[0]


# --- q-Pochhammer products --------------------------------------------------


def _qprod(x: complex, t: complex, trunc: TruncationPolicy):
    if abs(t) >= 1:
        raise DivergenceError(f"|t| = {abs(t)} >= 1")
    value = 1.0 + 0j
    peak = 1.0
    f = x
    k = 0
    while abs(f) >= trunc.tail_eps:
        if k >= trunc.max_terms:
            raise TruncationError(f"(x;t) needs more than {trunc.max_terms} factors")
        value *= 1 - f
        peak = max(peak, abs(value))
        f *= t
        k += 1
    return value, peak


def _triple(x: complex, a: complex, b: complex, trunc: TruncationPolicy):
    if abs(a) >= 1 or abs(b) >= 1:
        raise DivergenceError(f"|a| = {abs(a)}, |b| = {abs(b)}: product diverges")
    value = 1.0 + 0j
    peak = 1.0
    row = x
    j = 0
    while abs(row) >= trunc.tail_eps:
        if j >= trunc.max_terms:
            raise TruncationError(f"(x;a,b) needs more than {trunc.max_terms} rows")
        f = row
        k = 0
        while abs(f) >= trunc.tail_eps:
            if k >= trunc.max_terms:
                raise TruncationError(f"(x;a,b) needs more than {trunc.max_terms} columns")
            value *= 1 - f
            peak = max(peak, abs(value))
            f *= b
            k += 1
        row *= a
        j += 1
    return value, peak


def qpochhammer(x: complex, t: complex, trunc: TruncationPolicy = DEFAULT_TRUNC) -> complex:
    """``(x; t)_inf = prod_{k>=0} (1 - x t^k)``."""
    return _qprod(complex(x), complex(t), trunc)[0]


def triple_pochhammer(x: complex, a: complex, b: complex, trunc: TruncationPolicy = DEFAULT_TRUNC) -> complex:
    """Double-index product ``(x; a, b)_inf = prod_{j,k>=0} (1 - x a^j b^k)``.

    Factors with ``|x a^j b^k| < tail_eps`` are dropped.
    """
    return _triple(complex(x), complex(a), complex(b), trunc)[0]


def big_theta_scaled(x: complex, t: complex, trunc: TruncationPolicy = DEFAULT_TRUNC):
    if abs(t) >= 1:
        raise DivergenceError(f"|t| = {abs(t)} >= 1")
    if x == 0:
        raise NearPoleError("Theta_t(0) is a pole", x)
    v1, s1 = _qprod(x, t, trunc)
    v2, s2 = _qprod(t / x, t, trunc)
    v3, s3 = _qprod(t, t, trunc)
    return v1 * v2 * v3, s1 * s2 * s3


def big_theta(x: complex, t: complex, trunc: TruncationPolicy = DEFAULT_TRUNC) -> complex:
    """``Theta_t(x) = (x;t)(t/x;t)(t;t)``; symmetric under ``x -> t/x``."""
    return big_theta_scaled(complex(x), complex(t), trunc)[0]


def theta_ratio(num, den, t: complex, trunc: TruncationPolicy = DEFAULT_TRUNC, what: str = "Theta") -> complex:
    """``prod Theta_t(num) / prod Theta_t(den)`` with every denominator guarded."""
    value = 1.0 + 0j
    for x in num:
        value *= big_theta_scaled(x, t, trunc)[0]
    for x in den:
        d, s = big_theta_scaled(x, t, trunc)
        guard(d, s, trunc, f"{what} denominator Theta_t(x)=0", x)
        value /= d
    return value


# --- tau_N and 1/kappa ------------------------------------------------------


def tau_n(xi: complex, zeta: complex, N: int, trunc: TruncationPolicy = DEFAULT_TRUNC) -> complex:
    """``tau_N(z) = z^{2/N-2} Theta_{q^{2N}}(q z^2) / Theta_{q^{2N}}(q z^{-2})``.

    ``z = exp(i pi xi)``; the prefactor is taken from ``xi`` directly.
    """
    t = eipi(2 * N * zeta)
    q = eipi(zeta)
    ratio = theta_ratio([q * eipi(2 * xi)], [q * eipi(-2 * xi)], t, trunc, what="tau_N")
    return eipi(xi * (2 / N - 2)) * ratio


def kappa_inv(xi: complex, zeta: complex, tau: complex, N: int, trunc: TruncationPolicy = DEFAULT_TRUNC) -> complex:
    """Normalisation ``1/kappa(z^2)`` of the Z_N-vertex R-matrix.

    Ratio of eight double-index products with bases ``(p, q^{2N})``.
    """
    p = eipi(2 * tau)
    b = eipi(2 * N * zeta)
    z2 = eipi(2 * xi)
    iz2 = eipi(-2 * xi)
    q2 = eipi(2 * zeta)
    pq = p * eipi(2 * (N - 1) * zeta)
    num = [b * iz2, q2 * z2, p * iz2, pq * z2]
    den = [b * z2, q2 * iz2, p * z2, pq * iz2]
    value = 1.0 + 0j
    for x in num:
        value *= _triple(x, p, b, trunc)[0]
    for x in den:
        d, s = _triple(x, p, b, trunc)
        guard(d, s, trunc, "1/kappa denominator product vanishes", x)
        value /= d
    return value
