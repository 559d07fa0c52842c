"""The Z_N-vertex (Belavin) elliptic R-matrix and its normalised variants.

Z_N indices run over ``0..N-1``.  The square root of the clock matrix is
the principal one, ``diag(exp(i pi j / N))``; it is used for the gauge
transform and for ``a = g^{1/2} h g^{1/2}`` alike.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .legs import LegMatrix
from .params import LogParams, eipi, validate
from .specfun import DEFAULT_TRUNC, TruncationPolicy, guard, kappa_inv, tau_n, theta_scaled

HALF = Fraction(1, 2)


@dataclass(frozen=True, eq=False)
class HeisenbergSet:
    N: int
    g: LegMatrix
    h: LegMatrix
    sqrt_g: LegMatrix
    a: LegMatrix
    omega: complex

    def a_power(self, n: int) -> LegMatrix:
        """``a^n`` for any integer n (``a`` is unitary, so ``a^{-1} = a^H``)."""
        base = self.a.data if n >= 0 else self.a.data.conj().T
        return LegMatrix(np.linalg.matrix_power(base, abs(n)), (self.N,))


@lru_cache(maxsize=None)
def build_heisenberg(N: int) -> HeisenbergSet:
    if N < 2:
        raise ValueError(f"N must be >= 2, got {N}")
    omega = eipi(Fraction(2, N))
    g = np.diag([eipi(Fraction(2 * i, N)) for i in range(N)])
    h = np.zeros((N, N), dtype=complex)
    for i in range(N):
        h[i, (i + 1) % N] = 1
    sqrt_g = np.diag([eipi(Fraction(j, N)) for j in range(N)])
    a = sqrt_g @ h @ sqrt_g
    dims = (N,)
    return HeisenbergSet(
        N,
        LegMatrix(g, dims),
        LegMatrix(h, dims),
        LegMatrix(sqrt_g, dims),
        LegMatrix(a, dims),
        omega,
    )


def build_I(hs: HeisenbergSet, a1: int, a2: int) -> LegMatrix:
    """``I_(a1,a2) = g^{a2} h^{a1}``."""
    N = hs.N
    if not (0 <= a1 < N and 0 <= a2 < N):
        raise ValueError(f"indices ({a1}, {a2}) out of range 0..{N - 1}")
    data = np.linalg.matrix_power(hs.g.data, a2) @ np.linalg.matrix_power(hs.h.data, a1)
    return LegMatrix(data, (N,))


@lru_cache(maxsize=None)
def _heisenberg_pairs(N: int) -> tuple:
    """``(a1, a2, I ⊗ I^{-1})`` for all of Z_N x Z_N."""
    hs = build_heisenberg(N)
    out = []
    for a1 in range(N):
        for a2 in range(N):
            I = build_I(hs, a1, a2).data
            out.append((a1, a2, np.kron(I, I.conj().T)))
    return tuple(out)


def w_coeff(a1: int, a2: int, xi: complex, zeta: complex, tau: complex, N: int,
            trunc: TruncationPolicy = DEFAULT_TRUNC) -> complex:
    g1 = HALF + Fraction(a1, N)
    g2 = HALF + Fraction(a2, N)
    num, _ = theta_scaled(g1, g2, xi + zeta / N, tau, trunc)
    den, mass = theta_scaled(g1, g2, zeta / N, tau, trunc)
    guard(den, mass, trunc, f"W_({a1},{a2}) denominator theta vanishes", zeta / N)
    return num / den / N


def build_r_tilde(xi: complex, params: LogParams, trunc: TruncationPolicy = DEFAULT_TRUNC) -> LegMatrix:
    """Ungauged R-matrix ``R~(z)``, ``z = exp(i pi xi)``."""
    validate(params)
    N, zeta, tau = params.N, params.zeta, params.tau
    xi = complex(xi)
    top, _ = theta_scaled(HALF, HALF, zeta, tau, trunc)
    bottom, mass = theta_scaled(HALF, HALF, xi + zeta, tau, trunc)
    guard(bottom, mass, trunc, "R prefactor theta[1/2,1/2](xi+zeta) vanishes", xi)
    pref = eipi(xi * (2 / N - 2)) * kappa_inv(xi, zeta, tau, N, trunc) * top / bottom
    total = np.zeros((N * N, N * N), dtype=complex)
    for a1, a2, block in _heisenberg_pairs(N):
        total += w_coeff(a1, a2, xi, zeta, tau, N, trunc) * block
    return LegMatrix(pref * total, (N, N))


def build_r(xi: complex, params: LogParams, trunc: TruncationPolicy = DEFAULT_TRUNC) -> LegMatrix:
    """Gauge-transformed R-matrix ``(g^{1/2} ⊗ g^{1/2}) R~ (g^{-1/2} ⊗ g^{-1/2})``."""
    rt = build_r_tilde(xi, params, trunc)
    d = np.diag(build_heisenberg(params.N).sqrt_g.data)
    gauge = np.kron(d, d)
    return LegMatrix(gauge[:, None] * rt.data / gauge[None, :], rt.dims)


def r_hat_factor(xi: complex, zeta: complex, N: int, trunc: TruncationPolicy = DEFAULT_TRUNC) -> complex:
    """``tau_N(q^{1/2} x^{-1})`` for ``x = exp(i pi xi)``."""
    return tau_n(zeta / 2 - xi, zeta, N, trunc)


def build_r_hat(xi: complex, params: LogParams, starred: bool = False,
                trunc: TruncationPolicy = DEFAULT_TRUNC) -> LegMatrix:
    """``R^(x) = tau_N(q^{1/2}/x) R(x)``; with ``starred`` the nome is ``p q^{-2c}``."""
    if starred:
        validate(params, need_star=True)
        params = params.starred()
    R = build_r(xi, params, trunc)
    return r_hat_factor(xi, params.zeta, params.N, trunc) * R

