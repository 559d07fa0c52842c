"""Parameters in logarithmic coordinates.

Every multiplicative parameter is stored through its exponent:

    z = exp(i pi xi),   q = exp(i pi zeta),   p = exp(2 i pi tau).

Fractional powers are taken by scaling these exponents, so ``p**(1/2)`` is
``exp(i pi tau)`` and ``-p**(1/2)`` is ``exp(i pi (tau + 1))``.  Shifting a
spectral parameter by ``q**a`` adds ``a * zeta`` to its exponent; by
``(-p**(1/2))**n`` it adds ``n * (tau + 1)``.  No complex power of an
already exponentiated number is ever taken.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, replace

import numpy as np

from .errors import DegenerateParameterError, ParameterError

IPI = 1j * math.pi


def eipi(x: complex) -> complex:
    """``exp(i pi x)``."""
    return cmath.exp(IPI * x)


@dataclass(frozen=True)
class LogParams:
    N: int
    zeta: complex
    tau: complex
    c: complex | None = None

    @property
    def q(self) -> complex:
        return eipi(self.zeta)

    @property
    def p(self) -> complex:
        return eipi(2 * self.tau)

    @property
    def tau_star(self) -> complex:
        if self.c is None:
            raise ParameterError(["c missing"])
        return p_star_tau(self.tau, self.zeta, self.c)

    @property
    def p_star(self) -> complex:
        return eipi(2 * self.tau_star)

    def with_c(self, c: complex) -> LogParams:
        return replace(self, c=complex(c))

    def starred(self) -> LogParams:
        """Same parameters with the nome replaced by ``p* = p q^{-2c}``."""
        return replace(self, tau=self.tau_star)


@dataclass(frozen=True)
class SurfaceSpec:
    """The surface ``(-p^{1/2})^n = q^{-c-N}`` and optional classical data."""

    N: int
    n: int
    h: int | None = None
    beta: float | None = None

    def solve(self, params: LogParams) -> LogParams:
        """Return ``params`` with c placed on this surface."""
        if params.N != self.N:
            raise ParameterError([f"N mismatch ({params.N} != {self.N})"])
        return params.with_c(solve_surface_c(self.N, self.n, params.zeta, params.tau))


def solve_surface_c(N: int, n: int, zeta: complex, tau: complex) -> complex:
    """Principal central charge on the surface labelled ``n``.

    Solves ``n (tau + 1) + (c + N) zeta = 0`` exactly, i.e. no multiples of
    ``2 pi i / ln q`` are added.
    """
    if zeta == 0:
        raise DegenerateParameterError("zeta = 0: q = 1 has no surface solution")
    return complex(-N - n * (tau + 1) / zeta)


def surface_residual(params: LogParams, n: int) -> float:
    """``|(-p^{1/2})^n q^{c+N} - 1|`` with both powers taken in log form."""
    if params.c is None:
        raise ParameterError(["c missing"])
    lhs = eipi(n * (params.tau + 1)) * eipi((params.c + params.N) * params.zeta)
    return abs(lhs - 1)


def classical_tau(N: int, h: int, zeta: complex, beta: float = 0.0) -> complex:
    """Nome exponent with ``q^{Nh} = p^{1-beta}``; beta=0 gives ``p = q^{Nh}``."""
    if h == 0:
        raise DegenerateParameterError("h = 0 is excluded from the classical line")
    if beta == 1:
        raise DegenerateParameterError("beta = 1 makes p undefined")
    return complex(N * h * zeta / (2 * (1 - beta)))


def p_star_tau(tau: complex, zeta: complex, c: complex) -> complex:
    return complex(tau - c * zeta)


def validate(params: LogParams, need_star: bool = False) -> None:
    """Raise :class:`ParameterError` naming every violated bound."""
    bad = []
    if params.N < 2:
        bad.append("N<2")
    if params.zeta.imag <= 0:
        bad.append("|q|>=1")
    if params.tau.imag <= 0:
        bad.append("|p|>=1")
    if need_star:
        if params.c is None:
            bad.append("c missing")
        elif params.tau_star.imag <= 0:
            bad.append("|p*|>=1")
    if bad:
        raise ParameterError(bad)


@dataclass(frozen=True)
class Region:
    """Sampling box for parameters and spectral points.

    Spectral points keep ``|Re xi|`` away from 0, where ``x^2 = 1`` is a
    pole of the classical structure function and a fixed point of the
    inversion ``x -> 1/x``.
    """

    zeta_im: tuple[float, float] = (0.2, 0.6)
    tau_im: tuple[float, float] = (0.6, 1.2)
    re: tuple[float, float] = (-0.2, 0.2)
    xi_re_abs: tuple[float, float] = (0.05, 0.3)
    xi_im: tuple[float, float] = (-0.1, 0.1)

    def sample_zeta(self, rng: np.random.Generator) -> complex:
        return complex(rng.uniform(*self.re), rng.uniform(*self.zeta_im))

    def sample_tau(self, rng: np.random.Generator) -> complex:
        return complex(rng.uniform(*self.re), rng.uniform(*self.tau_im))

    def sample_params(self, rng: np.random.Generator, N: int) -> LogParams:
        zeta = self.sample_zeta(rng)
        return LogParams(N, zeta, self.sample_tau(rng))

    def sample_point(self, rng: np.random.Generator) -> complex:
        sign = 1.0 if rng.random() < 0.5 else -1.0
        return complex(sign * rng.uniform(*self.xi_re_abs), rng.uniform(*self.xi_im))


DEFAULT_REGION = Region()
