"""Residual certification of the matrix identities satisfied by R, R^ and R^*.

Every check builds both sides literally and reports
``max|LHS - RHS| / max(1, max|LHS|)``.  Inverses go through
:meth:`LegMatrix.inv`, which refuses ill-conditioned matrices; the largest
condition number met is stored on the report.
"""

from __future__ import annotations

from collections.abc import Sequence

import numpy as np

from .errors import LegLimitError, NearPoleError
from .legs import LegMatrix, embed, embed_one, flip, partial_trace, permutation_op
from .params import LogParams, SurfaceSpec, surface_residual, validate
from .report import CheckReport, residual
from .rmatrix import build_heisenberg, build_r, build_r_hat, build_r_tilde
from .specfun import DEFAULT_TRUNC, TruncationPolicy, tau_n
from .structfn import g_inverse, g_struct

R_PROPERTIES = ("ybe", "unitarity", "crossing", "antisymmetry", "zn_symmetry", "quasi_periodicity")

# three-leg objects are N^3 x N^3; beyond this they are refused
MAX_N_3LEG = 4


def _require_3leg(N):
    if N > MAX_N_3LEG:
        raise LegLimitError(f"three-leg checks are limited to N <= {MAX_N_3LEG}, got N={N}")


def _report(name, params: LogParams, points, seed=None, n=None, h=None) -> CheckReport:
    return CheckReport(name, N=params.N, n=n, h=h, zeta=params.zeta, tau=params.tau,
                       c=params.c, points=[complex(x) for x in points], seed=seed)


def _finish(rep, lhs, rhs, tol, conds):
    if conds:
        rep.cond = max(conds)
    return rep.grade(*residual(lhs, rhs), tol)


def check_r_property(kind: str, params: LogParams, points: Sequence[complex],
                     trunc: TruncationPolicy = DEFAULT_TRUNC, tol: float = 1e-8,
                     seed=None) -> CheckReport:
    """Check one defining property of the elliptic R-matrix.

    ``kind`` is one of ``R_PROPERTIES``.  ``ybe`` takes two points
    ``(xi_z, xi_w)`` and checks ``R12(z) R13(w) R23(w/z) = R23(w/z) R13(w) R12(z)``;
    every other kind takes one point.
    """
    if kind not in R_PROPERTIES:
        raise ValueError(f"unknown R-matrix property {kind!r}")
    validate(params)
    points = [complex(x) for x in points]
    need = 2 if kind == "ybe" else 1
    if len(points) != need:
        raise ValueError(f"{kind} takes {need} point(s), got {len(points)}")
    N, zeta, tau = params.N, params.zeta, params.tau
    rep = _report(kind, params, points, seed)
    conds: list[float] = []
    xi = points[0]
    eye2 = LegMatrix.identity((N, N))

    if kind == "ybe":
        _require_3leg(N)
        x1, x2 = points
        r12 = embed(build_r(x1, params, trunc), 3, 1, 2)
        r13 = embed(build_r(x2, params, trunc), 3, 1, 3)
        r23 = embed(build_r(x2 - x1, params, trunc), 3, 2, 3)
        lhs = r12 @ r13 @ r23
        rhs = r23 @ r13 @ r12
    elif kind == "unitarity":
        lhs = build_r(xi, params, trunc) @ flip(build_r(-xi, params, trunc))
        rhs = eye2
    elif kind == "crossing":
        # R12(z)^{t2} R21(q^{-N} z^{-1})^{t2} = 1
        a = build_r(xi, params, trunc).pt(2)
        b = flip(build_r(-N * zeta - xi, params, trunc)).pt(2)
        lhs = a @ b
        rhs = eye2
    elif kind == "antisymmetry":
        # -z is xi + 1
        hs = build_heisenberg(N)
        g1 = hs.g.kron(LegMatrix.identity((N,)))
        g1inv = LegMatrix(g1.data.conj().T, g1.dims)
        lhs = build_r(xi + 1, params, trunc)
        rhs = hs.omega * (g1inv @ build_r(xi, params, trunc) @ g1)
    elif kind == "zn_symmetry":
        rt = build_r_tilde(xi, params, trunc).data.reshape(N, N, N, N)
        lhs = np.stack([rt] * (N - 1)).reshape(N - 1, -1)
        rhs = np.stack([np.roll(rt, (-s, -s, -s, -s), axis=(0, 1, 2, 3)) for s in range(1, N)]).reshape(N - 1, -1)
    else:  # quasi_periodicity
        # R^12(-p^{1/2} z) = A1^{-1} R^21(1/z)^{-1} A1,  A = g^{1/2} h g^{1/2};  -p^{1/2} z is xi + tau + 1
        a = build_heisenberg(N).a.kron(LegMatrix.identity((N,)))
        ainv = LegMatrix(a.data.conj().T, a.dims)
        lhs = build_r_hat(xi + tau + 1, params, trunc=trunc)
        inner = flip(build_r_hat(-xi, params, trunc=trunc)).inv(conds, "R^21(1/z)")
        rhs = ainv @ inner @ a
    return _finish(rep, lhs, rhs, tol, conds)


def check_r_identity(params: LogParams, trunc: TruncationPolicy = DEFAULT_TRUNC,
                     tol: float = 1e-10, seed=None) -> CheckReport:
    """``R(1)`` equals the flip operator."""
    from .legs import swap

    rep = _report("r_identity", params, [0j], seed)
    return _finish(rep, build_r(0j, params, trunc), swap(params.N), tol, [])


def check_tau_n(params: LogParams, xi: complex, trunc: TruncationPolicy = DEFAULT_TRUNC,
                tol: float = 1e-10, seed=None) -> CheckReport:
    """Period ``q^N`` and ``tau_N(1/z) = 1/tau_N(z)``; reports the larger residual."""
    validate(params)
    N, zeta = params.N, params.zeta
    rep = _report("tau_n", params, [xi], seed)
    t = tau_n(xi, zeta, N, trunc)
    periodic, s1 = residual(tau_n(xi + N * zeta, zeta, N, trunc), t)
    inverse, s2 = residual(tau_n(-xi, zeta, N, trunc) * t, 1.0)
    rep.detail["period"] = periodic
    rep.detail["inversion"] = inverse
    return rep.grade(max(periodic, inverse), max(s1, s2), tol)


def check_t_relations(params: LogParams, xi: complex, trunc: TruncationPolicy = DEFAULT_TRUNC,
                      tol: float = 1e-9, seed=None) -> CheckReport:
    """``R^*12(z/w) R^*21(w/z) = T`` and ``T R^12(z/w)^{-1} = R^21(w/z)``.

    ``xi`` is the log of ``z/w`` and ``T = tau_N(q^{1/2} w/z) tau_N(q^{1/2} z/w)``.
    """
    validate(params, need_star=True)
    N, zeta = params.N, params.zeta
    rep = _report("t_relations", params, [xi], seed)
    conds: list[float] = []
    T = tau_n(zeta / 2 - xi, zeta, N, trunc) * tau_n(zeta / 2 + xi, zeta, N, trunc)
    eye = LegMatrix.identity((N, N))
    lhs1 = build_r_hat(xi, params, starred=True, trunc=trunc) @ flip(build_r_hat(-xi, params, starred=True, trunc=trunc))
    res1, s1 = residual(lhs1, T * eye)
    lhs2 = T * build_r_hat(xi, params, trunc=trunc).inv(conds, "R^12(z/w)")
    res2, s2 = residual(lhs2, flip(build_r_hat(-xi, params, trunc=trunc)))
    rep.detail["star_product"] = res1
    rep.detail["inverse"] = res2
    rep.cond = max(conds)
    return rep.grade(max(res1, res2), max(s1, s2), tol)


def _a_on_leg1(N, n, transposed=False):
    an = build_heisenberg(N).a_power(n)
    if transposed:
        an = an.T
    return an.kron(LegMatrix.identity((N,)))


def check_quasi_shift_n(params: LogParams, n: int, xi: complex,
                        trunc: TruncationPolicy = DEFAULT_TRUNC, tol: float = 1e-8,
                        seed=None) -> CheckReport:
    """``R^21(z^{-1}(-p^{1/2})^n)^{-1} = G_N(n,z) a1^n R^21(z^{-1})^{-1} a1^{-n}``."""
    if n == 0:
        raise ValueError("n = 0 is the trivial shift")
    validate(params)
    N, tau = params.N, params.tau
    rep = _report("quasi_shift_n", params, [xi], seed, n=n)
    conds: list[float] = []
    lhs = flip(build_r_hat(-xi + n * (tau + 1), params, trunc=trunc)).inv(conds, "shifted R^21")
    inner = flip(build_r_hat(-xi, params, trunc=trunc)).inv(conds, "R^21(1/z)")
    G = g_struct(N, n, xi, params.zeta, tau, trunc)
    rhs = G * (_a_on_leg1(N, n) @ inner @ _a_on_leg1(N, -n))
    return _finish(rep, lhs, rhs, tol, conds)


def check_lemma_key(surface: SurfaceSpec, params: LogParams, xi: complex,
                    trunc: TruncationPolicy = DEFAULT_TRUNC, tol: float = 1e-8,
                    seed=None) -> CheckReport:
    """Conjugation identity behind the exchange of the traced generator with L.

    On the surface (c solved from ``surface``), with ``xi`` the log of ``w/z``::

        (a1^{-n})^{t1} (R^21(q^{c/2} w/z)^{t1})^{-1} (a1^n)^{t1}
            = G_N^{-1}(n, q^{c/2} (-p^{1/2})^n z/w) (R^21(q^{-c/2} w/z)^{-1})^{t1}
    """
    params = surface.solve(params)
    validate(params)
    N, n, zeta, tau, c = params.N, surface.n, params.zeta, params.tau, params.c
    rep = _report("lemma_key", params, [xi], seed, n=n, h=surface.h)
    conds: list[float] = []
    left = flip(build_r_hat(c * zeta / 2 + xi, params, trunc=trunc)).pt(1).inv(conds, "R^21^{t1}")
    lhs = _a_on_leg1(N, -n, transposed=True) @ left @ _a_on_leg1(N, n, transposed=True)
    g_inv = g_inverse(N, n, c * zeta / 2 + n * (tau + 1) - xi, zeta, tau, trunc)
    right = flip(build_r_hat(-c * zeta / 2 + xi, params, trunc=trunc)).inv(conds, "R^21").pt(1)
    rhs = right * g_inv
    rep.detail["on_surface"] = surface_residual(params, n)
    return _finish(rep, lhs, rhs, tol, conds)


def _random_complex(rng, *shape):
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


def check_trace_transposition(N: int, s: int, seed: int, tol: float = 1e-12,
                              matrices: dict | None = None) -> CheckReport:
    """Moving c-number factors around a partial trace by partial transposition.

    s = 2, legs (1, 2)::

        Tr_1(R21 Q1 R'21) = Tr_1(Q1 R'21^{t2} R21^{t2})^{t2}

    s = 3, legs (alpha, 1, 2) and beta = 1 ⊗ 2, with ``A = R_{alpha 2} R_{alpha 1}``
    and ``B = R'_{alpha 1} R'_{alpha 2}``::

        Tr_beta(A Q_beta B) = Tr_beta(Q_beta (B^{t_alpha} A^{t_alpha})^{t_alpha})

    ``matrices`` may supply ``R``, ``Rp`` (two-leg) and ``Q`` instead of
    random draws.
    """
    if s not in (2, 3):
        raise ValueError("s must be 2 or 3")
    if s == 3:
        _require_3leg(N)
    rng = np.random.default_rng(seed)
    mats = dict(matrices or {})

    def draw(key, dims):
        if key in mats:
            return mats[key]
        d = int(np.prod(dims))
        return LegMatrix(_random_complex(rng, d, d), dims)

    pair = (N, N)
    R = draw("R", pair)
    Rp = draw("Rp", pair)
    rep = CheckReport("trace_transposition", N=N, seed=seed)
    rep.detail["s"] = s
    if s == 2:
        Q = draw("Q", (N,))
        Q1 = Q.kron(LegMatrix.identity((N,)))
        lhs = partial_trace(R @ Q1 @ Rp, [1])
        rhs = partial_trace(Q1 @ Rp.pt(2) @ R.pt(2), [1]).pt(1)
    else:
        R2 = draw("R2", pair)
        Rp2 = draw("Rp2", pair)
        Q = draw("Q", pair)
        A = embed(R2, 3, 1, 3) @ embed(R, 3, 1, 2)
        B = embed(Rp, 3, 1, 2) @ embed(Rp2, 3, 1, 3)
        Qb = LegMatrix.identity((N,)).kron(Q)
        lhs = partial_trace(A @ Qb @ B, [2, 3])
        rhs = partial_trace(Qb @ (B.pt(1) @ A.pt(1)).pt(1), [2, 3])
    return _finish(rep, lhs, rhs, tol, [])


def check_transposed_ybe(params: LogParams, x1: complex, x2: complex,
                         trunc: TruncationPolicy = DEFAULT_TRUNC, tol: float = 1e-8,
                         starred: bool = True, seed=None) -> CheckReport:
    """Partially transposed Yang-Baxter relation on legs (alpha, 1, 2)::

        R*_{a1}(x1)^{t1} R*_12(q^{-N} x2/x1)^{t1 t2} (R*_{a2}(x2)^{-1})^{t2}
            = (R*_{a2}(x2)^{-1})^{t2} R*_12(q^{-N} x2/x1)^{t1 t2} R*_{a1}(x1)^{t1}

    Legs 1 and 2 are slots 2 and 3.
    """
    validate(params, need_star=starred)
    N = params.N
    _require_3leg(N)
    rep = _report("transposed_ybe", params, [x1, x2], seed)
    conds: list[float] = []

    def rh(x):
        return build_r_hat(x, params, starred=starred, trunc=trunc)

    a1 = embed(rh(x1), 3, 1, 2).pt(2)
    m12 = embed(rh(x2 - x1 - N * params.zeta), 3, 2, 3).pt(2, 3)
    b2 = embed(rh(x2), 3, 1, 3).inv(conds, "R*_{a2}").pt(3)
    lhs = a1 @ m12 @ b2
    rhs = b2 @ m12 @ a1
    return _finish(rep, lhs, rhs, tol, conds)


def build_w_kernel(s: int, xi: complex, surface: SurfaceSpec, params: LogParams,
                   trunc: TruncationPolicy = DEFAULT_TRUNC) -> LegMatrix:
    """c-number part of the spin-s generator built from s copies of the trace.

    ``(prod_{i<j} P_ij) (prod_{i<j} R^*_ij(q^{-N} z_i/z_j)^{t_i t_j})`` on s
    legs, pairs ordered by i then j, increasing left to right; this
    reproduces the printed s = 3 expansion ``P12 P13 P23 R12 R13 R23``.
    ``z_i = z q^{i-(s+1)/2}``, so every argument ``q^{-N} z_i/z_j`` is
    independent of z.
    """
    if s < 1:
        raise ValueError("s must be >= 1")
    if s > 3:
        raise ValueError("only s <= 3 is supported")
    params = surface.solve(params)
    validate(params, need_star=True)
    N, zeta = params.N, params.zeta
    if s == 3:
        _require_3leg(N)
    dims = (N,) * s
    if s == 1:
        return LegMatrix.identity(dims)
    logs = [xi + (i - (s + 1) / 2) * zeta for i in range(1, s + 1)]
    perms = LegMatrix.identity(dims)
    rs = LegMatrix.identity(dims)
    for i in range(1, s + 1):
        for j in range(i + 1, s + 1):
            perms = perms @ permutation_op(s, i, j, N)
            arg = logs[i - 1] - logs[j - 1] - N * zeta
            r = build_r_hat(arg, params, starred=True, trunc=trunc)
            rs = rs @ embed(r, s, i, j).pt(i, j)
    return perms @ rs


def embed_a(N: int, n: int, s: int, i: int) -> LegMatrix:
    """``a^n`` on slot i of an s-leg space."""
    return embed_one(build_heisenberg(N).a_power(n), s, i)
