import json

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import taus, untestable, xis, zetas
from wqp.errors import LegLimitError, NearPoleError
from wqp.legs import LegMatrix, embed, flip, permutation_op
from wqp.params import LogParams, SurfaceSpec
from wqp.report import CheckReport, residual
from wqp.rmatrix import build_heisenberg, build_r_hat
from wqp.identities import (
    R_PROPERTIES,
    build_w_kernel,
    check_lemma_key,
    check_quasi_shift_n,
    check_r_identity,
    check_r_property,
    check_t_relations,
    check_tau_n,
    check_trace_transposition,
    check_transposed_ybe,
)
from wqp.specfun import TruncationPolicy, tau_n

P2 = LogParams(2, 0.05 + 0.3j, 0.1 + 0.9j)
P3 = LogParams(3, -0.07 + 0.35j, 0.12 + 0.8j)
X1, X2 = 0.13 + 0.04j, -0.21 + 0.03j


def test_residual_definition():
    lhs = np.array([[2.0, 0], [0, 4.0]])
    rhs = np.array([[2.0, 0], [0, 3.0]])
    assert residual(lhs, rhs) == (0.25, 4.0)
    assert residual(np.array([0.5]), np.array([0.25]))[0] == 0.25


def test_report_schema():
    rep = check_r_property("unitarity", P2, [X1])
    d = json.loads(rep.to_json())
    for key in ("name", "N", "n", "h", "zeta", "tau", "c", "points", "seed", "residual", "scale", "tol", "pass"):
        assert key in d
    assert d["zeta"] == [P2.zeta.real, P2.zeta.imag]
    assert d["points"] == [[X1.real, X1.imag]]
    assert d["pass"] is (d["residual"] < d["tol"])


def test_grading():
    rep = CheckReport("x").grade(1e-9, 1.0, 1e-9)
    assert rep.status == "fail" and not rep.passed
    assert CheckReport("x").grade(0.0, 1.0, 1e-30).passed


def test_r_property_reference_points():
    assert check_r_property("ybe", P2, [X1, X2], tol=1e-9).passed
    assert check_r_property("unitarity", P3, [X1], tol=1e-9).passed
    assert check_r_property("quasi_periodicity", P2, [X2], tol=1e-8).passed


@pytest.mark.parametrize("kind", R_PROPERTIES)
@pytest.mark.parametrize("N", [2, 3, 4])
def test_r_properties_fixed_point(kind, N):
    params = LogParams(N, 0.05 + 0.3j, 0.1 + 0.9j)
    pts = [X1, X2] if kind == "ybe" else [X1]
    rep = check_r_property(kind, params, pts)
    assert rep.passed, rep.residual


@given(kind=st.sampled_from(R_PROPERTIES), N=st.integers(2, 3), x1=xis, x2=xis, zeta=zetas, tau=taus)
def test_r_properties_random(kind, N, x1, x2, zeta, tau):
    pts = [x1, x2] if kind == "ybe" else [x1]
    rep = untestable(check_r_property, kind, LogParams(N, zeta, tau), pts)
    assert rep.passed, (rep.residual, rep.cond)


def test_r_property_argument_errors():
    with pytest.raises(ValueError):
        check_r_property("commutativity", P2, [X1])
    with pytest.raises(ValueError):
        check_r_property("ybe", P2, [X1])
    with pytest.raises(LegLimitError):
        check_r_property("ybe", LogParams(5, 0.3j, 0.9j), [X1, X2])


def test_broken_identity_is_detected():
    # a wrong crossing shift must fail, otherwise the checks measure nothing
    params = LogParams(2, 0.05 + 0.3j, 0.1 + 0.9j)
    a = build_r_hat(X1, params).pt(2)
    b = flip(build_r_hat(-X1, params)).pt(2)
    res, _ = residual((a @ b).data, np.eye(4))
    assert res > 1e-3


@pytest.mark.parametrize("N", [2, 3, 4])
def test_r_identity(N):
    assert check_r_identity(LogParams(N, 0.05 + 0.3j, 0.1 + 0.9j)).residual < 1e-10


def test_tau_n_check():
    rep = check_tau_n(P3, X1)
    assert rep.passed and rep.detail["period"] < 1e-10 and rep.detail["inversion"] < 1e-10


# --- starred relations -------------------------------------------------------------


def test_t_relations_examples():
    assert check_t_relations(P2.with_c(0), X1).passed
    assert check_t_relations(SurfaceSpec(2, 1).solve(P2), X1).passed
    assert check_t_relations(P3.with_c(0.7), X2).passed


# --- n-step quasi-periodicity --------------------------------------------------------


def g_one(xi, zeta, N):
    return tau_n(xi + zeta / 2, zeta, N) * tau_n(-xi + zeta / 2, zeta, N)


def r21_inv(xi, params):
    return np.linalg.inv(flip(build_r_hat(xi, params)).data)


def a1(N, k):
    return np.kron(build_heisenberg(N).a_power(k).data, np.eye(N))


def test_quasi_shift_single_step():
    rep = check_quasi_shift_n(P2, 1, X1)
    assert rep.passed
    # single step written out directly
    N, zeta, tau = 2, P2.zeta, P2.tau
    lhs = r21_inv(-X1 + tau + 1, P2)
    rhs = g_one(X1, zeta, N) * a1(N, 1) @ r21_inv(-X1, P2) @ a1(N, -1)
    assert residual(lhs, rhs)[0] < 1e-8


@pytest.mark.parametrize("n", [-2, -1, 1, 2, 3])
@pytest.mark.parametrize("params", [P2, P3])
def test_quasi_shift_n(params, n):
    assert check_quasi_shift_n(params, n, X2).passed


def test_quasi_shift_three_steps_by_iteration():
    N, zeta, tau = 2, P2.zeta, P2.tau
    s = tau + 1
    # apply the single step at z, z(-p^{1/2})^{-1}, z(-p^{1/2})^{-2}
    M = r21_inv(-X1, P2)
    for k in range(3):
        M = g_one(X1 - (2 - k) * s, zeta, N) * a1(N, 1) @ M @ a1(N, -1)
    lhs = r21_inv(-X1 + 3 * s, P2)
    assert residual(lhs, M)[0] < 1e-8
    assert check_quasi_shift_n(P2, 3, X1).passed


def test_quasi_shift_backwards_by_iteration():
    N, zeta, tau = 3, P3.zeta, P3.tau
    s = tau + 1
    # step forward from z(-p^{1/2}) lands on z; invert it
    base = r21_inv(-X2 - s, P3)
    fwd = g_one(X2 + s, zeta, N) * a1(N, 1) @ base @ a1(N, -1)
    assert residual(r21_inv(-X2, P3), fwd)[0] < 1e-8
    assert check_quasi_shift_n(P3, -1, X2).passed


def test_quasi_shift_rejects_zero():
    with pytest.raises(ValueError):
        check_quasi_shift_n(P2, 0, X1)


# --- key lemma ---------------------------------------------------------------------


def test_lemma_examples():
    assert check_lemma_key(SurfaceSpec(2, 1), P2, X1).passed
    assert check_lemma_key(SurfaceSpec(3, -2), P3, X2).passed
    rep = check_lemma_key(SurfaceSpec(2, 0), P2, X1, tol=1e-9)
    assert rep.passed and rep.c == -2


@given(N=st.integers(2, 3), n=st.sampled_from([-2, -1, 1, 2, 3]), xi=xis, zeta=zetas, tau=taus)
def test_lemma_random(N, n, xi, zeta, tau):
    rep = untestable(check_lemma_key, SurfaceSpec(N, n), LogParams(N, zeta, tau), xi)
    assert rep.passed, (rep.residual, rep.cond)
    assert rep.detail["on_surface"] < 1e-12


def test_lemma_insensitive_to_truncation():
    base = check_lemma_key(SurfaceSpec(3, 2), P3, X1)
    finer = check_lemma_key(SurfaceSpec(3, 2), P3, X1, TruncationPolicy(tail_eps=0.5e-18))
    assert finer.residual <= 2 * max(base.residual, 1e-16)


# --- trace transposition --------------------------------------------------------------


def test_trace_transposition_identity_matrices():
    N = 3
    rng = np.random.default_rng(0)
    Q = LegMatrix(rng.standard_normal((N, N)) + 0j, (N,))
    mats = {"R": LegMatrix.identity((N, N)), "Rp": LegMatrix.identity((N, N)), "Q": Q}
    rep = check_trace_transposition(N, 2, 0, matrices=mats)
    assert rep.residual == 0


def index_sum_two_legs(R, Rp, Q, N):
    """Both sides of the s = 2 identity by explicit loops (legs 1, 2; R21 = P R P)."""
    R21 = flip(R).data.reshape(N, N, N, N)
    Rp21 = flip(Rp).data.reshape(N, N, N, N)
    q = Q.data
    lhs = np.zeros((N, N), dtype=complex)
    rhs = np.zeros((N, N), dtype=complex)
    for b, d in np.ndindex(N, N):
        for a, c, e, f in np.ndindex(N, N, N, N):
            # Tr_1(R21 Q1 R'21)_{bd} = sum R21[a b, c e] Q[c f] R'21[f e, a d]
            lhs[b, d] += R21[a, b, c, e] * q[c, f] * Rp21[f, e, a, d]
            # (Tr_1(Q1 R'21^{t2} R21^{t2}))^{t2} at (b, d) is the untransposed (d, b) entry
            rhs[b, d] += q[a, c] * Rp21[c, e, f, d] * R21[f, b, a, e]
    return lhs, rhs


def test_trace_transposition_index_oracle():
    N = 2
    rng = np.random.default_rng(42)
    R = LegMatrix(rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4)), (2, 2))
    Rp = LegMatrix(rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4)), (2, 2))
    Q = LegMatrix(rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2)), (2,))
    lhs, rhs = index_sum_two_legs(R, Rp, Q, N)
    assert np.max(np.abs(lhs - rhs)) < 1e-12
    assert check_trace_transposition(N, 2, 42, matrices={"R": R, "Rp": Rp, "Q": Q}).residual < 1e-12
    assert check_trace_transposition(N, 2, 42).residual < 1e-12


def test_trace_transposition_three_legs_index_oracle():
    N = 3
    rng = np.random.default_rng(7)
    mats = {k: LegMatrix(rng.standard_normal((9, 9)) + 1j * rng.standard_normal((9, 9)), (N, N))
            for k in ("R", "Rp", "R2", "Rp2", "Q")}
    T = {k: m.data.reshape(N, N, N, N) for k, m in mats.items()}
    # legs (alpha, 1, 2) carry row letters (x, y, z) and column letters (X, Y, Z)
    A = np.einsum("xzuZ,uyXY->xyzXYZ", T["R2"], T["R"])  # R_{alpha 2} R_{alpha 1}
    B = np.einsum("xyuY,uzXZ->xyzXYZ", T["Rp"], T["Rp2"])  # R'_{alpha 1} R'_{alpha 2}
    Qb = np.einsum("xX,yzYZ->xyzXYZ", np.eye(N), T["Q"])
    lhs = np.einsum("xyzabc,abcdef,defXyz->xX", A, Qb, B)

    def t_alpha(M):
        return M.transpose(3, 1, 2, 0, 4, 5)

    BA = t_alpha(np.einsum("xyzabc,abcXYZ->xyzXYZ", t_alpha(B), t_alpha(A)))
    rhs = np.einsum("xyzabc,abcXyz->xX", Qb, BA)
    assert np.max(np.abs(lhs - rhs)) < 1e-12 * max(1, np.max(np.abs(lhs)))
    assert check_trace_transposition(N, 3, 7, matrices=mats).residual < 1e-12


@given(seed=st.integers(0, 2**31 - 1), N=st.integers(2, 3), s=st.integers(2, 3))
def test_trace_transposition_random(seed, N, s):
    assert check_trace_transposition(N, s, seed).residual < 1e-12


# --- transposed Yang-Baxter --------------------------------------------------------------


def test_transposed_ybe_examples():
    params = SurfaceSpec(2, 1).solve(P2)
    assert check_transposed_ybe(params, X1, X2).passed
    assert check_transposed_ybe(params, X1, X1 + 0.05).passed
    assert check_transposed_ybe(P3.with_c(0.4 + 0.1j), X1, X2).passed


def test_transposed_ybe_refuses_coincident_points():
    # x1 = x2 puts the middle factor at q^{-N}, a pole of the R-matrix
    with pytest.raises(NearPoleError):
        check_transposed_ybe(SurfaceSpec(2, 1).solve(P2), X1, X1)


def test_transposed_ybe_unstarred_matches_starred_at_zero_charge():
    params = P2.with_c(0)
    a = check_transposed_ybe(params, X1, X2, starred=True)
    b = check_transposed_ybe(params, X1, X2, starred=False)
    assert abs(a.residual - b.residual) < 1e-12


# --- w kernel -------------------------------------------------------------------------------


def rs(params, arg):
    return build_r_hat(arg, params, starred=True)


def test_w_kernel_s1_is_identity():
    K = build_w_kernel(1, X1, SurfaceSpec(2, 1), P2)
    assert np.array_equal(K.data, np.eye(2))


def test_w_kernel_s2_by_hand():
    params = SurfaceSpec(2, 1).solve(P2)
    zeta = params.zeta
    z1, z2 = X1 - zeta / 2, X1 + zeta / 2
    want = permutation_op(2, 1, 2, 2) @ rs(params, z1 - z2 - 2 * zeta).pt(1, 2)
    got = build_w_kernel(2, X1, SurfaceSpec(2, 1), P2)
    assert np.allclose(got.data, want.data, atol=1e-13)


def test_w_kernel_s3_printed_order():
    N = 3
    params = SurfaceSpec(N, 1).solve(P3)
    zeta = params.zeta
    z = [X1 - zeta, X1, X1 + zeta]

    def r(i, j):
        return embed(rs(params, z[i - 1] - z[j - 1] - N * zeta), 3, i, j).pt(i, j)

    P = [permutation_op(3, i, j, N) for i, j in ((1, 2), (1, 3), (2, 3))]
    want = P[0] @ P[1] @ P[2] @ r(1, 2) @ r(1, 3) @ r(2, 3)
    got = build_w_kernel(3, X1, SurfaceSpec(N, 1), P3)
    assert np.allclose(got.data, want.data, atol=1e-12)


def test_w_kernel_s3_singular_for_rank_two():
    # for N = 2 the (1, 3) factor sits at q^{-4}, a pole of the normalised R-matrix
    with pytest.raises(NearPoleError):
        build_w_kernel(3, X1, SurfaceSpec(2, 1), P2)


def test_w_kernel_limits():
    with pytest.raises(ValueError):
        build_w_kernel(4, X1, SurfaceSpec(2, 1), P2)
