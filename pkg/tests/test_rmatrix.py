from itertools import product

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import taus, untestable, xis, zetas
from test_specfun import kappa_window, theta_window
from wqp.errors import ParameterError
from wqp.legs import LegMatrix, flip, swap
from wqp.params import LogParams, SurfaceSpec
from wqp.rmatrix import (
    build_heisenberg,
    build_I,
    build_r,
    build_r_hat,
    build_r_tilde,
    w_coeff,
)
from wqp.specfun import tau_n


def r_tilde_oracle(xi, zeta, tau, N):
    """Direct composition from index definitions and fixed-window sums."""
    w = np.exp(2j * np.pi / N)
    R = np.zeros((N * N, N * N), dtype=complex)
    for a1, a2 in product(range(N), repeat=2):
        g1, g2 = 0.5 + a1 / N, 0.5 + a2 / N
        W = theta_window(g1, g2, xi + zeta / N, tau) / theta_window(g1, g2, zeta / N, tau) / N
        I = np.zeros((N, N), dtype=complex)
        for i in range(N):
            I[i, (i + a1) % N] = w ** (a2 * i)
        R += W * np.kron(I, np.linalg.inv(I))
    pref = np.exp(1j * np.pi * xi * (2 / N - 2)) * kappa_window(xi, zeta, tau, N)
    pref *= theta_window(0.5, 0.5, zeta, tau) / theta_window(0.5, 0.5, xi + zeta, tau)
    return pref * R


# --- Heisenberg matrices -------------------------------------------------------


def test_heisenberg_n2():
    hs = build_heisenberg(2)
    assert np.allclose(hs.g.data, np.diag([1, -1]))
    assert np.allclose(hs.h.data, [[0, 1], [1, 0]])
    assert np.allclose(hs.h.data @ hs.g.data, -hs.g.data @ hs.h.data)
    assert np.allclose(hs.a.data, [[0, 1j], [1j, 0]])
    assert np.allclose(hs.a.data @ hs.a.data, -np.eye(2))


@pytest.mark.parametrize("N", [2, 3, 4, 5, 6])
def test_heisenberg_invariants(N):
    hs = build_heisenberg(N)
    g, h, a = hs.g.data, hs.h.data, hs.a.data
    eye = np.eye(N)
    assert np.allclose(h @ g, hs.omega * g @ h, atol=1e-14)
    assert np.allclose(np.linalg.matrix_power(g, N), eye, atol=1e-14)
    assert np.allclose(np.linalg.matrix_power(h, N), eye)
    aN = np.linalg.matrix_power(a, N)
    assert np.allclose(aN, aN[0, 0] * eye, atol=1e-14)
    assert np.allclose(hs.a_power(-3).data @ hs.a_power(3).data, eye, atol=1e-14)


def test_heisenberg_rejects_small_rank():
    with pytest.raises(ValueError):
        build_heisenberg(1)


def test_I_matrices():
    hs = build_heisenberg(2)
    assert np.array_equal(build_I(hs, 0, 0).data, np.eye(2))
    gh = build_I(hs, 1, 1).data
    assert np.allclose(gh, [[0, 1], [-1, 0]])
    with pytest.raises(ValueError):
        build_I(hs, 2, 0)


@pytest.mark.parametrize("N", [2, 3])
def test_I_group_law(N):
    hs = build_heisenberg(N)
    for a1, a2, b1, b2 in product(range(N), repeat=4):
        lhs = build_I(hs, a1, a2).data @ build_I(hs, b1, b2).data
        # g^{a2} h^{a1} g^{b2} h^{b1}; the commutation phase comes from h^{a1} g^{b2}
        phase = hs.omega ** (a1 * b2)
        rhs = phase * build_I(hs, (a1 + b1) % N, (a2 + b2) % N).data
        assert np.allclose(lhs, rhs, atol=1e-13)


# --- weights and R ---------------------------------------------------------------


@pytest.mark.parametrize("N", [2, 3, 4])
def test_weights_at_origin(N):
    zeta, tau = 0.05 + 0.3j, 0.1 + 0.9j
    ws = [w_coeff(a1, a2, 0, zeta, tau, N) for a1, a2 in product(range(N), repeat=2)]
    assert np.allclose(ws, 1 / N)
    assert abs(sum(ws) / N - 1) < 1e-14


def test_weight_matches_theta_composition():
    got = w_coeff(1, 0, 0.1, 0.3j, 0.9j, 2)
    want = theta_window(1.0, 0.5, 0.1 + 0.15j, 0.9j) / theta_window(1.0, 0.5, 0.15j, 0.9j) / 2
    assert abs(got - want) < 1e-14


@pytest.mark.parametrize("N", [2, 3])
def test_heisenberg_sum_is_flip(N):
    hs = build_heisenberg(N)
    total = sum(np.kron(build_I(hs, a1, a2).data, np.linalg.inv(build_I(hs, a1, a2).data))
                for a1, a2 in product(range(N), repeat=2))
    assert np.allclose(total / N, swap(N).data)


@pytest.mark.parametrize("N", [2, 3, 4])
def test_r_at_one_is_flip(N):
    R = build_r(0, LogParams(N, 0.05 + 0.3j, 0.1 + 0.9j))
    assert np.max(np.abs(R.data - swap(N).data)) < 1e-10


@given(N=st.integers(2, 3), xi=xis, zeta=zetas, tau=taus)
def test_r_tilde_matches_oracle(N, xi, zeta, tau):
    got = untestable(build_r_tilde, xi, LogParams(N, zeta, tau)).data
    want = r_tilde_oracle(xi, zeta, tau, N)
    assert np.max(np.abs(got - want)) <= 1e-10 * max(1, np.max(np.abs(want)))


@given(N=st.integers(2, 3), xi=xis, zeta=zetas, tau=taus)
def test_r_tilde_zn_symmetric(N, xi, zeta, tau):
    T = untestable(build_r_tilde, xi, LogParams(N, zeta, tau)).data.reshape(N, N, N, N)
    scale = max(1, np.max(np.abs(T)))
    for s in range(1, N):
        assert np.max(np.abs(np.roll(T, s, axis=(0, 1, 2, 3)) - T)) <= 1e-10 * scale


@given(N=st.integers(2, 4), xi=xis, zeta=zetas, tau=taus)
def test_unitarity(N, xi, zeta, tau):
    params = LogParams(N, zeta, tau)
    prod_ = untestable(build_r, xi, params) @ flip(untestable(build_r, -xi, params))
    assert np.max(np.abs(prod_.data - np.eye(N * N))) < 1e-9


def test_gauge_transform():
    params = LogParams(3, 0.05 + 0.3j, 0.1 + 0.9j)
    xi = 0.13 + 0.02j
    G = np.kron(build_heisenberg(3).sqrt_g.data, build_heisenberg(3).sqrt_g.data)
    want = G @ build_r_tilde(xi, params).data @ np.linalg.inv(G)
    assert np.allclose(build_r(xi, params).data, want, atol=1e-13)


def test_r_hat_is_scaled_r():
    params = LogParams(3, 0.05 + 0.3j, 0.1 + 0.9j)
    xi = 0.13 + 0.02j
    factor = tau_n(params.zeta / 2 - xi, params.zeta, 3)
    assert np.allclose(build_r_hat(xi, params).data, factor * build_r(xi, params).data, rtol=1e-14)


def test_starred_with_zero_charge_is_unstarred():
    params = LogParams(2, 0.05 + 0.3j, 0.1 + 0.9j, c=0)
    xi = -0.11 + 0.05j
    assert np.array_equal(build_r_hat(xi, params, starred=True).data, build_r_hat(xi, params).data)


def test_starred_product_is_scalar():
    params = SurfaceSpec(2, 1).solve(LogParams(2, 0.05 + 0.3j, 0.1 + 0.9j))
    xi = 0.17 - 0.03j
    zeta = params.zeta
    T = tau_n(zeta / 2 - xi, zeta, 2) * tau_n(zeta / 2 + xi, zeta, 2)
    M = build_r_hat(xi, params, starred=True) @ flip(build_r_hat(-xi, params, starred=True))
    assert np.max(np.abs(M.data - T * np.eye(4))) < 1e-9 * max(1, abs(T))


def test_starred_requires_charge():
    with pytest.raises(ParameterError):
        build_r_hat(0.1, LogParams(2, 0.3j, 0.9j), starred=True)


def test_sqrt_g_branch():
    hs = build_heisenberg(4)
    assert np.allclose(np.diag(hs.sqrt_g.data), np.exp(1j * np.pi * np.arange(4) / 4))
    assert hs.omega == pytest.approx(np.exp(2j * np.pi / 4))
