from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.integrate import quad_vec
from scipy.linalg import expm

from fluxlde import hamiltonians as ham
from fluxlde import linalg as la
from fluxlde.metrics import end_to_end_concurrence
from fluxlde.spectral import ground_state


def test_dc_site_pattern_n4():
    cfg = ham.DcChainConfig()
    p = ham.dc_site_params(cfg, 1.0)
    assert np.allclose(p.J, [1.0, 5.0, 1.0])
    assert np.allclose(p.delta, [0.09, 4.5, 4.5, 0.09])
    assert np.allclose(p.eps, [-0.02, 1.0, -1.0, 0.02])


def test_dc_pattern_general_even_n():
    p = ham.dc_site_params(ham.DcChainConfig(n_sites=6), 1.0)
    assert np.allclose(p.eps, [-0.02, 1, -1, 1, -1, 0.02])
    assert np.allclose(p.J, [1, 5, 5, 5, 1])
    with pytest.raises(ValueError):
        ham.dc_site_params(ham.DcChainConfig(n_sites=5), 0.0)


def test_transverse_ising_matches_explicit_sum():
    eps, delta, J = [0.3, -0.2, 0.1], [1.0, 0.5, 0.7], [2.0, -1.0]
    h = ham.transverse_ising(eps, delta, J)
    ref = np.zeros((8, 8), complex)
    for j in range(3):
        ref -= eps[j] * la.embed_site(la.SZ, j + 1, 3) + delta[j] * la.embed_site(la.SX, j + 1, 3)
    for j in range(2):
        ref += J[j] * la.embed_pair(la.SZ, j + 1, la.SZ, j + 2, 3)
    assert np.allclose(h, 2 * np.pi * ref)


def test_hamiltonian_is_linear_in_bias():
    cfg = ham.DcChainConfig()
    h0, h1, h2 = (ham.build_dc(cfg, e) for e in (0.0, 1.0, 2.0))
    assert np.allclose(h2 - h1, h1 - h0)
    assert la.is_hermitian(h1)


def test_ferro_and_antiferro_chains_are_unitarily_equivalent():
    # Flipping every second spin maps J -> -J and eps_j -> (-1)^j eps_j.
    eps, delta, J = np.array([0.2, 0.5, -0.5, -0.2]), np.full(4, 1.3), np.array([1.0, 5.0, 1.0])
    flip = la.kron(la.I2, la.SX, la.I2, la.SX)
    signs = np.array([1, -1, 1, -1])
    h_af = ham.transverse_ising(eps, delta, J)
    h_fm = ham.transverse_ising(eps * signs, delta, -J)
    assert np.allclose(flip @ h_af @ flip, h_fm)
    assert np.allclose(np.linalg.eigvalsh(h_af), np.linalg.eigvalsh(h_fm))


def test_mw_config_validation():
    assert ham.MwChainConfig().omega == 20.0
    with pytest.raises(ValueError):
        ham.MwChainConfig(omega=19.0)
    assert ham.MwChainConfig(omega=19.0, allow_detuning=True).omega == 19.0
    with pytest.raises(ValueError):
        ham.MwChainConfig(phases=(0.0, 0.0))
    assert ham.MwChainConfig().rwa_valid
    assert not ham.MwChainConfig(delta=0.5, omega=1.0, omega0=2.0).rwa_valid


def test_mw_initial_state_is_staggered():
    cfg = ham.MwChainConfig()
    g = ground_state(ham.build_mw_initial(cfg)).state
    # Odd sites biased toward L, even sites toward R.
    assert abs(np.vdot(la.basis_state("LRLR"), g)) ** 2 > 0.95


def test_u0_is_frame_propagator():
    n, omega, t = 3, 20.0, 0.0137
    u = ham.build_u0(omega, t, n)
    assert np.allclose(u, expm(-1j * ham.frame_generator(omega, n) * t))
    assert np.allclose(u.conj().T @ u, np.eye(8))


def _direct_interaction(cfg, Omega, t):
    u = ham.build_u0(cfg.omega, t, cfg.n_sites)
    h0 = ham.frame_generator(cfg.omega, cfg.n_sites)
    return u.conj().T @ ham.build_mw_full(cfg, Omega, t) @ u - h0


@settings(max_examples=20, deadline=None)
@given(
    delta=st.floats(1.0, 12.0),
    Omega=st.floats(0.0, 3.0),
    J=st.floats(0.1, 3.0),
    t=st.floats(0.0, 5.0),
    phase=st.floats(0.0, 2 * np.pi),
)
def test_interaction_picture_matches_conjugation(delta, Omega, J, t, phase):
    cfg = ham.MwChainConfig(J=J, delta=delta, omega0=Omega, phases=(phase, 0.3, np.pi, 1.0))
    assert np.allclose(ham.build_interaction_picture(cfg, Omega, t),
                       _direct_interaction(cfg, Omega, t), atol=1e-9, rtol=0)


def test_interaction_picture_period_average_is_effective_model():
    cfg = ham.MwChainConfig(J=1.0, delta=10.0)
    period = 1.0 / (2 * cfg.omega)
    avg, _ = quad_vec(lambda t: ham.build_interaction_picture(cfg, 1.5, t), 0.0, period,
                      epsabs=1e-12)
    avg /= period
    assert np.allclose(avg, ham.build_xx_effective(cfg, 1.5) + ham.detuning_term(cfg), atol=1e-6)
    assert np.allclose(ham.detuning_term(cfg), 0.0)


def test_disorder_application():
    cfg = ham.DcChainConfig()
    real = ham.DisorderRealization(np.array([0.1, -0.1, 0.0, 0.05]), 0.1)
    assert np.allclose(ham.apply_disorder(cfg, real), [0.099, 4.05, 4.5, 0.0945])
    with pytest.raises(ValueError):
        ham.DisorderRealization(np.array([0.2]), 0.1)
    with pytest.raises(ValueError):
        ham.apply_disorder(cfg, ham.DisorderRealization(np.zeros(3), 0.0))


def test_disorder_field_sign_does_not_change_concurrence():
    cfg = ham.MwChainConfig()
    xi = np.array([0.002, -0.001, 0.0015, -0.002])
    h = ham.build_xx_effective(cfg, 0.3)
    c_plus = end_to_end_concurrence(ground_state(h + ham.build_h_xi(cfg.delta, xi)).state)
    c_minus = end_to_end_concurrence(ground_state(h - ham.build_h_xi(cfg.delta, xi)).state)
    assert c_plus == pytest.approx(c_minus, abs=1e-10)
