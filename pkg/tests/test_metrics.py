from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.stats import unitary_group

from fluxlde import linalg as la
from fluxlde.metrics import (
    DensityMatrixError,
    concurrence,
    end_to_end_concurrence,
    partial_trace_pair,
    validate_density_matrix,
)


def bell():
    psi = (la.basis_state("RR") + la.basis_state("LL")) / np.sqrt(2)
    return np.outer(psi, psi.conj())


def test_reference_states():
    assert concurrence(bell()) == pytest.approx(1.0, abs=1e-12)
    prod = la.basis_state("RL")
    assert concurrence(np.outer(prod, prod)) == 0.0
    assert concurrence(np.eye(4) / 4) == 0.0


@pytest.mark.parametrize("p,expected", [(0.5, 0.25), (1 / 3, 0.0), (1.0, 1.0), (0.2, 0.0)])
def test_werner(p, expected):
    rho = p * bell() + (1 - p) * np.eye(4) / 4
    assert concurrence(rho) == pytest.approx(expected, abs=1e-9)


def test_rejects_invalid_matrices():
    with pytest.raises(DensityMatrixError):
        concurrence(np.diag([1.0, 0.5, 0, 0]))
    with pytest.raises(DensityMatrixError):
        concurrence(np.diag([1.2, -0.2, 0, 0]))
    with pytest.raises(DensityMatrixError):
        concurrence(np.eye(4) / 4 + 1e-3 * np.triu(np.ones((4, 4)), 1))
    with pytest.raises(ValueError):
        concurrence(np.eye(2) / 2)


def test_partial_trace_of_product_state():
    psi = la.kron(la.KET_R, la.KET_L, la.KET_R, la.KET_L)
    rho = partial_trace_pair(psi, 1, 4)
    assert np.allclose(rho, np.outer(la.basis_state("RL"), la.basis_state("RL")))


def test_partial_trace_pair_order_and_bell_embedding():
    # Bell pair between sites 1 and 3, site 2 in |L>.
    psi = (la.basis_state("RLR") + la.basis_state("LLL")) / np.sqrt(2)
    rho = partial_trace_pair(psi, 1, 3)
    assert np.allclose(rho, bell())
    assert end_to_end_concurrence(psi) == pytest.approx(1.0)
    with pytest.raises(ValueError):
        partial_trace_pair(psi, 2, 2)


@settings(max_examples=25, deadline=None)
@given(st.integers(min_value=0, max_value=2**32 - 1))
def test_reduced_states_are_valid(seed):
    rng = np.random.default_rng(seed)
    psi = rng.normal(size=16) + 1j * rng.normal(size=16)
    psi /= np.linalg.norm(psi)
    rho = partial_trace_pair(psi, 1, 4)
    assert validate_density_matrix(rho).ok(1e-12)
    assert 0.0 <= concurrence(rho) <= 1.0


def random_rho(rng, rank=2):
    a = rng.normal(size=(4, rank)) + 1j * rng.normal(size=(4, rank))
    rho = a @ a.conj().T
    return rho / np.trace(rho).real


def test_local_unitary_invariance():
    rng = np.random.default_rng(11)
    for _ in range(100):
        rho = random_rho(rng, rank=rng.integers(1, 5))
        u = np.kron(unitary_group.rvs(2, random_state=rng), unitary_group.rvs(2, random_state=rng))
        assert concurrence(u @ rho @ u.conj().T) == pytest.approx(concurrence(rho), abs=1e-8)


def test_pure_state_formula():
    rng = np.random.default_rng(3)
    for _ in range(20):
        psi = rng.normal(size=4) + 1j * rng.normal(size=4)
        psi /= np.linalg.norm(psi)
        expected = 2 * abs(psi[0] * psi[3] - psi[1] * psi[2])
        assert concurrence(np.outer(psi, psi.conj())) == pytest.approx(expected, abs=1e-9)


def test_matches_eigenvalue_definition_for_mixed_states():
    from fluxlde.metrics import spin_flip

    rng = np.random.default_rng(5)
    for _ in range(50):
        rho = random_rho(rng, rank=4)
        ev = np.linalg.eigvals(rho @ spin_flip(rho)).real
        lam = np.sort(np.sqrt(np.clip(ev, 0, None)))[::-1]
        assert concurrence(rho) == pytest.approx(max(0.0, lam[0] - lam[1:].sum()), abs=1e-8)
