"""Reduced two-qubit states and Wootters concurrence."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .linalg import SY, n_sites_of

NEGATIVITY_CLAMP = 1e-9

_YY = np.kron(SY, SY)


class DensityMatrixError(ValueError):
    pass


@dataclass(frozen=True)
class DensityDiagnostics:
    hermiticity: float
    trace_deviation: float
    min_eigenvalue: float

    def ok(self, tol: float = 1e-9) -> bool:
        return (
            self.hermiticity <= tol
            and self.trace_deviation <= tol
            and self.min_eigenvalue >= -tol
        )


def partial_trace_pair(psi, site_a: int, site_b: int) -> np.ndarray:
    """Reduced density matrix of sites ``a < b`` (1-based) from a pure state.

    Site ``a`` is the more significant qubit of the returned 4x4 matrix.
    """
    psi = np.asarray(psi, dtype=complex)
    n = n_sites_of(psi.size)
    if not (1 <= site_a < site_b <= n):
        raise ValueError(f"need 1 <= a < b <= {n}, got ({site_a}, {site_b})")
    t = np.moveaxis(psi.reshape((2,) * n), (site_a - 1, site_b - 1), (0, 1))
    m = t.reshape(4, -1)
    return m @ m.conj().T


def end_pair(psi) -> np.ndarray:
    n = n_sites_of(np.asarray(psi).size)
    return partial_trace_pair(psi, 1, n)


def validate_density_matrix(rho) -> DensityDiagnostics:
    rho = np.asarray(rho, dtype=complex)
    herm = float(np.max(np.abs(rho - rho.conj().T)))
    tr = abs(complex(np.trace(rho)) - 1.0)
    w = np.linalg.eigvalsh(0.5 * (rho + rho.conj().T))
    return DensityDiagnostics(herm, float(tr), float(w[0]))


def spin_flip(rho) -> np.ndarray:
    return _YY @ np.asarray(rho).conj() @ _YY


def concurrence(rho, tol: float = 1e-7) -> float:
    """Wootters concurrence max(0, l1 - l2 - l3 - l4).

    The l_i, in decreasing order, are the square roots of the eigenvalues of
    rho * flip(rho). They are computed as the singular values of
    A^T (Y x Y) A with rho = A A^dag, which avoids square roots of round-off
    eigenvalues near rank-deficient states. Eigenvalues of rho below zero are
    clamped to zero; a state whose Hermiticity or trace is off by more than
    ``tol``, or with an eigenvalue below -1e-9, raises DensityMatrixError.
    """
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (4, 4):
        raise DensityMatrixError(f"expected a 4x4 density matrix, got {rho.shape}")
    diag = validate_density_matrix(rho)
    if diag.hermiticity > tol or diag.trace_deviation > tol:
        raise DensityMatrixError(
            f"not a valid state: hermiticity {diag.hermiticity:.2e}, "
            f"trace deviation {diag.trace_deviation:.2e}"
        )
    if diag.min_eigenvalue < -NEGATIVITY_CLAMP:
        raise DensityMatrixError(f"negative eigenvalue {diag.min_eigenvalue:.2e}")
    w, v = np.linalg.eigh(0.5 * (rho + rho.conj().T))
    a = v * np.sqrt(np.clip(w, 0.0, None))
    lam = np.linalg.svd(a.T @ _YY @ a, compute_uv=False)
    return float(max(0.0, lam[0] - lam[1] - lam[2] - lam[3]))


def end_to_end_concurrence(psi) -> float:
    return concurrence(end_pair(psi))
