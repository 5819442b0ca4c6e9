"""Dense linear algebra on small qubit registers.

Basis convention: sigma_z|R> = +|R>, sigma_z|L> = -|L>. A basis index is read
as a bit string with bit 0 meaning |R> on that site, and site 1 is the most
significant bit. So for two sites index 0 is |RR>, 1 is |RL>, 2 is |LR>.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import reduce

import numpy as np

TWO_PI = 2.0 * np.pi
MAX_SITES = 12

I2 = np.eye(2, dtype=complex)
SX = np.array([[0, 1], [1, 0]], dtype=complex)
SY = np.array([[0, -1j], [1j, 0]], dtype=complex)
SZ = np.array([[1, 0], [0, -1]], dtype=complex)

KET_R = np.array([1, 0], dtype=complex)
KET_L = np.array([0, 1], dtype=complex)


class HermiticityError(ValueError):
    pass


def ghz_to_rad(x):
    """Linear frequency in GHz to angular frequency in rad/ns."""
    return TWO_PI * np.asarray(x, dtype=float)


def rad_to_ghz(x):
    return np.asarray(x, dtype=float) / TWO_PI


def kron(*ops):
    """Kronecker product of any number of matrices (or vectors), left to right."""
    if not ops:
        raise ValueError("kron needs at least one operand")
    return reduce(np.kron, ops)


def n_sites_of(dim: int) -> int:
    n = int(dim).bit_length() - 1
    if dim < 1 or 1 << n != dim:
        raise ValueError(f"dimension {dim} is not a power of two")
    return n


def embed_site(op, site: int, n_sites: int) -> np.ndarray:
    """Act with the 2x2 ``op`` on ``site`` (1-based) and identity elsewhere."""
    if not 1 <= n_sites <= MAX_SITES:
        raise ValueError(f"n_sites must be in 1..{MAX_SITES}, got {n_sites}")
    if not 1 <= site <= n_sites:
        raise ValueError(f"site {site} out of range 1..{n_sites}")
    op = np.asarray(op, dtype=complex)
    if op.shape != (2, 2):
        raise ValueError("embed_site expects a 2x2 operator")
    left = np.eye(2 ** (site - 1), dtype=complex)
    right = np.eye(2 ** (n_sites - site), dtype=complex)
    return np.kron(np.kron(left, op), right)


def embed_pair(op_a, site_a: int, op_b, site_b: int, n_sites: int) -> np.ndarray:
    return embed_site(op_a, site_a, n_sites) @ embed_site(op_b, site_b, n_sites)


def z_diagonal(site: int, n_sites: int) -> np.ndarray:
    """Diagonal of sigma_z on ``site`` as a real vector of +-1."""
    if not 1 <= site <= n_sites:
        raise ValueError(f"site {site} out of range 1..{n_sites}")
    idx = np.arange(2**n_sites)
    bit = (idx >> (n_sites - site)) & 1
    return 1.0 - 2.0 * bit


def basis_state(bits: str) -> np.ndarray:
    """Product state from a string of 'R'/'L' characters, site 1 first."""
    kets = {"R": KET_R, "L": KET_L}
    try:
        return kron(*(kets[b] for b in bits.upper()))
    except KeyError as exc:
        raise ValueError(f"basis labels must be R or L, got {bits!r}") from exc


def hermiticity_residual(m) -> float:
    m = np.asarray(m)
    return float(np.max(np.abs(m - m.conj().T))) if m.size else 0.0


def is_hermitian(m, tol: float = 1e-10) -> bool:
    m = np.asarray(m)
    return m.ndim == 2 and m.shape[0] == m.shape[1] and hermiticity_residual(m) <= tol


@dataclass(frozen=True)
class EigenDecomposition:
    """Ascending eigenvalues and column-aligned orthonormal eigenvectors."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def vector(self, k: int) -> np.ndarray:
        return self.eigenvectors[:, k]

    def reconstruct(self) -> np.ndarray:
        v = self.eigenvectors
        return (v * self.eigenvalues) @ v.conj().T


def eigh(h, tol: float = 1e-10) -> EigenDecomposition:
    """Hermitian eigendecomposition after symmetrizing ``h``.

    Raises HermiticityError if ``h`` deviates from Hermitian by more than
    ``tol`` (absolute, scaled by max(1, |h|_max)).
    """
    h = np.asarray(h, dtype=complex)
    if h.ndim != 2 or h.shape[0] != h.shape[1]:
        raise ValueError(f"eigh needs a square matrix, got shape {h.shape}")
    scale = max(1.0, float(np.max(np.abs(h)))) if h.size else 1.0
    resid = hermiticity_residual(h)
    if resid > tol * scale:
        raise HermiticityError(f"matrix is not Hermitian (residual {resid:.3e})")
    w, v = np.linalg.eigh(0.5 * (h + h.conj().T))
    return EigenDecomposition(w, v)
