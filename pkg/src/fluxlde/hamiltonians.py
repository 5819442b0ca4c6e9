"""Chain Hamiltonians for the dc-bias and microwave-drive protocols.

Config objects take linear frequencies in GHz; every builder returns a dense
matrix in rad/ns (hbar = 1).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .linalg import SX, SY, SZ, TWO_PI, embed_site, kron

__all__ = [
    "DcChainConfig",
    "MwChainConfig",
    "DisorderRealization",
    "SiteParams",
    "dc_site_params",
    "mw_couplings",
    "transverse_ising",
    "build_dc",
    "build_mw_full",
    "build_mw_initial",
    "frame_generator",
    "build_u0",
    "build_interaction_picture",
    "build_xx_effective",
    "detuning_term",
    "apply_disorder",
    "build_h_xi",
]


@lru_cache(maxsize=None)
def _site_ops(n: int):
    """Per-site sigma_x, sigma_y, sigma_z for an n-site register (read-only)."""
    ops = []
    for pauli in (SX, SY, SZ):
        mats = tuple(embed_site(pauli, j, n) for j in range(1, n + 1))
        for m in mats:
            m.setflags(write=False)
        ops.append(mats)
    return tuple(ops)


def _sx(n):
    return _site_ops(n)[0]


def _sy(n):
    return _site_ops(n)[1]


def _sz(n):
    return _site_ops(n)[2]


def _as_tuple(x):
    return None if x is None else tuple(float(v) for v in x)


def _require_even(n: int):
    if n % 2:
        raise ValueError(
            f"the weak-end-bond pattern needs an even number of sites (got {n}); "
            "odd chains have a degenerate ground state"
        )


@dataclass(frozen=True)
class SiteParams:
    """Per-site bias, tunneling and bond couplings, all in GHz."""

    eps: np.ndarray
    delta: np.ndarray
    J: np.ndarray


@dataclass(frozen=True)
class DcChainConfig:
    """Transverse-field Ising chain controlled by a staggered dc bias.

    Bulk sites carry tunneling ``delta`` and couplings ``J``; the two end sites
    have tunneling and bias scaled by ``lam_h`` and are attached through bonds
    ``lam * J``. The bias follows ``eps0 * exp(-2 pi rate t)``.

    ``tunneling_sites`` and ``couplings`` override the patterned arrays
    (GHz). ``bias_pattern`` overrides the per-site multipliers of eps.
    """

    n_sites: int = 4
    J: float = 5.0
    lam: float = 0.2
    lam_h: float = 0.02
    delta: float = 4.5
    eps0: float = 20.0
    rate: float = 0.04
    tunneling_sites: tuple | None = None
    couplings: tuple | None = None
    bias_pattern: tuple | None = None

    def __post_init__(self):
        if self.n_sites < 2:
            raise ValueError("n_sites must be >= 2")
        if not self.J > 0:
            raise ValueError("J must be positive (antiferromagnetic)")
        if not 0 < self.lam <= 1:
            raise ValueError("lam must lie in (0, 1]")
        if not 0 < self.lam_h <= 1:
            raise ValueError("lam_h must lie in (0, 1]")
        if not self.rate > 0:
            raise ValueError("rate must be positive")
        for name, size in (
            ("tunneling_sites", self.n_sites),
            ("couplings", self.n_sites - 1),
            ("bias_pattern", self.n_sites),
        ):
            val = getattr(self, name)
            if val is not None:
                val = _as_tuple(val)
                if len(val) != size:
                    raise ValueError(f"{name} needs {size} entries, got {len(val)}")
                object.__setattr__(self, name, val)

    @property
    def default_t_final(self) -> float:
        return 10.0 / (TWO_PI * self.rate)


@dataclass(frozen=True)
class MwChainConfig:
    """Resonantly driven chain realizing an XX model in the rotating frame.

    ``omega`` is the drive frequency (defaults to ``2 * delta``), ``omega0``
    the initial drive amplitude, ``phases`` the per-site drive phases
    (default: pi on odd sites, 0 on even sites). Initialization uses a
    staggered bias of magnitude ``eps_init`` with the drive off.
    """

    n_sites: int = 4
    J: float = 1.0
    lam: float = 0.2
    delta: float = 10.0
    omega: float | None = None
    omega0: float = 2.0
    rate: float = 0.02
    phases: tuple | None = None
    eps_init: float = 100.0
    tunneling_sites: tuple | None = None
    allow_detuning: bool = False
    couplings: tuple | None = None

    def __post_init__(self):
        if self.n_sites < 2:
            raise ValueError("n_sites must be >= 2")
        if not 0 < self.lam <= 1:
            raise ValueError("lam must lie in (0, 1]")
        if not self.rate > 0:
            raise ValueError("rate must be positive")
        if self.omega is None:
            object.__setattr__(self, "omega", 2.0 * self.delta)
        elif not self.allow_detuning and not np.isclose(self.omega, 2.0 * self.delta, rtol=1e-12):
            raise ValueError(
                f"drive frequency {self.omega} GHz is off resonance (2*delta = {2 * self.delta}); "
                "set allow_detuning=True to override"
            )
        if self.phases is None:
            phases = tuple(np.pi if j % 2 else 0.0 for j in range(1, self.n_sites + 1))
            object.__setattr__(self, "phases", phases)
        for name, size in (
            ("phases", self.n_sites),
            ("tunneling_sites", self.n_sites),
            ("couplings", self.n_sites - 1),
        ):
            val = getattr(self, name)
            if val is not None:
                val = _as_tuple(val)
                if len(val) != size:
                    raise ValueError(f"{name} needs {size} entries, got {len(val)}")
                object.__setattr__(self, name, val)

    @property
    def rwa_valid(self) -> bool:
        return 4 * self.delta > 10 * max(self.omega0, abs(self.J) / 2)

    @property
    def default_t_final(self) -> float:
        return 10.0 / (TWO_PI * self.rate)

    def tunneling(self) -> np.ndarray:
        if self.tunneling_sites is not None:
            return np.array(self.tunneling_sites)
        return np.full(self.n_sites, float(self.delta))

    def init_bias(self) -> np.ndarray:
        """Staggered initialization bias: negative on odd sites, positive on even."""
        j = np.arange(1, self.n_sites + 1)
        return self.eps_init * (-1.0) ** j


@dataclass(frozen=True)
class DisorderRealization:
    xi: np.ndarray
    delta_xi: float

    def __post_init__(self):
        xi = np.asarray(self.xi, dtype=float)
        if self.delta_xi < 0:
            raise ValueError("delta_xi must be >= 0")
        if np.any(np.abs(xi) > self.delta_xi):
            raise ValueError("disorder offsets exceed delta_xi")
        object.__setattr__(self, "xi", xi)


def _weak_end_bonds(n, J, lam):
    bonds = np.full(n - 1, float(J))
    bonds[0] = bonds[-1] = lam * J
    return bonds


def dc_site_params(cfg: DcChainConfig, eps: float) -> SiteParams:
    """Per-site arrays for bias ``eps`` (GHz).

    For N=4: J = (lam J, J, lam J), delta = (lam_h D, D, D, lam_h D),
    eps = (-lam_h e, e, -e, lam_h e). Larger even N keeps the uniform bulk
    with alternating bias signs.
    """
    n = cfg.n_sites
    _require_even(n)
    sites = np.arange(1, n + 1)
    if cfg.bias_pattern is not None:
        pattern = np.array(cfg.bias_pattern)
    else:
        scale = np.ones(n)
        scale[0] = scale[-1] = cfg.lam_h
        pattern = scale * (-1.0) ** sites
    if cfg.tunneling_sites is not None:
        delta = np.array(cfg.tunneling_sites)
    else:
        delta = np.full(n, float(cfg.delta))
        delta[0] = delta[-1] = cfg.lam_h * cfg.delta
    if cfg.couplings is not None:
        J = np.array(cfg.couplings)
    else:
        J = _weak_end_bonds(n, cfg.J, cfg.lam)
    return SiteParams(eps=pattern * eps + 0.0, delta=delta, J=J)


def mw_couplings(cfg: MwChainConfig) -> np.ndarray:
    if cfg.couplings is not None:
        return np.array(cfg.couplings)
    _require_even(cfg.n_sites)
    return _weak_end_bonds(cfg.n_sites, cfg.J, cfg.lam)


def transverse_ising(eps, delta, J) -> np.ndarray:
    """-sum(eps_j Z_j + delta_j X_j) + sum J_j Z_j Z_{j+1}, inputs in GHz.

    No sign or parity restrictions; ``J`` may be negative.
    """
    eps = np.asarray(eps, dtype=float)
    delta = np.asarray(delta, dtype=float)
    J = np.asarray(J, dtype=float)
    n = eps.size
    if delta.size != n or J.size != n - 1:
        raise ValueError("need n biases, n tunnelings and n-1 couplings")
    sx, sz = _sx(n), _sz(n)
    h = np.zeros((2**n, 2**n), dtype=complex)
    for j in range(n):
        h -= eps[j] * sz[j] + delta[j] * sx[j]
    for j in range(n - 1):
        h += J[j] * (sz[j] @ sz[j + 1])
    return TWO_PI * h


def build_dc(cfg: DcChainConfig, eps: float) -> np.ndarray:
    p = dc_site_params(cfg, eps)
    return transverse_ising(p.eps, p.delta, p.J)


def build_mw_full(cfg: MwChainConfig, Omega: float, t: float, eps=None) -> np.ndarray:
    """Lab-frame driven Hamiltonian at time ``t`` (ns), drive amplitude ``Omega`` (GHz).

    ``eps`` is an optional per-site bias in GHz (zero during the drive stage).
    """
    n = cfg.n_sites
    eps = np.zeros(n) if eps is None else np.asarray(eps, dtype=float)
    h = transverse_ising(eps, cfg.tunneling(), mw_couplings(cfg))
    w = TWO_PI * cfg.omega
    drive = 2.0 * TWO_PI * Omega * np.cos(w * t + np.asarray(cfg.phases))
    sz = _sz(n)
    for j in range(n):
        h -= drive[j] * sz[j]
    return h


def build_mw_initial(cfg: MwChainConfig) -> np.ndarray:
    """Drive off, staggered bias ``eps_init`` on."""
    return build_mw_full(cfg, 0.0, 0.0, eps=cfg.init_bias())


def frame_generator(omega: float, n_sites: int) -> np.ndarray:
    """H0 = -(omega/2) sum_j X_j with ``omega`` in GHz; returns rad/ns."""
    return -0.5 * TWO_PI * omega * sum(_sx(n_sites))


def build_u0(omega: float, t: float, n_sites: int) -> np.ndarray:
    """exp(-i H0 t): a product of single-site rotations exp(i omega t X / 2)."""
    theta = 0.5 * TWO_PI * omega * t
    u = np.cos(theta) * np.eye(2) + 1j * np.sin(theta) * SX
    return kron(*([u] * n_sites))


def _xx_bonds(n, J):
    sy, sz = _sy(n), _sz(n)
    h = np.zeros((2**n, 2**n), dtype=complex)
    for j in range(n - 1):
        h += 0.5 * J[j] * (sy[j] @ sy[j + 1] + sz[j] @ sz[j + 1])
    return h


def _field(n, Omega, phases):
    sy, sz = _sy(n), _sz(n)
    h = np.zeros((2**n, 2**n), dtype=complex)
    for j in range(n):
        h -= Omega * (np.cos(phases[j]) * sz[j] + np.sin(phases[j]) * sy[j])
    return h


def build_xx_effective(cfg: MwChainConfig, Omega: float) -> np.ndarray:
    """Rotating-wave XX chain in a drive-controlled field (rad/ns)."""
    n = cfg.n_sites
    h = _field(n, Omega, cfg.phases) + _xx_bonds(n, mw_couplings(cfg))
    return TWO_PI * h


def detuning_term(cfg: MwChainConfig) -> np.ndarray:
    """-sum_j (delta_j - omega/2) X_j: what survives of the tunneling in the rotating frame."""
    n = cfg.n_sites
    det = cfg.tunneling() - 0.5 * cfg.omega
    return -TWO_PI * sum(d * x for d, x in zip(det, _sx(n)))


def build_interaction_picture(cfg: MwChainConfig, Omega: float, t: float) -> np.ndarray:
    """U0^dag H U0 - H0 at zero bias, written out term by term (rad/ns).

    Static part: the XX model plus the detuning term. Oscillating part at 2*omega:
    -Omega [cos(2wt+phi) Z - sin(2wt+phi) Y] per site and
    J/2 [cos(2wt)(ZZ - YY) - sin(2wt)(YZ + ZY)] per bond.
    """
    n = cfg.n_sites
    J = mw_couplings(cfg)
    phases = np.asarray(cfg.phases)
    w2t = 2.0 * TWO_PI * cfg.omega * t
    sy, sz = _sy(n), _sz(n)
    fast = np.zeros((2**n, 2**n), dtype=complex)
    for j in range(n):
        fast -= Omega * (np.cos(w2t + phases[j]) * sz[j] - np.sin(w2t + phases[j]) * sy[j])
    for j in range(n - 1):
        zz = sz[j] @ sz[j + 1]
        yy = sy[j] @ sy[j + 1]
        yz = sy[j] @ sz[j + 1] + sz[j] @ sy[j + 1]
        fast += 0.5 * J[j] * (np.cos(w2t) * (zz - yy) - np.sin(w2t) * yz)
    return build_xx_effective(cfg, Omega) + detuning_term(cfg) + TWO_PI * fast


def apply_disorder(cfg, real: DisorderRealization) -> np.ndarray:
    """Disordered tunneling array in GHz: each nominal delta_j scaled by (1 + xi_j)."""
    xi = real.xi
    if xi.size != cfg.n_sites:
        raise ValueError(f"realization has {xi.size} offsets for {cfg.n_sites} sites")
    if isinstance(cfg, DcChainConfig):
        nominal = dc_site_params(cfg, 0.0).delta
    else:
        nominal = np.full(cfg.n_sites, float(cfg.delta))
    return nominal * (1.0 + xi)


def build_h_xi(delta: float, xi) -> np.ndarray:
    """delta * sum_j xi_j X_j in rad/ns (``delta`` in GHz)."""
    xi = np.asarray(xi, dtype=float)
    sx = _sx(xi.size)
    return TWO_PI * delta * sum(x * op for x, op in zip(xi, sx))
