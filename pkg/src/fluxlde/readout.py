"""Order-of-magnitude estimates for joint dispersive readout of the end qubits.

All SI conversions live here. Energies from circuit parameters are in joules;
qubit gaps come in as angular frequencies in rad/ns.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.constants import hbar, k as k_B

from .linalg import SZ, TWO_PI, embed_site, n_sites_of

PH = 1e-12
UA = 1e-6
GHZ = 1e9
NS = 1e-9


@dataclass(frozen=True)
class ReadoutParams:
    Lq_pH: float = 25.0
    Iq_uA: float = 0.25
    kappa: float = 0.01
    TN_K: float = 5.0
    omega_r_GHz: float = 7.5  # linear frequency; omega_r = 2 pi * this
    Q: float = 75.0

    def __post_init__(self):
        for name in ("Lq_pH", "Iq_uA", "TN_K", "omega_r_GHz", "Q"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive")
        if self.kappa < 0:
            raise ValueError("kappa must be >= 0")

    @property
    def inductive_energy(self) -> float:
        """L_q I_q^2 in joules."""
        return self.Lq_pH * PH * (self.Iq_uA * UA) ** 2

    @property
    def noise_energy(self) -> float:
        """k_B T_N in joules."""
        return k_B * self.TN_K

    @property
    def omega_r(self) -> float:
        """Resonator angular frequency in rad/s."""
        return TWO_PI * self.omega_r_GHz * GHZ


def r_ge(g, e, sites=None) -> float:
    """Joint matrix element |m_a|^2 + |m_b|^2 - m_a m_b^* - m_b m_a^*, m = <g|Z|e>.

    ``sites`` defaults to the two ends of the chain.
    """
    g = np.asarray(g, dtype=complex)
    e = np.asarray(e, dtype=complex)
    n = n_sites_of(g.size)
    a, b = (1, n) if sites is None else sites
    if abs(np.linalg.norm(g) - 1) > 1e-8 or abs(np.linalg.norm(e) - 1) > 1e-8:
        raise ValueError("states must be normalized")
    if abs(np.vdot(g, e)) > 1e-8:
        raise ValueError("ground and excited states must be orthogonal")
    za = embed_site(SZ, a, n)
    zb = embed_site(SZ, b, n)
    ga, ea = np.vdot(g, za @ e), np.vdot(e, za @ g)
    gb, eb = np.vdot(g, zb @ e), np.vdot(e, zb @ g)
    val = ga * ea + gb * eb - ga * eb - gb * ea
    if abs(val.imag) > 1e-10:
        raise ArithmeticError(f"R_ge has imaginary part {val.imag:.3e}")
    return float(val.real)


def dispersive_shift(p: ReadoutParams, rge: float, gap: float) -> float:
    """Relative resonator shift kappa^2 R_ge L_q I_q^2 / Delta E; ``gap`` in rad/ns."""
    if not gap > 0:
        raise ValueError("energy gap must be positive")
    delta_e = hbar * gap * GHZ
    return p.kappa**2 * rge * p.inductive_energy / delta_e


def measurement_time(p: ReadoutParams, Q: float | None = None) -> float:
    """max{(k_B T_N / L_q I_q^2) / (kappa^2 Q^2 omega_r), Q / omega_r} in ns.

    Returns inf when kappa = 0.
    """
    Q = p.Q if Q is None else Q
    if not Q > 0:
        raise ValueError("Q must be positive")
    ringup = Q / p.omega_r
    if p.kappa == 0:
        return math.inf
    noise = p.noise_energy / p.inductive_energy / (p.kappa**2 * Q**2 * p.omega_r)
    return max(noise, ringup) / NS


def crossover_q(p: ReadoutParams) -> float:
    """Q where both branches of the measurement time meet: Q^3 = k_B T_N / (L_q I_q^2 kappa^2)."""
    if p.kappa == 0:
        return math.inf
    return (p.noise_energy / (p.inductive_energy * p.kappa**2)) ** (1.0 / 3.0)


def optimal_q(p: ReadoutParams, q_range=(1, 10_000)) -> int:
    """Integer Q in ``q_range`` (inclusive) minimizing the measurement time."""
    lo, hi = int(q_range[0]), int(q_range[1])
    if lo < 1 or hi <= lo:
        raise ValueError("q_range must be increasing integers >= 1")
    qs = np.arange(lo, hi + 1)
    times = np.array([measurement_time(p, q) for q in qs])
    if not np.isfinite(times).any():
        raise ValueError("measurement time is infinite over the whole range")
    i = int(np.argmin(times))
    if i == 0 or i == qs.size - 1:
        raise ValueError(f"Q range {lo}..{hi} does not bracket the minimum")
    return int(qs[i])
