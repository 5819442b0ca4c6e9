"""Schrodinger-equation integration and the two adiabatic ramp protocols."""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable

import numba
import numpy as np
from scipy.integrate import solve_ivp

from . import hamiltonians as ham
from .linalg import TWO_PI, z_diagonal
from .metrics import end_pair, concurrence, validate_density_matrix
from .spectral import ground_state

STEPS_PER_PERIOD = 50
DEFAULT_NORM_TOL = 2e-9
MAX_STEPS_PER_INTERVAL = 50_000_000


class IntegrationError(RuntimeError):
    def __init__(self, message: str, time: float):
        super().__init__(f"{message} (at t = {time:.6g} ns)")
        self.time = time


@dataclass(frozen=True)
class RampSchedule:
    """x(t) = x0 * exp(-2 pi rate t), t in ns, rate in GHz."""

    x0: float
    rate: float
    kind: str = "exponential"

    def __post_init__(self):
        if self.kind != "exponential":
            raise ValueError(f"unsupported ramp kind {self.kind!r}")
        if not self.rate > 0:
            raise ValueError("ramp rate must be positive")

    def __call__(self, t):
        return self.x0 * np.exp(-TWO_PI * self.rate * np.asarray(t, dtype=float))


def _no_coeffs(t):
    return np.zeros((np.size(t), 0))


@dataclass(frozen=True, eq=False)
class TimeDependentHamiltonian:
    """H(t) = static + sum_k a_k(t) A_k + diag(sum_k b_k(t) d_k), in rad/ns.

    ``dense_coeffs`` and ``diag_coeffs`` map an array of times to arrays of
    shape (len(t), k). ``frequency`` is the highest explicit drive frequency
    (GHz) that the step size must resolve.
    """

    static: np.ndarray
    dense_ops: np.ndarray | None = None
    dense_coeffs: Callable = _no_coeffs
    diag_ops: np.ndarray | None = None
    diag_coeffs: Callable = _no_coeffs
    frequency: float = 0.0

    def __post_init__(self):
        static = np.ascontiguousarray(self.static, dtype=complex)
        d = static.shape[0]
        dense = np.zeros((0, d, d), complex) if self.dense_ops is None else self.dense_ops
        diag = np.zeros((0, d)) if self.diag_ops is None else self.diag_ops
        object.__setattr__(self, "static", static)
        object.__setattr__(self, "dense_ops", np.ascontiguousarray(dense, dtype=complex))
        object.__setattr__(self, "diag_ops", np.ascontiguousarray(diag, dtype=float))

    @classmethod
    def constant(cls, h):
        return cls(np.asarray(h, dtype=complex))

    @property
    def dim(self) -> int:
        return self.static.shape[0]

    def coefficients(self, t):
        t = np.atleast_1d(np.asarray(t, dtype=float))
        a = np.asarray(self.dense_coeffs(t), dtype=complex).reshape(t.size, -1)
        b = np.asarray(self.diag_coeffs(t), dtype=float).reshape(t.size, -1)
        return np.ascontiguousarray(a), np.ascontiguousarray(b)

    def __call__(self, t: float) -> np.ndarray:
        a, b = self.coefficients(t)
        h = self.static + np.tensordot(a[0], self.dense_ops, axes=1)
        return h + np.diag(b[0] @ self.diag_ops)

    @cached_property
    def _op_norms(self):
        static = np.linalg.norm(self.static, 2) if self.dim else 0.0
        dense = np.array([np.linalg.norm(m, 2) for m in self.dense_ops])
        diag = np.abs(self.diag_ops).max(axis=1) if self.diag_ops.size else np.zeros(0)
        return static, dense, diag

    def norm_bound(self, a, b) -> float:
        """Triangle-inequality bound on |H(t)| over the coefficient samples ``a``, ``b``."""
        static, dense, diag = self._op_norms
        bound = static
        if dense.size:
            bound += float(np.abs(a).max(axis=0) @ dense)
        if diag.size:
            bound += float(np.abs(b).max(axis=0) @ diag)
        return bound


@numba.njit(cache=True)
def _apply(static, dense_ops, a, diag_ops, b, x, out):
    d = x.shape[0]
    for i in range(d):
        acc = 0j
        for j in range(d):
            acc += static[i, j] * x[j]
        out[i] = acc
    for k in range(dense_ops.shape[0]):
        ak = a[k]
        for i in range(d):
            acc = 0j
            for j in range(d):
                acc += dense_ops[k, i, j] * x[j]
            out[i] += ak * acc
    for i in range(d):
        s = 0.0
        for k in range(diag_ops.shape[0]):
            s += b[k] * diag_ops[k, i]
        out[i] = -1j * (out[i] + s * x[i])


@numba.njit(cache=True)
def _rk4_kernel(psi, static, dense_ops, a, diag_ops, b, h, n_steps):
    """Classic RK4 for dpsi/dt = -i H(t) psi; coefficient rows 2m, 2m+1, 2m+2
    hold the stage times t_m, t_m + h/2, t_m + h."""
    d = psi.shape[0]
    y = psi.copy()
    tmp = np.empty(d, np.complex128)
    k1 = np.empty(d, np.complex128)
    k2 = np.empty(d, np.complex128)
    k3 = np.empty(d, np.complex128)
    k4 = np.empty(d, np.complex128)
    for m in range(n_steps):
        _apply(static, dense_ops, a[2 * m], diag_ops, b[2 * m], y, k1)
        for i in range(d):
            tmp[i] = y[i] + 0.5 * h * k1[i]
        _apply(static, dense_ops, a[2 * m + 1], diag_ops, b[2 * m + 1], tmp, k2)
        for i in range(d):
            tmp[i] = y[i] + 0.5 * h * k2[i]
        _apply(static, dense_ops, a[2 * m + 1], diag_ops, b[2 * m + 1], tmp, k3)
        for i in range(d):
            tmp[i] = y[i] + h * k3[i]
        _apply(static, dense_ops, a[2 * m + 2], diag_ops, b[2 * m + 2], tmp, k4)
        for i in range(d):
            y[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i])
    return y


def _step_size(ham_t: TimeDependentHamiltonian, t0, t1, total, norm_tol, steps_per_period):
    probe = np.linspace(t0, t1, 65)
    rho = ham_t.norm_bound(*ham_t.coefficients(probe))
    nu = max(rho / TWO_PI, ham_t.frequency)
    if nu == 0.0:
        return t1 - t0
    h = 1.0 / (steps_per_period * nu)
    if rho > 0 and norm_tol is not None:
        # RK4 shrinks a mode of frequency rho by ~ (h rho)^6 / 144 per step.
        h = min(h, (144.0 * norm_tol / (total * rho**6)) ** 0.2)
    return h


@dataclass
class Evolution:
    times: np.ndarray
    states: np.ndarray
    n_steps: int = 0


def evolve(
    hamiltonian,
    psi0,
    times,
    *,
    method: str = "rk4",
    norm_tol: float | None = DEFAULT_NORM_TOL,
    rtol: float = 1e-8,
    steps_per_period: int = STEPS_PER_PERIOD,
    step: float | None = None,
) -> Evolution:
    """Integrate the Schrodinger equation from ``times[0]`` and record the state at each time.

    ``hamiltonian`` is a TimeDependentHamiltonian or a constant matrix (rad/ns).

    With ``method="rk4"`` each sampling interval is split into equal steps no
    longer than 1/(steps_per_period * nu_max), where nu_max is the larger of
    the Hamiltonian norm bound (in GHz) and the drive frequency, and short
    enough that the cumulative RK4 norm loss stays below ``norm_tol``. A fixed
    ``step`` overrides this choice. ``method="adaptive"`` uses DOP853 at
    relative tolerance ``rtol``. The state is never renormalized.
    """
    if not isinstance(hamiltonian, TimeDependentHamiltonian):
        hamiltonian = TimeDependentHamiltonian.constant(hamiltonian)
    psi = np.ascontiguousarray(psi0, dtype=complex)
    if psi.shape != (hamiltonian.dim,):
        raise ValueError(f"state of shape {psi.shape} does not match dimension {hamiltonian.dim}")
    if abs(np.linalg.norm(psi) - 1.0) > 1e-8:
        raise ValueError("initial state is not normalized")
    times = np.asarray(times, dtype=float)
    if times.ndim != 1 or times.size == 0:
        raise ValueError("need at least one sample time")
    if np.any(np.diff(times) <= 0):
        raise ValueError("sample times must be strictly increasing")
    if method == "adaptive":
        return _evolve_adaptive(hamiltonian, psi, times, rtol)
    if method != "rk4":
        raise ValueError(f"unknown integrator {method!r}")

    total = times[-1] - times[0]
    states = np.empty((times.size, psi.size), dtype=complex)
    states[0] = psi
    n_total = 0
    for k in range(1, times.size):
        t0, t1 = times[k - 1], times[k]
        h = step if step is not None else _step_size(
            hamiltonian, t0, t1, total, norm_tol, steps_per_period
        )
        n = max(1, math.ceil((t1 - t0) / h - 1e-9))
        if n > MAX_STEPS_PER_INTERVAL:
            raise IntegrationError(f"step size underflow: {n} steps needed in one interval", t0)
        h = (t1 - t0) / n
        stage_times = t0 + 0.5 * h * np.arange(2 * n + 1)
        a, b = hamiltonian.coefficients(stage_times)
        psi = _rk4_kernel(psi, hamiltonian.static, hamiltonian.dense_ops, a,
                          hamiltonian.diag_ops, b, h, n)
        states[k] = psi
        n_total += n
    return Evolution(times, states, n_total)


def _evolve_adaptive(hamiltonian, psi, times, rtol):
    states = np.empty((times.size, psi.size), dtype=complex)
    states[0] = psi
    if times.size == 1:
        return Evolution(times, states, 0)

    def rhs(t, y):
        return -1j * (hamiltonian(t) @ y)

    sol = solve_ivp(rhs, (times[0], times[-1]), psi, method="DOP853", t_eval=times,
                    rtol=rtol, atol=rtol * 1e-3)
    if sol.status != 0:
        t_fail = float(sol.t[-1]) if sol.t.size else float(times[0])
        raise IntegrationError(f"adaptive integration failed: {sol.message}", t_fail)
    states[:] = sol.y.T
    return Evolution(times, states, int(sol.nfev))


def instantaneous_fidelity(psi, phi) -> float:
    """|<phi|psi>|^2."""
    return float(abs(np.vdot(phi, psi)) ** 2)


@dataclass
class EvolutionTrace:
    """Sampled protocol run; ``control`` in GHz, times in ns."""

    t: np.ndarray
    control: np.ndarray
    fidelity: np.ndarray
    concurrence: np.ndarray
    norm_error: np.ndarray
    gs_concurrence: np.ndarray
    density_residual: float = 0.0
    final_state: np.ndarray | None = None
    states: np.ndarray | None = field(default=None, repr=False)
    n_steps: int = 0

    COLUMNS = ("t_ns", "control_GHz", "fidelity", "concurrence", "norm_error")

    def rows(self):
        return list(zip(self.t, self.control, self.fidelity, self.concurrence, self.norm_error))

    def summary(self) -> dict:
        return {
            "final_fidelity": float(self.fidelity[-1]),
            "final_concurrence": float(self.concurrence[-1]),
            "min_fidelity": float(np.nanmin(self.fidelity)) if np.any(np.isfinite(self.fidelity)) else math.nan,
            "max_concurrence": float(np.max(self.concurrence)),
            "gs_concurrence_at_final_control": float(self.gs_concurrence[-1]),
        }


def _sample_times(t_final: float, n_samples: int) -> np.ndarray:
    if t_final < 0:
        raise ValueError("t_final must be >= 0")
    if t_final == 0:
        return np.zeros(1)
    if n_samples < 2:
        raise ValueError("n_samples must be >= 2 for a run of nonzero length")
    return np.linspace(0.0, t_final, n_samples)


def _assemble(evo: Evolution, control, reference_states, frame=None, keep_states=False):
    """Fidelity against reference ground states and end concurrence of each sample.

    ``reference_states`` yields GroundStateResult objects; ``frame(k, psi)`` maps
    the evolved state into the reference frame when the two differ.
    """
    m = evo.times.size
    fid = np.empty(m)
    conc = np.empty(m)
    gs_conc = np.empty(m)
    norm_err = np.abs(np.linalg.norm(evo.states, axis=1) - 1.0)
    resid = 0.0
    for k, gs in enumerate(reference_states):
        psi = evo.states[k]
        rho = end_pair(psi)
        diag = validate_density_matrix(rho)
        resid = max(resid, diag.hermiticity, diag.trace_deviation, -diag.min_eigenvalue)
        conc[k] = concurrence(rho)
        gs_conc[k] = gs.end_concurrence()
        psi_ref = psi if frame is None else frame(k, psi)
        fid[k] = math.nan if gs.degenerate else instantaneous_fidelity(psi_ref, gs.state)
    return EvolutionTrace(
        t=evo.times, control=np.asarray(control, dtype=float), fidelity=fid,
        concurrence=conc, norm_error=norm_err, gs_concurrence=gs_conc,
        density_residual=resid, final_state=evo.states[-1].copy(),
        states=evo.states if keep_states else None, n_steps=evo.n_steps,
    )


def dc_hamiltonian(cfg: ham.DcChainConfig) -> TimeDependentHamiltonian:
    """Ramped-bias Ising chain: the bias enters as a diagonal term times eps(t)."""
    h0 = ham.build_dc(cfg, 0.0)
    bias = ham.build_dc(cfg, 1.0) - h0
    ramp = RampSchedule(cfg.eps0, cfg.rate)
    return TimeDependentHamiltonian(
        h0, diag_ops=np.real(np.diag(bias))[None, :],
        diag_coeffs=lambda t: ramp(t)[:, None],
    )


def run_protocol_dc(
    cfg: ham.DcChainConfig,
    t_final: float | None = None,
    n_samples: int = 201,
    *,
    method: str = "rk4",
    norm_tol: float | None = DEFAULT_NORM_TOL,
    rtol: float = 1e-8,
    keep_states: bool = False,
) -> EvolutionTrace:
    """Start in the ground state at eps0 and ramp the staggered bias down exponentially."""
    if t_final is None:
        t_final = cfg.default_t_final
    if cfg.eps0 < 3 * cfg.delta:
        warnings.warn(
            f"initial bias {cfg.eps0} GHz is not large compared to tunneling {cfg.delta} GHz",
            stacklevel=2,
        )
    times = _sample_times(t_final, n_samples)
    ramp = RampSchedule(cfg.eps0, cfg.rate)
    psi0 = ground_state(ham.build_dc(cfg, cfg.eps0)).state
    evo = evolve(dc_hamiltonian(cfg), psi0, times, method=method, norm_tol=norm_tol, rtol=rtol)
    control = ramp(times)
    refs = (ground_state(ham.build_dc(cfg, e)) for e in control)
    return _assemble(evo, control, refs, keep_states=keep_states)


def mw_full_hamiltonian(cfg: ham.MwChainConfig) -> TimeDependentHamiltonian:
    """Lab-frame driven chain; the drive enters as diagonal sigma_z terms."""
    n = cfg.n_sites
    static = ham.build_mw_full(cfg, 0.0, 0.0)
    zdiag = np.array([z_diagonal(j, n) for j in range(1, n + 1)])
    ramp = RampSchedule(cfg.omega0, cfg.rate)
    w = TWO_PI * cfg.omega
    phases = np.asarray(cfg.phases)

    def coeffs(t):
        return -2.0 * TWO_PI * ramp(t)[:, None] * np.cos(w * t[:, None] + phases[None, :])

    return TimeDependentHamiltonian(static, diag_ops=zdiag, diag_coeffs=coeffs,
                                    frequency=2.0 * cfg.omega)


def mw_effective_hamiltonian(cfg: ham.MwChainConfig) -> TimeDependentHamiltonian:
    """Rotating-wave XX chain with the ramped field (plus any tunneling detuning)."""
    base = ham.build_xx_effective(cfg, 0.0) + ham.detuning_term(cfg)
    unit_field = ham.build_xx_effective(cfg, 1.0) - ham.build_xx_effective(cfg, 0.0)
    ramp = RampSchedule(cfg.omega0, cfg.rate)
    return TimeDependentHamiltonian(base, dense_ops=unit_field[None], dense_coeffs=lambda t: ramp(t)[:, None])


def mw_reference(cfg: ham.MwChainConfig, Omega: float) -> np.ndarray:
    return ham.build_xx_effective(cfg, Omega) + ham.detuning_term(cfg)


def run_protocol_mw(
    cfg: ham.MwChainConfig,
    t_final: float | None = None,
    n_samples: int = 201,
    model: str = "full",
    *,
    method: str = "rk4",
    norm_tol: float | None = DEFAULT_NORM_TOL,
    rtol: float = 1e-8,
    keep_states: bool = False,
) -> EvolutionTrace:
    """Initialize with the staggered bias, then switch on the drive and ramp its amplitude down.

    ``model="full"`` integrates the lab-frame driven Hamiltonian; fidelity is
    taken after rotating the state back with U0(t)^dag, concurrence in the lab
    frame. ``model="effective"`` integrates the rotating-wave XX chain.
    """
    if model not in ("full", "effective"):
        raise ValueError(f"unknown model {model!r} (use 'full' or 'effective')")
    if t_final is None:
        t_final = cfg.default_t_final
    if not cfg.rwa_valid:
        warnings.warn("drive parameters violate 4*delta >> omega0, J/2; full and effective "
                      "models need not agree", stacklevel=2)
    times = _sample_times(t_final, n_samples)
    ramp = RampSchedule(cfg.omega0, cfg.rate)
    psi0 = ground_state(ham.build_mw_initial(cfg)).state
    h_t = mw_full_hamiltonian(cfg) if model == "full" else mw_effective_hamiltonian(cfg)
    evo = evolve(h_t, psi0, times, method=method, norm_tol=norm_tol, rtol=rtol)
    control = ramp(times)
    refs = (ground_state(mw_reference(cfg, x)) for x in control)
    def to_rotating_frame(k, psi):
        return ham.build_u0(cfg.omega, times[k], cfg.n_sites).conj().T @ psi

    frame = to_rotating_frame if model == "full" else None
    return _assemble(evo, control, refs, frame=frame, keep_states=keep_states)
