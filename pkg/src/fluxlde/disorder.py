"""Monte Carlo over tunnel-splitting disorder.

Realization ``k`` of a study draws from its own substream keyed by
``(seed, k)``, so results do not depend on worker count or evaluation order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from . import hamiltonians as ham
from .dynamics import RampSchedule, run_protocol_dc, run_protocol_mw
from .parallel import ordered_map
from .spectral import ground_state


def sample_xi(delta_xi: float, n_sites: int, seed: int, index: int) -> ham.DisorderRealization:
    """Uniform offsets in [-delta_xi, delta_xi], deterministic in (seed, index)."""
    if delta_xi == 0:
        return ham.DisorderRealization(np.zeros(n_sites), 0.0)
    ss = np.random.SeedSequence(entropy=int(seed), spawn_key=(int(index),))
    xi = np.random.default_rng(ss).uniform(-delta_xi, delta_xi, n_sites)
    return ham.DisorderRealization(xi, float(delta_xi))


@dataclass(frozen=True)
class DisorderStudyConfig:
    base: ham.DcChainConfig | ham.MwChainConfig
    delta_xi: float
    n_realizations: int = 1000
    seed: int = 0
    t_final: float | None = None

    def __post_init__(self):
        if self.delta_xi < 0:
            raise ValueError("delta_xi must be >= 0")
        if self.n_realizations < 1:
            raise ValueError("n_realizations must be >= 1")

    @property
    def protocol(self) -> str:
        return "dc" if isinstance(self.base, ham.DcChainConfig) else "mw"

    @property
    def final_time(self) -> float:
        return self.base.default_t_final if self.t_final is None else self.t_final


@dataclass
class DisorderStudyResult:
    config: DisorderStudyConfig
    xi: np.ndarray  # (n_realizations, n_sites)
    concurrence: np.ndarray  # NaN where the ground state was degenerate
    baseline: float
    control: float  # GHz, control value at the final time

    @property
    def included(self) -> np.ndarray:
        return np.isfinite(self.concurrence)

    @property
    def excluded_count(self) -> int:
        return int(np.count_nonzero(~self.included))

    @property
    def mean(self) -> float:
        return float(np.mean(self.concurrence[self.included])) if self.included.any() else math.nan

    @property
    def min_index(self) -> int:
        return int(np.nanargmin(self.concurrence))

    @property
    def max_index(self) -> int:
        return int(np.nanargmax(self.concurrence))

    @property
    def min(self) -> float:
        return float(self.concurrence[self.min_index])

    @property
    def max(self) -> float:
        return float(self.concurrence[self.max_index])

    @property
    def spread(self) -> float:
        return self.max - self.min

    def realization(self, index: int) -> ham.DisorderRealization:
        return ham.DisorderRealization(self.xi[index], self.config.delta_xi)

    def summary(self) -> dict:
        return {
            "mean": self.mean,
            "min": self.min,
            "max": self.max,
            "baseline": self.baseline,
            "excluded_count": self.excluded_count,
            "seed": int(self.config.seed),
        }


def _dc_point(cfg: ham.DcChainConfig, eps: float, real: ham.DisorderRealization) -> float:
    disordered = replace(cfg, tunneling_sites=ham.apply_disorder(cfg, real))
    return ground_state(ham.build_dc(disordered, eps)).end_concurrence()


def _mw_point(cfg: ham.MwChainConfig, Omega: float, real: ham.DisorderRealization) -> float:
    h = ham.build_xx_effective(cfg, Omega) + ham.build_h_xi(cfg.delta, real.xi)
    return ground_state(h).end_concurrence()


def _run(study: DisorderStudyConfig, point, control, workers):
    n = study.base.n_sites
    reals = [sample_xi(study.delta_xi, n, study.seed, k) for k in range(study.n_realizations)]
    conc = np.array(ordered_map(lambda r: point(study.base, control, r), reals, workers))
    baseline = point(study.base, control, ham.DisorderRealization(np.zeros(n), 0.0))
    xi = np.array([r.xi for r in reals])
    return DisorderStudyResult(study, xi, conc, baseline, float(control))


def run_disorder_study_dc(study: DisorderStudyConfig, workers=None) -> DisorderStudyResult:
    """End concurrence of the instantaneous ground state at the final bias, per realization."""
    if study.protocol != "dc":
        raise ValueError("run_disorder_study_dc needs a DcChainConfig base")
    eps_final = float(RampSchedule(study.base.eps0, study.base.rate)(study.final_time))
    return _run(study, _dc_point, eps_final, workers)


def run_disorder_study_mw(study: DisorderStudyConfig, workers=None) -> DisorderStudyResult:
    """End concurrence of the effective-model ground state plus the disorder field, at the final drive amplitude."""
    if study.protocol != "mw":
        raise ValueError("run_disorder_study_mw needs a MwChainConfig base")
    omega_final = float(RampSchedule(study.base.omega0, study.base.rate)(study.final_time))
    return _run(study, _mw_point, omega_final, workers)


def run_disorder_study(study: DisorderStudyConfig, workers=None) -> DisorderStudyResult:
    if study.protocol == "dc":
        return run_disorder_study_dc(study, workers)
    return run_disorder_study_mw(study, workers)


def disordered_config(study: DisorderStudyConfig, real: ham.DisorderRealization):
    return replace(study.base, tunneling_sites=ham.apply_disorder(study.base, real))


def evolve_extremes(result: DisorderStudyResult, t_final=None, n_samples: int = 201,
                    workers=None, **kwargs):
    """Re-run the ramp for the minimum and maximum realizations.

    dc studies use the ramped Ising chain; mw studies use the full lab-frame
    driven Hamiltonian with the drive frequency left at its nominal value.
    Returns ``(trace_min, trace_max)``.
    """
    study = result.config
    t_final = study.final_time if t_final is None else t_final
    cfgs = [disordered_config(study, result.realization(i))
            for i in (result.min_index, result.max_index)]
    if study.protocol == "dc":
        def run(cfg):
            return run_protocol_dc(cfg, t_final, n_samples, **kwargs)
    else:
        def run(cfg):
            return run_protocol_mw(cfg, t_final, n_samples, model="full", **kwargs)
    lo, hi = ordered_map(run, cfgs, workers)
    return lo, hi
