"""Adiabatic preparation of end-to-end entanglement in flux-qubit chains.

Exact spectra, Schrodinger-equation ramps for a dc-biased Ising chain and a
microwave-driven XX chain, Wootters concurrence, disorder Monte Carlo, and
dispersive-readout estimates.
"""

from .dynamics import (
    EvolutionTrace,
    RampSchedule,
    TimeDependentHamiltonian,
    evolve,
    instantaneous_fidelity,
    run_protocol_dc,
    run_protocol_mw,
)
from .hamiltonians import DcChainConfig, DisorderRealization, MwChainConfig
from .metrics import concurrence, partial_trace_pair
from .readout import ReadoutParams
from .spectral import ground_state

__all__ = [
    "DcChainConfig",
    "MwChainConfig",
    "DisorderRealization",
    "ReadoutParams",
    "EvolutionTrace",
    "RampSchedule",
    "TimeDependentHamiltonian",
    "evolve",
    "instantaneous_fidelity",
    "run_protocol_dc",
    "run_protocol_mw",
    "concurrence",
    "partial_trace_pair",
    "ground_state",
]

__version__ = "0.1.0"
