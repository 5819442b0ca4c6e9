"""Ground states, gaps, and gap/concurrence sweeps."""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from . import hamiltonians as ham
from .linalg import TWO_PI, eigh
from .metrics import end_to_end_concurrence
from .parallel import ordered_map

DEGENERACY_TOL = 1e-6  # rad/ns


@dataclass(frozen=True)
class GroundStateResult:
    energy: float
    state: np.ndarray
    gap: float
    degenerate: bool

    def end_concurrence(self) -> float:
        """End-to-end concurrence, NaN when the ground state is not unique."""
        if self.degenerate:
            return math.nan
        return end_to_end_concurrence(self.state)


@dataclass(frozen=True)
class SweepRow:
    control: float  # GHz
    gap: float  # GHz
    concurrence: float


def ground_state(h, degeneracy_tol: float = DEGENERACY_TOL) -> GroundStateResult:
    dec = eigh(h)
    w = dec.eigenvalues
    gap = float(w[1] - w[0]) if w.size > 1 else math.inf
    gap = max(gap, 0.0)
    return GroundStateResult(float(w[0]), dec.vector(0), gap, gap < degeneracy_tol)


def lowest_pair(h):
    """Ground and first excited state together with the gap in rad/ns."""
    dec = eigh(h)
    return dec.vector(0), dec.vector(1), float(dec.eigenvalues[1] - dec.eigenvalues[0])


def _row(control, h) -> SweepRow:
    gs = ground_state(h)
    if gs.degenerate:
        return SweepRow(float(control), 0.0, math.nan)
    return SweepRow(float(control), gs.gap / TWO_PI, gs.end_concurrence())


def _check_grid(grid):
    grid = np.asarray(grid, dtype=float).ravel()
    if grid.size == 0:
        raise ValueError("sweep grid is empty")
    if np.any(np.diff(grid) <= 0):
        raise ValueError("sweep grid must be strictly ascending")
    return grid


def sweep_dc_gap_concurrence(cfg: ham.DcChainConfig, variable: str, grid, workers=None):
    """Gap (GHz) and ground-state end concurrence across ``delta`` or ``epsilon``.

    Sweeping ``delta`` holds the bias at zero.
    """
    grid = _check_grid(grid)
    if variable == "delta":
        def point(x):
            return _row(x, ham.build_dc(replace(cfg, delta=x), 0.0))
    elif variable == "epsilon":
        def point(x):
            return _row(x, ham.build_dc(cfg, x))
    else:
        raise ValueError(f"unknown sweep variable {variable!r} (use 'delta' or 'epsilon')")
    return ordered_map(point, grid, workers)


def sweep_mw_gap_concurrence(cfg: ham.MwChainConfig, grid, workers=None):
    """Gap and end concurrence of the effective XX chain across drive amplitude."""
    grid = _check_grid(grid)
    return ordered_map(lambda x: _row(x, ham.build_xx_effective(cfg, x)), grid, workers)
