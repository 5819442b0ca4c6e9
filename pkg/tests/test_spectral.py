from __future__ import annotations

import math

import numpy as np
import pytest

from fluxlde import hamiltonians as ham
from fluxlde.linalg import TWO_PI
from fluxlde.spectral import (
    ground_state,
    lowest_pair,
    sweep_dc_gap_concurrence,
    sweep_mw_gap_concurrence,
)


def test_ground_state_of_diagonal_matrix():
    gs = ground_state(np.diag([3.0, -1.0, 2.0, 5.0]))
    assert gs.energy == -1.0 and gs.gap == 3.0 and not gs.degenerate
    assert abs(gs.state[1]) == pytest.approx(1.0)


def test_degenerate_ground_state_yields_nan_concurrence():
    gs = ground_state(np.zeros((16, 16)))
    assert gs.degenerate and math.isnan(gs.end_concurrence())


def test_large_bias_gives_product_state():
    gs = ground_state(ham.build_dc(ham.DcChainConfig(), 20.0))
    assert gs.end_concurrence() < 1e-3


def test_lowest_pair_orthonormal():
    g, e, gap = lowest_pair(ham.build_dc(ham.DcChainConfig(), 0.0))
    assert abs(np.vdot(g, e)) < 1e-12
    assert gap / TWO_PI == pytest.approx(0.058, rel=0.02)


def test_epsilon_sweep_is_symmetric_and_peaked():
    rows = sweep_dc_gap_concurrence(ham.DcChainConfig(), "epsilon", np.linspace(-0.2, 0.2, 9), workers=2)
    conc = np.array([r.concurrence for r in rows])
    gaps = np.array([r.gap for r in rows])
    assert np.allclose(conc, conc[::-1], atol=1e-9)
    assert np.argmax(conc) == 4 and np.argmin(gaps) == 4


def test_delta_sweep_holds_bias_at_zero():
    cfg = ham.DcChainConfig()
    (row,) = sweep_dc_gap_concurrence(cfg, "delta", [4.5])
    assert row.gap == pytest.approx(ground_state(ham.build_dc(cfg, 0.0)).gap / TWO_PI)


def test_mw_sweep_concurrence_grows_as_drive_vanishes():
    rows = sweep_mw_gap_concurrence(ham.MwChainConfig(), [0.0, 0.5, 2.0])
    assert rows[0].concurrence > rows[1].concurrence > rows[2].concurrence
    assert rows[0].gap == pytest.approx(0.038, rel=0.03)


@pytest.mark.parametrize("grid", [[], [1.0, 0.5], [0.1, 0.1]])
def test_bad_grids(grid):
    with pytest.raises(ValueError):
        sweep_dc_gap_concurrence(ham.DcChainConfig(), "epsilon", grid)


def test_unknown_variable():
    with pytest.raises(ValueError):
        sweep_dc_gap_concurrence(ham.DcChainConfig(), "J", [1.0])
