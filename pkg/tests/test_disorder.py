from __future__ import annotations

import numpy as np
import pytest

from fluxlde import hamiltonians as ham
from fluxlde.disorder import (
    DisorderStudyConfig,
    run_disorder_study,
    run_disorder_study_dc,
    sample_xi,
)
from fluxlde.parallel import ENV_THREADS, ordered_map, worker_count


def test_sample_moments():
    xi = np.array([sample_xi(0.1, 4, 3, k).xi for k in range(4000)]).ravel()
    assert np.abs(xi).max() <= 0.1
    assert xi.mean() == pytest.approx(0.0, abs=3e-3)
    assert xi.var() == pytest.approx(0.1**2 / 3, rel=0.05)


def test_sampling_is_deterministic_per_index():
    a = sample_xi(0.05, 4, 9, 17).xi
    assert np.array_equal(a, sample_xi(0.05, 4, 9, 17).xi)
    assert not np.array_equal(a, sample_xi(0.05, 4, 9, 18).xi)
    assert not np.array_equal(a, sample_xi(0.05, 4, 10, 17).xi)
    assert np.array_equal(sample_xi(0.0, 4, 9, 17).xi, np.zeros(4))


def test_results_independent_of_worker_count():
    study = DisorderStudyConfig(ham.DcChainConfig(), 0.05, 40, seed=2)
    r1 = run_disorder_study(study, workers=1)
    r4 = run_disorder_study(study, workers=4)
    assert np.array_equal(r1.xi, r4.xi)
    assert np.array_equal(r1.concurrence, r4.concurrence)


def test_zero_disorder_reproduces_baseline():
    r = run_disorder_study(DisorderStudyConfig(ham.DcChainConfig(), 0.0, 5))
    assert np.allclose(r.concurrence, r.baseline)
    assert r.spread == pytest.approx(0.0, abs=1e-12)


def test_summary_keys():
    r = run_disorder_study(DisorderStudyConfig(ham.MwChainConfig(), 0.001, 10, seed=4))
    s = r.summary()
    assert set(s) == {"mean", "min", "max", "baseline", "excluded_count", "seed"}
    assert s["min"] <= s["mean"] <= s["max"] and s["seed"] == 4


def test_protocol_mismatch_and_validation():
    with pytest.raises(ValueError):
        run_disorder_study_dc(DisorderStudyConfig(ham.MwChainConfig(), 0.001, 2))
    with pytest.raises(ValueError):
        DisorderStudyConfig(ham.DcChainConfig(), -0.1)
    with pytest.raises(ValueError):
        DisorderStudyConfig(ham.DcChainConfig(), 0.1, 0)


def test_worker_count_env(monkeypatch):
    monkeypatch.setenv(ENV_THREADS, "3")
    assert worker_count() == 3
    assert worker_count(0) == 1
    assert ordered_map(lambda x: x * x, range(10), workers=4) == [x * x for x in range(10)]
