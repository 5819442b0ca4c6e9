from __future__ import annotations

import pytest

from fluxlde.config import ConfigError, parse_config
from fluxlde.hamiltonians import DcChainConfig, MwChainConfig


def test_dc_chain_and_numerics():
    cfg = parse_config("[chain]\nprotocol = dc\nN = 4\nJ_GHz = 5\nlambda_h = 0.02\n"
                       "[numerics]\nt_final_ns = 3\nn_samples = 7\nintegrator = adaptive\ntol = 1e-9\n")
    assert isinstance(cfg.chain, DcChainConfig) and cfg.chain.J == 5.0
    assert cfg.t_final == 3.0 and cfg.n_samples == 7
    assert cfg.integrator_options() == {"method": "adaptive", "rtol": 1e-9}


def test_mw_chain_with_phases_and_case_insensitive_keys():
    cfg = parse_config("[chain]\nprotocol = MW\nomega0_ghz = 1.5\nphases = 0, 3.14159, 0, 3.14159\n")
    assert isinstance(cfg.chain, MwChainConfig)
    assert cfg.chain.omega0 == 1.5 and cfg.chain.phases[1] == pytest.approx(3.14159)


def test_readout_and_disorder_sections():
    cfg = parse_config("[readout]\nkappa = 0.02\n[disorder]\ndelta_xi = 0.1\nseed = 5\n")
    assert cfg.chain is None and cfg.readout.kappa == 0.02 and cfg.readout.Q == 75
    assert cfg.disorder.delta_xi == 0.1 and cfg.disorder.realizations == 1000


@pytest.mark.parametrize("text", [
    "[chain]\nprotocol = ac\n",
    "[chain]\nprotocol = dc\nOmega0_GHz = 2\n",
    "[chain]\nprotocol = mw\nlambda_h = 0.1\n",
    "[chain]\nprotocol = dc\nbogus = 1\n",
    "[plots]\nx = 1\n",
    "[chain]\nprotocol = dc\nJ_GHz = five\n",
    "[chain]\nprotocol = dc\nJ_GHz = -1\n",
    "[numerics]\nt_final_ns = -1\n",
    "[numerics]\nintegrator = euler\n",
    "[readout]\nQ = 0\n",
    "[chain]\nprotocol = dc\nN = 4\nN = 6\n",
    "not an ini file",
])
def test_rejects_bad_configs(text):
    with pytest.raises(ConfigError):
        parse_config(text)
