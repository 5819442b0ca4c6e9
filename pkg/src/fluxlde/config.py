"""INI run configuration.

Example::

    [chain]
    protocol = dc
    N = 4
    J_GHz = 5
    Delta_GHz = 4.5

    [numerics]
    n_samples = 201

Omitted chain keys fall back to the defaults of DcChainConfig or
MwChainConfig. Omitted readout keys fall back to ReadoutParams.
"""

from __future__ import annotations

import configparser
from dataclasses import dataclass, field
from pathlib import Path

from .hamiltonians import DcChainConfig, MwChainConfig
from .readout import ReadoutParams


class ConfigError(ValueError):
    pass


_CHAIN_COMMON = {"protocol": None, "N": "n_sites", "J_GHz": "J", "lambda": "lam", "r_GHz": "rate"}
_CHAIN_DC = {"lambda_h": "lam_h", "Delta_GHz": "delta", "eps0_GHz": "eps0"}
_CHAIN_MW = {
    "Delta_GHz": "delta",
    "omega_GHz": "omega",
    "Omega0_GHz": "omega0",
    "phases": "phases",
    "eps_init_GHz": "eps_init",
}
_NUMERICS = {"t_final_ns", "n_samples", "integrator", "tol"}
_DISORDER = {"delta_xi", "realizations", "seed"}
_READOUT = {"Lq_pH", "Iq_uA", "kappa", "TN_K", "omega_r_GHz", "Q"}

_KNOWN = {
    "chain": set(_CHAIN_COMMON) | set(_CHAIN_DC) | set(_CHAIN_MW),
    "numerics": _NUMERICS,
    "disorder": _DISORDER,
    "readout": _READOUT,
}


@dataclass
class DisorderSettings:
    delta_xi: float = 0.05
    realizations: int = 1000
    seed: int = 0


@dataclass
class RunConfig:
    protocol: str | None = None
    chain: DcChainConfig | MwChainConfig | None = None
    t_final: float | None = None
    n_samples: int = 201
    integrator: str = "rk4"
    tol: float | None = None
    disorder: DisorderSettings | None = None
    readout: ReadoutParams | None = None
    sections: set = field(default_factory=set)

    def integrator_options(self) -> dict:
        opts = {"method": self.integrator}
        if self.tol is not None:
            opts["rtol" if self.integrator == "adaptive" else "norm_tol"] = self.tol
        return opts


def _number(section, key, raw, kind=float):
    try:
        return kind(raw)
    except ValueError as exc:
        raise ConfigError(f"[{section}] {key}: cannot parse {raw!r} as {kind.__name__}") from exc


def _canonical(section: str, key: str) -> str:
    for known in _KNOWN[section]:
        if known.lower() == key.lower():
            return known
    raise ConfigError(f"unknown key {key!r} in section [{section}]")


def _read_sections(text: str) -> dict:
    parser = configparser.ConfigParser(interpolation=None)
    parser.optionxform = str
    try:
        parser.read_string(text)
    except configparser.Error as exc:
        raise ConfigError(str(exc)) from exc
    out = {}
    for name in parser.sections():
        if name not in _KNOWN:
            raise ConfigError(f"unknown section [{name}]")
        out[name] = {_canonical(name, k): v.strip() for k, v in parser.items(name)}
    return out


def _chain(values: dict):
    protocol = values.get("protocol", "").lower()
    if protocol not in ("dc", "mw"):
        raise ConfigError("[chain] protocol must be 'dc' or 'mw'")
    allowed = dict(_CHAIN_COMMON, **(_CHAIN_DC if protocol == "dc" else _CHAIN_MW))
    kwargs = {}
    for key, raw in values.items():
        if key == "protocol":
            continue
        if key not in allowed:
            raise ConfigError(f"[chain] key {key!r} does not apply to protocol {protocol}")
        attr = allowed[key]
        if key == "N":
            kwargs[attr] = _number("chain", key, raw, int)
        elif key == "phases":
            kwargs[attr] = tuple(_number("chain", key, p) for p in raw.split(","))
        else:
            kwargs[attr] = _number("chain", key, raw)
    cls = DcChainConfig if protocol == "dc" else MwChainConfig
    try:
        return protocol, cls(**kwargs)
    except ValueError as exc:
        raise ConfigError(f"[chain] {exc}") from exc


def parse_config(text: str) -> RunConfig:
    sections = _read_sections(text)
    cfg = RunConfig(sections=set(sections))
    if "chain" in sections:
        cfg.protocol, cfg.chain = _chain(sections["chain"])
    num = sections.get("numerics", {})
    if "t_final_ns" in num:
        cfg.t_final = _number("numerics", "t_final_ns", num["t_final_ns"])
        if cfg.t_final < 0:
            raise ConfigError("[numerics] t_final_ns must be >= 0")
    if "n_samples" in num:
        cfg.n_samples = _number("numerics", "n_samples", num["n_samples"], int)
    if "integrator" in num:
        cfg.integrator = num["integrator"].lower()
        if cfg.integrator not in ("rk4", "adaptive"):
            raise ConfigError("[numerics] integrator must be 'rk4' or 'adaptive'")
    if "tol" in num:
        cfg.tol = _number("numerics", "tol", num["tol"])
    if "disorder" in sections:
        d = sections["disorder"]
        cfg.disorder = DisorderSettings(
            delta_xi=_number("disorder", "delta_xi", d.get("delta_xi", "0.05")),
            realizations=_number("disorder", "realizations", d.get("realizations", "1000"), int),
            seed=_number("disorder", "seed", d.get("seed", "0"), int),
        )
    if "readout" in sections:
        r = sections["readout"]
        try:
            cfg.readout = ReadoutParams(**{k: _number("readout", k, v) for k, v in r.items()})
        except ValueError as exc:
            raise ConfigError(f"[readout] {exc}") from exc
    return cfg


def load_config(path) -> RunConfig:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    return parse_config(text)
