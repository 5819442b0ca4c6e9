"""Command-line front end: ``fluxlde gap-sweep | evolve | disorder | readout``."""

from __future__ import annotations

import math
import sys
from pathlib import Path

import click
import numpy as np

from . import spectral
from .config import ConfigError, DisorderSettings, load_config
from .disorder import DisorderStudyConfig, evolve_extremes, run_disorder_study
from .dynamics import EvolutionTrace, run_protocol_dc, run_protocol_mw
from .hamiltonians import build_dc, build_xx_effective
from .linalg import TWO_PI
from .output import dumps_json, write_csv, write_json
from .readout import ReadoutParams, dispersive_shift, measurement_time, optimal_q, r_ge

NORM_LIMIT = 1e-6
DENSITY_LIMIT = 1e-7

_SWEEP_PROTOCOL = {"delta": "dc", "epsilon": "dc", "omega_drive": "mw"}
_MODEL_PROTOCOL = {"dc": "dc", "mw-full": "mw", "mw-effective": "mw"}


def _load(path):
    try:
        return load_config(path)
    except ConfigError as exc:
        raise click.ClickException(f"invalid config: {exc}") from exc


def _require_chain(cfg, protocol):
    if cfg.chain is None:
        raise click.ClickException("config has no [chain] section")
    if cfg.protocol != protocol:
        raise click.ClickException(
            f"config protocol is {cfg.protocol!r} but this command needs {protocol!r}"
        )


def _check_trace(trace: EvolutionTrace, label: str):
    problems = []
    if trace.norm_error.max() >= NORM_LIMIT:
        problems.append(f"{label}: norm drift {trace.norm_error.max():.2e} exceeds {NORM_LIMIT:g}")
    if trace.density_residual > DENSITY_LIMIT:
        problems.append(f"{label}: reduced-state residual {trace.density_residual:.2e}")
    return problems


def _fail_validation(problems):
    if problems:
        raise click.ClickException("output validation failed: " + "; ".join(problems))


@click.group()
def main():
    """Adiabatic long-distance entanglement in flux-qubit chains."""


@main.command("gap-sweep")
@click.option("--config", "config_path", required=True, type=click.Path(dir_okay=False))
@click.option("--var", "variable", required=True, type=click.Choice(sorted(_SWEEP_PROTOCOL)))
@click.option("--from", "start", required=True, type=float)
@click.option("--to", "stop", required=True, type=float)
@click.option("--points", required=True, type=click.IntRange(min=1))
@click.option("--out", required=True, type=click.Path(dir_okay=False))
def gap_sweep(config_path, variable, start, stop, points, out):
    """Gap and ground-state end concurrence along one control parameter (CSV)."""
    if start > stop:
        raise click.ClickException(f"--from ({start}) is larger than --to ({stop})")
    if points > 1 and start == stop:
        raise click.ClickException("a multi-point sweep needs --from < --to")
    cfg = _load(config_path)
    _require_chain(cfg, _SWEEP_PROTOCOL[variable])
    grid = np.array([start]) if points == 1 else np.linspace(start, stop, points)
    try:
        if variable == "omega_drive":
            rows = spectral.sweep_mw_gap_concurrence(cfg.chain, grid)
        else:
            rows = spectral.sweep_dc_gap_concurrence(cfg.chain, variable, grid)
    except ValueError as exc:
        raise click.ClickException(str(exc)) from exc
    write_csv(out, ("control_GHz", "gap_GHz", "concurrence"),
              [(r.control, r.gap, r.concurrence) for r in rows])


def _run_model(cfg, model):
    kwargs = dict(t_final=cfg.t_final, n_samples=cfg.n_samples, **cfg.integrator_options())
    if model == "dc":
        return run_protocol_dc(cfg.chain, **kwargs)
    return run_protocol_mw(cfg.chain, model=model.split("-", 1)[1], **kwargs)


@main.command()
@click.option("--config", "config_path", required=True, type=click.Path(dir_okay=False))
@click.option("--model", required=True, type=click.Choice(sorted(_MODEL_PROTOCOL)))
@click.option("--out", required=True, type=click.Path(dir_okay=False))
@click.option("--summary", "summary_path", type=click.Path(dir_okay=False), default=None,
              help="Summary JSON path (default: --out with a .json suffix).")
def evolve(config_path, model, out, summary_path):
    """Run one ramp protocol; write the sampled trace (CSV) and a summary (JSON)."""
    cfg = _load(config_path)
    _require_chain(cfg, _MODEL_PROTOCOL[model])
    try:
        trace = _run_model(cfg, model)
    except (ValueError, RuntimeError) as exc:
        raise click.ClickException(str(exc)) from exc
    write_csv(out, EvolutionTrace.COLUMNS, trace.rows())
    summary = trace.summary()
    write_json(summary_path or Path(out).with_suffix(".json"), summary)
    click.echo(dumps_json(summary), nl=False)
    _fail_validation(_check_trace(trace, model))


@main.command()
@click.option("--config", "config_path", required=True, type=click.Path(dir_okay=False))
@click.option("--out-prefix", required=True, type=str)
@click.option("--seed", type=int, default=None, help="Override the [disorder] seed.")
@click.option("--extremes/--no-extremes", default=True,
              help="Re-evolve the minimum and maximum realizations.")
def disorder(config_path, out_prefix, seed, extremes):
    """Disorder Monte Carlo: realizations CSV, summary JSON, extreme-realization traces CSV."""
    cfg = _load(config_path)
    if cfg.chain is None:
        raise click.ClickException("config has no [chain] section")
    settings = cfg.disorder or DisorderSettings()
    study = DisorderStudyConfig(
        cfg.chain, settings.delta_xi, settings.realizations,
        settings.seed if seed is None else seed, cfg.t_final,
    )
    try:
        result = run_disorder_study(study)
    except ValueError as exc:
        raise click.ClickException(str(exc)) from exc

    n = cfg.chain.n_sites
    prefix = str(out_prefix)
    header = ["index", *(f"xi_{j}" for j in range(1, n + 1)), "gs_concurrence"]
    rows = [(k, *result.xi[k], result.concurrence[k]) for k in range(result.xi.shape[0])]
    write_csv(prefix + "_realizations.csv", header, rows)
    write_json(prefix + "_summary.json", result.summary())

    problems = []
    if extremes:
        lo, hi = evolve_extremes(result, n_samples=cfg.n_samples, **cfg.integrator_options())
        ext_rows = []
        for label, idx, tr in (("min", result.min_index, lo), ("max", result.max_index, hi)):
            ext_rows += [(label, idx, *row) for row in tr.rows()]
            problems += _check_trace(tr, f"{label} realization")
        write_csv(prefix + "_extremes.csv", ("realization", "index", *EvolutionTrace.COLUMNS),
                  ext_rows)
    click.echo(dumps_json(result.summary()), nl=False)
    _fail_validation(problems)


def _lowest_pair_from_chain(cfg):
    """Ground/first excited states of the target Hamiltonian (zero control) and the gap."""
    if cfg.protocol == "dc":
        h = build_dc(cfg.chain, 0.0)
    else:
        h = build_xx_effective(cfg.chain, 0.0)
    return spectral.lowest_pair(h)


@main.command()
@click.option("--config", "config_path", required=True, type=click.Path(dir_okay=False))
@click.option("--out", type=click.Path(dir_okay=False), default=None)
@click.option("--q-max", type=click.IntRange(min=3), default=10_000, show_default=True)
def readout(config_path, out, q_max):
    """Measurement-time and dispersive-shift estimates (JSON)."""
    cfg = _load(config_path)
    if cfg.readout is None:
        raise click.ClickException("config has no [readout] section")
    p: ReadoutParams = cfg.readout
    report = {"t_meas_ns": None, "optimal_Q": None, "shift_ratio": None}
    t_meas = measurement_time(p)
    if math.isinf(t_meas):
        click.echo("warning: kappa = 0, the measurement time is unbounded", err=True)
    else:
        report["t_meas_ns"] = t_meas
        try:
            report["optimal_Q"] = optimal_q(p, (1, q_max))
        except ValueError as exc:
            raise click.ClickException(str(exc)) from exc
    if cfg.chain is not None:
        g, e, gap = _lowest_pair_from_chain(cfg)
        rge = r_ge(g, e)
        report["r_ge"] = rge
        report["gap_GHz"] = gap / TWO_PI
        report["shift_ratio"] = dispersive_shift(p, rge, gap)
    text = dumps_json(report)
    if out:
        write_json(out, report)
    click.echo(text, nl=False)


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
