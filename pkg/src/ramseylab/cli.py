"""Command-line front door: decay curves, optimal-time reports, N sweeps.

Subcommands
-----------
gamma     write a CSV decay curve ``t,gamma,coherence`` on a time grid
fig2      write a CSV short-time coherence breakdown
          ``t,full,quad_component,quart_component`` for N entangled probes
optimal   report the optimal interrogation time and minimized uncertainty
sweep     sweep N, write ``N,t_opt,delta_nu,gamma_at_opt`` and print the
          fitted scaling exponent

Options may also be supplied through a plain-text key-value file
(``--config``); command-line flags override file entries.  All CSV output is
deterministic: 17-significant-digit values, LF line endings, atomic writes.
"""

from __future__ import annotations

import argparse
import math
import os
import sys
import tempfile
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import scaling
from .decay import (
    DecayModel,
    DiscreteModes,
    DynamicsKind,
    OhmicSpectrum,
    TabulatedSpectrum,
    short_time_coefficients,
)
from .estimation import ProbeEnsemble, Strategy, min_uncertainty
from .exceptions import ConfigError, RamseyLabError
from .gaussian_env import EnvCorrelation, make_tmsv, require_physical

_EXIT_CODES = {"config": 2, "domain": 2, "solver": 3, "numerical": 4, "io": 5}

# (name, caster) for every key accepted in a --config file.
_CONFIG_KEYS = {
    "a": float,
    "cplus": float,
    "theta": float,
    "tmsv_r": float,
    "omega_c": float,
    "model": str,
    "modes_file": str,
    "tabulated_file": str,
    "dynamics": str,
    "strategy": str,
    "n": int,
    "n_min": int,
    "n_max": int,
    "n_per_decade": int,
    "big_t": float,
    "t_max": float,
    "steps": int,
    "k": int,
    "out": str,
}


@dataclass
class RunConfig:
    command: str
    a: float | None = None
    cplus: float | None = None
    theta: float | None = None
    tmsv_r: float | None = None
    omega_c: float = 1.0
    model: str = "ohmic"
    modes_file: str | None = None
    tabulated_file: str | None = None
    dynamics: str = "full"
    strategy: str = "entangled"
    n: int | None = None
    n_min: int | None = None
    n_max: int | None = None
    n_per_decade: int = 25
    big_t: float = 1.0
    t_max: float | None = None
    steps: int = 300
    k: int = 1
    out: str | None = None


def _fmt(value: float) -> str:
    return f"{value:.17g}"


def _write_csv_atomic(path: str, header: str, rows) -> None:
    """Write rows (iterable of string tuples) under a temp file + rename."""
    target = Path(path)
    if target.parent and not target.parent.exists():
        raise ConfigError(f"output directory does not exist: {target.parent}")
    fd, tmp_name = tempfile.mkstemp(dir=target.parent or ".", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="\n") as handle:
            handle.write(header + "\n")
            for row in rows:
                handle.write(",".join(row) + "\n")
        os.replace(tmp_name, target)
    except BaseException:
        if os.path.exists(tmp_name):
            os.unlink(tmp_name)
        raise


def _parse_config_file(path: str) -> dict:
    values = {}
    try:
        lines = Path(path).read_text().splitlines()
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from exc
    for lineno, raw in enumerate(lines, start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" in line:
            key, _, value = line.partition("=")
        else:
            parts = line.split(None, 1)
            if len(parts) != 2:
                raise ConfigError(f"{path}:{lineno}: expected 'key = value', got {raw!r}")
            key, value = parts
        key = key.strip().lower().replace("-", "_")
        value = value.strip()
        if key not in _CONFIG_KEYS:
            raise ConfigError(f"{path}:{lineno}: unknown key {key!r}")
        try:
            values[key] = _CONFIG_KEYS[key](value)
        except ValueError as exc:
            raise ConfigError(f"{path}:{lineno}: bad value for {key!r}: {exc}") from exc
    return values


def _add_env_args(parser):
    group = parser.add_argument_group("environment")
    group.add_argument("--a", type=float, help="quadrature variance a (vacuum = 1)")
    group.add_argument("--cplus", type=float, help="position cross-correlation c+ >= 0")
    group.add_argument("--theta", type=float, help="ratio c-/c+ in [-1, 1]")
    group.add_argument("--tmsv-r", type=float, dest="tmsv_r",
                       help="two-mode squeezed vacuum with squeezing r (excludes --a/--cplus/--theta)")


def _add_spectrum_args(parser):
    group = parser.add_argument_group("spectral density")
    group.add_argument("--omega-c", type=float, dest="omega_c", help="Ohmic cutoff (default 1)")
    group.add_argument("--model", choices=["ohmic", "modes", "tabulated"],
                       help="spectral model (default ohmic)")
    group.add_argument("--modes-file", dest="modes_file",
                       help="discrete modes: lines of 'g omega'")
    group.add_argument("--tabulated-file", dest="tabulated_file",
                       help="tabulated density: lines of 'omega J'")
    group.add_argument("--dynamics", choices=["full", "nofree", "shorttime", "local"],
                       help="dynamics variant (default full)")


def _add_grid_args(parser):
    group = parser.add_argument_group("time grid")
    group.add_argument("--t-max", type=float, dest="t_max", help="grid end (default 3/omega_c)")
    group.add_argument("--steps", type=int, help="grid points (default 300)")


def _add_ensemble_args(parser, with_n=True):
    group = parser.add_argument_group("probe ensemble")
    if with_n:
        group.add_argument("--n", type=int, help="probe count N")
    group.add_argument("--strategy", choices=["product", "entangled"],
                       help="probe preparation (default entangled)")
    group.add_argument("--big-t", type=float, dest="big_t", help="total time budget T (default 1)")
    group.add_argument("--k", type=int, help="odd phase branch (default 1)")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ramseylab",
        description="Dephasing decay factors and frequency-estimation scaling "
                    "for correlated two-mode Gaussian environments.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_gamma = sub.add_parser("gamma", help="decay curve CSV: t,gamma,coherence")
    _add_env_args(p_gamma)
    _add_spectrum_args(p_gamma)
    _add_grid_args(p_gamma)
    p_gamma.add_argument("--out", help="output CSV path (required)")
    p_gamma.add_argument("--config", help="key-value config file; flags override")

    p_fig2 = sub.add_parser(
        "fig2", help="short-time coherence breakdown CSV: t,full,quad_component,quart_component"
    )
    _add_env_args(p_fig2)
    _add_spectrum_args(p_fig2)
    _add_grid_args(p_fig2)
    p_fig2.add_argument("--n", type=int, help="probe count N (required)")
    p_fig2.add_argument("--out", help="output CSV path (required)")
    p_fig2.add_argument("--config", help="key-value config file; flags override")

    p_opt = sub.add_parser("optimal", help="optimal interrogation time and uncertainty")
    _add_env_args(p_opt)
    _add_spectrum_args(p_opt)
    _add_ensemble_args(p_opt)
    p_opt.add_argument("--out", help="optional one-row CSV")
    p_opt.add_argument("--config", help="key-value config file; flags override")

    p_sweep = sub.add_parser("sweep", help="N sweep CSV plus fitted scaling exponent")
    _add_env_args(p_sweep)
    _add_spectrum_args(p_sweep)
    _add_ensemble_args(p_sweep, with_n=False)
    p_sweep.add_argument("--n-min", type=int, dest="n_min", help="smallest probe count")
    p_sweep.add_argument("--n-max", type=int, dest="n_max", help="largest probe count")
    p_sweep.add_argument("--n-per-decade", type=int, dest="n_per_decade",
                         help="log-spaced points per decade (default 25)")
    p_sweep.add_argument("--out", help="output CSV path (required)")
    p_sweep.add_argument("--config", help="key-value config file; flags override")

    return parser


def _resolve(args: argparse.Namespace) -> RunConfig:
    file_values = _parse_config_file(args.config) if getattr(args, "config", None) else {}
    cfg = RunConfig(command=args.command)
    for key in _CONFIG_KEYS:
        flag_value = getattr(args, key, None)
        if flag_value is not None:
            setattr(cfg, key, flag_value)
        elif key in file_values:
            setattr(cfg, key, file_values[key])
    return cfg


def _build_env(cfg: RunConfig) -> EnvCorrelation:
    explicit = [name for name in ("a", "cplus", "theta") if getattr(cfg, name) is not None]
    if cfg.tmsv_r is not None:
        if explicit:
            raise ConfigError(
                f"--tmsv-r conflicts with --{'/--'.join(explicit)}; give exactly one environment form"
            )
        env = make_tmsv(cfg.tmsv_r)
    else:
        if cfg.a is None:
            raise ConfigError("environment missing: give --a (with optional --cplus/--theta) or --tmsv-r")
        env = EnvCorrelation(a=cfg.a, c_plus=cfg.cplus or 0.0, theta=cfg.theta or 0.0)
    require_physical(env)
    return env


def _read_pair_file(path: str, what: str):
    try:
        lines = Path(path).read_text().splitlines()
    except OSError as exc:
        raise ConfigError(f"cannot read {what} file {path}: {exc}") from exc
    pairs = []
    for lineno, raw in enumerate(lines, start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 2:
            raise ConfigError(f"{path}:{lineno}: expected two numbers, got {raw!r}")
        try:
            pairs.append((float(parts[0]), float(parts[1])))
        except ValueError as exc:
            raise ConfigError(f"{path}:{lineno}: {exc}") from exc
    if not pairs:
        raise ConfigError(f"{path}: no {what} entries found")
    return pairs


def _build_spectrum(cfg: RunConfig):
    if cfg.model == "ohmic":
        return OhmicSpectrum(omega_c=cfg.omega_c)
    if cfg.model == "modes":
        if not cfg.modes_file:
            raise ConfigError("--model modes needs --modes-file")
        return DiscreteModes(modes=tuple(_read_pair_file(cfg.modes_file, "mode")))
    if cfg.model == "tabulated":
        if not cfg.tabulated_file:
            raise ConfigError("--model tabulated needs --tabulated-file")
        pairs = _read_pair_file(cfg.tabulated_file, "density")
        return TabulatedSpectrum(frequencies=tuple(w for w, _ in pairs),
                                 densities=tuple(j for _, j in pairs))
    raise ConfigError(f"unknown spectral model {cfg.model!r}")


def _build_decay_model(cfg: RunConfig) -> DecayModel:
    kind = DynamicsKind(cfg.dynamics)
    return DecayModel(kind=kind, env=_build_env(cfg), spectrum=_build_spectrum(cfg))


def _build_ensemble(cfg: RunConfig) -> ProbeEnsemble:
    if cfg.n is None:
        raise ConfigError("probe count missing: give --n")
    return ProbeEnsemble(n=cfg.n, total_time=cfg.big_t,
                         strategy=Strategy(cfg.strategy), k=cfg.k)


def _time_grid(cfg: RunConfig, default_t_max: float) -> np.ndarray:
    t_max = cfg.t_max if cfg.t_max is not None else default_t_max
    if not (math.isfinite(t_max) and t_max > 0):
        raise ConfigError(f"t_max must be > 0, got {t_max!r}")
    if cfg.steps < 2:
        raise ConfigError(f"steps must be >= 2, got {cfg.steps!r}")
    return np.linspace(0.0, t_max, cfg.steps)


def _cmd_gamma(cfg: RunConfig) -> None:
    if not cfg.out:
        raise ConfigError("gamma needs --out")
    model = _build_decay_model(cfg)
    times = _time_grid(cfg, default_t_max=3.0 / cfg.omega_c)
    curve = model.curve(times)
    rows = (
        (_fmt(t), _fmt(g), _fmt(c))
        for t, g, c in zip(curve.times, curve.gamma, curve.coherence)
    )
    _write_csv_atomic(cfg.out, "t,gamma,coherence", rows)


def _cmd_fig2(cfg: RunConfig) -> None:
    if not cfg.out:
        raise ConfigError("fig2 needs --out")
    if cfg.n is None:
        raise ConfigError("fig2 needs --n")
    if cfg.model != "ohmic":
        raise ConfigError("fig2 uses the short-time expansion; only --model ohmic is supported")
    env = _build_env(cfg)
    times = _time_grid(cfg, default_t_max=1.0 / cfg.omega_c)
    if times[-1] * cfg.omega_c > 1.0 + 1e-12:
        raise ConfigError(
            f"fig2 grid must satisfy omega_c * t <= 1, got t_max = {times[-1]}"
        )
    q2, q4 = short_time_coefficients(env, cfg.omega_c)
    two_n = 2.0 * cfg.n

    def rows():
        for t in times:
            quad = two_n * q2 * t * t
            quart = two_n * q4 * t**4
            yield (_fmt(t), _fmt(math.exp(quad + quart)),
                   _fmt(math.exp(quad)), _fmt(math.exp(quart)))

    _write_csv_atomic(cfg.out, "t,full,quad_component,quart_component", rows())


def _cmd_optimal(cfg: RunConfig) -> None:
    model = _build_decay_model(cfg)
    ensemble = _build_ensemble(cfg)
    result = min_uncertainty(model, ensemble)
    print(f"N = {ensemble.n}")
    print(f"strategy = {ensemble.strategy.value}")
    print(f"t_opt = {_fmt(result.t_opt)}")
    print(f"delta_nu = {_fmt(result.delta_nu)}")
    print(f"gamma_at_opt = {_fmt(result.gamma_at_opt)}")
    print(f"fisher = {_fmt(result.fisher)}")
    print(f"regime_note = {result.regime_note or 'optimized'}")
    if cfg.out:
        row = (str(ensemble.n), _fmt(result.t_opt), _fmt(result.delta_nu),
               _fmt(result.gamma_at_opt), _fmt(result.fisher))
        _write_csv_atomic(cfg.out, "N,t_opt,delta_nu,gamma_at_opt,fisher", [row])


def _cmd_sweep(cfg: RunConfig) -> None:
    if not cfg.out:
        raise ConfigError("sweep needs --out")
    if cfg.n_min is None or cfg.n_max is None:
        raise ConfigError("sweep needs --n-min and --n-max")
    model = _build_decay_model(cfg)
    n_values = scaling.logspace_int(cfg.n_min, cfg.n_max, cfg.n_per_decade)
    table = scaling.sweep_uncertainty(model, Strategy(cfg.strategy), n_values,
                                      total_time=cfg.big_t, k=cfg.k)
    fit = scaling.fit_scaling_exponent(table)
    label = scaling.classify_regime(fit.slope)
    rows = (
        (str(int(n)), _fmt(t), _fmt(d), _fmt(g))
        for n, t, d, g in zip(table.n_values, table.t_opt, table.delta_nu,
                              table.gamma_at_opt)
    )
    _write_csv_atomic(cfg.out, "N,t_opt,delta_nu,gamma_at_opt", rows)
    print(f"rows = {len(table)}")
    print(f"slope = {_fmt(fit.slope)}")
    print(f"intercept = {_fmt(fit.intercept)}")
    print(f"residual_rms = {_fmt(fit.residual_rms)}")
    print(f"regime = {label.regime.name}")


_COMMANDS = {
    "gamma": _cmd_gamma,
    "fig2": _cmd_fig2,
    "optimal": _cmd_optimal,
    "sweep": _cmd_sweep,
}


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = _resolve(args)
        _COMMANDS[args.command](cfg)
    except RamseyLabError as exc:
        print(f"error:{exc.category}: {exc}", file=sys.stderr)
        return _EXIT_CODES.get(exc.category, 1)
    except OSError as exc:
        print(f"error:io: {exc}", file=sys.stderr)
        return _EXIT_CODES["io"]
    return 0


if __name__ == "__main__":
    sys.exit(main())
