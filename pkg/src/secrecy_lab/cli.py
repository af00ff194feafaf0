"""Command-line front end: metric sweeps to CSV, Monte Carlo runs, selftest.

Config files are flat ``section.key = value`` text (see README for the full
key list).  All dB-to-linear conversion happens here at the boundary; the
library works in linear scale throughout.

Exit codes: 0 success, 2 configuration error (with file/line diagnostics),
3 numerical non-convergence (naming the metric and sweep point).
"""

from __future__ import annotations

import argparse
import concurrent.futures
import csv
import math
import os
import sys
from dataclasses import dataclass, field, replace

from .channel import ChannelParams
from .mc import SamplerConfig, estimate_asc, estimate_spsc, estimate_sop_exact
from .secrecy import (SecrecyScenario, asc_asymptotic, asc_exact,
                      diversity_gain, sop_asymptotic, sop_lower, spsc)
from .selftest import run_selftest
from .specfun import (ContourConfig, ConvergenceError, GammaPoleError,
                      PoleSeparationError)

__all__ = ["main", "ConfigError", "SweepSpec", "RunConfig"]

_MASK64 = (1 << 64) - 1

SWEEP_VARIABLES = ("gamma_ratio_db", "gamma_bar_db", "gamma_bar_d_db",
                   "R_s", "z_D", "z_E", "alpha_E")
METRICS = ("spsc", "asc", "asc_asym", "sop_lower", "sop_asym", "sop_mc",
           "diversity")
_MC_COLUMNS = ("spsc_mc", "spsc_mc_ci", "asc_mc", "asc_mc_ci",
               "sop_mc", "sop_mc_ci")


class ConfigError(Exception):
    """Configuration problem; message carries file/line/field context."""


@dataclass(frozen=True)
class SweepSpec:
    variable: str
    start: float
    stop: float
    points: int
    scale: str = "linear"

    def values(self) -> list[float]:
        if self.scale == "log":
            step = (math.log10(self.stop) - math.log10(self.start)) \
                / (self.points - 1)
            return [10.0 ** (math.log10(self.start) + k * step)
                    for k in range(self.points)]
        step = (self.stop - self.start) / (self.points - 1)
        return [self.start + k * step for k in range(self.points)]


@dataclass(frozen=True)
class Numerics:
    contour: ContourConfig | None = None
    asc_nodes: int = 32


@dataclass(frozen=True)
class RunConfig:
    scenario: SecrecyScenario
    metrics: tuple[str, ...]
    mc: SamplerConfig
    sweep: SweepSpec | None = None
    output_path: str | None = None
    numerics: Numerics = field(default_factory=Numerics)


# ----------------------------------------------------------------- parsing

def _parse_pairs(text: str, origin: str) -> dict[str, tuple[str, int]]:
    pairs: dict[str, tuple[str, int]] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ConfigError(f"{origin}:{lineno}: expected 'key = value', "
                              f"got {raw.strip()!r}")
        key, _, value = line.partition("=")
        key = key.strip()
        value = value.strip()
        if not key or not value:
            raise ConfigError(f"{origin}:{lineno}: empty key or value")
        if key in pairs:
            raise ConfigError(f"{origin}:{lineno}: duplicate key {key!r} "
                              f"(first set on line {pairs[key][1]})")
        pairs[key] = (value, lineno)
    return pairs


class _Fields:
    """Typed, consumed-once access to the parsed key/value pairs."""

    def __init__(self, pairs: dict[str, tuple[str, int]], origin: str):
        self._pairs = dict(pairs)
        self._origin = origin

    def _take(self, key: str) -> tuple[str, int] | None:
        return self._pairs.pop(key, None)

    def error(self, key: str, lineno: int | None, message: str):
        where = f"{self._origin}:{lineno}" if lineno else self._origin
        return ConfigError(f"{where}: field {key!r}: {message}")

    def number(self, key: str, default: float | None = None,
               allow_inf: bool = False) -> float | None:
        item = self._take(key)
        if item is None:
            return default
        value, lineno = item
        try:
            out = float(value)
        except ValueError:
            raise self.error(key, lineno, f"not a number: {value!r}") from None
        if math.isnan(out) or (math.isinf(out) and not allow_inf):
            raise self.error(key, lineno, f"not finite: {value!r}")
        return out

    def integer(self, key: str, default: int | None = None) -> int | None:
        item = self._take(key)
        if item is None:
            return default
        value, lineno = item
        try:
            return int(value, 0)
        except ValueError:
            raise self.error(key, lineno, f"not an integer: {value!r}") from None

    def word(self, key: str, default: str | None = None,
             choices: tuple[str, ...] | None = None) -> str | None:
        item = self._take(key)
        if item is None:
            return default
        value, lineno = item
        if choices is not None and value not in choices:
            raise self.error(key, lineno,
                             f"must be one of {', '.join(choices)}; got {value!r}")
        return value

    def words(self, key: str) -> tuple[tuple[str, int], ...] | None:
        item = self._take(key)
        if item is None:
            return None
        value, lineno = item
        return tuple((w.strip(), lineno) for w in value.split(",") if w.strip())

    def has_prefix(self, prefix: str) -> bool:
        return any(k.startswith(prefix) for k in self._pairs)

    def finish(self) -> None:
        if self._pairs:
            key, (_, lineno) = next(iter(self._pairs.items()))
            raise ConfigError(f"{self._origin}:{lineno}: unknown key {key!r}")


def _channel_from(fields: _Fields, section: str) -> ChannelParams:
    def req(name: str, allow_inf: bool = False) -> float:
        value = fields.number(f"{section}.{name}", allow_inf=allow_inf)
        if value is None:
            raise fields.error(f"{section}.{name}", None, "missing required field")
        return value

    gamma_db = fields.number(f"{section}.gamma_bar_db")
    gamma_lin = fields.number(f"{section}.gamma_bar")
    if gamma_db is not None and gamma_lin is not None:
        raise fields.error(f"{section}.gamma_bar", None,
                           "give gamma_bar or gamma_bar_db, not both")
    if gamma_db is None and gamma_lin is None:
        raise fields.error(f"{section}.gamma_bar", None,
                           "missing required field (or gamma_bar_db)")
    gamma_bar = 10.0 ** (gamma_db / 10.0) if gamma_db is not None else gamma_lin
    try:
        return ChannelParams(alpha=req("alpha"), mu=req("mu"), m=req("m"),
                             z=req("z", allow_inf=True), gamma_bar=gamma_bar)
    except ValueError as exc:
        raise fields.error(section, None, str(exc)) from None


def _sweep_from(fields: _Fields) -> SweepSpec | None:
    if not fields.has_prefix("sweep."):
        return None
    variable = fields.word("sweep.variable", choices=SWEEP_VARIABLES)
    if variable is None:
        raise fields.error("sweep.variable", None, "missing required field")
    start = fields.number("sweep.start")
    stop = fields.number("sweep.stop")
    points = fields.integer("sweep.points")
    scale = fields.word("sweep.scale", default="linear",
                        choices=("linear", "log"))
    if start is None or stop is None or points is None:
        raise fields.error("sweep", None,
                           "sweep needs variable, start, stop and points")
    if not start < stop:
        raise fields.error("sweep.start", None,
                           f"start must be < stop (got {start} >= {stop})")
    if points < 2:
        raise fields.error("sweep.points", None, "points must be >= 2")
    if scale == "log" and start <= 0.0:
        raise fields.error("sweep.scale", None,
                           "log scale requires a positive start")
    return SweepSpec(variable=variable, start=start, stop=stop,
                     points=points, scale=scale)


def _numerics_from(fields: _Fields) -> Numerics:
    abs_tol = fields.number("numerics.abs_tol")
    rel_tol = fields.number("numerics.rel_tol")
    half_length = fields.number("numerics.half_length")
    max_subdivisions = fields.integer("numerics.max_subdivisions")
    asc_nodes = fields.integer("numerics.asc_nodes", default=32)
    overrides = {}
    if abs_tol is not None:
        overrides["abs_tol"] = abs_tol
    if rel_tol is not None:
        overrides["rel_tol"] = rel_tol
    if half_length is not None:
        overrides["L"] = half_length
    if max_subdivisions is not None:
        overrides["max_subdivisions"] = max_subdivisions
    contour = None
    if overrides:
        try:
            contour = ContourConfig(**overrides)
        except ValueError as exc:
            raise fields.error("numerics", None, str(exc)) from None
    return Numerics(contour=contour, asc_nodes=asc_nodes)


def load_config(path: str, seed_override: int | None = None,
                out_override: str | None = None) -> RunConfig:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigError(f"{path}: cannot read config: {exc}") from None
    origin = os.path.basename(path)
    fields = _Fields(_parse_pairs(text, origin), origin)

    channel_d = _channel_from(fields, "channel_d")
    channel_e = _channel_from(fields, "channel_e")
    r_s = fields.number("scenario.r_s", default=0.0)
    try:
        scenario = SecrecyScenario(channel_d=channel_d, channel_e=channel_e,
                                   r_s=r_s)
    except ValueError as exc:
        raise fields.error("scenario.r_s", None, str(exc)) from None

    words = fields.words("metrics")
    if not words:
        raise fields.error("metrics", None,
                           "at least one metric must be requested")
    for name, lineno in words:
        if name not in METRICS:
            raise fields.error("metrics", lineno,
                               f"unknown metric {name!r}; choose from "
                               + ", ".join(METRICS))
    requested = tuple(m for m in METRICS if m in {n for n, _ in words})

    sweep = _sweep_from(fields)
    numerics = _numerics_from(fields)
    seed = fields.integer("mc.seed", default=2024)
    n_samples = fields.integer("mc.n_samples", default=1_000_000)
    n_streams = fields.integer("mc.n_streams", default=8)
    if seed_override is not None:
        seed = seed_override
    try:
        mc_cfg = SamplerConfig(seed=seed, n_samples=n_samples,
                               n_streams=n_streams)
    except ValueError as exc:
        raise fields.error("mc", None, str(exc)) from None

    output_path = fields.word("output.path")
    if out_override is not None:
        output_path = out_override
    if output_path is None:
        stem = os.path.splitext(os.path.basename(path))[0]
        output_path = stem + ".csv"
    fields.finish()
    return RunConfig(scenario=scenario, metrics=requested, mc=mc_cfg,
                     sweep=sweep, output_path=output_path, numerics=numerics)


# -------------------------------------------------------------- evaluation

def _scenario_at(cfg: RunConfig, value: float) -> SecrecyScenario:
    base = cfg.scenario
    if cfg.sweep is None:
        return base
    variable = cfg.sweep.variable
    try:
        if variable == "gamma_ratio_db":
            gamma_d = base.channel_e.gamma_bar * 10.0 ** (value / 10.0)
            return replace(base, channel_d=replace(base.channel_d,
                                                   gamma_bar=gamma_d))
        if variable == "gamma_bar_db":
            g = 10.0 ** (value / 10.0)
            return replace(base,
                           channel_d=replace(base.channel_d, gamma_bar=g),
                           channel_e=replace(base.channel_e, gamma_bar=g))
        if variable == "gamma_bar_d_db":
            g = 10.0 ** (value / 10.0)
            return replace(base, channel_d=replace(base.channel_d, gamma_bar=g))
        if variable == "R_s":
            return replace(base, r_s=value)
        if variable == "z_D":
            return replace(base, channel_d=replace(base.channel_d, z=value))
        if variable == "z_E":
            return replace(base, channel_e=replace(base.channel_e, z=value))
        return replace(base, channel_e=replace(base.channel_e, alpha=value))
    except ValueError as exc:
        raise ConfigError(
            f"sweep value {variable} = {value:g} yields invalid parameters: "
            f"{exc}") from None


def _columns(metrics: tuple[str, ...]) -> list[str]:
    cols: list[str] = []
    for m in metrics:
        cols.append(m)
        if m == "sop_mc":
            cols.append("sop_mc_ci")
    return cols


def _evaluate_point(cfg: RunConfig, index: int, value: float) -> dict[str, float]:
    scenario = _scenario_at(cfg, value)
    contour = cfg.numerics.contour
    mc_cfg = replace(cfg.mc, seed=(cfg.mc.seed + index) & _MASK64)
    row: dict[str, float] = {}
    for metric in cfg.metrics:
        try:
            if metric == "spsc":
                row[metric] = spsc(scenario, contour).value
            elif metric == "asc":
                row[metric] = asc_exact(scenario, contour, contour).value
            elif metric == "asc_asym":
                row[metric] = asc_asymptotic(scenario, cfg.numerics.asc_nodes,
                                             contour).value
            elif metric == "sop_lower":
                row[metric] = sop_lower(scenario, contour).value
            elif metric == "sop_asym":
                row[metric] = sop_asymptotic(scenario).value
            elif metric == "diversity":
                row[metric] = diversity_gain(scenario)
            else:
                est = estimate_sop_exact(scenario, mc_cfg)
                row["sop_mc"] = est.mean
                row["sop_mc_ci"] = est.ci_half_width
        except (ConvergenceError, RuntimeError, ValueError) as exc:
            raise type(exc)(f"metric {metric!r}: {exc}") from exc
    return row


def _evaluate_mc_point(cfg: RunConfig, index: int,
                       value: float) -> dict[str, float]:
    scenario = _scenario_at(cfg, value)
    mc_cfg = replace(cfg.mc, seed=(cfg.mc.seed + index) & _MASK64)
    row: dict[str, float] = {}
    for name, estimator in (("spsc_mc", estimate_spsc),
                            ("asc_mc", estimate_asc),
                            ("sop_mc", estimate_sop_exact)):
        est = estimator(scenario, mc_cfg)
        row[name] = est.mean
        row[name + "_ci"] = est.ci_half_width
    return row


def _run_sweep(cfg: RunConfig, columns: list[str], evaluate) -> int:
    if cfg.sweep is not None:
        axis_name = cfg.sweep.variable
        values = cfg.sweep.values()
    else:
        axis_name = "point"
        values = [0.0]

    results: list[dict[str, float] | None] = [None] * len(values)
    errors: list[tuple[int, Exception] | None] = [None] * len(values)

    def work(k: int) -> None:
        try:
            results[k] = evaluate(cfg, k, values[k])
        except Exception as exc:  # classified below, in sweep order
            errors[k] = (k, exc)

    max_workers = min(len(values), os.cpu_count() or 1)
    with concurrent.futures.ThreadPoolExecutor(max_workers=max_workers) as pool:
        list(pool.map(work, range(len(values))))

    for item in errors:
        if item is None:
            continue
        k, exc = item
        where = f"sweep point {k} ({axis_name} = {values[k]:g})"
        if isinstance(exc, ConfigError):
            print(f"error: {exc}", file=sys.stderr)
            return 2
        if isinstance(exc, (ConvergenceError, RuntimeError,
                            PoleSeparationError, GammaPoleError)):
            print(f"error: numerical non-convergence at {where}: {exc}",
                  file=sys.stderr)
            return 3
        if isinstance(exc, ValueError):
            print(f"error: invalid scenario at {where}: {exc}",
                  file=sys.stderr)
            return 2
        print(f"error: {type(exc).__name__} at {where}: {exc}",
              file=sys.stderr)
        return 3

    with open(cfg.output_path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow([axis_name] + columns)
        for value, row in zip(values, results):
            writer.writerow([_fmt(value)] + [_fmt(row[c]) for c in columns])
    print(f"wrote {cfg.output_path} ({len(values)} rows)", file=sys.stderr)
    return 0


def _fmt(x: float) -> str:
    return "%.17g" % float(x)


# --------------------------------------------------------------- commands

def _cmd_run(args: argparse.Namespace) -> int:
    cfg = load_config(args.config, args.seed, args.out)
    return _run_sweep(cfg, _columns(cfg.metrics), _evaluate_point)


def _cmd_mc(args: argparse.Namespace) -> int:
    cfg = load_config(args.config, args.seed, args.out)
    return _run_sweep(cfg, list(_MC_COLUMNS), _evaluate_mc_point)


def _cmd_selftest(args: argparse.Namespace) -> int:
    return 0 if run_selftest(full=args.full) else 1


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="secrecy-lab",
        description="Physical-layer-security metrics of alpha-F fading "
                    "channels with pointing errors")
    sub = parser.add_subparsers(dest="command", required=True)

    run_p = sub.add_parser("run", help="evaluate metrics/sweeps to CSV")
    run_p.add_argument("config", help="flat key=value config file")
    run_p.add_argument("--out", help="output CSV path (overrides output.path)")
    run_p.add_argument("--seed", type=int,
                       help="Monte Carlo seed (overrides mc.seed)")
    run_p.set_defaults(func=_cmd_run)

    mc_p = sub.add_parser("mc", help="Monte Carlo estimates only, to CSV")
    mc_p.add_argument("config", help="flat key=value config file")
    mc_p.add_argument("--out", help="output CSV path (overrides output.path)")
    mc_p.add_argument("--seed", type=int,
                      help="Monte Carlo seed (overrides mc.seed)")
    mc_p.set_defaults(func=_cmd_mc)

    st_p = sub.add_parser("selftest", help="run the built-in check suites")
    st_p.add_argument("--full", action="store_true",
                      help="include the large Monte Carlo gates")
    st_p.set_defaults(func=_cmd_selftest)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
