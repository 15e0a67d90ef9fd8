"""Command line front end: run, sweep, preset.

Configs are TOML; every key must name a ScenarioConfig field (unknown
keys are rejected rather than ignored, so a typo can't silently run the
wrong experiment).  Results land in one CSV plus rendered PNG figures
next to it.
"""

from __future__ import annotations

import argparse
import dataclasses
import sys

try:
    import tomllib
except ModuleNotFoundError:                      # Python < 3.11
    import tomli as tomllib

from . import report, simulator
from .errors import ConfigError, DirmodError

_CFG_FIELDS = {f.name for f in dataclasses.fields(simulator.ScenarioConfig)}
_CFG_FIELDS.discard("penalty")          # not expressible in a flat TOML key
_TUPLE_KEYS = ("user_antenna_counts", "eve_strategies", "sweep_values")


def load_config(path: str) -> simulator.ScenarioConfig:
    try:
        with open(path, "rb") as handle:
            raw = tomllib.load(handle)
    except FileNotFoundError:
        raise ConfigError(f"config file not found: {path}")
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"config file {path} is not valid TOML: {exc}")
    unknown = sorted(set(raw) - _CFG_FIELDS)
    if unknown:
        raise ConfigError(
            f"unknown config keys {unknown}; valid keys: "
            f"{sorted(_CFG_FIELDS)}"
        )
    for key in _TUPLE_KEYS:
        if key in raw:
            if not isinstance(raw[key], list):
                raise ConfigError(f"config key {key} must be a list")
            raw[key] = tuple(raw[key])
    try:
        return simulator.ScenarioConfig(**raw).validate()
    except TypeError as exc:
        raise ConfigError(f"bad config value: {exc}")


def parse_values(text: str) -> tuple:
    """Sweep value lists: '10..20', '10..20..2', or '10,12,15.5'."""
    text = text.strip()
    if ".." in text:
        parts = text.split("..")
        if len(parts) not in (2, 3) or not all(p.strip() for p in parts):
            raise ConfigError(
                f"bad range {text!r}; expected 'start..stop' or "
                "'start..stop..step'"
            )
        try:
            start, stop = int(parts[0]), int(parts[1])
            step = int(parts[2]) if len(parts) == 3 else 1
        except ValueError:
            raise ConfigError(f"range bounds in {text!r} must be integers")
        if step < 1 or stop < start:
            raise ConfigError(f"empty or backwards range {text!r}")
        return tuple(range(start, stop + 1, step))
    try:
        values = tuple(float(p) if "." in p or "e" in p.lower() else int(p)
                       for p in text.split(",") if p.strip())
    except ValueError:
        raise ConfigError(f"bad value list {text!r}")
    if not values:
        raise ConfigError("empty sweep value list")
    return values


def _emit(rows, out_path: str, figures: bool) -> None:
    report.write_csv(rows, out_path)
    print(f"wrote {len(rows)} rows to {out_path}")
    if figures:
        for path in report.render_figures(rows, out_path):
            print(f"wrote {path}")


def _cmd_run(args) -> int:
    cfg = load_config(args.config)
    if args.seed is not None:
        cfg = dataclasses.replace(cfg, base_seed=args.seed)
    results = simulator.sweep(cfg, threads=args.threads)
    _emit([r.to_row() for r in results], args.out, not args.no_figures)
    return 0


def _cmd_sweep(args) -> int:
    cfg = load_config(args.config)
    if args.seed is not None:
        cfg = dataclasses.replace(cfg, base_seed=args.seed)
    cfg = dataclasses.replace(cfg, sweep_parameter=args.param,
                              sweep_values=parse_values(args.values))
    results = simulator.sweep(cfg, threads=args.threads)
    _emit([r.to_row() for r in results], args.out, not args.no_figures)
    return 0


def _cmd_preset(args) -> int:
    kind, payload = simulator.preset_configs(
        args.name, trials=args.trials, symbols=args.symbols,
        base_seed=args.seed if args.seed is not None else 0,
    )
    if kind == "sweep":
        rows = []
        for cfg in payload:
            rows.extend(r.to_row()
                        for r in simulator.sweep(cfg, threads=args.threads))
    elif kind == "ula":
        angles, ser, _at_users = simulator.ula_scenario(**payload)
        rows = [{"angle_deg": float(a), "ser": float(s)}
                for a, s in zip(angles, ser)]
    else:
        rows = simulator.brute_force_timing(**payload)
    _emit(rows, args.out, not args.no_figures)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dirmod",
        description=(
            "Symbol-level directional-modulation precoding: scenario "
            "simulation, parameter sweeps, and figure-style presets."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--out", default="results.csv",
                       help="output CSV path (figures rendered alongside)")
        p.add_argument("--seed", type=int, default=None,
                       help="override the config's base seed")
        p.add_argument("--threads", type=int, default=1,
                       help="sweep points run in this many threads")
        p.add_argument("--no-figures", action="store_true",
                       help="write only the CSV")

    p_run = sub.add_parser("run", help="run the scenario in a config file")
    p_run.add_argument("--config", required=True)
    common(p_run)
    p_run.set_defaults(func=_cmd_run)

    p_sweep = sub.add_parser("sweep",
                             help="run a config with a parameter sweep")
    p_sweep.add_argument("--config", required=True)
    p_sweep.add_argument("--param", required=True,
                         help="swept parameter (Nt, Nu, Ne, gamma_db, order)")
    p_sweep.add_argument("--values", required=True,
                         help="'10..20', '10..20..2', or '10,12,14'")
    common(p_sweep)
    p_sweep.set_defaults(func=_cmd_sweep)

    p_preset = sub.add_parser("preset", help="reproduce a reference figure")
    p_preset.add_argument("name",
                          choices=("fig4", "fig5", "fig9", "fig11", "fig14",
                                   "fig15"))
    p_preset.add_argument("--trials", type=int, default=None,
                          help="channel draws per point (preset default 50)")
    p_preset.add_argument("--symbols", type=int, default=None,
                          help="symbol vectors per channel (default 10)")
    common(p_preset)
    p_preset.set_defaults(func=_cmd_preset)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except DirmodError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
