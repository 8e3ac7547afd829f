"""Command-line front end.

Subcommands: run (single trajectory), sweep (chi-phi phase grid),
critical-phi (critical barrier curve), fiberloop (pulse-train emulation).
Every invocation writes CSV artifacts plus a JSON manifest under the --out
prefix; numeric output is deterministic for identical configuration.

Angles accept raw radians or pi literals (pi/4, 3pi/8, 0.5pi).  Sweep axes
use min:max:count ranges.  A --config file holds key = value lines with
keys named like the long flags; explicit flags override file values.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
import time

from . import __version__
from ._util import ensure_parent
from .analysis import (SweepCellError, SweepSpec, critical_curve,
                       default_sites, sweep, write_curve_csv, write_grid_csv)
from .backend import BACKEND
from .errors import InsufficientDataError, InvalidDimensionError, NlqwError
from .evolution import WalkParams, initial_state, step
from .fiberloop import (init_loop_pulse, loop_probabilities, loop_step,
                        write_loop_snapshot_csv)
from .observables import (SeriesRecorder, long_time_averages,
                          write_series_csv)
from .state import site_probabilities, write_snapshot_csv


class UsageError(ValueError):
    """Bad flag or config-file value; maps to exit code 2."""


# ---------------------------------------------------------------------------
# value parsing

def parse_angle(text: str) -> float:
    """Radians from a float or a pi literal: pi, pi/4, 3pi/8, 0.5pi, -pi/2."""
    s = str(text).strip().lower().replace(" ", "")
    if not s:
        raise UsageError("empty angle value")
    if "pi" not in s:
        try:
            return float(s)
        except ValueError:
            raise UsageError(f"cannot parse angle {text!r}") from None
    coef_s, sep, rest = s.partition("pi")
    if coef_s in ("", "+"):
        coef = 1.0
    elif coef_s == "-":
        coef = -1.0
    else:
        try:
            coef = float(coef_s)
        except ValueError:
            raise UsageError(f"cannot parse angle {text!r}") from None
    if rest == "":
        div = 1.0
    elif rest.startswith("/"):
        try:
            div = float(rest[1:])
        except ValueError:
            raise UsageError(f"cannot parse angle {text!r}") from None
        if div == 0.0:
            raise UsageError(f"zero divisor in angle {text!r}")
    else:
        raise UsageError(f"cannot parse angle {text!r}")
    return coef * math.pi / div


def parse_range(text: str) -> tuple:
    """min:max:count axis (angles allowed); a bare scalar means count 1."""
    parts = str(text).split(":")
    if len(parts) == 1:
        v = parse_angle(parts[0])
        return (v, v, 1)
    if len(parts) != 3:
        raise UsageError(f"range must be min:max:count, got {text!r}")
    lo = parse_angle(parts[0])
    hi = parse_angle(parts[1])
    try:
        count = int(parts[2])
    except ValueError:
        raise UsageError(f"range count must be an integer, got {parts[2]!r}") from None
    if count < 1:
        raise UsageError(f"range count must be >= 1, got {count}")
    if hi < lo:
        raise UsageError(f"range max {hi} below min {lo}")
    return (lo, hi, count)


def parse_float_list(text: str) -> list:
    try:
        return [float(part) for part in str(text).split(",") if part.strip()]
    except ValueError:
        raise UsageError(f"cannot parse float list {text!r}") from None


def parse_snapshots(text: str) -> list:
    """Comma-separated step numbers; 'none' disables snapshots."""
    s = str(text).strip().lower()
    if s in ("none", ""):
        return []
    try:
        steps = [int(part) for part in s.split(",") if part.strip()]
    except ValueError:
        raise UsageError(f"cannot parse snapshot steps {text!r}") from None
    if any(v < 0 for v in steps):
        raise UsageError("snapshot steps must be >= 0")
    return sorted(set(steps))


def parse_nonneg_int(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise UsageError(f"expected an integer, got {text!r}") from None
    if v < 0:
        raise UsageError(f"expected a value >= 0, got {v}")
    return v


def parse_pos_int(text: str) -> int:
    v = parse_nonneg_int(text)
    if v < 1:
        raise UsageError(f"expected a value >= 1, got {v}")
    return v


def parse_pos_float(text: str) -> float:
    try:
        v = float(text)
    except ValueError:
        raise UsageError(f"expected a number, got {text!r}") from None
    if v <= 0.0:
        raise UsageError(f"expected a positive value, got {v}")
    return v


def parse_choice(options):
    def convert(text: str) -> str:
        if text not in options:
            raise UsageError(f"expected one of {options}, got {text!r}")
        return text
    return convert


# converter tables; config-file keys mirror the long flag names
_COMMON_CONVERTERS = {
    "theta": parse_angle,
    "steps": parse_nonneg_int,
    "sites": parse_pos_int,
    "window": parse_pos_int,
    "out": str,
    "kerr-mode": parse_choice(("per-component", "total")),
}

CONVERTERS = {
    "run": {
        **_COMMON_CONVERTERS,
        "phi": parse_angle,
        "chi": float,
        "record-stride": parse_pos_int,
        "snapshots": parse_snapshots,
        "boundary": parse_choice(("periodic", "open")),
    },
    "sweep": {
        **_COMMON_CONVERTERS,
        "phi": parse_range,
        "chi": parse_range,
        "boundary": parse_choice(("periodic", "open")),
        "workers": parse_pos_int,
    },
    "critical-phi": {
        **_COMMON_CONVERTERS,
        "chi-list": parse_float_list,
        "threshold": parse_pos_float,
        "tol": parse_pos_float,
        "workers": parse_pos_int,
    },
    "fiberloop": {
        "gamma": parse_angle,
        "steps": parse_nonneg_int,
        "sites": parse_pos_int,
        "window": parse_pos_int,
        "out": str,
        "record-stride": parse_pos_int,
        "snapshots": parse_snapshots,
    },
}

HELP = {
    "theta": "coin angle in radians or pi literal (default pi/4)",
    "phi": "barrier angle (default 0)",
    "chi": "Kerr nonlinearity strength (default 0)",
    "steps": "number of steps (default 2000)",
    "sites": "lattice size (default 2*steps+3)",
    "window": "trailing averaging window in samples (default 200)",
    "record-stride": "record the series every this many steps (default 1)",
    "snapshots": "comma-separated snapshot steps, or 'none' "
                 "(default 0,steps/4,steps/2,steps)",
    "boundary": "periodic or open (default periodic)",
    "out": "output path prefix (default nlqw_<mode>)",
    "workers": "process count for sweeps (default: available parallelism)",
    "kerr-mode": "nonlinear phase per spin component or from the total "
                 "site probability (default per-component)",
    "chi-list": "comma-separated increasing chi values",
    "threshold": "sp_bar cutoff defining trapping (default 0.1)",
    "tol": "bisection bracket tolerance in radians (default 1e-3)",
    "gamma": "loop nonlinearity in radians per unit intensity (default 0)",
    "config": "key = value file; explicit flags override it",
}


def _argparse_type(converter):
    def convert(text):
        try:
            return converter(text)
        except UsageError as exc:
            raise argparse.ArgumentTypeError(str(exc)) from None
    return convert


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="nlqw",
        description="Nonlinear flip-flop quantum walks through potential "
                    "barriers: trajectories, phase diagrams, critical "
                    "curves, and a fiber-loop emulator.",
    )
    parser.add_argument("--version", action="version", version=__version__)
    subs = parser.add_subparsers(dest="mode", required=True)
    descriptions = {
        "run": "single trajectory: time series plus density snapshots",
        "sweep": "chi-phi phase grid of long-time averages and regimes",
        "critical-phi": "critical barrier angle per chi via bisection",
        "fiberloop": "two-loop pulse-train emulation",
    }
    for mode, converters in CONVERTERS.items():
        sub = subs.add_parser(mode, description=descriptions[mode])
        for key, converter in converters.items():
            sub.add_argument(
                f"--{key}",
                type=_argparse_type(converter),
                default=None,
                help=HELP.get(key, ""),
                dest=key.replace("-", "_"),
            )
        sub.add_argument("--config", type=str, default=None,
                         help=HELP["config"])
    return parser


def _read_config_file(path: str, mode: str) -> dict:
    converters = CONVERTERS[mode]
    values = {}
    try:
        with open(path) as fh:
            lines = fh.readlines()
    except OSError as exc:
        raise UsageError(f"cannot read config file {path}: {exc}") from None
    for lineno, raw in enumerate(lines, start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(
                f"{path}:{lineno}: expected 'key = value', got {raw.strip()!r}"
            )
        key, _, value = line.partition("=")
        key = key.strip()
        value = value.strip()
        if key not in converters:
            raise UsageError(
                f"{path}:{lineno}: unknown config key {key!r} for mode {mode}"
            )
        values[key] = converters[key](value)
    return values


DEFAULTS = {
    "theta": math.pi / 4,
    "phi": 0.0,
    "chi": 0.0,
    "gamma": 0.0,
    "steps": 2000,
    "sites": None,
    "window": 200,
    "record-stride": 1,
    "snapshots": None,
    "boundary": "periodic",
    "kerr-mode": "per-component",
    "chi-list": None,
    "threshold": 0.1,
    "tol": 1e-3,
    "out": None,
    "workers": None,
}


def parse_config(argv) -> dict:
    """Resolve argv (plus optional config file) into a flat config dict."""
    parser = build_parser()
    ns = parser.parse_args(argv)
    mode = ns.mode
    file_values = {}
    if ns.config is not None:
        file_values = _read_config_file(ns.config, mode)

    config = {"mode": mode}
    for key in CONVERTERS[mode]:
        flag = getattr(ns, key.replace("-", "_"))
        if flag is not None:
            config[key] = flag
        elif key in file_values:
            config[key] = file_values[key]
        else:
            config[key] = DEFAULTS[key]

    if config["out"] is None:
        config["out"] = f"nlqw_{mode}"

    if mode == "sweep":
        # unset axes fall back to single-value ranges at the scalar defaults
        for key in ("chi", "phi"):
            if not isinstance(config[key], tuple):
                value = float(config[key])
                config[key] = (value, value, 1)
    if mode == "critical-phi":
        if not config["chi-list"]:
            raise UsageError("critical-phi needs --chi-list")
        if any(b <= a for a, b in
               zip(config["chi-list"], config["chi-list"][1:])):
            raise UsageError("--chi-list values must be strictly increasing")
    if mode in ("sweep", "critical-phi") and config["workers"] is None:
        config["workers"] = os.cpu_count() or 1
    return config


def _default_snapshots(steps: int) -> list:
    return sorted({0, steps // 4, steps // 2, steps})


def _write_manifest(path: str, config: dict, outputs: list,
                    duration: float) -> None:
    parameters = {k: v for k, v in config.items() if k != "mode"}
    manifest = {
        "version": __version__,
        "backend": BACKEND,
        "mode": config["mode"],
        "parameters": parameters,
        "outputs": outputs,
        "duration_seconds": round(duration, 3),
    }
    ensure_parent(path)
    with open(path, "w") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _do_run(config: dict, outputs: list) -> None:
    steps = config["steps"]
    sites = config["sites"] if config["sites"] is not None else default_sites(steps)
    params = WalkParams.from_angles(
        config["theta"], config["phi"], config["chi"], N=sites,
        boundary=config["boundary"], kerr_mode=config["kerr-mode"],
    )
    config["phi"] = params.shift.phi   # reflect any symmetry reduction
    config["sites"] = sites
    snaps = config["snapshots"]
    if snaps is None:
        snaps = _default_snapshots(steps)
        config["snapshots"] = snaps
    snap_set = set(snaps)
    prefix = config["out"]

    recorder = SeriesRecorder(params.n0, config["record-stride"])
    state = initial_state(params)
    recorder.record(state.t, site_probabilities(state))
    if state.t in snap_set:
        path = f"{prefix}_snapshot_t{state.t}.csv"
        write_snapshot_csv(path, state)
        outputs.append(path)
    for _ in range(steps):
        state = step(state, params)
        recorder.record(state.t, site_probabilities(state))
        if state.t in snap_set:
            path = f"{prefix}_snapshot_t{state.t}.csv"
            write_snapshot_csv(path, state)
            outputs.append(path)

    series = recorder.series()
    series_path = f"{prefix}_series.csv"
    write_series_csv(series_path, series)
    outputs.append(series_path)
    try:
        avg = long_time_averages(series, config["window"])
        print(f"run: backend={BACKEND} N={sites} steps={steps} "
              f"xi_bar={avg.xi_bar:.6g} sp_bar={avg.sp_bar:.6g}")
    except InsufficientDataError:
        print(f"run: backend={BACKEND} N={sites} steps={steps} "
              f"(series shorter than window; no averages)")


def _do_sweep(config: dict, outputs: list) -> None:
    steps = config["steps"]
    spec = SweepSpec(
        theta=config["theta"],
        chi_range=config["chi"],
        phi_range=config["phi"],
        steps=steps,
        window=config["window"],
        sites=config["sites"],
        boundary=config["boundary"],
        kerr_mode=config["kerr-mode"],
    )
    grid = sweep(spec, workers=config["workers"])
    path = f"{config['out']}_grid.csv"
    write_grid_csv(path, grid)
    outputs.append(path)
    counts = {}
    for row in grid.regimes:
        for label in row:
            counts[label] = counts.get(label, 0) + 1
    summary = " ".join(f"{k}={v}" for k, v in sorted(counts.items()))
    print(f"sweep: backend={BACKEND} grid={len(grid.chis)}x{len(grid.phis)} "
          f"workers={config['workers']} {summary}")


def _do_critical_phi(config: dict, outputs: list) -> None:
    curve = critical_curve(
        config["theta"], config["chi-list"], steps=config["steps"],
        threshold=config["threshold"], tol=config["tol"],
        window=config["window"], sites=config["sites"],
        kerr_mode=config["kerr-mode"], workers=config["workers"],
    )
    path = f"{config['out']}_curve.csv"
    write_curve_csv(path, curve)
    outputs.append(path)
    pairs = " ".join(f"phi_c({chi:g})={phi_c:.4f}" for chi, phi_c in curve.points)
    print(f"critical-phi: backend={BACKEND} threshold={curve.threshold} {pairs}")


def _do_fiberloop(config: dict, outputs: list) -> None:
    steps = config["steps"]
    sites = config["sites"] if config["sites"] is not None else default_sites(steps)
    config["sites"] = sites
    snaps = config["snapshots"]
    if snaps is None:
        snaps = _default_snapshots(steps)
        config["snapshots"] = snaps
    snap_set = set(snaps)
    prefix = config["out"]

    state = init_loop_pulse(sites, gamma=config["gamma"])
    recorder = SeriesRecorder(state.n0, config["record-stride"])
    recorder.record(state.m, loop_probabilities(state))
    if state.m in snap_set:
        path = f"{prefix}_snapshot_t{state.m}.csv"
        write_loop_snapshot_csv(path, state)
        outputs.append(path)
    for _ in range(steps):
        state = loop_step(state)
        recorder.record(state.m, loop_probabilities(state))
        if state.m in snap_set:
            path = f"{prefix}_snapshot_t{state.m}.csv"
            write_loop_snapshot_csv(path, state)
            outputs.append(path)

    series = recorder.series()
    series_path = f"{prefix}_series.csv"
    write_series_csv(series_path, series)
    outputs.append(series_path)
    try:
        avg = long_time_averages(series, config["window"])
        print(f"fiberloop: backend={BACKEND} N={sites} steps={steps} "
              f"gamma={config['gamma']:.6g} xi_bar={avg.xi_bar:.6g} "
              f"sp_bar={avg.sp_bar:.6g}")
    except InsufficientDataError:
        print(f"fiberloop: backend={BACKEND} N={sites} steps={steps} "
              f"gamma={config['gamma']:.6g} (series shorter than window)")


_MODE_RUNNERS = {
    "run": _do_run,
    "sweep": _do_sweep,
    "critical-phi": _do_critical_phi,
    "fiberloop": _do_fiberloop,
}


def execute(config: dict) -> int:
    """Run one parsed configuration; writes artifacts plus a manifest."""
    started = time.perf_counter()
    outputs: list = []
    _MODE_RUNNERS[config["mode"]](config, outputs)
    manifest_path = f"{config['out']}_manifest.json"
    _write_manifest(manifest_path, config, outputs,
                    time.perf_counter() - started)
    return 0


def main(argv=None) -> int:
    if argv is None:
        argv = sys.argv[1:]
    try:
        config = parse_config(argv)
    except UsageError as exc:
        print(f"nlqw: error: {exc}", file=sys.stderr)
        return 2
    except SystemExit as exc:
        return int(exc.code) if exc.code else 0
    try:
        return execute(config)
    except UsageError as exc:
        print(f"nlqw: error: {exc}", file=sys.stderr)
        return 2
    except InvalidDimensionError as exc:
        print(f"nlqw: error: {exc}", file=sys.stderr)
        return 2
    except (NlqwError, SweepCellError) as exc:
        print(f"nlqw: error: {exc}", file=sys.stderr)
        return 3
    except ValueError as exc:
        print(f"nlqw: error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"nlqw: i/o error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
