"""Command-line surface.

Exit codes: 0 success, 2 usage/config error, 3 numerical failure,
4 regression mismatch under `reproduce`.

Every subcommand accepts --config pointing at a JSON object whose keys
are the subcommand's flag names (hyphens as underscores); flags given
on the command line win over config-file values.  Unknown config keys
are rejected.  CSV output goes to --out when given, stdout otherwise.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from ._version import __version__
from .criticality import (
    fit_powerlaw,
    fit_powerlaw_free,
    locate_divergence,
    locate_tcl_peak,
    scan,
)
from .dicke import DickeParams, dicke_spectrum
from .dynamics import (
    TimeGrid,
    autocorrelation,
    default_time_grid,
    detect_recurrences,
    gaussian_packet,
)
from .experiments import EXPERIMENT_IDS, run_experiment
from .serialize import (
    csv_text,
    fit_record,
    format_float,
    scan_csv_rows,
    scan_result_from_csv,
    write_csv,
)
from .spectral import SolverError, ValidationError
from .timescales import timescales_at
from .vibron import VibronParams, vibron_spectrum

__all__ = ["main"]

_MODEL_KEYS = ("model", "N", "chi", "j", "w0", "w", "lam", "n_max", "parity")

# config-file keys each subcommand accepts; mirrors its flags
_ALLOWED = {
    "spectrum": set(_MODEL_KEYS) | {"out"},
    "timescales": set(_MODEL_KEYS) | {"k0", "out"},
    "autocorr": set(_MODEL_KEYS)
    | {"k0", "sigma", "cutoff", "dt", "count", "horizon", "threshold", "out"},
    "scan": {"model", "N", "j", "w0", "w", "n_max", "parity", "k0", "start",
             "stop", "step", "values", "workers", "out"},
    "locate": {"model", "N", "j", "w0", "w", "n_max", "parity", "k0",
               "bracket", "target"},
    "fit": {"scan_csv", "column", "xc", "side", "window", "free", "bracket"},
    "reproduce": {"out_dir", "workers", "figures"},
}


class _Options:
    """Merged view of command-line flags over an optional JSON config."""

    def __init__(self, args: argparse.Namespace, command: str):
        self.flags = vars(args)
        self.config: dict = {}
        path = self.flags.get("config")
        if path is not None:
            self.config = _load_config(path, _ALLOWED[command])

    def get(self, key: str, default=None):
        value = self.flags.get(key)
        if value is None:
            value = self.config.get(key, default)
        return value

    def require(self, key: str, context: str):
        value = self.get(key)
        if value is None:
            flag = "--" + key.replace("_", "-")
            raise ValidationError(f"{context} requires {flag}")
        return value


def _load_config(path: str, allowed: set[str]) -> dict:
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except OSError as exc:
        raise ValidationError(f"cannot read config file: {exc}")
    except json.JSONDecodeError as exc:
        raise ValidationError(f"config file is not valid JSON: {exc}")
    if not isinstance(data, dict):
        raise ValidationError("config file must hold a JSON object")
    unknown = sorted(set(data) - allowed)
    if unknown:
        raise ValidationError(f"unknown config keys: {', '.join(unknown)}")
    return data


def _as_int(value, name: str) -> int:
    if isinstance(value, bool):
        raise ValidationError(f"{name} must be an integer")
    if isinstance(value, float) and value != int(value):
        raise ValidationError(f"{name} must be an integer, got {value!r}")
    try:
        return int(value)
    except (TypeError, ValueError):
        raise ValidationError(f"{name} must be an integer, got {value!r}")


def _as_float(value, name: str) -> float:
    try:
        return float(value)
    except (TypeError, ValueError):
        raise ValidationError(f"{name} must be a number, got {value!r}")


def _as_pair(value, name: str) -> tuple[float, float]:
    if isinstance(value, str):
        parts = value.split(",")
    elif isinstance(value, (list, tuple)):
        parts = list(value)
    else:
        raise ValidationError(f"{name} must be 'lo,hi', got {value!r}")
    if len(parts) != 2:
        raise ValidationError(f"{name} must have exactly two values")
    return _as_float(parts[0], name), _as_float(parts[1], name)


def _emit(text: str, out) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        path = Path(out)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text, encoding="ascii")


# ---------------------------------------------------------------------------
# model resolution


def _fixed_spectrum(opts: _Options):
    """Spectrum at one control value, plus the resolved config dict."""
    model = opts.get("model", "vibron")
    if model == "vibron":
        N = _as_int(opts.require("N", "the vibron model"), "N")
        chi = _as_float(opts.require("chi", "the vibron model"), "chi")
        spectrum = vibron_spectrum(VibronParams(N, chi))
        return spectrum, chi, {"model": "vibron", "N": N, "chi": chi}
    if model == "dicke":
        j = _as_float(opts.require("j", "the Dicke model"), "j")
        w0 = _as_float(opts.get("w0", 1.0), "w0")
        w = _as_float(opts.get("w", 1.0), "w")
        lam = _as_float(opts.require("lam", "the Dicke model"), "lam")
        n_max = _as_int(opts.require("n_max", "the Dicke model"), "n_max")
        parity = opts.get("parity", "even")
        spectrum = dicke_spectrum(DickeParams(j, w0, w, lam, n_max, parity))
        config = {"model": "dicke", "j": j, "w0": w0, "w": w, "lam": lam,
                  "n_max": n_max, "parity": parity}
        return spectrum, lam, config
    raise ValidationError(f"unknown model {model!r}")


def _control_factory(opts: _Options):
    """Factory mapping the control parameter to a spectrum, plus config."""
    model = opts.get("model", "vibron")
    if model == "vibron":
        N = _as_int(opts.require("N", "the vibron model"), "N")

        def factory(chi: float):
            return vibron_spectrum(VibronParams(N, float(chi)))

        return factory, {"model": "vibron", "N": N}
    if model == "dicke":
        j = _as_float(opts.require("j", "the Dicke model"), "j")
        w0 = _as_float(opts.get("w0", 1.0), "w0")
        w = _as_float(opts.get("w", 1.0), "w")
        n_max = _as_int(opts.require("n_max", "the Dicke model"), "n_max")
        parity = opts.get("parity", "even")

        def factory(lam: float):
            return dicke_spectrum(
                DickeParams(j, w0, w, float(lam), n_max, parity)
            )

        return factory, {"model": "dicke", "j": j, "w0": w0, "w": w,
                         "n_max": n_max, "parity": parity}
    raise ValidationError(f"unknown model {model!r}")


# ---------------------------------------------------------------------------
# subcommand handlers


def cmd_spectrum(args: argparse.Namespace) -> int:
    opts = _Options(args, "spectrum")
    spectrum, _, config = _fixed_spectrum(opts)
    rows = [[int(i), float(e)] for i, e in enumerate(spectrum.levels)]
    _emit(csv_text(["k", "E"], rows, config), opts.get("out"))
    return 0


def cmd_timescales(args: argparse.Namespace) -> int:
    opts = _Options(args, "timescales")
    spectrum, control, config = _fixed_spectrum(opts)
    k0 = _as_int(opts.require("k0", "timescales"), "k0")
    ts = timescales_at(spectrum, k0)
    d1, d2, d3 = ts.derivative_values
    row = [float(control), k0, ts.t_cl, ts.t_r, ts.t_sr, d1, d2, d3]
    text = csv_text(
        ["param", "k0", "T_cl", "T_r", "T_sr", "E1", "E2", "E3"],
        [row], dict(config, k0=k0),
    )
    _emit(text, opts.get("out"))
    return 0


def cmd_autocorr(args: argparse.Namespace) -> int:
    opts = _Options(args, "autocorr")
    spectrum, control, config = _fixed_spectrum(opts)
    k0 = _as_int(opts.require("k0", "autocorr"), "k0")
    sigma = _as_float(opts.get("sigma", 2.0), "sigma")
    cutoff = _as_float(opts.get("cutoff", 1e-8), "cutoff")
    threshold = _as_float(opts.get("threshold", 0.9), "threshold")
    packet = gaussian_packet(len(spectrum), k0, sigma, cutoff)

    dt = opts.get("dt")
    count = opts.get("count")
    horizon = opts.get("horizon")
    if dt is not None and count is not None:
        grid = TimeGrid(_as_float(dt, "dt"), _as_int(count, "count"))
    else:
        if dt is None or horizon is None:
            est = timescales_at(spectrum, k0)
            base = default_time_grid(est.t_cl, est.t_r)
            if dt is None:
                dt = base.dt
            if horizon is None:
                horizon = base.dt * (base.count - 1)
        dt = _as_float(dt, "dt")
        horizon = _as_float(horizon, "horizon")
        if count is not None:
            grid = TimeGrid(dt, _as_int(count, "count"))
        else:
            grid = TimeGrid(dt, int(math.ceil(horizon / dt)) + 1)

    trace = autocorrelation(spectrum, packet, grid)
    rows = [
        [float(t), float(a), float(v.real), float(v.imag)]
        for t, a, v in zip(trace.times, trace.modulus, trace.values)
    ]
    full_config = dict(config, k0=k0, sigma=sigma, cutoff=cutoff,
                       dt=grid.dt, count=grid.count, threshold=threshold)
    out = opts.get("out")
    _emit(csv_text(["t", "absA", "reA", "imA"], rows, full_config), out)
    # keep stdout clean when it is carrying the CSV itself
    sink = sys.stdout if out is not None else sys.stderr
    events = detect_recurrences(trace, threshold)
    for t, height in events:
        print(f"recurrence t = {format_float(t)} absA = {format_float(height)}",
              file=sink)
    if not events:
        print(f"no recurrence above {threshold:g}", file=sink)
    return 0


def _scan_grid(opts: _Options) -> np.ndarray:
    values = opts.get("values")
    if values is not None:
        if isinstance(values, str):
            parts = [p for p in values.split(",") if p.strip()]
        elif isinstance(values, (list, tuple)):
            parts = list(values)
        else:
            raise ValidationError(f"values must be a list, got {values!r}")
        grid = np.array([_as_float(p, "values") for p in parts])
        if grid.size == 0:
            raise ValidationError("values is empty")
        return grid
    start = _as_float(opts.require("start", "scan"), "start")
    stop = _as_float(opts.require("stop", "scan"), "stop")
    step = _as_float(opts.require("step", "scan"), "step")
    if step <= 0 or stop < start:
        raise ValidationError("scan needs step > 0 and stop >= start")
    count = int(round((stop - start) / step)) + 1
    return start + step * np.arange(count)


def cmd_scan(args: argparse.Namespace) -> int:
    opts = _Options(args, "scan")
    factory, config = _control_factory(opts)
    k0 = _as_int(opts.require("k0", "scan"), "k0")
    grid = _scan_grid(opts)
    workers = _as_int(opts.get("workers", 1), "workers")
    result = scan(factory, k0, grid, model=config["model"], workers=workers)
    # worker count is excluded from the header comment so output bytes
    # do not depend on it
    full_config = dict(
        config, k0=k0,
        grid=[float(grid[0]), float(grid[-1]), int(grid.size)],
    )
    text = csv_text(
        ["control", "k0", "T_cl", "T_r", "T_sr", "gap"],
        scan_csv_rows(result), full_config,
    )
    _emit(text, opts.get("out"))
    return 0


def cmd_locate(args: argparse.Namespace) -> int:
    opts = _Options(args, "locate")
    factory, _ = _control_factory(opts)
    k0 = _as_int(opts.require("k0", "locate"), "k0")
    bracket = _as_pair(opts.require("bracket", "locate"), "bracket")
    target = opts.get("target", "second")
    if target == "second":
        value = locate_divergence(factory, k0, bracket)
    elif target == "third":
        value = locate_divergence(factory, k0, bracket, derivative="third")
    elif target == "tcl-peak":
        value = locate_tcl_peak(factory, k0, bracket)
    else:
        raise ValidationError(
            f"unknown target {target!r}; use second, third, or tcl-peak"
        )
    print(format_float(value))
    return 0


def cmd_fit(args: argparse.Namespace) -> int:
    opts = _Options(args, "fit")
    source = opts.require("scan_csv", "fit")
    result = scan_result_from_csv(source)
    column = opts.get("column", "T_r")
    window = opts.get("window")
    if window is not None:
        window = _as_pair(window, "window")
    side = opts.get("side", "above")
    if opts.get("free", False):
        bracket = _as_pair(opts.require("bracket", "a free fit"), "bracket")
        fit = fit_powerlaw_free(result, column, side, bracket, window)
        print(fit_record(fit), end="")
        return 0
    xc = _as_float(opts.require("xc", "fit"), "xc")
    fitted = fit_powerlaw(result, column, xc, side, window)
    if side == "both":
        below, above = fitted
        print(fit_record(below), end="")
        print()
        print(fit_record(above), end="")
    else:
        print(fit_record(fitted), end="")
    return 0


def cmd_reproduce(args: argparse.Namespace) -> int:
    opts = _Options(args, "reproduce")
    ids = list(args.ids) if args.ids else ["all"]
    known = set(EXPERIMENT_IDS) | {"all"}
    unknown = sorted(set(ids) - known)
    if unknown:
        raise ValidationError(
            f"unknown experiment ids: {', '.join(unknown)}; "
            f"known: {', '.join(EXPERIMENT_IDS)} or all"
        )
    if "all" in ids:
        ids = list(EXPERIMENT_IDS)
    out_dir = Path(opts.get("out_dir", "reproduce-out"))
    workers = _as_int(opts.get("workers", 1), "workers")
    figures = bool(opts.get("figures", True))
    if args.no_figures:
        figures = False
    failed = False
    for exp_id in ids:
        report = run_experiment(
            exp_id, out_dir / exp_id, workers=workers, figures=figures
        )
        print(f"== {exp_id} ==")
        for line in report.lines:
            print(line.render())
        for artifact in report.artifacts:
            print(f"[INFO] wrote {artifact}")
        failed = failed or not report.all_passed
    return 4 if failed else 0


# ---------------------------------------------------------------------------
# parser


def _add_model_flags(sp: argparse.ArgumentParser, control: bool) -> None:
    sp.add_argument("--model", choices=("vibron", "dicke"), default=None)
    sp.add_argument("--N", type=int, default=None, help="vibron boson number")
    if control:
        sp.add_argument("--chi", type=float, default=None)
        sp.add_argument("--lam", type=float, default=None)
    sp.add_argument("--j", type=float, default=None, help="Dicke spin length")
    sp.add_argument("--w0", type=float, default=None)
    sp.add_argument("--w", type=float, default=None)
    sp.add_argument("--n-max", dest="n_max", type=int, default=None)
    sp.add_argument("--parity", choices=("even", "odd"), default=None)


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="revivalqpt",
        description="Wave-packet revival timescales near quantum phase "
        "transitions in the vibron and Dicke models.",
    )
    parser.add_argument("--version", action="version",
                        version=f"revivalqpt {__version__}")
    sub = parser.add_subparsers(dest="command")

    sp = sub.add_parser("spectrum", help="eigenvalues for one configuration")
    _add_model_flags(sp, control=True)
    sp.add_argument("--out", default=None)
    sp.set_defaults(handler=cmd_spectrum)

    sp = sub.add_parser("timescales", help="T_Cl, T_R, T_SR at one k0")
    _add_model_flags(sp, control=True)
    sp.add_argument("--k0", type=int, default=None)
    sp.add_argument("--out", default=None)
    sp.set_defaults(handler=cmd_timescales)

    sp = sub.add_parser("autocorr", help="autocorrelation trace and "
                        "detected recurrences")
    _add_model_flags(sp, control=True)
    sp.add_argument("--k0", type=int, default=None)
    sp.add_argument("--sigma", type=float, default=None)
    sp.add_argument("--cutoff", type=float, default=None)
    sp.add_argument("--dt", type=float, default=None)
    sp.add_argument("--count", type=int, default=None)
    sp.add_argument("--horizon", type=float, default=None)
    sp.add_argument("--threshold", type=float, default=None)
    sp.add_argument("--out", default=None)
    sp.set_defaults(handler=cmd_autocorr)

    sp = sub.add_parser("scan", help="timescales over a control grid")
    _add_model_flags(sp, control=False)
    sp.add_argument("--k0", type=int, default=None)
    sp.add_argument("--start", type=float, default=None)
    sp.add_argument("--stop", type=float, default=None)
    sp.add_argument("--step", type=float, default=None)
    sp.add_argument("--values", default=None,
                    help="comma-separated control values, overrides "
                    "start/stop/step")
    sp.add_argument("--workers", type=int, default=None)
    sp.add_argument("--out", default=None)
    sp.set_defaults(handler=cmd_scan)

    sp = sub.add_parser("locate", help="divergence point or T_Cl peak")
    _add_model_flags(sp, control=False)
    sp.add_argument("--k0", type=int, default=None)
    sp.add_argument("--bracket", default=None, help="lo,hi")
    sp.add_argument("--target", choices=("second", "third", "tcl-peak"),
                    default=None)
    sp.set_defaults(handler=cmd_locate)

    sp = sub.add_parser("fit", help="power-law fit against a scan CSV")
    sp.add_argument("--scan-csv", dest="scan_csv", default=None)
    sp.add_argument("--column", choices=("T_cl", "T_r", "T_sr", "gap"),
                    default=None)
    sp.add_argument("--xc", type=float, default=None)
    sp.add_argument("--side", choices=("below", "above", "both"), default=None)
    sp.add_argument("--window", default=None, help="lo,hi distances from xc")
    sp.add_argument("--free", action="store_const", const=True, default=None,
                    help="choose xc by maximizing r^2 over --bracket")
    sp.add_argument("--bracket", default=None, help="lo,hi (free fit only)")
    sp.set_defaults(handler=cmd_fit)

    sp = sub.add_parser("reproduce", help="run canned experiments and "
                        "compare against frozen constants")
    sp.add_argument("ids", nargs="*", help="experiment ids, or 'all'")
    sp.add_argument("--out-dir", dest="out_dir", default=None)
    sp.add_argument("--workers", type=int, default=None)
    sp.add_argument("--no-figures", action="store_true")
    sp.set_defaults(handler=cmd_reproduce)

    for action in sub.choices.values():
        action.add_argument("--config", default=None,
                            help="JSON config file; flags override it")
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    if not hasattr(args, "handler"):
        parser.print_usage(sys.stderr)
        return 2
    try:
        return args.handler(args)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except SolverError as exc:
        print(f"solver error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    raise SystemExit(main())
