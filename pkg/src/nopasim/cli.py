"""Command-line front end: single points, sweeps, figure presets, optimization.

Output is machine-oriented: a flat JSON object for point/optimize runs and a
CSV table (one comment metadata line, fixed header, 17 significant digits)
for sweeps, so repeated runs with the same configuration are byte-identical.

Exit codes: 0 success, 1 usage or configuration error, 2 numerical/solver
error.
"""

from __future__ import annotations

import argparse
import json
import sys

from .model import (AnalyzingFrequency, CavityParams, DriveParams, SimulationError,
                    COEFFICIENT_MODES, THRESHOLD_CONVENTIONS, threshold, validate)
from .sweeps import (FIGURE_PRESETS, SWEEP_VARIABLES, SweepSpec, evaluate_point,
                     figure_preset, optimize_idler, run_sweep)
from . import fluctuations

CSV_HEADER = ("swept,beta2_norm,beta3_norm,omega_norm,rho,rho3,eta,t_x,t_y,"
              "var_x,var_y,alpha1,alpha2,alpha3,residual,stable,defined,error")

_PARAM_DEFAULTS = {
    "gamma": 0.1,
    "gamma3": 0.1,
    "rho": 0.0,
    "rho3": 0.0,
    "chi": 0.001,
    "beta2_norm": 0.0,
    "beta3_norm": 0.0,
    "omega_norm": 0.0,
    "threshold_convention": "printed",
    "coefficient_mode": "corrected",
}

_FLOAT_KEYS = ("gamma", "gamma3", "rho", "rho3", "chi",
               "beta2_norm", "beta3_norm", "omega_norm")


class UsageError(Exception):
    """Bad flags or configuration; maps to exit code 1."""


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # noqa: D401 - argparse hook
        raise UsageError(message)


def _fmt(value) -> str:
    """CSV cell formatting: 17 significant digits, locale-free, empty for None."""
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, str):
        return value
    return format(float(value), ".17g")


def _add_common_options(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--gamma", type=float, default=None,
                        help="coupling-mirror loss of signal and idler (default 0.1)")
    parser.add_argument("--gamma3", type=float, default=None,
                        help="coupling-mirror loss of the pump (default 0.1)")
    parser.add_argument("--rho", type=float, default=None,
                        help="extra intracavity loss of signal and idler (default 0)")
    parser.add_argument("--rho3", type=float, default=None,
                        help="extra intracavity loss of the pump (default 0)")
    parser.add_argument("--chi", type=float, default=None,
                        help="effective nonlinear coupling (default 0.001)")
    parser.add_argument("--beta2-norm", type=float, default=None, dest="beta2_norm",
                        help="idler injection amplitude in units of the threshold")
    parser.add_argument("--beta3-norm", type=float, default=None, dest="beta3_norm",
                        help="pump amplitude in units of the threshold")
    parser.add_argument("--omega-norm", type=float, default=None, dest="omega_norm",
                        help="analyzing frequency Omega = omega*tau/gamma (default 0)")
    parser.add_argument("--threshold-convention", choices=THRESHOLD_CONVENTIONS,
                        default=None, dest="threshold_convention",
                        help="threshold formula used for drive normalization")
    parser.add_argument("--coefficient-mode", choices=COEFFICIENT_MODES, default=None,
                        dest="coefficient_mode",
                        help="closed-form fluctuation coefficient set")
    parser.add_argument("--format", choices=("csv", "json"), default=None, dest="format",
                        help="output format (csv for tables, json default for points)")
    parser.add_argument("-o", "--output", default=None, dest="output",
                        help="output path (stdout when omitted)")
    parser.add_argument("--config", default=None,
                        help="flat key = value config file; flags take precedence")


def build_parser() -> _Parser:
    parser = _Parser(prog="nopasim",
                     description="Three-mode down-conversion transfer simulator")
    sub = parser.add_subparsers(dest="command", required=True)

    p_point = sub.add_parser("point", help="evaluate a single operating point")
    _add_common_options(p_point)

    p_sweep = sub.add_parser("sweep", help="run a one-dimensional parameter sweep")
    _add_common_options(p_sweep)
    p_sweep.add_argument("--var", choices=SWEEP_VARIABLES, required=True,
                         help="swept quantity")
    p_sweep.add_argument("--range", required=True, dest="range",
                         help="start:stop:count (linear spacing)")

    p_fig = sub.add_parser("figure", help="run a preset parameter study")
    p_fig.add_argument("preset", choices=FIGURE_PRESETS)
    _add_common_options(p_fig)

    p_opt = sub.add_parser("optimize", help="optimize the idler injection amplitude")
    _add_common_options(p_opt)

    return parser


def _load_config(path: str) -> dict:
    values = {}
    try:
        with open(path, "r", encoding="utf-8") as handle:
            for lineno, raw in enumerate(handle, start=1):
                line = raw.split("#", 1)[0].strip()
                if not line:
                    continue
                if "=" not in line:
                    raise UsageError(f"{path}:{lineno}: expected 'key = value'")
                key, _, value = line.partition("=")
                values[key.strip().replace("-", "_")] = value.strip()
    except OSError as exc:
        raise UsageError(f"cannot read config file {path}: {exc}") from exc

    resolved = {}
    for key, value in values.items():
        if key not in _PARAM_DEFAULTS:
            raise UsageError(f"unknown config key {key!r}")
        if key in _FLOAT_KEYS:
            try:
                resolved[key] = float(value)
            except ValueError as exc:
                raise UsageError(f"config key {key!r}: not a number: {value!r}") from exc
        else:
            resolved[key] = value
    return resolved


def _resolve(args: argparse.Namespace) -> dict:
    """Layer defaults < config file < explicit flags."""
    settings = dict(_PARAM_DEFAULTS)
    if getattr(args, "config", None):
        settings.update(_load_config(args.config))
    for key in _PARAM_DEFAULTS:
        flag = getattr(args, key, None)
        if flag is not None:
            settings[key] = flag
    if settings["threshold_convention"] not in THRESHOLD_CONVENTIONS:
        raise UsageError(f"bad threshold convention {settings['threshold_convention']!r}")
    if settings["coefficient_mode"] not in COEFFICIENT_MODES:
        raise UsageError(f"bad coefficient mode {settings['coefficient_mode']!r}")
    return settings


def _cavity_from(settings: dict) -> CavityParams:
    params = CavityParams(gamma=settings["gamma"], gamma3=settings["gamma3"],
                          rho=settings["rho"], rho3=settings["rho3"], chi=settings["chi"],
                          threshold_convention=settings["threshold_convention"])
    problems = validate(params)
    if problems:
        raise UsageError("invalid cavity parameters: " + ", ".join(problems))
    if settings["beta2_norm"] < 0 or settings["beta3_norm"] < 0:
        raise UsageError("drive amplitudes must be >= 0")
    return params


def _meta_line(settings: dict, assumptions: tuple[str, ...]) -> str:
    notes = "; ".join(assumptions) if assumptions else "none"
    return (f"# meta: threshold_convention={settings['threshold_convention']}, "
            f"coefficient_mode={settings['coefficient_mode']}, assumptions={notes}")


def _emit(text: str, output: str | None) -> None:
    if output is None:
        sys.stdout.write(text)
    else:
        with open(output, "w", encoding="utf-8", newline="\n") as handle:
            handle.write(text)


def _rows_to_csv(rows, meta: str) -> str:
    lines = [meta, CSV_HEADER]
    for row in rows:
        lines.append(",".join(_fmt(v) for v in (
            row.swept, row.beta2_norm, row.beta3_norm, row.omega_norm, row.rho, row.rho3,
            row.eta, row.t_x, row.t_y, row.var_x, row.var_y, row.alpha1, row.alpha2,
            row.alpha3, row.residual, row.stable, row.defined, row.error)))
    return "\n".join(lines) + "\n"


def _rows_to_json(rows, settings: dict, assumptions: tuple[str, ...]) -> str:
    payload = {
        "threshold_convention": settings["threshold_convention"],
        "coefficient_mode": settings["coefficient_mode"],
        "assumptions": "; ".join(assumptions) if assumptions else "none",
        "rows": [
            {k: getattr(row, k) for k in (
                "swept", "beta2_norm", "beta3_norm", "omega_norm", "rho", "rho3", "eta",
                "t_x", "t_y", "var_x", "var_y", "alpha1", "alpha2", "alpha3", "residual",
                "stable", "defined", "error")}
            for row in rows
        ],
    }
    return json.dumps(payload, indent=2) + "\n"


def _write_sweep(rows, spec: SweepSpec, settings: dict, output: str | None,
                 fmt: str) -> None:
    if fmt == "json":
        _emit(_rows_to_json(rows, settings, spec.assumptions), output)
    else:
        _emit(_rows_to_csv(rows, _meta_line(settings, spec.assumptions)), output)
    unstable = sum(1 for r in rows if not r.stable)
    if unstable:
        print(f"warning: {unstable}/{len(rows)} points are on an unstable branch; "
              "linearized metrics there are indicative only", file=sys.stderr)


def cmd_point(args: argparse.Namespace) -> int:
    settings = _resolve(args)
    params = _cavity_from(settings)
    eps = threshold(params)
    drive = DriveParams(beta2=settings["beta2_norm"] * eps,
                        beta3=settings["beta3_norm"] * eps)
    freq = AnalyzingFrequency.from_normalized(settings["omega_norm"], params)
    point = evaluate_point(params, drive, freq, settings["coefficient_mode"])
    oracle = fluctuations.output_variances_oracle(point.steady, params, freq)
    ss, m = point.steady, point.metrics
    result = {
        "beta2_norm": settings["beta2_norm"],
        "beta3_norm": settings["beta3_norm"],
        "omega_norm": settings["omega_norm"],
        "rho": params.rho,
        "rho3": params.rho3,
        "eta": m.eta,
        "t_x": m.t_x,
        "t_y": m.t_y,
        "var_x": m.var_x,
        "var_y": m.var_y,
        "alpha1": ss.alpha1,
        "alpha2": ss.alpha2,
        "alpha3": ss.alpha3,
        "residual": ss.residual,
        "stable": ss.stable,
        "defined": m.defined,
        "error": "",
        "var_x_oracle": oracle.var_x,
        "var_y_oracle": oracle.var_y,
        "branch_count": ss.branch_count,
        "threshold_printed": threshold(params, "printed"),
        "threshold_derived": threshold(params, "derived"),
        "threshold_convention": settings["threshold_convention"],
        "coefficient_mode": settings["coefficient_mode"],
        "assumptions": "none",
    }
    _emit(json.dumps(result, indent=2) + "\n", args.output)
    if not ss.stable:
        print("warning: operating point is on an unstable branch", file=sys.stderr)
    return 0


def cmd_sweep(args: argparse.Namespace) -> int:
    settings = _resolve(args)
    params = _cavity_from(settings)
    parts = args.range.split(":")
    if len(parts) != 3:
        raise UsageError("--range must be start:stop:count")
    try:
        start, stop, count = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError as exc:
        raise UsageError(f"bad --range {args.range!r}: {exc}") from exc
    try:
        spec = SweepSpec(variable=args.var, start=start, stop=stop, points=count,
                         cavity=params, beta2_norm=settings["beta2_norm"],
                         beta3_norm=settings["beta3_norm"],
                         omega_norm=settings["omega_norm"],
                         coefficient_mode=settings["coefficient_mode"])
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    rows = run_sweep(spec)
    _write_sweep(rows, spec, settings, args.output, args.format or "csv")
    return 0


def cmd_figure(args: argparse.Namespace) -> int:
    settings = _resolve(args)
    params = _cavity_from(settings)
    preset = figure_preset(args.preset)
    spec = SweepSpec(variable=preset.variable, start=preset.start, stop=preset.stop,
                     points=preset.points, cavity=params,
                     beta2_norm=preset.beta2_norm, beta3_norm=preset.beta3_norm,
                     omega_norm=preset.omega_norm,
                     coefficient_mode=settings["coefficient_mode"],
                     label=preset.label, assumptions=preset.assumptions)
    rows = run_sweep(spec)
    _write_sweep(rows, spec, settings, args.output, args.format or "csv")
    return 0


def cmd_optimize(args: argparse.Namespace) -> int:
    settings = _resolve(args)
    params = _cavity_from(settings)
    if settings["beta3_norm"] <= 0:
        raise UsageError("optimize requires --beta3-norm > 0")
    eps = threshold(params)
    freq = AnalyzingFrequency.from_normalized(settings["omega_norm"], params)
    result = optimize_idler(params, settings["beta3_norm"] * eps, freq,
                            settings["coefficient_mode"])
    m = result.metrics
    payload = {
        "beta2_star": result.beta2_star,
        "beta2_star_norm": result.beta2_star_norm,
        "eta": m.eta,
        "t_x": m.t_x,
        "t_y": m.t_y,
        "stable": m.stable,
        "threshold_convention": settings["threshold_convention"],
        "coefficient_mode": settings["coefficient_mode"],
    }
    _emit(json.dumps(payload, indent=2) + "\n", args.output)
    return 0


_COMMANDS = {
    "point": cmd_point,
    "sweep": cmd_sweep,
    "figure": cmd_figure,
    "optimize": cmd_optimize,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    try:
        return _COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except SimulationError as exc:
        print(f"solver error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
