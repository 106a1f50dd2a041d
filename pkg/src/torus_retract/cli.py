"""Command-line front end.

    torus-retract classify --config scenario.json
    torus-retract critical --config scenario.json --target length
    torus-retract sweep    --config sweep.json --out grid.csv
    torus-retract simulate --config scenario.json [--out trace.csv]
    torus-retract fit      --samples tension.csv

Reports go to stdout as JSON (``--format csv`` prints the command's table
instead). Exit codes: 0 success, 2 bad input, 1 internal error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from datetime import datetime, timezone

from . import __version__
from .config import ConfigError, ScenarioConfig, echo, load_config, user_value
from .modes import DeformationMode, ShapeError, classify
from .quantities import UnitError, parse_quantity
from .retraction import SimScenario, simulate
from .solvers import (
    FitError,
    SolverError,
    TensionSample,
    critical_prebend_angle,
    critical_tip_length,
    fit_belt_friction,
    run_sweep,
)

EXIT_OK, EXIT_INTERNAL, EXIT_USER = 0, 1, 2

MARGIN_COLUMNS = [
    (DeformationMode.STRAIGHT_BENDING, "margin_straight_bending [N]"),
    (DeformationMode.STRAIGHT_BUCKLING, "margin_straight_buckling [N]"),
    (DeformationMode.ELBOW_BENDING, "margin_elbow_bending [N*m]"),
    (DeformationMode.ELBOW_BUCKLING, "margin_elbow_buckling [N]"),
]


class UserError(Exception):
    pass


def _num(x):
    """Round-trip-safe decimal text for CSV cells."""
    if x is None:
        return ""
    if isinstance(x, float):
        return repr(x) if math.isfinite(x) else ("inf" if x > 0 else "-inf" if x < 0 else "nan")
    return str(x)


def _json_safe(obj):
    if isinstance(obj, float) and not math.isfinite(obj):
        return "inf" if obj > 0 else "-inf" if obj < 0 else "nan"
    if isinstance(obj, dict):
        return {k: _json_safe(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_json_safe(v) for v in obj]
    return obj


def _write_csv(header, rows, out=None):
    buf = io.StringIO(newline="")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow([_num(v) for v in r])
    text = buf.getvalue()
    if out is None:
        return text
    try:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        raise UserError(f"cannot write {out}: {exc.strerror}") from None
    return text


def _margin_cells(report):
    if report is None:
        return [None] * len(MARGIN_COLUMNS)
    return [report.margins.get(mode) for mode, _ in MARGIN_COLUMNS]


# -- commands ---------------------------------------------------------------

def cmd_classify(cfg: ScenarioConfig, args):
    sc = cfg.scenario
    report = classify(sc.state, sc.rho, sc.friction, sc.geometry, sc.environment)
    payload = report.to_dict()
    table = (["mode"] + [h for _, h in MARGIN_COLUMNS],
             [[report.mode.value] + _margin_cells(report)])
    return payload, table


def _critical_length(sc, L_max):
    try:
        return critical_tip_length(sc, L_max)
    except SolverError as exc:
        raise UserError(str(exc)) from None


def cmd_critical(cfg: ScenarioConfig, args):
    sc = cfg.scenario
    if args.target == "length":
        crit = _critical_length(sc, cfg.L_max)
        payload = {"target": "length", "critical_length": crit.to_dict()}
        rows = [[sc.state.theta, crit.value, crit.status]]
        if cfg.theta_grid:
            table = []
            for th in cfg.theta_grid:
                c = _critical_length(sc.replace(theta=th), cfg.L_max)
                table.append({"theta": th, **c.to_dict()})
            payload["table"] = table
            rows = [[t["theta"], t["value"], t["status"]] for t in table]
        return payload, (["theta [rad]", "critical_length [m]", "status"], rows)
    crit = critical_prebend_angle(sc)
    payload = {"target": "angle", "critical_angle": crit.to_dict(),
               "critical_angle_deg": math.degrees(crit.value) if crit.value is not None else None}
    return payload, (["L [m]", "critical_angle [rad]", "status"],
                     [[sc.state.tip_length_L, crit.value, crit.status]])


def sweep_table(cfg: ScenarioConfig, rows):
    spec = cfg.sweep
    header = []
    for a in spec.axes:
        unit = cfg.axis_units.get(a.name)
        header.append(f"{a.name} [{unit}]" if unit else a.name)
    header += ["mode"] + [h for _, h in MARGIN_COLUMNS]
    header += ["critical_length [m]", "critical_length_status",
               "critical_angle [rad]", "critical_angle_status"]
    if spec.simulate:
        header += ["outcome", "failure_mode", "L_fail [m]", "peak_severity"]
    header.append("error")
    body = []
    for r in rows:
        line = [user_value(cfg, a.name, r.coords[a.name]) for a in spec.axes]
        line.append(r.report.mode.value if r.report else None)
        line += _margin_cells(r.report)
        for c in (r.critical_length, r.critical_angle):
            line += [c.value, c.status] if c else [None, None]
        if spec.simulate:
            t = r.trace
            line += ([t.outcome, t.failure_mode.value if t.failure_mode else None, t.L_fail,
                      r.peak_severity] if t else [None] * 4)
        line.append(r.error)
        body.append(line)
    return header, body


def _row_dict(r):
    return {
        "coords": r.coords,
        "report": r.report.to_dict() if r.report else None,
        "critical_length": r.critical_length.to_dict() if r.critical_length else None,
        "critical_angle": r.critical_angle.to_dict() if r.critical_angle else None,
        "trace": r.trace.to_dict() if r.trace else None,
        "peak_severity": r.peak_severity,
        "error": r.error,
    }


def cmd_sweep(cfg: ScenarioConfig, args):
    if cfg.sweep is None:
        raise ConfigError("missing required key 'sweep'")
    rows = run_sweep(cfg.sweep)
    table = sweep_table(cfg, rows)
    if args.out:
        _write_csv(*table, out=args.out)
    payload = {"rows": [_row_dict(r) for r in rows], "csv": str(args.out) if args.out else None}
    return payload, table


def cmd_simulate(cfg: ScenarioConfig, args):
    try:
        scenario = SimScenario(cfg.scenario, cfg.step, cfg.guide_tube)
    except ValueError as exc:
        raise UserError(str(exc)) from None
    trace = simulate(scenario)
    header = ["L [m]", "suppressed", "mode"] + [h for _, h in MARGIN_COLUMNS]
    body = [[s.L, int(s.suppressed), s.report.mode.value] + _margin_cells(s.report)
            for s in trace.steps]
    if args.out:
        _write_csv(header, body, out=args.out)
    return trace.to_dict(), (header, body)


def read_samples(path):
    """Read a (theta, tension) CSV; the theta header carries its unit, e.g. ``theta [deg]``."""
    try:
        with open(path, encoding="utf-8", newline="") as fh:
            rows = list(csv.reader(fh))
    except OSError as exc:
        raise UserError(f"cannot read samples {path}: {exc.strerror}") from None
    rows = [r for r in rows if r and not r[0].lstrip().startswith("#")]
    if not rows:
        raise UserError("samples file is empty")
    header = [h.strip() for h in rows[0]]
    try:
        ti = next(i for i, h in enumerate(header) if h.lower().startswith("theta"))
        fi = next(i for i, h in enumerate(header) if h.lower().startswith("tension"))
    except StopIteration:
        raise UserError("samples header needs 'theta' and 'tension' columns") from None

    def unit(h, default):
        for open_, close in (("[", "]"), ("(", ")")):
            if open_ in h and h.endswith(close):
                return h[h.index(open_) + 1:-1].strip()
        if "_" in h:
            return h.split("_", 1)[1]
        return default

    t_unit, f_unit = unit(header[ti], None), unit(header[fi], "N")
    if t_unit is None:
        raise UserError("theta column needs a unit tag, e.g. 'theta [deg]' or 'theta_rad'")
    samples = []
    for n, r in enumerate(rows[1:], start=2):
        try:
            th = parse_quantity(f"{r[ti]} {t_unit}", "angle")
            f = parse_quantity(f"{r[fi]} {f_unit}", "force")
            samples.append(TensionSample(th, f))
        except (IndexError, UnitError, FitError) as exc:
            raise UserError(f"samples line {n}: {exc}") from None
    return samples


def cmd_fit(args):
    samples = read_samples(args.samples)
    try:
        res = fit_belt_friction(samples)
    except FitError as exc:
        raise UserError(str(exc)) from None
    payload = res.to_dict()
    return payload, (["F0_hat [N]", "mu_belt_hat", "rms_log_residual", "n_samples"],
                     [[res.F0_hat, res.mu_belt_hat, res.rms_log_residual, res.n_samples]])


COMMANDS = {
    "classify": cmd_classify,
    "critical": cmd_critical,
    "sweep": cmd_sweep,
    "simulate": cmd_simulate,
}


def build_parser():
    p = argparse.ArgumentParser(prog="torus-retract",
                                description="Retraction failure-mode analysis for torus soft robots.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)
    for name in ("classify", "critical", "sweep", "simulate"):
        sp = sub.add_parser(name)
        sp.add_argument("--config", required=True, help="scenario JSON file")
        sp.add_argument("--format", choices=("json", "csv"), default="json")
        if name == "critical":
            sp.add_argument("--target", choices=("length", "angle"), default="length")
        if name in ("sweep", "simulate"):
            sp.add_argument("--out", required=(name == "sweep"), help="CSV output path")
    fp = sub.add_parser("fit")
    fp.add_argument("--samples", required=True, help="CSV of theta,tension")
    fp.add_argument("--format", choices=("json", "csv"), default="json")
    return p


def _report(command, inputs, payload=None, error=None):
    rep = {
        "tool": "torus-retract",
        "version": __version__,
        "timestamp": datetime.now(timezone.utc).isoformat(timespec="seconds"),
        "command": command,
        "inputs": inputs,
    }
    if error is None:
        rep["payload"] = payload
    else:
        rep["error"] = error
    return rep


def run(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    args = build_parser().parse_args(argv)
    inputs = None
    try:
        if args.command == "fit":
            inputs = {"samples": str(args.samples)}
            payload, table = cmd_fit(args)
        else:
            cfg = load_config(args.config)
            inputs = echo(cfg)
            payload, table = COMMANDS[args.command](cfg, args)
    except (ConfigError, UserError, UnitError, FitError, SolverError, ShapeError) as exc:
        print(f"error: {exc}", file=stderr)
        print(json.dumps(_json_safe(_report(args.command, inputs, error=str(exc))), indent=2),
              file=stdout)
        return EXIT_USER
    except Exception as exc:  # noqa: BLE001 - reported as an internal error
        print(f"internal error: {type(exc).__name__}: {exc}", file=stderr)
        print(json.dumps(_json_safe(_report(args.command, inputs, error=f"internal: {exc}")),
                         indent=2), file=stdout)
        return EXIT_INTERNAL

    if args.format == "csv":
        stdout.write(_write_csv(*table))
    else:
        print(json.dumps(_json_safe(_report(args.command, inputs, payload)), indent=2), file=stdout)
    return EXIT_OK


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
