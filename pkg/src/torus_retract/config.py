"""JSON scenario configs with unit-suffixed values.

Example::

    {
      "geometry": {"diameter": "50 mm", "length": "1100 mm",
                   "mass_at_full_fill": "2318 g", "fill_ratio": "100 %"},
      "friction": {"mu_belt": 0.55, "mu_ground": 0.81},
      "state": {"theta": "45 deg", "tip_length": "500 mm",
                "folding_resistance": "10 N", "buckling_force": "2 N"}
    }

Every dimensioned value must carry its unit. Unknown keys are rejected.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

from .quantities import (
    STANDARD_GRAVITY,
    Environment,
    FrictionSet,
    GuideTubeParams,
    RobotGeometry,
    Scenario,
    TipState,
    UnitError,
    convert_units,
    format_quantity,
    parse_quantity,
    si_unit,
    unit_dimension,
)
from .retraction import DEFAULT_STEP
from .solvers import SweepAxis, SweepSpec

AXIS_DIMENSIONS = {
    "theta": "angle", "fill_ratio": "ratio", "mu_belt": "ratio", "mu_ground": "ratio",
    "F0": "force", "Fb": "force", "Mp": "moment", "L": "length",
}
OVERRIDE_DIMENSIONS = dict(AXIS_DIMENSIONS, Tt="force")

_TOP_KEYS = {"geometry", "friction", "environment", "state", "guide_tube",
             "simulation", "critical", "sweep", "description"}


class ConfigError(ValueError):
    """Invalid configuration; the message names the offending key."""


@dataclass
class ScenarioConfig:
    scenario: Scenario
    guide_tube: Optional[GuideTubeParams] = None
    step: float = DEFAULT_STEP
    theta_grid: Optional[list] = None
    L_max: Optional[float] = None
    sweep: Optional[SweepSpec] = None
    axis_units: dict = field(default_factory=dict)
    axis_user_values: dict = field(default_factory=dict)
    description: str = ""


def _check_keys(block, allowed, where):
    if not isinstance(block, dict):
        raise ConfigError(f"{where}: expected an object")
    for key in block:
        if key not in allowed:
            raise ConfigError(f"unknown key '{where}.{key}'" if where else f"unknown key '{key}'")


def _get(block, key, dimension, where, default=None, required=True):
    if key not in block:
        if required and default is None:
            raise ConfigError(f"missing required key '{where}.{key}'")
        return default
    try:
        value = parse_quantity(block[key], dimension)
    except UnitError as exc:
        raise ConfigError(f"'{where}.{key}': {exc}") from None
    if not math.isfinite(value):
        raise ConfigError(f"'{where}.{key}' must be finite")
    return value


def _unit_of(text) -> Optional[str]:
    if isinstance(text, str):
        parts = text.strip().split(None, 1)
        return parts[1] if len(parts) == 2 else None
    return None


def parse_config(data: dict) -> ScenarioConfig:
    _check_keys(data, _TOP_KEYS, "")
    try:
        return _parse(data)
    except ConfigError:
        raise
    except ValueError as exc:
        raise ConfigError(str(exc)) from None


def _parse(data):
    for section in ("geometry", "friction", "state"):
        if section not in data:
            raise ConfigError(f"missing required key '{section}'")

    g = data["geometry"]
    _check_keys(g, {"diameter", "length", "fluid_density", "mass_at_full_fill",
                    "fill_ratio", "membrane_mass"}, "geometry")
    diameter = _get(g, "diameter", "length", "geometry")
    length = _get(g, "length", "length", "geometry")
    fill = _get(g, "fill_ratio", "ratio", "geometry", default=1.0)
    membrane = _get(g, "membrane_mass", "mass", "geometry", default=0.0)
    if ("fluid_density" in g) == ("mass_at_full_fill" in g):
        raise ConfigError("geometry: give exactly one of 'geometry.fluid_density' "
                          "or 'geometry.mass_at_full_fill'")
    try:
        if "fluid_density" in g:
            geom = RobotGeometry(diameter, length, _get(g, "fluid_density", "density", "geometry"),
                                 fill, membrane)
        else:
            geom = RobotGeometry.from_full_mass(
                diameter, length, _get(g, "mass_at_full_fill", "mass", "geometry"), fill, membrane)
    except ValueError as exc:
        raise ConfigError(f"geometry: {exc}") from None

    f = data["friction"]
    _check_keys(f, {"mu_belt", "mu_ground"}, "friction")
    try:
        friction = FrictionSet(_get(f, "mu_belt", "ratio", "friction"),
                               _get(f, "mu_ground", "ratio", "friction"))
    except ValueError as exc:
        raise ConfigError(f"friction: {exc}") from None

    e = data.get("environment", {})
    _check_keys(e, {"gravity"}, "environment")
    try:
        env = Environment(_get(e, "gravity", "acceleration", "environment",
                               default=STANDARD_GRAVITY))
    except ValueError as exc:
        raise ConfigError(f"environment: {exc}") from None

    s = data["state"]
    _check_keys(s, {"theta", "tip_length", "folding_resistance", "buckling_force",
                    "pressure_moment", "tip_tension"}, "state")
    try:
        state = TipState(
            theta=_get(s, "theta", "angle", "state"),
            tip_length_L=_get(s, "tip_length", "length", "state"),
            folding_resistance_F0=_get(s, "folding_resistance", "force", "state"),
            buckling_force_Fb=_get(s, "buckling_force", "force", "state"),
            pressure_moment_Mp=_get(s, "pressure_moment", "moment", "state", default=0.0),
            tip_tension_Tt=_get(s, "tip_tension", "force", "state", required=False),
        )
    except ValueError as exc:
        raise ConfigError(f"state: {exc}") from None

    tube = None
    if "guide_tube" in data:
        t = data["guide_tube"]
        _check_keys(t, {"mu_belt", "folding_resistance_offset", "rigid_length"}, "guide_tube")
        try:
            tube = GuideTubeParams(
                _get(t, "mu_belt", "ratio", "guide_tube"),
                _get(t, "folding_resistance_offset", "force", "guide_tube", default=0.0),
                _get(t, "rigid_length", "length", "guide_tube", default=0.0),
            )
        except ValueError as exc:
            raise ConfigError(f"guide_tube: {exc}") from None

    sim = data.get("simulation", {})
    _check_keys(sim, {"step"}, "simulation")
    step = _get(sim, "step", "length", "simulation", default=DEFAULT_STEP)
    if not step > 0:
        raise ConfigError("'simulation.step' must be > 0")

    crit = data.get("critical", {})
    _check_keys(crit, {"theta_grid", "L_max"}, "critical")
    theta_grid = None
    if "theta_grid" in crit:
        if not isinstance(crit["theta_grid"], list) or not crit["theta_grid"]:
            raise ConfigError("'critical.theta_grid' must be a non-empty list")
        theta_grid = [_get({"v": v}, "v", "angle", "critical.theta_grid") for v in crit["theta_grid"]]
    L_max = _get(crit, "L_max", "length", "critical", required=False)

    scenario = Scenario(state, friction, geom, env)
    cfg = ScenarioConfig(scenario, tube, step, theta_grid, L_max,
                         description=str(data.get("description", "")))
    if "sweep" in data:
        cfg.sweep, cfg.axis_units, cfg.axis_user_values = _parse_sweep(data["sweep"], scenario, tube, step)
    return cfg


def _parse_sweep(block, base, tube, step):
    _check_keys(block, {"axes", "overrides", "simulate", "solve"}, "sweep")
    if "axes" not in block or not isinstance(block["axes"], list):
        raise ConfigError("missing required key 'sweep.axes'")
    axes, units, written = [], {}, {}
    for i, ax in enumerate(block["axes"]):
        where = f"sweep.axes[{i}]"
        _check_keys(ax, {"name", "values"}, where)
        name = ax.get("name")
        if name not in AXIS_DIMENSIONS:
            raise ConfigError(f"'{where}.name': unknown axis {name!r}")
        dim = AXIS_DIMENSIONS[name]
        raw = ax.get("values")
        if not isinstance(raw, list) or not raw:
            raise ConfigError(f"'{where}.values' must be a non-empty list")
        values = [_get({"v": v}, "v", dim, f"{where}.values") for v in raw]
        unit = _unit_of(raw[0])
        units[name] = unit if unit is not None else ("fraction" if dim == "ratio" else None)
        written[name] = [float(str(v).split()[0]) for v in raw]
        axes.append(SweepAxis(name, tuple(values)))

    overrides = {}
    for axis, entries in block.get("overrides", {}).items():
        if axis not in AXIS_DIMENSIONS:
            raise ConfigError(f"'sweep.overrides.{axis}': unknown axis")
        if not isinstance(entries, list):
            raise ConfigError(f"'sweep.overrides.{axis}' must be a list")
        table = {}
        for j, entry in enumerate(entries):
            where = f"sweep.overrides.{axis}[{j}]"
            _check_keys(entry, {"at", "set"}, where)
            at = _get(entry, "at", AXIS_DIMENSIONS[axis], where)
            sets = entry.get("set", {})
            _check_keys(sets, set(OVERRIDE_DIMENSIONS), f"{where}.set")
            table[at] = {k: _get(sets, k, OVERRIDE_DIMENSIONS[k], f"{where}.set") for k in sets}
        overrides[axis] = table

    for key in ("simulate", "solve"):
        if key in block and not isinstance(block[key], bool):
            raise ConfigError(f"'sweep.{key}' must be true or false")
    try:
        spec = SweepSpec(tuple(axes), base, overrides, tube,
                         simulate=block.get("simulate", False),
                         solve=block.get("solve", True), step=step)
    except ValueError as exc:
        raise ConfigError(f"sweep: {exc}") from None
    return spec, units, written


def load_config(path) -> ScenarioConfig:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc.strerror}") from None
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config is not valid JSON: {exc}") from None
    return parse_config(data)


def echo(cfg: ScenarioConfig) -> dict:
    """Normalized (SI) form of a config; parses back to the same scenario."""
    sc = cfg.scenario
    geo, st = sc.geometry, sc.state
    out = {
        "geometry": {
            "diameter": format_quantity(geo.diameter_d, "length"),
            "length": format_quantity(geo.body_length, "length"),
            "fluid_density": format_quantity(geo.fluid_density, "density"),
            "fill_ratio": geo.fill_ratio,
            "membrane_mass": format_quantity(geo.membrane_mass, "mass"),
        },
        "friction": {"mu_belt": sc.friction.mu_belt, "mu_ground": sc.friction.mu_ground},
        "environment": {"gravity": format_quantity(sc.environment.gravity_g, "acceleration")},
        "state": {
            "theta": format_quantity(st.theta, "angle"),
            "tip_length": format_quantity(st.tip_length_L, "length"),
            "folding_resistance": format_quantity(st.folding_resistance_F0, "force"),
            "buckling_force": format_quantity(st.buckling_force_Fb, "force"),
            "pressure_moment": format_quantity(st.pressure_moment_Mp, "moment"),
        },
        "simulation": {"step": format_quantity(cfg.step, "length")},
    }
    if st.tip_tension_Tt is not None:
        out["state"]["tip_tension"] = format_quantity(st.tip_tension_Tt, "force")
    if cfg.guide_tube is not None:
        t = cfg.guide_tube
        out["guide_tube"] = {
            "mu_belt": t.mu_belt_tube,
            "folding_resistance_offset": format_quantity(t.folding_resistance_offset, "force"),
            "rigid_length": format_quantity(t.rigid_length_Lmin, "length"),
        }
    crit = {}
    if cfg.theta_grid is not None:
        crit["theta_grid"] = [format_quantity(v, "angle") for v in cfg.theta_grid]
    if cfg.L_max is not None:
        crit["L_max"] = format_quantity(cfg.L_max, "length")
    if crit:
        out["critical"] = crit
    if cfg.sweep is not None:
        sp = cfg.sweep
        out["sweep"] = {
            "axes": [{"name": a.name,
                      "values": [format_quantity(v, AXIS_DIMENSIONS[a.name]) for v in a.values]}
                     for a in sp.axes],
            "overrides": {
                axis: [{"at": format_quantity(at, AXIS_DIMENSIONS[axis]),
                        "set": {k: format_quantity(v, OVERRIDE_DIMENSIONS[k]) for k, v in sets.items()}}
                       for at, sets in table.items()]
                for axis, table in sp.overrides.items()
            },
            "simulate": sp.simulate,
            "solve": sp.solve,
        }
    return out


def user_value(cfg: ScenarioConfig, axis: str, value: float) -> float:
    """An SI axis coordinate expressed as the number the user wrote."""
    for spec_axis in cfg.sweep.axes:
        if spec_axis.name == axis and value in spec_axis.values and axis in cfg.axis_user_values:
            return cfg.axis_user_values[axis][spec_axis.values.index(value)]
    unit = cfg.axis_units.get(axis)
    if unit is None:
        return value
    return convert_units(value, si_unit(unit_dimension(unit)), unit)
