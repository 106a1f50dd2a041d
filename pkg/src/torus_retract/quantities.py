"""Parameter records and unit handling.

Everything inside the package is SI (m, rad, kg, N, N*m). User-facing
units (mm, deg, g, %) are converted at the edges with :func:`convert_units`
or :func:`parse_quantity`.
"""

from __future__ import annotations

import dataclasses
import math
import re
from dataclasses import dataclass
from typing import Optional

STANDARD_GRAVITY = 9.80665  # m/s^2

# unit name -> (dimension, factor to SI)
UNITS: dict[str, tuple[str, float]] = {
    "m": ("length", 1.0),
    "cm": ("length", 1e-2),
    "mm": ("length", 1e-3),
    "rad": ("angle", 1.0),
    "deg": ("angle", math.pi / 180.0),
    "kg": ("mass", 1.0),
    "g": ("mass", 1e-3),
    "fraction": ("ratio", 1.0),
    "%": ("ratio", 1e-2),
    "N": ("force", 1.0),
    "mN": ("force", 1e-3),
    "N*m": ("moment", 1.0),
    "N*mm": ("moment", 1e-3),
    "kg/m": ("linear_density", 1.0),
    "g/mm": ("linear_density", 1.0),
    "kg/m^3": ("density", 1.0),
    "g/cm^3": ("density", 1e3),
    "m/s^2": ("acceleration", 1.0),
}

_ALIASES = {
    "meter": "m", "meters": "m",
    "degree": "deg", "degrees": "deg", "°": "deg",
    "percent": "%",
    "": "fraction", "1": "fraction",
    "Nm": "N*m", "N.m": "N*m", "N·m": "N*m", "N m": "N*m",
    "Nmm": "N*mm", "N·mm": "N*mm",
    "kg/m3": "kg/m^3", "kg/m³": "kg/m^3",
    "g/cm3": "g/cm^3", "g/cm³": "g/cm^3",
    "m/s2": "m/s^2", "m/s²": "m/s^2",
}

_SI_UNIT = {
    "length": "m", "angle": "rad", "mass": "kg", "ratio": "fraction",
    "force": "N", "moment": "N*m", "linear_density": "kg/m",
    "density": "kg/m^3", "acceleration": "m/s^2",
}


class UnitError(ValueError):
    """Unknown unit, or a unit of the wrong dimension."""


def _lookup(unit: str) -> tuple[str, float]:
    name = _ALIASES.get(unit.strip(), unit.strip())
    try:
        return UNITS[name]
    except KeyError:
        raise UnitError(f"unknown unit {unit!r}") from None


def unit_dimension(unit: str) -> str:
    return _lookup(unit)[0]


def si_unit(dimension: str) -> str:
    return _SI_UNIT[dimension]


def convert_units(value: float, from_unit: str, to_unit: str) -> float:
    """Convert ``value`` between two units of the same dimension.

    >>> convert_units(1100, "mm", "m")
    1.1
    """
    dim_a, fa = _lookup(from_unit)
    dim_b, fb = _lookup(to_unit)
    if dim_a != dim_b:
        raise UnitError(f"cannot convert {from_unit!r} ({dim_a}) to {to_unit!r} ({dim_b})")
    if fa == fb:
        return float(value)
    if fb == 1.0:
        return value * fa
    return value * fa / fb


_QTY = re.compile(r"^\s*([-+]?(?:\d+\.?\d*|\.\d+)(?:[eE][-+]?\d+)?)\s*(.*?)\s*$")


def parse_quantity(text, dimension: str) -> float:
    """Parse ``"50 mm"``-style input into an SI float of the given dimension.

    Bare numbers are accepted only for dimensionless quantities.
    """
    if isinstance(text, bool):
        raise UnitError(f"expected a {dimension} quantity, got {text!r}")
    if isinstance(text, (int, float)):
        if dimension != "ratio":
            raise UnitError(f"{dimension} value {text!r} needs an explicit unit")
        return float(text)
    if not isinstance(text, str):
        raise UnitError(f"expected a {dimension} quantity string, got {text!r}")
    m = _QTY.match(text)
    if m is None:
        raise UnitError(f"cannot parse quantity {text!r}")
    unit = m.group(2)
    dim, factor = _lookup(unit)
    if dim != dimension:
        raise UnitError(f"{text!r} is a {dim}, expected {dimension}")
    return float(m.group(1)) * factor


def format_quantity(value: float, dimension: str) -> str:
    """SI string with a round-trip-safe number, e.g. ``'0.05 m'``."""
    unit = _SI_UNIT[dimension]
    num = repr(float(value))
    return num if unit == "fraction" else f"{num} {unit}"


def _check_finite(**fields):
    for name, v in fields.items():
        if v is None:
            continue
        if not math.isfinite(v):
            raise ValueError(f"{name} must be finite, got {v!r}")


@dataclass(frozen=True)
class RobotGeometry:
    diameter_d: float
    body_length: float
    fluid_density: float
    fill_ratio: float = 1.0
    membrane_mass: float = 0.0

    def __post_init__(self):
        _check_finite(diameter_d=self.diameter_d, body_length=self.body_length,
                      fluid_density=self.fluid_density, fill_ratio=self.fill_ratio,
                      membrane_mass=self.membrane_mass)
        if self.diameter_d <= 0:
            raise ValueError("diameter_d must be > 0")
        if self.body_length <= 0:
            raise ValueError("body_length must be > 0")
        if self.fluid_density <= 0:
            raise ValueError("fluid_density must be > 0")
        if self.fill_ratio <= 0:
            raise ValueError("fill_ratio must be > 0")
        if self.membrane_mass < 0:
            raise ValueError("membrane_mass must be >= 0")

    @property
    def nominal_volume(self) -> float:
        return math.pi * (self.diameter_d / 2.0) ** 2 * self.body_length

    @property
    def fluid_mass(self) -> float:
        return self.fluid_density * self.fill_ratio * self.nominal_volume

    @classmethod
    def from_full_mass(cls, diameter_d, body_length, mass_at_full, fill_ratio=1.0,
                       membrane_mass=0.0):
        """Build a geometry from the total mass measured at 100 % fill.

        The fluid density is back-solved so that membrane + fluid equals
        ``mass_at_full`` when ``fill_ratio == 1``.
        """
        volume = math.pi * (diameter_d / 2.0) ** 2 * body_length
        fluid = mass_at_full - membrane_mass
        if fluid <= 0:
            raise ValueError("mass_at_full must exceed membrane_mass")
        return cls(diameter_d, body_length, fluid / volume, fill_ratio, membrane_mass)


@dataclass(frozen=True)
class FrictionSet:
    mu_belt: float
    mu_ground: float

    def __post_init__(self):
        _check_finite(mu_belt=self.mu_belt, mu_ground=self.mu_ground)
        if self.mu_belt < 0 or self.mu_ground < 0:
            raise ValueError("friction coefficients must be >= 0")


@dataclass(frozen=True)
class Environment:
    gravity_g: float = STANDARD_GRAVITY

    def __post_init__(self):
        _check_finite(gravity_g=self.gravity_g)
        if self.gravity_g <= 0:
            raise ValueError("gravity_g must be > 0")


@dataclass(frozen=True)
class TipState:
    """Tip configuration at one instant of retraction.

    ``tip_tension_Tt`` defaults to ``None``, meaning the tip tension equals
    the folding resistance F0 (quasi-static retraction).
    """

    theta: float
    tip_length_L: float
    folding_resistance_F0: float
    buckling_force_Fb: float
    pressure_moment_Mp: float = 0.0
    tip_tension_Tt: Optional[float] = None

    def __post_init__(self):
        _check_finite(theta=self.theta, tip_length_L=self.tip_length_L,
                      folding_resistance_F0=self.folding_resistance_F0,
                      buckling_force_Fb=self.buckling_force_Fb,
                      pressure_moment_Mp=self.pressure_moment_Mp,
                      tip_tension_Tt=self.tip_tension_Tt)
        if not 0.0 <= self.theta < math.pi:
            raise ValueError(f"theta must lie in [0, pi), got {self.theta!r}")
        if self.tip_length_L < 0:
            raise ValueError("tip_length_L must be >= 0")
        if self.folding_resistance_F0 < 0 or self.buckling_force_Fb < 0:
            raise ValueError("forces must be >= 0")
        if self.pressure_moment_Mp < 0:
            raise ValueError("pressure_moment_Mp must be >= 0")
        if self.tip_tension_Tt is not None and self.tip_tension_Tt < 0:
            raise ValueError("tip_tension_Tt must be >= 0")

    @property
    def tension(self) -> float:
        """Effective tip tension."""
        if self.tip_tension_Tt is None:
            return self.folding_resistance_F0
        return self.tip_tension_Tt


@dataclass(frozen=True)
class LinearDensity:
    rho: float

    def __post_init__(self):
        _check_finite(rho=self.rho)
        if self.rho <= 0:
            raise ValueError("rho must be > 0")

    def __float__(self):
        return self.rho


def linear_density(geom: RobotGeometry) -> LinearDensity:
    """Body mass per unit length, membrane plus fluid."""
    return LinearDensity((geom.membrane_mass + geom.fluid_mass) / geom.body_length)


@dataclass(frozen=True)
class GuideTubeParams:
    """Slippery reinforcing tube between the inner and outer membranes.

    ``rigid_length_Lmin`` is a modelling surrogate for the mesh-tube
    reinforcement: below this tip length the elbow conditions are not
    evaluated. It defaults to 0 (no reinforcement).
    """

    mu_belt_tube: float
    folding_resistance_offset: float = 0.0
    rigid_length_Lmin: float = 0.0

    def __post_init__(self):
        _check_finite(mu_belt_tube=self.mu_belt_tube,
                      folding_resistance_offset=self.folding_resistance_offset,
                      rigid_length_Lmin=self.rigid_length_Lmin)
        if min(self.mu_belt_tube, self.folding_resistance_offset, self.rigid_length_Lmin) < 0:
            raise ValueError("guide tube parameters must be >= 0")


@dataclass(frozen=True)
class Scenario:
    """Complete parameter set for one configuration.

    ``tube`` records the guide tube whose substitutions are already folded
    into ``state`` and ``friction`` (see ``retraction.apply_guide_tube``).
    """

    state: TipState
    friction: FrictionSet
    geometry: RobotGeometry
    environment: Environment = Environment()
    tube: Optional[GuideTubeParams] = None

    @property
    def rho(self) -> LinearDensity:
        return linear_density(self.geometry)

    def replace(self, **changes) -> "Scenario":
        """Copy with individual fields changed.

        Accepts the sweepable parameter names (``theta``, ``L``, ``F0``,
        ``Fb``, ``Mp``, ``Tt``, ``mu_belt``, ``mu_ground``, ``fill_ratio``)
        as well as the dataclass fields themselves.
        """
        state_map = {"theta": "theta", "L": "tip_length_L", "F0": "folding_resistance_F0",
                     "Fb": "buckling_force_Fb", "Mp": "pressure_moment_Mp",
                     "Tt": "tip_tension_Tt"}
        fric_map = {"mu_belt": "mu_belt", "mu_ground": "mu_ground"}
        geom_map = {"fill_ratio": "fill_ratio", "diameter": "diameter_d"}
        top = {}
        st, fr, ge = {}, {}, {}
        for key, value in changes.items():
            if key in state_map:
                st[state_map[key]] = value
            elif key in fric_map:
                fr[fric_map[key]] = value
            elif key in geom_map:
                ge[geom_map[key]] = value
            elif key in ("state", "friction", "geometry", "environment", "tube"):
                top[key] = value
            else:
                raise KeyError(f"unknown scenario parameter {key!r}")
        new = dataclasses.replace(self, **top) if top else self
        if st:
            new = dataclasses.replace(new, state=dataclasses.replace(new.state, **st))
        if fr:
            new = dataclasses.replace(new, friction=dataclasses.replace(new.friction, **fr))
        if ge:
            new = dataclasses.replace(new, geometry=dataclasses.replace(new.geometry, **ge))
        return new
