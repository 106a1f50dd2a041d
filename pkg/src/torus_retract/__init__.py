"""Quasi-static retraction model for torus-type tip-extending soft robots."""

from .quantities import (
    Environment,
    FrictionSet,
    GuideTubeParams,
    LinearDensity,
    RobotGeometry,
    Scenario,
    TipState,
    convert_units,
    linear_density,
    parse_quantity,
)
from .mechanics import (
    MomentBreakdown,
    belt_tension,
    corner_force,
    corner_moment,
    eversion_tip_displacement,
    ground_friction_moment_max,
    moment_breakdown,
    tip_moment_prebend,
    tip_moment_straight,
)
from .modes import (
    DeformationMode,
    ModeReport,
    classify,
    elbow_bending_margin,
    elbow_buckling_margin,
    straight_bending_margin,
    straight_buckling_margin,
)
from .retraction import SimScenario, SimTrace, apply_guide_tube, simulate
from .solvers import (
    Critical,
    FitResult,
    SweepAxis,
    SweepSpec,
    TensionSample,
    bisect,
    critical_prebend_angle,
    critical_tip_length,
    fit_belt_friction,
    run_sweep,
)

__version__ = "0.1.0"


def data_path(name: str):
    """Path to a shipped fixture (calibrated configs and placeholder tension tables)."""
    from importlib.resources import files
    return files(__name__) / "data" / name
