"""Force and moment terms acting on a bent torus body during retraction."""

from __future__ import annotations

import math
from dataclasses import dataclass

from .quantities import Environment, FrictionSet, LinearDensity, RobotGeometry, TipState


def _rho(rho) -> float:
    return rho.rho if isinstance(rho, LinearDensity) else float(rho)


def tip_moment_arm(d: float, L: float) -> float:
    """Moment arm of the tip tension about the bend corner, in [0, d)."""
    return d * L / math.sqrt((d / 2.0) ** 2 + L * L)


def tip_moment_prebend(tension_Tt: float, d: float, L: float) -> float:
    """Bending moment of the tip tension for a pre-bent body."""
    return tension_Tt * tip_moment_arm(d, L)


def tip_moment_straight(tension_Tt: float, d: float) -> float:
    """Bending moment of the tip tension for a body curved at constant curvature."""
    return tension_Tt * d


def belt_tension(F0: float, mu_belt: float, theta: float) -> float:
    """Capstan tension at the base side of the bend corner."""
    return F0 * math.exp(mu_belt * theta)


def corner_force(F0: float, mu_belt: float, theta: float) -> float:
    """Force passed from the inner to the outer membrane at the corner.

    Uses ``expm1`` so small wraps keep full precision; agrees with
    ``belt_tension(...) - F0`` to rounding.
    """
    return F0 * math.expm1(mu_belt * theta)


def corner_moment(F0: float, d: float, mu_belt: float, theta: float) -> float:
    """Friction moment at the bend corner, including the 1/cos(theta/2) factor."""
    if not 0.0 <= theta < math.pi:
        raise ValueError(f"corner_moment needs 0 <= theta < pi, got {theta!r}")
    return corner_force(F0, mu_belt, theta) * d / math.cos(theta / 2.0)


def corner_moment_inequality(F0: float, d: float, mu_belt: float, theta: float) -> float:
    """Corner term as it appears in the elbow-bending condition (no cosine factor)."""
    return corner_force(F0, mu_belt, theta) * d


def ground_friction_moment_max(rho, mu_ground: float, g: float, L: float) -> float:
    """Largest resisting moment ground friction can supply over a tip segment of length L."""
    return _rho(rho) * mu_ground * g * L * L / 2.0


def eversion_tip_displacement(inner_pull_delta: float) -> float:
    """Tip retraction produced by pulling the inner membrane by ``inner_pull_delta``."""
    if inner_pull_delta < 0:
        raise ValueError("inner_pull_delta must be >= 0")
    return inner_pull_delta / 2.0


@dataclass(frozen=True)
class MomentBreakdown:
    m_tip: float
    m_corner: float
    m_friction_max: float
    m_pressure: float
    corner_force_Fc: float
    base_tension_Tb: float


def moment_breakdown(state: TipState, rho, friction: FrictionSet,
                     geom: RobotGeometry, env: Environment) -> MomentBreakdown:
    d = geom.diameter_d
    F0 = state.folding_resistance_F0
    L = state.tip_length_L
    return MomentBreakdown(
        m_tip=tip_moment_prebend(state.tension, d, L),
        m_corner=corner_moment(F0, d, friction.mu_belt, state.theta),
        m_friction_max=ground_friction_moment_max(rho, friction.mu_ground, env.gravity_g, L),
        m_pressure=state.pressure_moment_Mp,
        corner_force_Fc=corner_force(F0, friction.mu_belt, state.theta),
        base_tension_Tb=belt_tension(F0, friction.mu_belt, state.theta),
    )
