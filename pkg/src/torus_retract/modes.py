"""Failure-mode conditions and the retraction classifier.

Every condition is reported as a signed margin, demand minus resistance.
A positive margin means the (strict) failure inequality holds.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

from . import mechanics as mech
from .quantities import Environment, FrictionSet, RobotGeometry, TipState


class DeformationMode(str, enum.Enum):
    RETRACT_OK = "RETRACT_OK"
    STRAIGHT_BENDING = "STRAIGHT_BENDING"
    STRAIGHT_BUCKLING = "STRAIGHT_BUCKLING"
    ELBOW_BENDING = "ELBOW_BENDING"
    ELBOW_BUCKLING = "ELBOW_BUCKLING"


STRAIGHT_CONDITIONS = (DeformationMode.STRAIGHT_BENDING, DeformationMode.STRAIGHT_BUCKLING)
ELBOW_CONDITIONS = (DeformationMode.ELBOW_BENDING, DeformationMode.ELBOW_BUCKLING)


class ShapeError(ValueError):
    """Shape label does not match the pre-bending angle."""


def _ratio(margin: float, resistance: float) -> float:
    if resistance > 0:
        return margin / resistance
    if margin > 0:
        return math.inf
    if margin < 0:
        return -math.inf
    return 0.0


@dataclass(frozen=True)
class ModeReport:
    """Outcome of :func:`classify`.

    ``margins`` holds the raw signed margins (N or N*m), ``severity`` the same
    margins divided by their resistance terms, used to pick among several
    triggered conditions.
    """

    mode: DeformationMode
    margins: dict = field(default_factory=dict)
    severity: dict = field(default_factory=dict)
    triggered: tuple = ()

    @property
    def ok(self) -> bool:
        return self.mode is DeformationMode.RETRACT_OK

    def worst_severity(self) -> float:
        return max(self.severity.values())

    def to_dict(self) -> dict:
        return {
            "mode": self.mode.value,
            "margins": {k.value: v for k, v in self.margins.items()},
            "severity": {k.value: v for k, v in self.severity.items()},
            "triggered": [m.value for m in self.triggered],
        }


# -- raw conditions ---------------------------------------------------------

def straight_bending_resistance(rho, mu_ground, g, L, d):
    return mech.ground_friction_moment_max(rho, mu_ground, g, L) / d


def straight_bending_margin(Tt: float, rho, mu_ground: float, g: float,
                            L: float, d: float) -> float:
    """Tip tension in excess of the tension that bends a straight body at the base."""
    if d <= 0:
        raise ValueError("d must be > 0")
    return Tt - straight_bending_resistance(rho, mu_ground, g, L, d)


def straight_buckling_margin(Tt: float, F0: float, Fb: float) -> float:
    # both strict inequalities Tt > F0 and F0 > Fb must hold
    return min(Tt - F0, F0 - Fb)


def _straight_buckling_severity(Tt, F0, Fb):
    return min(_ratio(Tt - F0, F0), _ratio(F0 - Fb, Fb))


def elbow_bending_demand(state: TipState, d: float, mu_belt: float) -> float:
    F0 = state.folding_resistance_F0
    return (mech.tip_moment_prebend(F0, d, state.tip_length_L)
            + mech.corner_moment_inequality(F0, d, mu_belt, state.theta))


def elbow_bending_resistance(state: TipState, rho, mu_ground: float, g: float) -> float:
    return (mech.ground_friction_moment_max(rho, mu_ground, g, state.tip_length_L)
            + state.pressure_moment_Mp)


def elbow_bending_margin(state: TipState, rho, friction: FrictionSet,
                         geom: RobotGeometry, env: Environment) -> float:
    """Tip moment plus corner friction moment, less ground friction and pressure moments.

    The tip term is evaluated with the folding resistance F0 as tension and the
    corner term without the 1/cos(theta/2) factor, matching the inequality
    used for elbow bending.
    """
    return (elbow_bending_demand(state, geom.diameter_d, friction.mu_belt)
            - elbow_bending_resistance(state, rho, friction.mu_ground, env.gravity_g))


def elbow_buckling_resistance(state: TipState, rho, mu_ground: float, g: float) -> float:
    return (mech._rho(rho) * mu_ground * g * state.tip_length_L / 2.0
            + state.buckling_force_Fb)


def elbow_buckling_margin(state: TipState, rho, friction: FrictionSet,
                          env: Environment) -> float:
    """Corner force in excess of the force that buckles the body at the base."""
    Fc = mech.corner_force(state.folding_resistance_F0, friction.mu_belt, state.theta)
    return Fc - elbow_buckling_resistance(state, rho, friction.mu_ground, env.gravity_g)


# -- classifier -------------------------------------------------------------

def infer_shape(theta: float) -> str:
    return "elbow" if theta > 0 else "straight"


def classify(state: TipState, rho, friction: FrictionSet, geom: RobotGeometry,
             env: Environment, shape: str | None = None) -> ModeReport:
    """Evaluate the two conditions that apply to ``shape`` and pick a mode.

    ``shape`` is ``"straight"`` (requires theta == 0) or ``"elbow"``
    (requires theta > 0); ``None`` infers it from theta. When both
    conditions trigger, the one with the larger severity wins.
    """
    if shape is None:
        shape = infer_shape(state.theta)
    g = env.gravity_g
    d = geom.diameter_d
    if shape == "straight":
        if state.theta != 0:
            raise ShapeError(f"straight shape requires theta == 0, got {state.theta!r}")
        Tt, F0, Fb = state.tension, state.folding_resistance_F0, state.buckling_force_Fb
        res_bend = straight_bending_resistance(rho, friction.mu_ground, g, state.tip_length_L, d)
        m_bend = Tt - res_bend
        m_buck = straight_buckling_margin(Tt, F0, Fb)
        margins = {DeformationMode.STRAIGHT_BENDING: m_bend,
                   DeformationMode.STRAIGHT_BUCKLING: m_buck}
        severity = {DeformationMode.STRAIGHT_BENDING: _ratio(m_bend, res_bend),
                    DeformationMode.STRAIGHT_BUCKLING: _straight_buckling_severity(Tt, F0, Fb)}
    elif shape == "elbow":
        if not state.theta > 0:
            raise ShapeError("elbow shape requires theta > 0")
        res_bend = elbow_bending_resistance(state, rho, friction.mu_ground, g)
        m_bend = elbow_bending_demand(state, d, friction.mu_belt) - res_bend
        res_buck = elbow_buckling_resistance(state, rho, friction.mu_ground, g)
        m_buck = mech.corner_force(state.folding_resistance_F0, friction.mu_belt,
                                   state.theta) - res_buck
        margins = {DeformationMode.ELBOW_BENDING: m_bend,
                   DeformationMode.ELBOW_BUCKLING: m_buck}
        severity = {DeformationMode.ELBOW_BENDING: _ratio(m_bend, res_bend),
                    DeformationMode.ELBOW_BUCKLING: _ratio(m_buck, res_buck)}
    else:
        raise ShapeError(f"unknown shape {shape!r}")

    triggered = tuple(m for m, v in margins.items() if v > 0)
    if not triggered:
        mode = DeformationMode.RETRACT_OK
    else:
        # ties on severity resolve to declaration order (bending first)
        mode = max(triggered, key=lambda m: severity[m])
    return ModeReport(mode, margins, severity, triggered)
