"""Quasi-static retraction through the bending point.

The tip length is shortened in fixed steps and the failure conditions are
re-evaluated at every step. The first step with a triggered condition ends
the retraction; the bend angle is held at its initial value throughout.
"""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass
from typing import Optional

from .modes import DeformationMode, ModeReport, classify, infer_shape
from .quantities import GuideTubeParams, Scenario

DEFAULT_STEP = 1e-3  # m

PASSED_BEND = "PASSED_BEND"
FAILED = "FAILED"


def apply_guide_tube(base: Scenario, tube: GuideTubeParams) -> Scenario:
    """Fold the tube's friction and folding-resistance changes into ``base``.

    Applying the same tube twice is a no-op; applying a different tube on
    top of one already applied is an error.
    """
    if base.tube is not None:
        if base.tube == tube:
            return base
        raise ValueError("a different guide tube is already applied to this scenario")
    return base.replace(
        F0=base.state.folding_resistance_F0 + tube.folding_resistance_offset,
        mu_belt=tube.mu_belt_tube,
        tube=tube,
    )


@dataclass(frozen=True)
class SimScenario:
    params: Scenario
    step: float = DEFAULT_STEP
    guide_tube: Optional[GuideTubeParams] = None

    def __post_init__(self):
        if not (math.isfinite(self.step) and 0 < self.step <= self.initial_length):
            raise ValueError("step must satisfy 0 < step <= initial tip length")

    @property
    def initial_length(self) -> float:
        return self.params.state.tip_length_L

    @property
    def theta(self) -> float:
        return self.params.state.theta

    def effective(self) -> Scenario:
        if self.guide_tube is None:
            return self.params
        return apply_guide_tube(self.params, self.guide_tube)


@dataclass(frozen=True)
class TraceStep:
    L: float
    report: ModeReport
    suppressed: bool = False  # elbow checks skipped inside the rigid tube length


@dataclass(frozen=True)
class SimTrace:
    steps: tuple
    outcome: str
    failure_mode: Optional[DeformationMode]
    L_fail: Optional[float]
    retracted: float

    @property
    def passed(self) -> bool:
        return self.outcome == PASSED_BEND

    def peak_severity(self) -> float:
        """Largest dimensionless margin seen along the trace (> 0 means failure)."""
        vals = [s.report.worst_severity() for s in self.steps if s.report.severity]
        return max(vals) if vals else -math.inf

    def to_dict(self, include_steps: bool = False) -> dict:
        out = {
            "outcome": self.outcome,
            "failure_mode": self.failure_mode.value if self.failure_mode else None,
            "L_fail": self.L_fail,
            "retracted": self.retracted,
            "n_steps": len(self.steps),
        }
        if include_steps:
            out["steps"] = [
                {"L": s.L, "suppressed": s.suppressed, **s.report.to_dict()} for s in self.steps
            ]
        return out


def _suppressed_report() -> ModeReport:
    return ModeReport(DeformationMode.RETRACT_OK, {}, {}, ())


def tip_lengths(L0: float, step: float):
    """Tip lengths L0, L0 - step, ... that remain strictly positive."""
    eps = step * 1e-9
    k = 0
    while True:
        L = L0 - k * step
        if L <= eps:
            return
        yield L
        k += 1


def simulate(scenario: SimScenario, stop_at_failure: bool = True) -> SimTrace:
    """Retract from the initial tip length towards zero, checking every step.

    With ``stop_at_failure=False`` the whole trajectory is evaluated (useful
    for margin envelopes); the outcome still reflects the first failure.
    """
    eff = scenario.effective()
    shape = infer_shape(eff.state.theta)
    rho = eff.rho
    rigid = eff.tube.rigid_length_Lmin if eff.tube is not None else 0.0

    steps = []
    first_fail = None
    for L in tip_lengths(scenario.initial_length, scenario.step):
        if shape == "elbow" and L < rigid:
            steps.append(TraceStep(L, _suppressed_report(), suppressed=True))
            continue
        state = dataclasses.replace(eff.state, tip_length_L=L)
        report = classify(state, rho, eff.friction, eff.geometry, eff.environment, shape)
        steps.append(TraceStep(L, report))
        if first_fail is None and not report.ok:
            first_fail = steps[-1]
            if stop_at_failure:
                break

    if first_fail is None:
        return SimTrace(tuple(steps), PASSED_BEND, None, None, scenario.initial_length)
    return SimTrace(tuple(steps), FAILED, first_fail.report.mode, first_fail.L,
                    scenario.initial_length - first_fail.L)
