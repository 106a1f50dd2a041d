"""Critical-value root finding, capstan fitting and parameter sweeps."""

from __future__ import annotations

import dataclasses
import itertools
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

from .modes import ModeReport, classify, elbow_bending_margin, elbow_buckling_margin
from .quantities import GuideTubeParams, Scenario
from .retraction import DEFAULT_STEP, SimScenario, SimTrace, apply_guide_tube, simulate

LENGTH_TOL = 1e-6  # m
ANGLE_TOL = 1e-9  # rad
COARSE_POINTS = 256


class SolverError(ValueError):
    pass


class FitError(ValueError):
    pass


# -- bisection --------------------------------------------------------------

def bisect(f: Callable[[float], float], lo: float, hi: float, tol: float) -> float:
    """Root of ``f`` in [lo, hi] to within ``tol``.

    Needs a strict sign change between the end points. Uses at most
    ceil(log2((hi - lo) / tol)) + 2 evaluations of ``f``.
    """
    if not lo < hi:
        raise SolverError("bisect needs lo < hi")
    if tol <= 0:
        raise SolverError("tol must be > 0")
    flo, fhi = f(lo), f(hi)
    if not flo * fhi < 0:
        raise SolverError(f"no sign change on [{lo!r}, {hi!r}]: f = {flo!r}, {fhi!r}")
    while (hi - lo) / 2.0 > tol:
        mid = 0.5 * (lo + hi)
        fm = f(mid)
        if fm == 0:
            return mid
        if (fm < 0) == (flo < 0):
            lo, flo = mid, fm
        else:
            hi = mid
    return 0.5 * (lo + hi)


# -- critical values --------------------------------------------------------

ROOT = "root"
NEVER = "never_fails"
ALWAYS = "always_fails"
UNREACHABLE = "unreachable"
DIAGNOSTIC = "diagnostic"


@dataclass(frozen=True)
class Critical:
    """A solved boundary value.

    ``status`` is one of ``root`` (``value`` is the boundary),
    ``never_fails``, ``always_fails`` (``value`` is the sentinel bound),
    ``unreachable`` (boundary lies outside the model domain) or
    ``diagnostic`` (sign pattern the solver does not handle; see ``note``).
    """

    value: Optional[float]
    status: str
    note: str = ""

    def to_dict(self):
        return {"value": self.value, "status": self.status, "note": self.note}


def critical_tip_length(scenario: Scenario, L_max: Optional[float] = None,
                        tol: float = LENGTH_TOL) -> Critical:
    """Tip length below which elbow bending starts.

    The elbow-bending margin is sampled on a coarse grid over (0, L_max];
    the sign change nearest ``L_max`` (failing below, holding above) is then
    refined by bisection. ``L_max`` defaults to the body length.
    """
    st = scenario.state
    if not st.theta > 0:
        raise SolverError("critical tip length needs theta > 0")
    if not st.folding_resistance_F0 > 0:
        raise SolverError("critical tip length needs F0 > 0")
    if L_max is None:
        L_max = scenario.geometry.body_length
    rho = scenario.rho

    def margin(L):
        s = dataclasses.replace(st, tip_length_L=L)
        return elbow_bending_margin(s, rho, scenario.friction, scenario.geometry,
                                    scenario.environment)

    grid = L_max * np.arange(1, COARSE_POINTS + 1) / COARSE_POINTS
    vals = np.array([margin(L) for L in grid])
    fails = vals > 0
    if fails.all():
        return Critical(float(L_max), ALWAYS)
    if not fails.any():
        return Critical(None, NEVER)
    if fails[-1]:
        return Critical(None, DIAGNOSTIC, "margin positive at L_max but not everywhere")
    idx = np.nonzero(fails[:-1] & ~fails[1:])[0]
    i = int(idx[-1])
    lo, hi = float(grid[i]), float(grid[i + 1])
    if vals[i + 1] == 0:
        return Critical(hi, ROOT)
    return Critical(bisect(margin, lo, hi, tol), ROOT)


def critical_prebend_angle(scenario: Scenario) -> Critical:
    """Pre-bending angle above which elbow buckling starts, in closed form."""
    st = scenario.state
    F0 = st.folding_resistance_F0
    mu_b = scenario.friction.mu_belt
    if st.tip_length_L < 0:
        raise SolverError("L must be >= 0")
    if mu_b == 0 or F0 == 0:
        return Critical(None, NEVER)
    resistance = (scenario.rho.rho * scenario.friction.mu_ground * scenario.environment.gravity_g
                  * st.tip_length_L / 2.0 + st.buckling_force_Fb)
    theta = math.log1p(resistance / F0) / mu_b
    if theta == 0:
        return Critical(0.0, ALWAYS, "zero resistance: every theta > 0 triggers")
    if theta >= math.pi:
        return Critical(theta, UNREACHABLE, "boundary at or beyond pi")
    return Critical(theta, ROOT)


def elbow_buckling_margin_theta(scenario: Scenario) -> Callable[[float], float]:
    """Elbow-buckling margin as a function of theta, other inputs fixed."""
    rho = scenario.rho

    def f(theta):
        s = dataclasses.replace(scenario.state, theta=theta)
        return elbow_buckling_margin(s, rho, scenario.friction, scenario.environment)

    return f


# -- capstan fit ------------------------------------------------------------

@dataclass(frozen=True)
class TensionSample:
    theta: float
    tension: float

    def __post_init__(self):
        if not (math.isfinite(self.tension) and self.tension > 0):
            raise FitError(f"tension must be positive, got {self.tension!r}")
        if not 0 <= self.theta < math.pi:
            raise FitError(f"theta must lie in [0, pi), got {self.theta!r}")


@dataclass(frozen=True)
class FitResult:
    F0_hat: float
    mu_belt_hat: float
    rms_log_residual: float
    n_samples: int

    def to_dict(self):
        return dataclasses.asdict(self)


def fit_belt_friction(samples: Sequence[TensionSample]) -> FitResult:
    """Least-squares fit of ln T = ln F0 + mu_b * theta."""
    samples = [s if isinstance(s, TensionSample) else TensionSample(*s) for s in samples]
    theta = np.array([s.theta for s in samples], dtype=float)
    if len(np.unique(theta)) < 2:
        raise FitError("need >= 2 distinct angles")
    logt = np.log([s.tension for s in samples])
    A = np.column_stack([np.ones_like(theta), theta])
    (intercept, slope), *_ = np.linalg.lstsq(A, logt, rcond=None)
    resid = logt - A @ np.array([intercept, slope])
    return FitResult(float(math.exp(intercept)), float(slope),
                     float(np.sqrt(np.mean(resid ** 2))), len(samples))


# -- sweeps -----------------------------------------------------------------

SWEEP_PARAMETERS = ("theta", "fill_ratio", "mu_belt", "mu_ground", "F0", "Fb", "Mp", "L")


@dataclass(frozen=True)
class SweepAxis:
    name: str
    values: tuple

    def __post_init__(self):
        if self.name not in SWEEP_PARAMETERS:
            raise ValueError(f"unknown sweep axis {self.name!r}")
        vals = tuple(float(v) for v in self.values)
        if not vals or not all(math.isfinite(v) for v in vals):
            raise ValueError(f"axis {self.name!r} needs finite values")
        object.__setattr__(self, "values", vals)


@dataclass(frozen=True)
class SweepSpec:
    """Grid of up to three parameter axes around a base scenario.

    ``overrides`` couples extra parameter changes to particular coordinates,
    ``{axis: {value: {param: new_value}}}`` (e.g. a pressure moment that
    depends on the fill ratio). ``guide_tube`` and ``step`` are used when
    ``simulate`` is set.
    """

    axes: tuple
    base: Scenario
    overrides: dict = field(default_factory=dict)
    guide_tube: Optional[GuideTubeParams] = None
    simulate: bool = False
    solve: bool = True
    step: float = DEFAULT_STEP

    def __post_init__(self):
        names = [a.name for a in self.axes]
        if not 1 <= len(names) <= 3:
            raise ValueError("a sweep needs 1 to 3 axes")
        if len(set(names)) != len(names):
            raise ValueError("sweep axis names must be unique")
        for axis in self.overrides:
            if axis not in names:
                raise ValueError(f"override refers to unknown axis {axis!r}")

    def points(self):
        return list(itertools.product(*(a.values for a in self.axes)))


@dataclass(frozen=True)
class SweepRow:
    coords: dict
    report: Optional[ModeReport] = None
    critical_length: Optional[Critical] = None
    critical_angle: Optional[Critical] = None
    trace: Optional[SimTrace] = None
    peak_severity: Optional[float] = None
    error: Optional[str] = None


def _scenario_at(spec: SweepSpec, coords: dict) -> Scenario:
    sc = spec.base.replace(**coords)
    for axis, value in coords.items():
        table = spec.overrides.get(axis, {})
        extra = table.get(value)
        if extra is None:
            for k, v in table.items():
                if math.isclose(float(k), value, rel_tol=1e-12, abs_tol=1e-15):
                    extra = v
                    break
        if extra:
            sc = sc.replace(**extra)
    return sc


def evaluate_point(spec: SweepSpec, coords: dict) -> SweepRow:
    try:
        bare = _scenario_at(spec, coords)
        sc = apply_guide_tube(bare, spec.guide_tube) if spec.guide_tube else bare
        st = sc.state
        report = classify(st, sc.rho, sc.friction, sc.geometry, sc.environment)
        crit_L = crit_th = None
        if spec.solve:
            if st.theta > 0 and st.folding_resistance_F0 > 0:
                crit_L = critical_tip_length(sc)
            if st.folding_resistance_F0 > 0:
                crit_th = critical_prebend_angle(sc)
        trace = peak = None
        if spec.simulate:
            full = simulate(SimScenario(bare, spec.step, spec.guide_tube), stop_at_failure=False)
            peak = full.peak_severity()
            trace = dataclasses.replace(full, steps=())
        return SweepRow(coords, report, crit_L, crit_th, trace, peak)
    except (ValueError, ArithmeticError) as exc:
        where = ", ".join(f"{k}={v!r}" for k, v in coords.items())
        return SweepRow(coords, error=f"at {where}: {exc}")


def run_sweep(spec: SweepSpec, workers: Optional[int] = None) -> list:
    """Evaluate every grid point; rows come back in row-major axis order.

    A failing grid point yields a row with ``error`` set and the sweep
    continues. ``workers`` > 1 evaluates points on a thread pool.
    """
    names = [a.name for a in spec.axes]
    coords = [dict(zip(names, p)) for p in spec.points()]
    if workers and workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(lambda c: evaluate_point(spec, c), coords))
    return [evaluate_point(spec, c) for c in coords]
