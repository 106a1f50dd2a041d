import json
import math

import pytest

from torus_retract import (
    Environment,
    FrictionSet,
    RobotGeometry,
    Scenario,
    TipState,
    data_path,
)

# Prototype body: 1100 mm long, 50 mm diameter, 2318 g at 100 % fill
PROTO_LENGTH = 1.1
PROTO_DIAMETER = 0.05
PROTO_MASS = 2.318
MU_FILM = 0.55
MU_TUBE = 0.45
MU_GROUND = 0.81
G = 9.80665


def prototype_geometry(fill=1.0):
    return RobotGeometry.from_full_mass(PROTO_DIAMETER, PROTO_LENGTH, PROTO_MASS, fill)


def make_scenario(theta_deg=45.0, L=0.5, F0=10.0, Fb=2.0, Mp=0.0, fill=1.0,
                  mu_belt=MU_FILM, mu_ground=MU_GROUND, Tt=None):
    return Scenario(
        TipState(math.radians(theta_deg), L, F0, Fb, Mp, Tt),
        FrictionSet(mu_belt, mu_ground),
        prototype_geometry(fill),
        Environment(G),
    )


@pytest.fixture
def geometry():
    return prototype_geometry()


@pytest.fixture
def scenario():
    return make_scenario()


@pytest.fixture
def fixture_config():
    def load(name):
        return json.loads(data_path(name).read_text())
    return load


ACCEPTANCE_LINES = []


@pytest.fixture
def acceptance():
    """Record one PASS/FAIL line per acceptance criterion, then assert it."""
    def record(number, title, ok, detail=""):
        ACCEPTANCE_LINES.append(f"[{'PASS' if ok else 'FAIL'}] criterion {number}: {title}"
                                + (f" ({detail})" if detail else ""))
        assert ok, f"criterion {number} failed: {detail}"
    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split("criterion ")[1].split(":")[0])):
            terminalreporter.write_line(line)
