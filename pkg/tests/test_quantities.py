import math

import pytest
from hypothesis import given, strategies as st

from torus_retract import RobotGeometry, TipState, convert_units, linear_density
from torus_retract.quantities import (
    Environment,
    FrictionSet,
    UnitError,
    format_quantity,
    parse_quantity,
)

from conftest import PROTO_DIAMETER, PROTO_LENGTH, prototype_geometry


@pytest.mark.parametrize("value, src, dst, expected", [
    (1100, "mm", "m", 1.1),
    (45, "deg", "rad", math.pi / 4),
    (110, "%", "fraction", 1.10),
    (2318, "g", "kg", 2.318),
])
def test_convert_units_examples(value, src, dst, expected):
    assert convert_units(value, src, dst) == pytest.approx(expected, rel=1e-15)


def test_convert_units_rejects_unknown_and_mismatched():
    with pytest.raises(UnitError):
        convert_units(1.0, "furlong", "m")
    with pytest.raises(UnitError):
        convert_units(1.0, "mm", "deg")


pairs = st.sampled_from([("mm", "m"), ("deg", "rad"), ("g", "kg"), ("%", "fraction"),
                         ("cm", "mm"), ("N*mm", "N*m")])


@given(st.floats(min_value=-1e9, max_value=1e9, allow_nan=False), pairs)
def test_round_trip_identity(x, pair):
    a, b = pair
    back = convert_units(convert_units(x, a, b), b, a)
    assert back == pytest.approx(x, rel=1e-12, abs=1e-300)


def test_parse_quantity():
    assert parse_quantity("50 mm", "length") == pytest.approx(0.05)
    assert parse_quantity("45deg", "angle") == pytest.approx(math.pi / 4)
    assert parse_quantity("110 %", "ratio") == pytest.approx(1.1)
    assert parse_quantity(0.55, "ratio") == 0.55
    with pytest.raises(UnitError):
        parse_quantity(50, "length")  # dimensioned values need a unit
    with pytest.raises(UnitError):
        parse_quantity("50 mm", "angle")
    with pytest.raises(UnitError):
        parse_quantity("fifty mm", "length")


def test_format_quantity_round_trips():
    for v, dim in [(0.1 + 0.2, "length"), (1 / 3, "angle"), (2.107272727272727, "linear_density")]:
        assert parse_quantity(format_quantity(v, dim), dim) == v


def test_linear_density_table_one():
    # 2318 g / 1100 mm, computed by hand
    rho = linear_density(prototype_geometry())
    assert rho.rho == pytest.approx(2.318 / 1.1, rel=1e-12)
    assert rho.rho == pytest.approx(2.107, abs=5e-4)


def test_linear_density_formula():
    geom = RobotGeometry(0.05, 1.1, 1000.0, 1.0, membrane_mass=0.1)
    volume = math.pi * 0.025 ** 2 * 1.1
    assert linear_density(geom).rho == pytest.approx((0.1 + 1000.0 * volume) / 1.1)


def test_doubling_fill_doubles_fluid_contribution():
    g1 = RobotGeometry(0.05, 1.1, 1000.0, 0.6, membrane_mass=0.2)
    g2 = RobotGeometry(0.05, 1.1, 1000.0, 1.2, membrane_mass=0.2)
    fluid1 = linear_density(g1).rho - 0.2 / 1.1
    fluid2 = linear_density(g2).rho - 0.2 / 1.1
    assert fluid2 == pytest.approx(2 * fluid1, rel=1e-12)


@given(st.floats(0.1, 10.0), st.floats(0.1, 10.0))
def test_linear_density_homogeneity(k_mass, k_len):
    base = RobotGeometry.from_full_mass(0.05, 1.0, 2.0)
    scaled_mass = RobotGeometry.from_full_mass(0.05, 1.0, 2.0 * k_mass)
    scaled_len = RobotGeometry.from_full_mass(0.05, k_len, 2.0)
    rho = linear_density(base).rho
    assert linear_density(scaled_mass).rho == pytest.approx(k_mass * rho, rel=1e-12)
    assert linear_density(scaled_len).rho == pytest.approx(rho / k_len, rel=1e-12)


def test_empty_body_rejected():
    with pytest.raises(ValueError):
        RobotGeometry(PROTO_DIAMETER, PROTO_LENGTH, 1000.0, fill_ratio=0.0)


def test_overfill_allowed():
    g = prototype_geometry(1.2)
    assert linear_density(g).rho == pytest.approx(1.2 * 2.318 / 1.1)


@pytest.mark.parametrize("bad", [float("nan"), float("inf"), -1.0, 0.0])
def test_constructors_reject_bad_values(bad):
    with pytest.raises(ValueError):
        RobotGeometry(bad, 1.0, 1000.0)
    with pytest.raises(ValueError):
        Environment(bad)
    if bad != 0.0:
        with pytest.raises(ValueError):
            FrictionSet(bad, 0.5)
        with pytest.raises(ValueError):
            TipState(0.1, 0.5, bad, 1.0)


def test_tip_state_theta_domain():
    TipState(0.0, 0.5, 1.0, 1.0)
    with pytest.raises(ValueError):
        TipState(math.pi, 0.5, 1.0, 1.0)
    with pytest.raises(ValueError):
        TipState(-0.1, 0.5, 1.0, 1.0)


def test_tip_tension_defaults_to_folding_resistance():
    assert TipState(0.3, 0.5, 4.0, 1.0).tension == 4.0
    assert TipState(0.3, 0.5, 4.0, 1.0, tip_tension_Tt=1.5).tension == 1.5
