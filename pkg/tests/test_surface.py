import math
from fractions import Fraction

import pytest

from origeo.errors import InputError
from origeo.multicurve import (
    HORIZONTAL,
    VERTICAL,
    WeightedMulticurve,
    core_curve,
)
from origeo.origami import builtin
from origeo.surface import (
    WeightedSurface,
    curve_ext_bounds,
    distance_interval,
    ext_interval,
    foliation_ext,
    kerckhoff_lower,
    load_weights,
    parse_weights,
    qc_upper,
    weights_to_json,
)


@pytest.fixture
def unit_l22():
    o = builtin("l-2-2")
    ones_h = {"A1": Fraction(1), "A2": Fraction(1)}
    ones_v = {"B1": Fraction(1), "B2": Fraction(1)}
    return WeightedSurface(o, ones_h, ones_v)


def test_unit_surface_area_is_cell_count(unit_l22):
    assert unit_l22.area() == 3
    assert isinstance(unit_l22.area(), Fraction)


def test_defining_foliation_ext_equals_area_exactly(unit_l22):
    assert foliation_ext(unit_l22, VERTICAL) == unit_l22.area()
    assert foliation_ext(unit_l22, HORIZONTAL) == unit_l22.area()
    # quadratic scaling, exactly
    assert foliation_ext(unit_l22, VERTICAL, Fraction(5, 2)) == Fraction(75, 4)


def test_defining_multicurve_interval_collapses(unit_l22):
    fv = unit_l22.defining_foliation(VERTICAL)
    iv = ext_interval(unit_l22, fv)
    assert iv.lo == iv.hi == 3
    scaled = fv.scaled(Fraction(2))
    iv2 = ext_interval(unit_l22, scaled)
    assert iv2.lo == iv2.hi == 12


def test_core_curve_bounds_exact_fractions(unit_l22):
    # long horizontal core: circumference 2, crossed by height 1 -> hi = 2;
    # best defining pairing gives lo = (i)^2 / area = 4/3
    bounds = curve_ext_bounds(unit_l22, core_curve(unit_l22.origami, HORIZONTAL, "A1"))
    assert bounds.lo == Fraction(4, 3)
    assert bounds.hi == Fraction(2)
    bounds2 = curve_ext_bounds(unit_l22, core_curve(unit_l22.origami, HORIZONTAL, "A2"))
    assert bounds2.lo == Fraction(1, 3)
    assert bounds2.hi == Fraction(1)


def test_bounds_scale_quadratically(unit_l22):
    gamma = core_curve(unit_l22.origami, VERTICAL, "B1")
    one = curve_ext_bounds(unit_l22, gamma)
    three = curve_ext_bounds(unit_l22, gamma.scaled(Fraction(3)))
    assert three.lo == 9 * one.lo and three.hi == 9 * one.hi


def test_width_doubling_distance_is_half_log_two(unit_l22):
    doubled = unit_l22.scaled(width_factor=Fraction(2), height_factor=Fraction(1))
    iv = distance_interval(unit_l22, doubled)
    assert iv.hi - iv.lo <= 1e-12
    assert abs(iv.lo - 0.5 * math.log(2)) <= 1e-12


def test_distance_is_zero_on_equal_surfaces(unit_l22):
    iv = distance_interval(unit_l22, unit_l22)
    assert iv.lo == 0.0 and iv.hi == 0.0


def test_upper_bound_is_bit_symmetric(unit_l22):
    other = WeightedSurface(
        unit_l22.origami,
        {"A1": Fraction(7, 3), "A2": Fraction(1, 2)},
        {"B1": Fraction(2), "B2": Fraction(5, 4)},
    )
    assert qc_upper(unit_l22, other) == qc_upper(other, unit_l22)


def test_lower_bound_never_exceeds_upper(unit_l22):
    import random

    rng = random.Random(20240817)
    o = unit_l22.origami
    for _ in range(50):
        a = WeightedSurface(
            o,
            {k: Fraction(rng.randint(1, 9), rng.randint(1, 4)) for k in ("A1", "A2")},
            {k: Fraction(rng.randint(1, 9), rng.randint(1, 4)) for k in ("B1", "B2")},
        )
        b = WeightedSurface(
            o,
            {k: Fraction(rng.randint(1, 9), rng.randint(1, 4)) for k in ("A1", "A2")},
            {k: Fraction(rng.randint(1, 9), rng.randint(1, 4)) for k in ("B1", "B2")},
        )
        family = [a.defining_foliation(VERTICAL), a.defining_foliation(HORIZONTAL)]
        assert kerckhoff_lower(a, b, family) <= qc_upper(a, b) + 1e-12


def test_proportionality_detection(unit_l22):
    fv = unit_l22.defining_foliation(VERTICAL)
    assert unit_l22.proportionality(fv.scaled(Fraction(7, 2))) == Fraction(7, 2)
    tilted = WeightedMulticurve(
        unit_l22.origami, VERTICAL, {"B1": Fraction(1), "B2": Fraction(2)}
    )
    assert unit_l22.proportionality(tilted) is None
    partial = WeightedMulticurve(unit_l22.origami, VERTICAL, {"B1": Fraction(1)})
    assert unit_l22.proportionality(partial) is None


def test_surface_requires_total_positive_weights():
    o = builtin("l-2-2")
    with pytest.raises(InputError):
        WeightedSurface(o, {"A1": 1}, {"B1": 1, "B2": 1})
    with pytest.raises(InputError):
        WeightedSurface(o, {"A1": 1, "A2": 0}, {"B1": 1, "B2": 1})
    with pytest.raises(InputError):
        WeightedSurface(o, {"A1": 1, "A2": 1}, {"B1": 1, "B2": 1, "B3": 1})


def test_weights_parse_round_trip(tmp_path):
    o = builtin("l-2-2")
    data = {
        "heights": {"A1": "3/2", "A2": "1"},
        "widths": {"B1": "1", "B2": "2/5"},
    }
    x = parse_weights(data, o)
    assert x.heights["A1"] == Fraction(3, 2)
    assert x.widths["B2"] == Fraction(2, 5)
    again = parse_weights(weights_to_json(x), o)
    assert again.heights == x.heights and again.widths == x.widths

    path = tmp_path / "w.json"
    path.write_text('{"heights": {"A1": "1", "A2": "1"}, "widths": {"B1": "1", "B2": "1"}}')
    assert load_weights(str(path), o).area() == 3


@pytest.mark.parametrize(
    "data",
    [
        {"widths": {"B1": "1", "B2": "1"}},
        {"heights": {"A1": "1"}, "widths": {"B1": "1", "B2": "1"}},
        {"heights": {"A1": "1", "A2": "-2"}, "widths": {"B1": "1", "B2": "1"}},
    ],
)
def test_weights_parse_rejects_malformed(data):
    with pytest.raises(InputError):
        parse_weights(data, builtin("l-2-2"))
