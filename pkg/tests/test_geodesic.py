import json
import math
import random
from fractions import Fraction

import pytest

from origeo.errors import (
    ComplexityError,
    HostMismatch,
    InputError,
    NotFillingError,
    SideMismatch,
)
from origeo.geodesic import (
    line_from_report,
    line_report,
    optimal_geodesic,
)
from origeo.multicurve import (
    HORIZONTAL,
    VERTICAL,
    BusemannSpec,
    FillingStatus,
)
from origeo.origami import Origami, builtin
from origeo.sampling import random_full_instance, random_primitive_instance

PHI = (1 + math.sqrt(5)) / 2


@pytest.fixture
def golden():
    o = builtin("l-2-2")
    xi = BusemannSpec(o, VERTICAL, {"B1": Fraction(1), "B2": Fraction(1)})
    eta = BusemannSpec(o, HORIZONTAL, {"A1": Fraction(1), "A2": Fraction(1)})
    return optimal_geodesic(xi, eta)


def test_golden_eigendata(golden):
    assert abs(golden.eigen.eigenvalue - (3 + math.sqrt(5)) / 2) < 1e-10
    assert golden.eigen.residual <= 1e-12
    # x and y both l1-normalize the ray (1, 1/phi)
    expect = (PHI / (1 + PHI), 1 / (1 + PHI))
    assert max(abs(a - b) for a, b in zip(golden.x, expect)) < 1e-8
    assert max(abs(a - b) for a, b in zip(golden.y, expect)) < 1e-8
    assert abs(golden.scale - PHI) < 1e-10


def test_golden_foliations_and_area(golden):
    assert golden.filling is FillingStatus.FILLING_CERTIFIED
    fv = golden.vertical_foliation
    fh = golden.horizontal_foliation
    assert fv.side == VERTICAL and fh.side == HORIZONTAL
    # unit coefficients: weights equal the eigenvector entries
    assert fv.weights["B1"] == golden.x[0]
    assert fh.weights["A2"] == golden.y[1]
    area = float(golden.base_surface.area())
    assert abs(area - math.sqrt(5) / PHI**2) < 1e-12


def test_golden_walsh_certificates(golden):
    assert golden.walsh_forward_cosine > 1 - 1e-9
    assert golden.walsh_backward_cosine > 1 - 1e-9


def test_limits_are_unit_vectors_supported_transversally(golden):
    fl = golden.forward_limit()
    bl = golden.backward_limit()
    assert abs(sum(v * v for v in fl.values()) - 1.0) < 1e-12
    assert abs(sum(v * v for v in bl.values()) - 1.0) < 1e-12
    # the forward datum is vertical, so it pairs only with horizontal cores
    assert fl["B1"] == fl["B2"] == 0.0
    assert bl["A1"] == bl["A2"] == 0.0
    assert fl["A1"] > fl["A2"] > 0


def test_point_at_scales_widths_and_heights(golden):
    base = golden.base_surface
    pt = golden.point_at(2.0)
    for lab, w in base.widths.items():
        assert pt.widths[lab] == float(w) * math.exp(2.0)
    for lab, h in base.heights.items():
        assert pt.heights[lab] == float(h) * math.exp(-2.0)
    assert golden.point_at(0.0) is base


def test_point_at_rejects_non_finite(golden):
    with pytest.raises(ValueError):
        golden.point_at(math.inf)


def test_flow_distance_is_exact_parameter_gap(golden):
    assert golden.flow_distance(0, 1) == 1.0
    assert golden.flow_distance(-2.5, 1.5) == 4.0
    assert golden.flow_distance(3, 3) == 0.0
    assert golden.flow_distance(7, -13) == 20.0


def test_reversal_swaps_everything_in_place(golden):
    rev = golden.reversed()
    assert rev.forward_spec is golden.backward_spec
    assert rev.vertical_foliation is golden.horizontal_foliation
    assert rev.forward_limit() == golden.backward_limit()
    assert rev.backward_limit() == golden.forward_limit()
    assert rev.point_at(1.0).widths == golden.point_at(-1.0).widths
    assert rev.point_at(1.0).heights == golden.point_at(-1.0).heights
    again = rev.reversed()
    assert again.forward_limit() == golden.forward_limit()


def test_input_order_does_not_matter():
    o = builtin("l-2-2")
    xi = BusemannSpec(o, VERTICAL, {"B1": Fraction(1), "B2": Fraction(1)})
    eta = BusemannSpec(o, HORIZONTAL, {"A1": Fraction(1), "A2": Fraction(1)})
    a = optimal_geodesic(xi, eta)
    b = optimal_geodesic(eta, xi)  # auto-oriented: vertical side leads
    assert a.forward_spec is b.forward_spec is xi
    assert a.eigen.eigenvalue == b.eigen.eigenvalue
    assert a.x == b.x


def test_same_side_specs_rejected():
    o = builtin("l-2-2")
    one = BusemannSpec(o, VERTICAL, {"B1": Fraction(1)})
    two = BusemannSpec(o, VERTICAL, {"B2": Fraction(1)})
    with pytest.raises(SideMismatch):
        optimal_geodesic(one, two)


def test_cross_host_specs_rejected():
    xi = BusemannSpec(builtin("l-2-2"), VERTICAL, {"B1": Fraction(1)})
    eta = BusemannSpec(builtin("l-3-2"), HORIZONTAL, {"A1": Fraction(1)})
    with pytest.raises(HostMismatch):
        optimal_geodesic(xi, eta)


def test_low_genus_host_rejected():
    torus = Origami(2, (2, 1), (1, 2))
    xi = BusemannSpec(torus, VERTICAL, {"B1": Fraction(1), "B2": Fraction(1)})
    eta = BusemannSpec(torus, HORIZONTAL, {"A1": Fraction(1)})
    with pytest.raises(ComplexityError):
        optimal_geodesic(xi, eta)


def test_non_filling_pair_rejected():
    o = builtin("l-2-2")
    xi = BusemannSpec(o, VERTICAL, {"B2": Fraction(1)})
    eta = BusemannSpec(o, HORIZONTAL, {"A2": Fraction(1)})  # n(A2, B2) = 0
    with pytest.raises(NotFillingError):
        optimal_geodesic(xi, eta)


def test_proper_subsets_build_without_surface():
    o = builtin("l-2-2")
    xi = BusemannSpec(o, VERTICAL, {"B1": Fraction(1)})
    eta = BusemannSpec(o, HORIZONTAL, {"A1": Fraction(1)})
    line = optimal_geodesic(xi, eta)
    assert line.filling is FillingStatus.MATRIX_PRIMITIVE_ONLY
    assert line.base_surface is None
    assert line.eigen.eigenvalue == pytest.approx(1.0)
    with pytest.raises(NotFillingError):
        line.point_at(1.0)
    with pytest.raises(NotFillingError):
        line.flow_distance(0, 1)
    # limit functions still make sense
    fl = line.forward_limit()
    assert fl["A1"] > 0 and fl["B1"] == 0.0


def test_coefficients_steer_the_weights():
    o = builtin("l-2-2")
    xi = BusemannSpec(o, VERTICAL, {"B1": Fraction(3), "B2": Fraction(1, 2)})
    eta = BusemannSpec(o, HORIZONTAL, {"A1": Fraction(1), "A2": Fraction(2)})
    line = optimal_geodesic(xi, eta)
    fv = line.vertical_foliation.weights
    assert fv["B1"] == pytest.approx(3 * line.x[0])
    assert fv["B2"] == pytest.approx(0.5 * line.x[1])
    assert line.walsh_forward_cosine > 1 - 1e-9


def test_report_schema_and_round_trip(golden):
    rep = line_report(golden)
    assert set(rep) >= {
        "lambda", "x", "y", "residual", "fVert", "fHor", "area",
        "walshForwardCosine", "walshBackwardCosine", "inputs", "config",
    }
    assert isinstance(rep["lambda"], str)
    assert all(isinstance(s, str) for s in rep["x"] + rep["y"])
    assert isinstance(rep["residual"], float)
    assert set(rep["fVert"]) == {"B1", "B2"}
    assert set(rep["fHor"]) == {"A1", "A2"}

    again = line_from_report(json.loads(json.dumps(rep)))
    assert again.eigen.eigenvalue == golden.eigen.eigenvalue
    assert again.x == golden.x and again.y == golden.y


def test_report_without_inputs_is_rejected(golden):
    rep = line_report(golden)
    del rep["inputs"]
    with pytest.raises(InputError):
        line_from_report(rep)


def test_subset_report_has_null_area():
    o = builtin("l-2-2")
    xi = BusemannSpec(o, VERTICAL, {"B1": Fraction(1)})
    eta = BusemannSpec(o, HORIZONTAL, {"A1": Fraction(1)})
    rep = line_report(optimal_geodesic(xi, eta))
    assert rep["area"] is None
    assert rep["filling"] == "MatrixPrimitiveOnly"


@pytest.mark.parametrize("seed", range(6))
def test_random_instances_close_the_system(seed):
    rng = random.Random(f"geo:{seed}")
    _, xi, eta = random_primitive_instance(rng)
    line = optimal_geodesic(xi, eta)
    assert line.walsh_forward_cosine > 1 - 1e-9
    assert line.walsh_backward_cosine > 1 - 1e-9
    # y side closes exactly by construction; x side within the certificate
    assert min(line.x) > 0 and min(line.y) > 0


@pytest.mark.parametrize("seed", range(3))
def test_random_full_instances_flow(seed):
    rng = random.Random(f"full:{seed}")
    _, xi, eta = random_full_instance(rng)
    line = optimal_geodesic(xi, eta)
    assert line.base_surface is not None
    assert line.flow_distance(-1.25, 2.75) == 4.0
    a0 = float(line.base_surface.area())
    a2 = float(line.point_at(2.0).area())
    assert abs(a2 - a0) < 1e-9 * a0
