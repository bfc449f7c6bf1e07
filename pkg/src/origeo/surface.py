r"""Flat metrics on an origami and certified extremal-length estimates.

A :class:`WeightedSurface` assigns a positive height to every horizontal
cylinder and a positive width to every vertical cylinder; the cell in
horizontal cylinder ``i`` and vertical cylinder ``j`` becomes a
``width_j x height_i`` rectangle.  The rectangle dimensions are carried as
given (no unit-area normalization); the area

    area = sum_ij n_ij * height_i * width_j

is then both the total flat area and the intersection number of the two
defining foliations

    F_h = sum_i height_i * alpha_i,      F_v = sum_j width_j * beta_j.

Extremal length facts used for the certified bounds:

- the extremal length of a surface's own defining foliation equals its flat
  area (so ``r`` times it has extremal length ``r^2 * area``);
- a core curve sits in an embedded flat annulus of modulus
  (distance across) / circumference, so its extremal length is at most the
  reciprocal modulus; weighted unions of disjoint cores get at most the
  weighted sum ``sum u_j^2 / mod_j``;
- the intersection-number bound ``i(c, F)^2 <= Ext(c) * Ext(F)`` turned
  around gives the lower bound ``i(c, F)^2 / Ext(F)`` from either defining
  foliation.

Distances: an affine stretch cell by cell gives the quasiconformal upper
bound ``1/2 log max K_cell``; extremal-length ratios over any test family
give the lower bound ``1/2 log max ExtLo_X/ExtHi_Y`` (both orientations).
Every computed interval must contain the true Teichmueller distance — an
inverted interval means a bug, not an inaccuracy, and raises.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, Mapping, Optional, Tuple

from .errors import CertificationError, HostMismatch, InputError
from .intervals import DistanceInterval, ValueInterval
from .multicurve import (
    HORIZONTAL,
    VERTICAL,
    Weight,
    WeightedMulticurve,
    format_coefficient,
    intersection,
    pair_intersection,
)
from .origami import Origami

_PROPORTIONAL_RTOL = 1e-9


def _check_total_weights(
    origami: Origami, side: str, weights: Mapping[str, Weight], what: str
) -> Dict[str, Weight]:
    labels = [c.label for c in origami.cylinders(side)]
    clean = {}
    for lab in labels:
        if lab not in weights:
            raise InputError(f"missing {what} for cylinder {lab}")
        w = weights[lab]
        if not (w > 0):
            raise InputError(f"{what} for {lab} must be positive, got {w!r}")
        clean[lab] = w
    extra = set(weights) - set(labels)
    if extra:
        raise InputError(f"unknown cylinder labels {sorted(extra)} in {what}s")
    return clean


@dataclass(frozen=True)
class WeightedSurface:
    """An origami with positive cylinder heights and widths (a flat metric)."""

    origami: Origami
    heights: Mapping[str, Weight]
    widths: Mapping[str, Weight]

    def __post_init__(self):
        object.__setattr__(
            self,
            "heights",
            _check_total_weights(self.origami, HORIZONTAL, self.heights, "height"),
        )
        object.__setattr__(
            self,
            "widths",
            _check_total_weights(self.origami, VERTICAL, self.widths, "width"),
        )

    # ------------------------------------------------------------------

    def side_weights(self, side: str) -> Mapping[str, Weight]:
        return self.heights if side == HORIZONTAL else self.widths

    def defining_foliation(self, side: str) -> WeightedMulticurve:
        """The surface's own vertical (widths) or horizontal (heights) datum."""
        if side == VERTICAL:
            return WeightedMulticurve(self.origami, VERTICAL, dict(self.widths))
        if side == HORIZONTAL:
            return WeightedMulticurve(self.origami, HORIZONTAL, dict(self.heights))
        raise InputError(f"unknown side {side!r}")

    def area(self) -> Weight:
        """Total flat area; exact for exact weights.

        Evaluated by the canonical double loop over cylinder pairs so that it
        is bit-for-bit the pairing of the defining foliations.
        """
        return pair_intersection(
            self.defining_foliation(HORIZONTAL), self.defining_foliation(VERTICAL)
        )

    def circumference(self, side: str, label: str) -> Weight:
        """Core length of a cylinder: summed cell widths (resp. heights)."""
        matrix = self.origami.intersection_matrix()
        if side == HORIZONTAL:
            i = matrix.row_labels.index(label)
            return sum(
                matrix.entries[i][j] * self.widths[lab]
                for j, lab in enumerate(matrix.col_labels)
                if matrix.entries[i][j] != 0
            )
        j = matrix.col_labels.index(label)
        return sum(
            matrix.entries[i][j] * self.heights[lab]
            for i, lab in enumerate(matrix.row_labels)
            if matrix.entries[i][j] != 0
        )

    def across(self, side: str, label: str) -> Weight:
        """Distance across a cylinder: its height (horizontal) or width."""
        return self.side_weights(side)[label]

    def reciprocal_modulus(self, side: str, label: str) -> Weight:
        """circumference / across — an upper bound for the core's extremal length."""
        return self.circumference(side, label) / self.across(side, label)

    def proportionality(self, curve: WeightedMulticurve) -> Optional[Weight]:
        """Return r with curve = r * (defining foliation of curve's side), else None.

        Exact weights are compared exactly; any floating operand switches to a
        relative tolerance of 1e-9 (flow-line surfaces carry float weights).
        """
        if curve.host is not self.origami:
            raise HostMismatch("curve lives on a different origami")
        if not curve.is_full_support():
            return None
        own = self.side_weights(curve.side)
        ratios = [curve.weights[lab] / own[lab] for lab in curve.weights]
        exact = all(isinstance(r, Fraction) for r in ratios)
        first = ratios[0]
        if exact:
            return first if all(r == first for r in ratios) else None
        floats = [float(r) for r in ratios]
        lo, hi = min(floats), max(floats)
        if hi - lo <= _PROPORTIONAL_RTOL * hi:
            return floats[0]
        return None

    def cell_rectangle(self, cell: int) -> Tuple[Weight, Weight]:
        """(width, height) of one cell."""
        hcyl = self.origami.cylinder_of_cell(HORIZONTAL, cell)
        vcyl = self.origami.cylinder_of_cell(VERTICAL, cell)
        return self.widths[vcyl.label], self.heights[hcyl.label]

    def scaled(self, width_factor: Weight, height_factor: Weight) -> "WeightedSurface":
        if not (width_factor > 0 and height_factor > 0):
            raise InputError("scale factors must be positive")
        return WeightedSurface(
            self.origami,
            {k: w * height_factor for k, w in self.heights.items()},
            {k: w * width_factor for k, w in self.widths.items()},
        )


def area(surface: WeightedSurface) -> Weight:
    return surface.area()


def foliation_ext(surface: WeightedSurface, side: str, r: Weight = 1) -> Weight:
    """Extremal length of r times the surface's own defining foliation.

    This is an exact evaluation: the extremal length of the defining
    foliation is the flat area, and extremal length is quadratic under
    scaling.  The caller asserts that the foliation in question really is
    ``r`` times the defining one — for anything else use
    :func:`curve_ext_bounds`.
    """
    if side not in (HORIZONTAL, VERTICAL):
        raise InputError(f"unknown side {side!r}")
    if not (r > 0):
        raise InputError(f"scale must be positive, got {r!r}")
    return r * r * surface.area()


def curve_ext_bounds(
    surface: WeightedSurface, curve: WeightedMulticurve
) -> ValueInterval:
    """Certified extremal-length enclosure for a weighted multicurve.

    Lower bound: intersection numbers against both defining foliations,
    whose extremal lengths are known exactly.  Upper bound: disjoint flat
    annuli, ``sum u^2 * circumference/across`` over the support.  For the
    defining foliation itself the two collapse to the exact area.
    """
    if curve.host is not surface.origami:
        raise HostMismatch("curve lives on a different origami")
    a = surface.area()
    lo = 0
    for side in (HORIZONTAL, VERTICAL):
        pairing = intersection(curve, surface.defining_foliation(side))
        cand = pairing * pairing / a
        if cand > lo:
            lo = cand
    hi = 0
    for lab, u in curve.weights.items():
        hi = hi + u * u * surface.reciprocal_modulus(curve.side, lab)
    if lo > hi:
        # mathematically lo <= Ext <= hi; allow only float round-off grazing
        if float(lo - hi) > 1e-9 * float(hi):
            raise CertificationError(
                f"extremal length bounds inverted: lo={lo} hi={hi}"
            )
        lo = hi
    return ValueInterval(lo, hi)


def ext_interval(surface: WeightedSurface, curve: WeightedMulticurve) -> ValueInterval:
    """Enclosure that collapses to the exact value on defining foliations."""
    r = surface.proportionality(curve)
    if r is not None:
        return ValueInterval.exact(foliation_ext(surface, curve.side, r))
    return curve_ext_bounds(surface, curve)


def _same_origami(x: WeightedSurface, y: WeightedSurface) -> None:
    if x.origami is not y.origami:
        raise HostMismatch("surfaces live on different origamis")


def qc_upper(x: WeightedSurface, y: WeightedSurface) -> float:
    """Quasiconformal upper bound for the Teichmueller distance.

    The cell-by-cell affine map stretches a cell's width by w_Y/w_X and its
    height by h_Y/h_X; its dilatation is the larger of the two ratios of
    stretches.  Computed through the cross products w_Y*h_X vs w_X*h_Y so
    swapping the arguments gives the bit-identical result.
    """
    _same_origami(x, y)
    matrix = x.origami.intersection_matrix()
    worst = 1.0
    for i, hlab in enumerate(matrix.row_labels):
        for j, vlab in enumerate(matrix.col_labels):
            if matrix.entries[i][j] == 0:
                continue
            p = float(y.widths[vlab]) * float(x.heights[hlab])
            q = float(x.widths[vlab]) * float(y.heights[hlab])
            k_cell = max(p, q) / min(p, q)
            if k_cell > worst:
                worst = k_cell
    return 0.5 * math.log(worst)


def kerckhoff_lower(
    x: WeightedSurface,
    y: WeightedSurface,
    family: Iterable[WeightedMulticurve],
) -> float:
    """Extremal-length-ratio lower bound for the Teichmueller distance.

    For every test curve and both orientations the certified quotient
    ExtLo_X / ExtHi_Y bounds the distance's dilatation from below; defining
    foliations contribute exact ratios.  The bound is clamped at 0 (the sup
    over *all* curves realizes the distance; a finite family may undershoot).
    """
    _same_origami(x, y)
    best = 1  # ratio 1 <-> lower bound 0
    for curve in family:
        ix = ext_interval(x, curve)
        iy = ext_interval(y, curve)
        for ratio in (
            (ix.lo / iy.hi) if iy.hi > 0 else 0,
            (iy.lo / ix.hi) if ix.hi > 0 else 0,
        ):
            if ratio > best:
                best = ratio
    return 0.5 * math.log(float(best))


def distance_interval(
    x: WeightedSurface,
    y: WeightedSurface,
    family: Iterable[WeightedMulticurve] = None,
    tol: float = 1e-12,
) -> DistanceInterval:
    """Certified enclosure of the Teichmueller distance between two metrics.

    Defaults the test family to X's defining foliations (exact on flow
    lines).  An inverted interval beyond ``tol`` is a certification bug and
    raises; sub-tolerance grazing is clamped.
    """
    _same_origami(x, y)
    if family is None:
        family = [
            x.defining_foliation(VERTICAL),
            x.defining_foliation(HORIZONTAL),
        ]
    lo = kerckhoff_lower(x, y, family)
    hi = qc_upper(x, y)
    if lo > hi:
        if lo - hi > tol:
            raise CertificationError(
                f"distance bounds inverted: lower {lo} exceeds upper {hi}"
            )
        lo = hi
    return DistanceInterval(lo, hi)


# ---------------------------------------------------------------------------
# JSON form: {"heights": {"A1": "1", ...}, "widths": {"B1": "1", ...}}


def parse_weights(data: Mapping, origami: Origami) -> WeightedSurface:
    """Weighted surface from exact-rational JSON weight maps."""
    if not isinstance(data, Mapping):
        raise InputError("weights file must contain a JSON object")
    missing = {"heights", "widths"} - set(data)
    if missing:
        raise InputError(f"weights object missing keys {sorted(missing)}")

    def parse_map(m, what):
        if not isinstance(m, Mapping):
            raise InputError(f"'{what}' must map cylinder labels to rationals")
        out = {}
        for lab, text in m.items():
            try:
                out[str(lab)] = Fraction(str(text))
            except (ValueError, ZeroDivisionError):
                raise InputError(f"bad {what} value {text!r} for {lab}") from None
        return out

    return WeightedSurface(
        origami, parse_map(data["heights"], "heights"), parse_map(data["widths"], "widths")
    )


def weights_to_json(surface: WeightedSurface) -> dict:
    return {
        "heights": {k: format_coefficient(v) for k, v in surface.heights.items()},
        "widths": {k: format_coefficient(v) for k, v in surface.widths.items()},
    }


def load_weights(path, origami: Origami) -> WeightedSurface:
    try:
        with open(path) as fh:
            data = json.load(fh)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from None
    except json.JSONDecodeError as exc:
        raise InputError(f"{path} is not valid JSON: {exc}") from None
    return parse_weights(data, origami)
