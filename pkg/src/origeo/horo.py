r"""Horofunctions, boundary pairings, and inequality audits.

Three ways to evaluate "how far toward infinity" a surface sits, all
normalized to vanish at a chosen basepoint:

* ``psi_foliation`` — along a foliation ray ``F``, the renormalized
  log-extremal-length ``(1/2) log Ext_X(F) - (1/2) log Ext_X0(F)``.  Exact
  (degenerate interval) whenever both extremal lengths fall on the exact
  proportionality path.
* ``psi_interior`` — against an interior point ``Z``, the distance
  difference ``d(X, Z) - d(X0, Z)`` as a certified interval.
* ``busemann_interval`` — against a geodesic line's forward endpoint, the
  Busemann function enclosed between the foliation bound from below and a
  far flow point from above: ``d(X, G(T)) - T`` decreases to the Busemann
  value as the horizon ``T`` grows, so any finite horizon gives a sound
  upper bound.

The audits at the bottom turn standard comparison inequalities into
machine-checked certificates on concrete surfaces rather than trusting
them abstractly; violations indicate a broken interval, not a broken
theorem, and are reported as such.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Dict, Iterable, Optional, Sequence, Tuple

from .errors import CertificationError, HostMismatch, InputError
from .geodesic import GeodesicLine, point_at
from .intervals import ValueInterval
from .multicurve import (
    HORIZONTAL,
    VERTICAL,
    BusemannSpec,
    WeightedMulticurve,
    core_curve,
    intersection,
)
from .surface import (
    WeightedSurface,
    curve_ext_bounds,
    distance_interval,
    ext_interval,
)


@dataclass(frozen=True)
class HorofunctionValue:
    """An evaluated horofunction: a certified interval plus an exactness flag.

    ``exact`` means the interval is degenerate by construction (both
    ingredients were computed on an exact path), not merely narrow.
    """

    value: ValueInterval
    exact: bool
    kind: str

    def midpoint(self) -> float:
        return (float(self.value.lo) + float(self.value.hi)) / 2.0


def walsh_eval(spec: BusemannSpec, mu: WeightedMulticurve) -> float:
    """sqrt(sum_i c_i^2 i(gamma_i, mu)^2): the boundary spec paired with mu."""
    if spec.host is not mu.host:
        raise HostMismatch("spec and multicurve live on different origamis")
    total = 0.0
    for lab, ci in spec.coeffs.items():
        num = float(intersection(core_curve(spec.host, spec.side, lab), mu))
        if num:
            total += float(ci) ** 2 * num * num
    return math.sqrt(total)


def psi_foliation(
    f: WeightedMulticurve, x: WeightedSurface, x0: WeightedSurface
) -> HorofunctionValue:
    """Horofunction of the foliation ray F, normalized at X0."""
    if x.origami is not f.host or x0.origami is not f.host:
        raise HostMismatch("foliation and surfaces live on different origamis")
    ext_x = ext_interval(x, f)
    ext_0 = ext_interval(x0, f)
    if ext_x.width == 0 and ext_0.width == 0:
        val = 0.5 * math.log(float(ext_x.lo) / float(ext_0.lo))
        return HorofunctionValue(ValueInterval.exact(val), True, "foliation")
    lo = 0.5 * math.log(float(ext_x.lo) / float(ext_0.hi))
    hi = 0.5 * math.log(float(ext_x.hi) / float(ext_0.lo))
    return HorofunctionValue(ValueInterval(lo, hi), False, "foliation")


def psi_interior(
    z: WeightedSurface,
    x: WeightedSurface,
    x0: WeightedSurface,
    family: Optional[Sequence[WeightedMulticurve]] = None,
) -> HorofunctionValue:
    """d(X, Z) - d(X0, Z) as a certified interval."""
    dxz = distance_interval(x, z, family=family)
    d0z = distance_interval(x0, z, family=family)
    iv = ValueInterval(dxz.lo - d0z.hi, dxz.hi - d0z.lo)
    return HorofunctionValue(iv, iv.width == 0, "interior")


def _line_area(line: GeodesicLine) -> float:
    return float(intersection(line.horizontal_foliation, line.vertical_foliation))


def _enclosure(line: GeodesicLine, y: WeightedSurface, horizon: float) -> ValueInterval:
    if y.origami is not line.origami:
        raise HostMismatch("surface does not live on the line's origami")
    ext = ext_interval(y, line.vertical_foliation)
    lo = 0.5 * math.log(float(ext.lo)) - 0.5 * math.log(_line_area(line))
    far = point_at(line, horizon)
    hi = distance_interval(y, far).hi - horizon
    if lo > hi:
        if lo > hi + 1e-9:
            raise CertificationError(
                f"Busemann enclosure inverted: lo={lo!r} > hi={hi!r}"
            )
        lo, hi = hi, lo
    return ValueInterval(lo, hi)


def busemann_interval(
    line: GeodesicLine,
    x: WeightedSurface,
    x0: Optional[WeightedSurface] = None,
    horizon: float = 8.0,
    family: Optional[Sequence[WeightedMulticurve]] = None,
) -> HorofunctionValue:
    """Enclose the Busemann function of the line's forward endpoint at X.

    With ``x0=None`` the normalization point is the line's own base G(0);
    otherwise the two enclosures are subtracted interval-soundly.  Larger
    horizons tighten the upper bound (at ``T >= t + 5`` the enclosure at a
    flow point G(t) is already sharp to ~1e-9).
    """
    if not horizon > 0:
        raise InputError(f"horizon must be positive, got {horizon}")
    del family  # the enclosure picks its own comparison data
    enc = _enclosure(line, x, horizon)
    if x0 is not None:
        enc = enc.minus(_enclosure(line, x0, horizon))
    return HorofunctionValue(enc, False, "busemann")


def miyachi_intersection(
    x: WeightedSurface,
    y: WeightedSurface,
    x0: WeightedSurface,
    family: Optional[Sequence[WeightedMulticurve]] = None,
) -> ValueInterval:
    """exp(-2 <X|Y>_{X0}) with the Gromov product taken interval-soundly.

    Multiplicative counterpart of the distance bracket: equals 1 exactly
    when X0 lies on a geodesic between X and Y.
    """
    dx = distance_interval(x0, x, family=family)
    dy = distance_interval(x0, y, family=family)
    dxy = distance_interval(x, y, family=family)
    product_lo = 0.5 * (dx.lo + dy.lo - dxy.hi)
    product_hi = 0.5 * (dx.hi + dy.hi - dxy.lo)
    return ValueInterval(math.exp(-2.0 * product_hi), math.exp(-2.0 * product_lo))


# ---------------------------------------------------------------------------
# audits


def minsky_audit(
    x: WeightedSurface,
    pairs: Optional[Iterable[Tuple[str, str]]] = None,
) -> dict:
    """Check n(a, b)^2 <= ExtHi(a) * ExtHi(b) over core pairs on X.

    The true extremal lengths satisfy the product inequality, so a
    violation against the *upper* bounds can only come from a broken
    interval.  Also asserts the defining-pair identity
    i(F_v, F_h)^2 = area^2, which holds bit-for-bit because both sides run
    the same accumulation.
    """
    host = x.origami
    matrix = host.intersection_matrix()
    if pairs is None:
        pairs = [
            (a.label, b.label)
            for a in host.cylinders(HORIZONTAL)
            for b in host.cylinders(VERTICAL)
        ]
    hi_cache: Dict[Tuple[str, str], object] = {}

    def ext_hi(side: str, label: str):
        key = (side, label)
        if key not in hi_cache:
            hi_cache[key] = curve_ext_bounds(x, core_curve(host, side, label)).hi
        return hi_cache[key]

    entries = []
    all_ok = True
    for alab, blab in pairs:
        n_ab = matrix.entries[matrix.row_labels.index(alab)][
            matrix.col_labels.index(blab)
        ]
        bound = ext_hi(HORIZONTAL, alab) * ext_hi(VERTICAL, blab)
        ok = n_ab * n_ab <= bound
        all_ok = all_ok and ok
        entries.append(
            {
                "pair": [alab, blab],
                "intersection": n_ab,
                "extUpperProduct": float(bound),
                "status": "certified" if ok else "violated",
            }
        )
    fh = x.defining_foliation(HORIZONTAL)
    fv = x.defining_foliation(VERTICAL)
    pairing = intersection(fv, fh)
    exact_eq = pairing * pairing == x.area() * x.area()
    all_ok = all_ok and exact_eq
    return {
        "pairs": entries,
        "definingEquality": {
            "pairingSquared": float(pairing * pairing),
            "areaSquared": float(x.area() * x.area()),
            "status": "exact" if exact_eq else "violated",
        },
        "status": "pass" if all_ok else "fail",
    }


def _forward_value(line: GeodesicLine, gamma: WeightedMulticurve) -> float:
    """The line's forward limit on gamma in the growth-rate normalization."""
    f_v, f_h = line.vertical_foliation, line.horizontal_foliation
    total = 0.0
    for lab, w in f_v.weights.items():
        core = core_curve(line.origami, f_v.side, lab)
        denom = float(w) * float(intersection(core, f_h))
        num = float(w) * float(intersection(core, gamma))
        if num:
            total += num * num / denom
    return math.sqrt(total)


def lower_bound_audit(
    line: GeodesicLine,
    curves: Optional[Sequence[WeightedMulticurve]] = None,
) -> dict:
    """Check i(F_v, gamma)/sqrt(area) <= forward limit value on gamma.

    Cauchy–Schwarz across the ergodic components; equality exactly when
    the component values i(gamma_i, gamma)/i(gamma_i, F_h) are all equal.
    Needs no flat realization: the area here is the pairing i(F_v, F_h),
    which exists even for proper-subset (MatrixPrimitiveOnly) data.
    """
    f_v, f_h = line.vertical_foliation, line.horizontal_foliation
    sqrt_area = math.sqrt(_line_area(line))
    if curves is None:
        curves = [
            core_curve(line.origami, side, cyl.label)
            for side in (HORIZONTAL, VERTICAL)
            for cyl in line.origami.cylinders(side)
        ]
    entries = []
    min_margin = math.inf
    all_ok = True
    for gamma in curves:
        if gamma.host is not line.origami:
            raise HostMismatch("audit curve lives on a different origami")
        lhs = float(intersection(f_v, gamma)) / sqrt_area
        rhs = _forward_value(line, gamma)
        margin = rhs - lhs
        ok = margin >= -1e-12
        all_ok = all_ok and ok
        min_margin = min(min_margin, margin)
        entries.append(
            {
                "curve": _curve_tag(gamma),
                "pairingOverSqrtArea": lhs,
                "limitValue": rhs,
                "margin": margin,
                "status": "certified" if ok else "violated",
            }
        )
    return {
        "entries": entries,
        "minMargin": min_margin,
        "status": "pass" if all_ok else "fail",
    }


def delta_probe(
    xi: BusemannSpec,
    eta: BusemannSpec,
    base: WeightedSurface,
    curves: Optional[Sequence[WeightedMulticurve]] = None,
) -> dict:
    """Smallest combined pairing of the two specs over unit-length probes.

    Each candidate curve is rescaled so its extremal-length upper bound at
    ``base`` is 1, then min over candidates of
    ``walsh_eval(xi, .) + walsh_eval(eta, .)`` is reported.  A *probe*:
    the minimum over the sampled family only, an upper bound for the true
    infimum over all curves — labeled accordingly, never a certificate.
    """
    if xi.host is not base.origami or eta.host is not base.origami:
        raise HostMismatch("specs and base surface live on different origamis")
    host = base.origami
    if curves is None:
        curves = [
            core_curve(host, side, cyl.label)
            for side in (HORIZONTAL, VERTICAL)
            for cyl in host.cylinders(side)
        ]
    best = math.inf
    witness = None
    for gamma in curves:
        ext_hi = float(curve_ext_bounds(base, gamma).hi)
        unit = gamma.scaled(1.0 / math.sqrt(ext_hi))
        val = walsh_eval(xi, unit) + walsh_eval(eta, unit)
        if val < best:
            best = val
            witness = _curve_tag(gamma)
    return {"value": best, "witness": witness, "status": "probe"}


def _curve_tag(gamma: WeightedMulticurve) -> str:
    support = gamma.support
    if len(support) == 1 and gamma.weights[support[0]] == 1:
        return support[0]
    return f"{gamma.side}:{'+'.join(support)}"
