r"""From two transverse boundary specifications to the optimal geodesic.

Given a vertical-side family ``xi`` (components ``c_i * gamma_i``) and a
horizontal-side family ``eta`` (components ``d_j * delta_j``) that jointly
fill, the unique Teichmueller geodesic with forward limit ``xi`` and
backward limit ``eta`` is found by a Perron–Frobenius reduction:

1. couple the components through ``M_ij = c_i * d_j * n(gamma_i, delta_j)``;
2. take the leading eigenpair ``(lambda, x)`` of ``M M^T`` and set
   ``y = M^T x / sqrt(lambda)`` — then ``x*sqrt(lambda) = M y`` and
   ``y*sqrt(lambda) = M^T x``, the closed two-sided system;
3. the geodesic's vertical foliation puts weight ``x_i * c_i`` on
   ``gamma_i``, the horizontal one ``y_j * d_j`` on ``delta_j``; when both
   families use all cores, these weights *are* the widths and heights of the
   time-0 flat surface.

Flowing for time ``t`` multiplies widths by ``e^t`` and heights by
``e^{-t}``; the fixed vertical multicurve then has extremal length
``e^{-2t} * area``, which is why the vertical datum is the forward
(``t -> +infinity``) limit.  Construction ends with a consistency
certificate: the ray's own limit, read off through the ergodic
decomposition of the vertical foliation, must be proportional to the
requested ``i(xi, .)`` on every core (and symmetrically backward).  A
failure of that certificate means the orientation convention is broken and
raises instead of silently flipping.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Dict, Optional, Tuple

import numpy as np

from .errors import (
    CertificationError,
    HostMismatch,
    NotFillingError,
    SideMismatch,
)
from .multicurve import (
    HORIZONTAL,
    VERTICAL,
    BusemannSpec,
    FillingStatus,
    WeightedMulticurve,
    busemann_spec_to_json,
    core_curve,
    filling_status,
    intersection,
)
from .origami import Origami, origami_to_json
from .perron import DEFAULT_TOL, PerronResult, gram, is_primitive, perron_solve
from .surface import WeightedSurface, distance_interval


@dataclass(frozen=True)
class GeodesicLine:
    """An optimal geodesic in flat coordinates.

    ``vertical_foliation`` carries the forward datum (its side expands under
    the flow), ``horizontal_foliation`` the backward one.  ``x`` is the
    l1-normalized leading eigenvector over the forward components, ``y`` its
    transpose-side partner, ``scale`` the growth factor sqrt(lambda).
    ``base_surface`` is the time-0 flat surface; it exists exactly when both
    families use all cores of their sides (otherwise the metric would need a
    cylinder of width zero, which is no metric on this origami — the
    eigen-data and limit functions remain available).
    """

    origami: Origami
    forward_spec: BusemannSpec
    backward_spec: BusemannSpec
    eigen: PerronResult
    x: Tuple[float, ...]
    y: Tuple[float, ...]
    scale: float
    vertical_foliation: WeightedMulticurve
    horizontal_foliation: WeightedMulticurve
    base_surface: Optional[WeightedSurface]
    filling: FillingStatus
    walsh_forward_cosine: float
    walsh_backward_cosine: float
    tol: float
    seed: int

    # thin conveniences over the module functions
    def point_at(self, t: float) -> WeightedSurface:
        return point_at(self, t)

    def flow_distance(self, s: float, t: float) -> float:
        return flow_distance(self, s, t)

    def forward_limit(self) -> Dict[str, float]:
        return forward_limit(self)

    def backward_limit(self) -> Dict[str, float]:
        return backward_limit(self)

    def reversed(self) -> "GeodesicLine":
        return reversed_line(self)

    def to_report(self) -> dict:
        return line_report(self)

    def require_surface(self) -> WeightedSurface:
        if self.base_surface is None:
            raise NotFillingError(
                "this line was built from proper core subsets "
                "(MatrixPrimitiveOnly); it has no flat realization on the "
                "host origami, so flow operations are unavailable"
            )
        return self.base_surface


def _core_intersection_matrix_for(
    xi: BusemannSpec, eta: BusemannSpec
) -> Tuple[Tuple[int, ...], ...]:
    """Rows = xi components, cols = eta components, core intersection counts."""
    n = xi.host.intersection_matrix()
    rows = []
    for g in xi.support:  # vertical labels -> matrix columns
        col = n.col_labels.index(g)
        rows.append(tuple(n.entries[n.row_labels.index(d)][col] for d in eta.support))
    return tuple(rows)


def optimal_geodesic(
    xi: BusemannSpec,
    eta: BusemannSpec,
    origami: Optional[Origami] = None,
    tol: float = DEFAULT_TOL,
    seed: int = 0,
) -> GeodesicLine:
    """Construct the optimal geodesic joining two boundary specifications.

    The vertical-side family is always the forward datum; the two specs may
    be passed in either order but must sit on opposite sides.  Raises
    NotFillingError / NotPrimitiveError when the pair cannot span a
    geodesic, and CertificationError when an internal consistency
    certificate (system closure, limit proportionality) fails.
    """
    if xi.host is not eta.host:
        raise HostMismatch("the two specs live on different origamis")
    if origami is not None and origami is not xi.host:
        raise HostMismatch("passed origami is not the specs' host")
    if xi.side == eta.side:
        raise SideMismatch(
            f"need one family per side, got both on {xi.side}"
        )
    if xi.side != VERTICAL:
        xi, eta = eta, xi  # forward datum is carried by the vertical side
    host: Origami = xi.host
    host.validate()

    status = filling_status(xi.as_multicurve(), eta.as_multicurve())
    if status is FillingStatus.NOT_FILLING:
        raise NotFillingError(
            "the families do not fill: restricted intersection matrix has a "
            "zero line or a disconnected support graph"
        )

    cores = _core_intersection_matrix_for(xi, eta)
    c = [xi.coeffs[lab] for lab in xi.support]
    d = [eta.coeffs[lab] for lab in eta.support]
    m = [
        [float(ci) * float(dj) * nij for dj, nij in zip(d, row)]
        for ci, row in zip(c, cores)
    ]
    if not is_primitive(m):
        # unreachable when filling_status passed; kept as a hard guard
        raise NotFillingError("coupling matrix is not primitive")

    eigen = perron_solve(gram(m), tol=tol, seed=seed)
    scale = math.sqrt(eigen.eigenvalue)
    marr = np.array(m)
    xv = np.array(eigen.vector)
    yv = (marr.T @ xv) / scale

    closure = float(np.max(np.abs(marr @ yv - scale * xv)))
    if closure > 10 * tol / min(1.0, scale):
        raise CertificationError(
            f"two-sided system failed to close: |M y - sqrt(lambda) x| = {closure:.3g}"
        )

    f_vert = WeightedMulticurve(
        host, VERTICAL,
        {lab: float(ci) * xi_i for lab, ci, xi_i in zip(xi.support, c, eigen.vector)},
    )
    y = tuple(float(v) for v in yv)
    f_hor = WeightedMulticurve(
        host, HORIZONTAL,
        {lab: float(dj) * yj for lab, dj, yj in zip(eta.support, d, y)},
    )

    base = None
    if status is FillingStatus.FILLING_CERTIFIED:
        base = WeightedSurface(host, dict(f_hor.weights), dict(f_vert.weights))
        if base.area() != intersection(f_hor, f_vert):
            raise CertificationError("base surface area disagrees with the pairing")

    fwd_raw = _walsh_raw(f_vert, f_hor)
    bwd_raw = _walsh_raw(f_hor, f_vert)
    cos_fwd = _cosine(fwd_raw, _spec_values(xi))
    cos_bwd = _cosine(bwd_raw, _spec_values(eta))
    certificate_floor = 1 - max(10 * tol, 1e-11)
    if cos_fwd < certificate_floor or cos_bwd < certificate_floor:
        raise CertificationError(
            "limit consistency certificate failed: cosines "
            f"{cos_fwd!r}/{cos_bwd!r} — orientation convention violated"
        )

    return GeodesicLine(
        origami=host,
        forward_spec=xi,
        backward_spec=eta,
        eigen=eigen,
        x=tuple(eigen.vector),
        y=y,
        scale=scale,
        vertical_foliation=f_vert,
        horizontal_foliation=f_hor,
        base_surface=base,
        filling=status,
        walsh_forward_cosine=cos_fwd,
        walsh_backward_cosine=cos_bwd,
        tol=tol,
        seed=seed,
    )


# ---------------------------------------------------------------------------
# flow


def point_at(line: GeodesicLine, t: float) -> WeightedSurface:
    """The flow point at time t: widths scaled by e^t, heights by e^{-t}.

    (On a time-reversed line the roles are exchanged, so that reversal
    negates the parameter.)  The area is invariant along the line.
    """
    base = line.require_surface()
    t = float(t)
    if not math.isfinite(t):
        raise ValueError(f"flow time must be finite, got {t}")
    if t == 0.0:
        return base
    grow, shrink = math.exp(t), math.exp(-t)
    if line.vertical_foliation.side == VERTICAL:
        return base.scaled(width_factor=grow, height_factor=shrink)
    return base.scaled(width_factor=shrink, height_factor=grow)


def flow_distance(line: GeodesicLine, s: float, t: float) -> float:
    """Teichmueller distance |t - s| between two flow points, cross-checked.

    The certified distance interval from the defining-foliation family must
    bracket |t - s| within 1e-12; a miss is a certification bug.
    """
    value = abs(float(t) - float(s))
    ival = distance_interval(point_at(line, s), point_at(line, t))
    if not ival.contains(value, tol=1e-12):
        raise CertificationError(
            f"flow distance {value} escapes certified interval "
            f"[{ival.lo}, {ival.hi}]"
        )
    return value


# ---------------------------------------------------------------------------
# limits


def _walsh_raw(
    components: WeightedMulticurve, transverse: WeightedMulticurve
) -> Dict[str, float]:
    """Limit values of the ray, over all cores, via the ergodic components.

    value(gamma)^2 = sum over components (w * core) of
    i(w*core, gamma)^2 / i(w*core, transverse); the transverse pairing of
    every component is positive for primitive data.
    """
    host = components.host
    inv_denom = {}
    for lab, w in components.weights.items():
        core = core_curve(host, components.side, lab)
        denom = float(w) * float(intersection(core, transverse))
        if not denom > 0:
            raise CertificationError(
                f"component {lab} has zero pairing with the transverse "
                "foliation; data is not primitive"
            )
        inv_denom[lab] = 1.0 / denom
    values: Dict[str, float] = {}
    for side in (HORIZONTAL, VERTICAL):
        for cyl in host.cylinders(side):
            gamma = core_curve(host, side, cyl.label)
            total = 0.0
            for lab, w in components.weights.items():
                num = float(
                    intersection(core_curve(host, components.side, lab), gamma)
                ) * float(w)
                if num:
                    total += num * num * inv_denom[lab]
            values[cyl.label] = math.sqrt(total)
    return values


def _spec_values(spec: BusemannSpec) -> Dict[str, float]:
    """i(spec, gamma) over all cores of the host."""
    host = spec.host
    mc = spec.as_multicurve()
    out: Dict[str, float] = {}
    for side in (HORIZONTAL, VERTICAL):
        for cyl in host.cylinders(side):
            gamma = core_curve(host, side, cyl.label)
            total = 0.0
            for lab, ci in spec.coeffs.items():
                num = float(intersection(core_curve(host, spec.side, lab), gamma))
                if num:
                    total += float(ci) ** 2 * num * num
            out[cyl.label] = math.sqrt(total)
    return out


def _cosine(u: Dict[str, float], v: Dict[str, float]) -> float:
    keys = list(u)
    a = np.array([u[k] for k in keys])
    b = np.array([v[k] for k in keys])
    na, nb = np.linalg.norm(a), np.linalg.norm(b)
    if na == 0 or nb == 0:
        return 0.0
    return float(a @ b / (na * nb))


def _normalized(values: Dict[str, float]) -> Dict[str, float]:
    norm = math.sqrt(sum(v * v for v in values.values()))
    if norm == 0:
        raise CertificationError("limit function vanished on every core")
    return {k: v / norm for k, v in values.items()}


def forward_limit(line: GeodesicLine) -> Dict[str, float]:
    """The ray's forward limit evaluated on all cores, l2-normalized.

    Proportional to i(forward_spec, .) — this proportionality is the
    construction's consistency certificate.
    """
    return _normalized(_walsh_raw(line.vertical_foliation, line.horizontal_foliation))


def backward_limit(line: GeodesicLine) -> Dict[str, float]:
    """Same for t -> -infinity: roles of the two foliations exchanged."""
    return _normalized(_walsh_raw(line.horizontal_foliation, line.vertical_foliation))


def reversed_line(line: GeodesicLine) -> GeodesicLine:
    """Time reversal: swaps the two foliations/specs and negates t.

    Shares the construction's eigen record; the swapped x/y keep their
    original normalization so that forward_limit(reversed) is bit-for-bit
    backward_limit(original).
    """
    return replace(
        line,
        forward_spec=line.backward_spec,
        backward_spec=line.forward_spec,
        x=line.y,
        y=line.x,
        vertical_foliation=line.horizontal_foliation,
        horizontal_foliation=line.vertical_foliation,
        walsh_forward_cosine=line.walsh_backward_cosine,
        walsh_backward_cosine=line.walsh_forward_cosine,
    )


# ---------------------------------------------------------------------------
# reports


def line_report(line: GeodesicLine) -> dict:
    """JSON-ready report; embeds the inputs so the line can be rebuilt."""
    area_val = None
    if line.base_surface is not None:
        area_val = f"{float(line.base_surface.area()):.15g}"
    return {
        "lambda": f"{line.eigen.eigenvalue:.15g}",
        "x": [f"{v:.15g}" for v in line.x],
        "y": [f"{v:.15g}" for v in line.y],
        "residual": line.eigen.residual,
        "iterations": line.eigen.iterations,
        "scaleFactor": f"{line.scale:.15g}",
        "fVert": {k: f"{v:.15g}" for k, v in line.vertical_foliation.weights.items()},
        "fHor": {k: f"{v:.15g}" for k, v in line.horizontal_foliation.weights.items()},
        "area": area_val,
        "filling": line.filling.value,
        "walshForwardCosine": line.walsh_forward_cosine,
        "walshBackwardCosine": line.walsh_backward_cosine,
        "inputs": {
            "origami": origami_to_json(line.origami),
            "xi": busemann_spec_to_json(line.forward_spec),
            "eta": busemann_spec_to_json(line.backward_spec),
        },
        "config": {"tol": line.tol, "seed": line.seed},
    }


def line_from_report(report: dict) -> GeodesicLine:
    """Rebuild a line from a report's embedded inputs (deterministic)."""
    from .multicurve import parse_busemann_spec
    from .origami import parse_origami

    try:
        inputs = report["inputs"]
        config = report.get("config", {})
        host = parse_origami(inputs["origami"])
        xi = parse_busemann_spec(inputs["xi"], host)
        eta = parse_busemann_spec(inputs["eta"], host)
    except (KeyError, TypeError) as exc:
        from .errors import InputError

        raise InputError(f"report lacks reconstructible inputs: {exc}") from None
    return optimal_geodesic(
        xi,
        eta,
        tol=float(config.get("tol", DEFAULT_TOL)),
        seed=int(config.get("seed", 0)),
    )
