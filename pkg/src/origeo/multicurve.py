r"""Weighted families of cylinder core curves and their intersection pairing.

On a square-tiled surface every horizontal cylinder has a core curve
``alpha_i`` and every vertical cylinder a core curve ``beta_j``; curves on the
same side are disjoint, and a horizontal core meets a vertical core once in
every unit cell the two cylinders share.  The whole intersection theory of
these families is therefore carried by one nonnegative integer matrix
``n_ij`` (rows = horizontal cylinders, columns = vertical cylinders), and the
geometric intersection number of weighted families is the bilinear form

    i(sum_i a_i alpha_i, sum_j b_j beta_j) = sum_ij a_i n_ij b_j.

Weights are kept exact (`fractions.Fraction`) whenever the input is exact;
real weights (e.g. eigenvector output) flow through the same formulas in
floating point.

A :class:`BusemannSpec` names a weighted family on one side as the
prescribed direction of a geodesic ray; :func:`filling_status` reports
whether a transverse pair of families can span a geodesic at all:

``FillingCertified``
    both families use *all* cores of their side on a connected origami; the
    complement of the union of cores is then a disjoint union of rectangles,
    so the pair fills the surface outright.
``MatrixPrimitiveOnly``
    the restricted coupling matrix has no zero row/column and a connected
    bipartite support graph, but a proper subset of cores is used, so
    topological filling is not certified.
``NotFilling``
    some component is disjoint from the whole opposite family, or the
    support graph is disconnected.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, Mapping, Optional, Sequence, Tuple, Union

import numpy as np

from .errors import HostMismatch, InputError, SideMismatch

Weight = Union[int, float, Fraction]

HORIZONTAL = "horizontal"
VERTICAL = "vertical"
SIDES = (HORIZONTAL, VERTICAL)


def opposite(side: str) -> str:
    if side == HORIZONTAL:
        return VERTICAL
    if side == VERTICAL:
        return HORIZONTAL
    raise InputError(f"unknown side {side!r}")


@dataclass(frozen=True)
class IntersectionMatrix:
    """Geometric intersection numbers of two transverse core-curve families.

    ``entries[i][j]`` is the intersection number of the i-th curve of the row
    family with the j-th curve of the column family.  For an origami these
    are the cell counts shared by cylinder pairs, so the row sums are the
    horizontal cylinder lengths, the column sums the vertical ones, and the
    grand total is the number of squares.
    """

    entries: Tuple[Tuple[Weight, ...], ...]
    row_labels: Tuple[str, ...]
    col_labels: Tuple[str, ...]

    def __post_init__(self):
        k, l = self.shape
        if k == 0 or l == 0:
            raise InputError("intersection matrix must be nonempty")
        if any(len(row) != l for row in self.entries):
            raise InputError("ragged intersection matrix")
        if len(self.row_labels) != k or len(self.col_labels) != l:
            raise InputError("label count does not match matrix shape")
        if any(x < 0 for row in self.entries for x in row):
            raise InputError("negative intersection number")

    @property
    def shape(self) -> Tuple[int, int]:
        return len(self.entries), len(self.entries[0]) if self.entries else 0

    def entry(self, i: int, j: int) -> Weight:
        return self.entries[i][j]

    def row_sums(self) -> Tuple[Weight, ...]:
        return tuple(sum(row) for row in self.entries)

    def col_sums(self) -> Tuple[Weight, ...]:
        k, l = self.shape
        return tuple(sum(self.entries[i][j] for i in range(k)) for j in range(l))

    def total(self) -> Weight:
        return sum(self.row_sums())

    def transpose(self) -> "IntersectionMatrix":
        k, l = self.shape
        return IntersectionMatrix(
            tuple(tuple(self.entries[i][j] for i in range(k)) for j in range(l)),
            self.col_labels,
            self.row_labels,
        )

    def as_array(self) -> np.ndarray:
        return np.array([[float(x) for x in row] for row in self.entries])

    def as_lists(self) -> list:
        return [list(row) for row in self.entries]


def _check_weights(weights: Mapping[str, Weight]) -> Dict[str, Weight]:
    if not weights:
        raise InputError("weighted multicurve needs at least one component")
    clean: Dict[str, Weight] = {}
    for label, w in weights.items():
        if not (w > 0):
            raise InputError(f"weight on {label} must be positive, got {w!r}")
        clean[str(label)] = w
    return clean


@dataclass(frozen=True)
class WeightedMulticurve:
    """Positive weights on pairwise disjoint cores of one side of an origami."""

    host: object
    side: str
    weights: Mapping[str, Weight]

    def __post_init__(self):
        if self.side not in SIDES:
            raise InputError(f"unknown side {self.side!r}")
        clean = _check_weights(self.weights)
        valid = {c.label for c in self.host.cylinders(self.side)}
        unknown = set(clean) - valid
        if unknown:
            raise InputError(
                f"no {self.side} cylinder labelled {sorted(unknown)} on this origami"
            )
        object.__setattr__(self, "weights", clean)

    @property
    def support(self) -> Tuple[str, ...]:
        order = [c.label for c in self.host.cylinders(self.side)]
        return tuple(lab for lab in order if lab in self.weights)

    def is_full_support(self) -> bool:
        return len(self.weights) == len(self.host.cylinders(self.side))

    def vector(self) -> Tuple[Weight, ...]:
        """Weights aligned with the host's canonical cylinder order (exact 0s)."""
        zero = Fraction(0) if all(
            isinstance(w, (int, Fraction)) for w in self.weights.values()
        ) else 0.0
        return tuple(
            self.weights.get(c.label, zero) for c in self.host.cylinders(self.side)
        )

    def scaled(self, factor: Weight) -> "WeightedMulticurve":
        if not (factor > 0):
            raise InputError("scale factor must be positive")
        return WeightedMulticurve(
            self.host, self.side, {k: w * factor for k, w in self.weights.items()}
        )


def core_curve(host, side: str, label: str) -> WeightedMulticurve:
    """The single core curve of one cylinder, as a weight-1 multicurve."""
    return WeightedMulticurve(host, side, {label: Fraction(1)})


def _same_host(a: WeightedMulticurve, b: WeightedMulticurve) -> None:
    if a.host is not b.host:
        raise HostMismatch("multicurves live on different origamis")


def pair_intersection(
    a: WeightedMulticurve, b: WeightedMulticurve,
    matrix: Optional[IntersectionMatrix] = None,
) -> Weight:
    """Geometric intersection number of two transversal weighted families.

    ``a`` and ``b`` must live on opposite sides of the same origami.  The
    pairing is the bilinear form through the core intersection matrix and is
    exact whenever both weight systems are exact.
    """
    _same_host(a, b)
    if a.side == b.side:
        raise SideMismatch(
            "pair_intersection needs families on opposite sides "
            f"(both are {a.side}); same-side families are disjoint"
        )
    if a.side != HORIZONTAL:
        # canonical accumulation order: the pairing is symmetric, and running
        # one fixed loop makes it bit-for-bit symmetric in float arithmetic
        a, b = b, a
    if matrix is None:
        matrix = a.host.intersection_matrix()
    n = matrix if matrix.row_labels == tuple(
        c.label for c in a.host.cylinders(a.side)
    ) else matrix.transpose()
    av = a.vector()
    bv = b.vector()
    total = 0
    for i, ai in enumerate(av):
        if ai == 0:
            continue
        row = n.entries[i]
        for j, bj in enumerate(bv):
            if bj == 0 or row[j] == 0:
                continue
            total += ai * row[j] * bj
    return total


def intersection(a: WeightedMulticurve, b: WeightedMulticurve) -> Weight:
    """Like :func:`pair_intersection` but 0 for same-side (disjoint) families."""
    _same_host(a, b)
    if a.side == b.side:
        return Fraction(0)
    return pair_intersection(a, b)


class FillingStatus(enum.Enum):
    FILLING_CERTIFIED = "FillingCertified"
    MATRIX_PRIMITIVE_ONLY = "MatrixPrimitiveOnly"
    NOT_FILLING = "NotFilling"


def submatrix_is_primitive_shape(
    matrix: IntersectionMatrix,
    row_support: Sequence[str],
    col_support: Sequence[str],
) -> bool:
    """No zero row/column and connected bipartite support graph, restricted."""
    rows = [matrix.row_labels.index(lab) for lab in row_support]
    cols = [matrix.col_labels.index(lab) for lab in col_support]
    if not rows or not cols:
        return False
    # zero lines
    for i in rows:
        if all(matrix.entries[i][j] == 0 for j in cols):
            return False
    for j in cols:
        if all(matrix.entries[i][j] == 0 for i in rows):
            return False
    # connectivity of the bipartite graph {n_ij > 0}
    seen_rows = {rows[0]}
    seen_cols = set()
    frontier = [("r", rows[0])]
    while frontier:
        kind, idx = frontier.pop()
        if kind == "r":
            for j in cols:
                if j not in seen_cols and matrix.entries[idx][j] > 0:
                    seen_cols.add(j)
                    frontier.append(("c", j))
        else:
            for i in rows:
                if i not in seen_rows and matrix.entries[i][idx] > 0:
                    seen_rows.add(i)
                    frontier.append(("r", i))
    return len(seen_rows) == len(rows) and len(seen_cols) == len(cols)


def filling_status(a: WeightedMulticurve, b: WeightedMulticurve) -> FillingStatus:
    """Three-valued filling check for a transverse pair of weighted families.

    See the module docstring for the meaning of the three values.  Weights do
    not matter here, only supports: filling is a property of the underlying
    curve system.
    """
    _same_host(a, b)
    if a.side == b.side:
        raise SideMismatch("filling needs families on opposite sides")
    hor, ver = (a, b) if a.side == HORIZONTAL else (b, a)
    matrix = a.host.intersection_matrix()
    ok = submatrix_is_primitive_shape(matrix, hor.support, ver.support)
    if not ok:
        return FillingStatus.NOT_FILLING
    if hor.is_full_support() and ver.is_full_support():
        return FillingStatus.FILLING_CERTIFIED
    return FillingStatus.MATRIX_PRIMITIVE_ONLY


# ---------------------------------------------------------------------------
# Prescribed boundary directions and their JSON form


@dataclass(frozen=True)
class BusemannSpec:
    """A prescribed boundary direction: positive coefficients on disjoint cores.

    ``coeffs`` maps cylinder labels (all on ``side``) to positive numbers;
    ``approx`` records that the coefficients came in as decimal/floating
    values rather than exact rationals.
    """

    host: object
    side: str
    coeffs: Mapping[str, Weight]
    approx: bool = False

    def __post_init__(self):
        mc = WeightedMulticurve(self.host, self.side, self.coeffs)
        object.__setattr__(self, "coeffs", mc.weights)

    def as_multicurve(self) -> WeightedMulticurve:
        return WeightedMulticurve(self.host, self.side, self.coeffs)

    @property
    def support(self) -> Tuple[str, ...]:
        return self.as_multicurve().support

    def component_labels(self) -> Tuple[str, ...]:
        return self.support


def parse_coefficient(text: str, approx: bool) -> Weight:
    """Parse ``"p/q"`` exactly, or as a float when flagged approximate."""
    s = str(text).strip()
    try:
        if approx:
            return float(Fraction(s)) if "/" in s else float(s)
        return Fraction(s)
    except (ValueError, ZeroDivisionError) as exc:
        raise InputError(f"bad coefficient {text!r}: {exc}") from None


def format_coefficient(value: Weight) -> str:
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, int):
        return str(value)
    return f"{float(value):.15g}"


def parse_busemann_spec(data: Mapping, host) -> BusemannSpec:
    """Build a :class:`BusemannSpec` from its JSON object form.

    Expected shape: ``{"side": "vertical", "coeffs": [["B1", "1"], ...]}``
    with optional ``"approx": true`` marking non-exact coefficients.
    """
    if not isinstance(data, Mapping):
        raise InputError("boundary spec must be a JSON object")
    try:
        side = data["side"]
        raw = data["coeffs"]
    except (KeyError, TypeError):
        raise InputError("boundary spec needs 'side' and 'coeffs'") from None
    if side not in SIDES:
        raise InputError(f"side must be one of {SIDES}, got {side!r}")
    approx = bool(data.get("approx", False))
    if not isinstance(raw, Iterable) or isinstance(raw, (str, bytes)):
        raise InputError("'coeffs' must be a list of [label, value] pairs")
    coeffs: Dict[str, Weight] = {}
    for item in raw:
        try:
            label, value = item
        except (TypeError, ValueError):
            raise InputError(f"bad coefficient entry {item!r}") from None
        if label in coeffs:
            raise InputError(f"duplicate component {label!r}")
        coeffs[str(label)] = parse_coefficient(value, approx)
    return BusemannSpec(host, side, coeffs, approx=approx)


def busemann_spec_to_json(spec: BusemannSpec) -> dict:
    out = {
        "side": spec.side,
        "coeffs": [[lab, format_coefficient(spec.coeffs[lab])] for lab in spec.support],
    }
    if spec.approx:
        out["approx"] = True
    return out
