"""Self-check suites: re-derive invariants on randomized inputs.

Each suite replays deterministically from a seed (sub-seeded per suite, so
adding a suite never shifts another's random stream) and returns a small
report dict; ``run_suites`` assembles them in a fixed order.  These are
consistency audits between independently computed structures — cone-angle
walks against cycle counts, power iteration against dense eigensolvers,
reachability against matrix powers — not re-runs of the same code path.
"""

from __future__ import annotations

import math
import random
from typing import List, Optional, Sequence

import numpy as np

from . import sampling
from .errors import InputError
from .geodesic import optimal_geodesic
from .horo import (
    busemann_interval,
    minsky_audit,
    miyachi_intersection,
    psi_foliation,
    psi_interior,
)
from .multicurve import HORIZONTAL, VERTICAL, core_curve, intersection
from .origami import catalog
from .perron import gram, is_primitive, perron_solve, wielandt_oracle
from .surface import (
    curve_ext_bounds,
    distance_interval,
    ext_interval,
    foliation_ext,
    qc_upper,
)

_MAX_FAILURES = 10


def _suite_rng(seed: int, name: str) -> random.Random:
    return random.Random(f"{seed}:{name}")


def _report(name: str, cases: int, failures: List[str]) -> dict:
    return {
        "name": name,
        "cases": cases,
        "failures": failures[:_MAX_FAILURES],
        "status": "pass" if not failures else "fail",
    }


def check_gauss_bonnet(seed: int) -> dict:
    """Cone angles vs genus, and matrix partitions vs cylinder lengths."""
    rng = _suite_rng(seed, "gauss-bonnet")
    failures: List[str] = []
    cases = 0

    def audit(o, tag):
        nonlocal cases
        cases += 1
        orders = o.cone_orders()
        if sum(m - 1 for m in orders) != 2 * o.genus() - 2:
            failures.append(f"{tag}: cone angles break the genus count")
        if sum(orders) != o.n:
            failures.append(f"{tag}: cone orders do not partition the cells")
        m = o.intersection_matrix()
        for cyl, row in zip(o.cylinders(HORIZONTAL), m.entries):
            if sum(row) != cyl.length:
                failures.append(f"{tag}: row sum mismatch on {cyl.label}")
        for j, cyl in enumerate(o.cylinders(VERTICAL)):
            if sum(row[j] for row in m.entries) != cyl.length:
                failures.append(f"{tag}: column sum mismatch on {cyl.label}")
        if m.total() != o.n:
            failures.append(f"{tag}: matrix total is not the cell count")

    for name in catalog():
        from .origami import builtin

        audit(builtin(name), name)
    for i in range(100):
        n = rng.randint(2, 10)
        h, v = sampling.random_transitive_pair(rng, n)
        from .origami import Origami

        audit(Origami(n, h, v), f"random[{i}]")
    return _report("gauss-bonnet", cases, failures)


def check_perron_oracle(seed: int) -> dict:
    """Power iteration against a dense symmetric eigensolver."""
    rng = _suite_rng(seed, "perron-oracle")
    failures: List[str] = []
    cases = 0

    golden = ((2, 1), (1, 1))
    res = perron_solve(golden)
    cases += 1
    if abs(res.eigenvalue - (3 + math.sqrt(5)) / 2) > 1e-10:
        failures.append("golden 2x2 eigenvalue off")

    produced = 0
    while produced < 30:
        m = sampling.random_matrix(rng, rng.randint(1, 4), rng.randint(1, 4))
        t = gram(m)
        if not is_primitive(m) or any(t[i][i] == 0 for i in range(len(t))):
            continue
        produced += 1
        cases += 1
        res = perron_solve(t)
        dense = np.linalg.eigvalsh(np.array(t, dtype=float))
        top = float(dense[-1])
        if abs(res.eigenvalue - top) > 1e-10 * max(1.0, top):
            failures.append(
                f"eigenvalue {res.eigenvalue!r} vs dense {top!r} on case {produced}"
            )
        w, vecs = np.linalg.eigh(np.array(t, dtype=float))
        lead = vecs[:, -1]
        lead = np.abs(lead) / np.sum(np.abs(lead))
        if max(abs(a - b) for a, b in zip(res.vector, lead)) > 1e-8:
            failures.append(f"eigenvector ray off on case {produced}")
    return _report("perron-oracle", cases, failures)


def check_primitivity_oracle(seed: int) -> dict:
    """Support-graph primitivity test against two-sided boolean powers."""
    rng = _suite_rng(seed, "primitivity-oracle")
    failures: List[str] = []
    cases = 0
    for i in range(500):
        m = sampling.random_matrix(rng, rng.randint(1, 5), rng.randint(1, 5))
        cases += 1
        fast = is_primitive(m)
        slow = wielandt_oracle(m)
        if fast != slow:
            failures.append(f"case {i}: is_primitive={fast} but powers say {slow}")
    return _report("primitivity-oracle", cases, failures)


def check_minsky(seed: int) -> dict:
    """Core-pair product inequality plus the exact defining-pair identity."""
    rng = _suite_rng(seed, "minsky")
    failures: List[str] = []
    cases = 0
    for i in range(100):
        o = sampling.random_origami(rng, (3, 8))
        x = sampling.random_surface(rng, o)
        cases += 1
        rep = minsky_audit(x)
        if rep["status"] != "pass":
            failures.append(f"surface {i}: {rep['definingEquality']['status']}")
    return _report("minsky", cases, failures)


def _golden_line():
    from fractions import Fraction

    from .multicurve import BusemannSpec
    from .origami import builtin

    o = builtin("l-2-2")
    xi = BusemannSpec(o, VERTICAL, {"B1": Fraction(1), "B2": Fraction(1)})
    eta = BusemannSpec(o, HORIZONTAL, {"A1": Fraction(1), "A2": Fraction(1)})
    return optimal_geodesic(xi, eta)


def check_sandwich(seed: int) -> dict:
    """Horofunction enclosures bracket correctly off the line.

    At jittered points Z near a line G: the foliation value's lower end
    must not exceed the Busemann enclosure's upper end, enclosures at
    nearby points must satisfy the 1-Lipschitz bound interval-consistently,
    and the interior horofunction normalized at Z itself must contain 0.
    """
    rng = _suite_rng(seed, "sandwich")
    failures: List[str] = []
    cases = 0
    lines = [_golden_line()]
    for _ in range(2):
        o, xi, eta = sampling.random_full_instance(rng)
        lines.append(optimal_geodesic(xi, eta))
    per_line = [34, 33, 33]
    for line, count in zip(lines, per_line):
        base = line.base_surface
        f_v = line.vertical_foliation
        prev = None
        for i in range(count):
            t = rng.uniform(-2.0, 2.0)
            z, _, _ = sampling.jittered_surface(rng, line.point_at(t), 0.25)
            cases += 1
            psi = psi_foliation(f_v, z, base)
            bus = busemann_interval(line, z, horizon=7.0)
            if psi.value.lo > bus.value.hi + 1e-9:
                failures.append(f"sandwich inverted at jitter {i}")
            zero = psi_interior(z, base, base)
            if not (zero.value.lo <= 0.0 <= zero.value.hi):
                failures.append(f"interior value at basepoint misses 0 at {i}")
            if prev is not None:
                d_hi = distance_interval(prev[0], z).hi
                for a, b in ((prev[1], psi), (prev[2], bus)):
                    if (
                        a.value.lo - b.value.hi > d_hi + 1e-9
                        or b.value.lo - a.value.hi > d_hi + 1e-9
                    ):
                        failures.append(f"1-Lipschitz bound broken at {i}")
            prev = (z, psi, bus)
    return _report("sandwich", cases, failures)


def check_walsh(seed: int) -> dict:
    """Limit consistency: constructed rays reproduce their target specs."""
    rng = _suite_rng(seed, "walsh-consistency")
    failures: List[str] = []
    cases = 0

    line = _golden_line()
    cases += 1
    if min(line.walsh_forward_cosine, line.walsh_backward_cosine) <= 1 - 1e-9:
        failures.append("golden instance cosine below threshold")
    rev = line.reversed()
    cases += 1
    if rev.forward_limit() != line.backward_limit():
        failures.append("time reversal is not bit-exact on the golden line")

    for i in range(50):
        o, xi, eta = sampling.random_primitive_instance(rng)
        cases += 1
        g = optimal_geodesic(xi, eta)
        if min(g.walsh_forward_cosine, g.walsh_backward_cosine) <= 1 - 1e-9:
            failures.append(
                f"instance {i} (n={o.n}): cosines "
                f"{g.walsh_forward_cosine!r}/{g.walsh_backward_cosine!r}"
            )
    return _report("walsh-consistency", cases, failures)


def check_interval_soundness(seed: int) -> dict:
    """Exact quantities always land inside the intervals produced for them."""
    rng = _suite_rng(seed, "interval-soundness")
    failures: List[str] = []
    cases = 0

    for i in range(40):
        o = sampling.random_origami(rng, (3, 8))
        x = sampling.random_surface(rng, o)
        r = sampling.random_fraction(rng)
        cases += 1
        exact = foliation_ext(x, VERTICAL, r)
        scaled = x.defining_foliation(VERTICAL).scaled(r)
        iv = ext_interval(x, scaled)
        if not (iv.lo <= exact <= iv.hi):
            failures.append(f"scaled defining foliation escapes its interval [{i}]")
        for side in (HORIZONTAL, VERTICAL):
            for cyl in o.cylinders(side):
                bounds = curve_ext_bounds(x, core_curve(o, side, cyl.label))
                if bounds.lo > bounds.hi:
                    failures.append(f"core bounds inverted on {cyl.label} [{i}]")
        y = sampling.random_surface(rng, o)
        if qc_upper(x, y) != qc_upper(y, x):
            failures.append(f"upper distance bound not symmetric [{i}]")
        d = distance_interval(x, y)
        if d.lo < 0 or d.lo > d.hi:
            failures.append(f"distance interval malformed [{i}]")
        if distance_interval(x, x).hi != 0.0:
            failures.append(f"self distance not zero [{i}]")

    line = _golden_line()
    area = intersection(line.horizontal_foliation, line.vertical_foliation)
    for i in range(20):
        s, t = rng.uniform(-3, 3), rng.uniform(-3, 3)
        cases += 1
        ps, pt = line.point_at(s), line.point_at(t)
        d = distance_interval(ps, pt)
        if not d.contains(abs(t - s), tol=1e-12):
            failures.append(f"flow distance escapes interval at ({s:.3f},{t:.3f})")
        if abs(float(pt.area()) - float(area)) > 1e-9 * float(area):
            failures.append(f"flow does not preserve area at t={t:.3f}")
        mi = miyachi_intersection(line.point_at(-abs(s)), line.point_at(abs(t)),
                                  line.base_surface)
        if not mi.contains(1.0, tol=1e-9):
            failures.append(f"intersection proxy misses 1 at ({s:.3f},{t:.3f})")
    return _report("interval-soundness", cases, failures)


_SUITES: Sequence[tuple] = (
    ("gauss-bonnet", check_gauss_bonnet),
    ("perron-oracle", check_perron_oracle),
    ("primitivity-oracle", check_primitivity_oracle),
    ("minsky", check_minsky),
    ("sandwich", check_sandwich),
    ("walsh-consistency", check_walsh),
    ("interval-soundness", check_interval_soundness),
)


def suite_names() -> List[str]:
    return [name for name, _ in _SUITES]


def run_suites(seed: int = 0, names: Optional[Sequence[str]] = None) -> dict:
    """Run the selected suites (substring match, e.g. "perron") in order."""
    selected: List[tuple] = []
    if names:
        for token in names:
            matches = [(n, f) for n, f in _SUITES if token in n]
            if not matches:
                raise InputError(
                    f"no check suite matches {token!r}; known: "
                    + ", ".join(suite_names())
                )
            for pair in matches:
                if pair not in selected:
                    selected.append(pair)
        selected.sort(key=lambda pair: suite_names().index(pair[0]))
    else:
        selected = list(_SUITES)
    suites = [func(seed) for _, func in selected]
    return {
        "seed": seed,
        "suites": suites,
        "status": "pass" if all(s["status"] == "pass" for s in suites) else "fail",
    }
