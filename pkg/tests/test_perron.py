"""Eigen-solver tests, anchored by an exact rational oracle.

The oracle never touches floating point on the way to its bracket: it
forms the characteristic polynomial with integer arithmetic, drives a
rational power iteration until the Rayleigh quotient passes the
second-largest root, then bisects with Fractions.  Everything the power
iteration produces is then compared against that.
"""

import math
import random
from fractions import Fraction

import numpy as np
import pytest

from origeo.errors import (
    InputError,
    NoConvergenceError,
    NotPrimitiveError,
)
from origeo.perron import gram, is_primitive, perron_solve, wielandt_oracle
from origeo.sampling import random_matrix


def _charpoly(t):
    """Monic characteristic polynomial coefficients, exact, k <= 3."""
    k = len(t)
    t = [[Fraction(x) for x in row] for row in t]
    if k == 1:
        return [-t[0][0], Fraction(1)]
    if k == 2:
        tr = t[0][0] + t[1][1]
        det = t[0][0] * t[1][1] - t[0][1] * t[1][0]
        return [det, -tr, Fraction(1)]
    if k == 3:
        a, b, c = t[0]
        d, e, f = t[1]
        g, h, i = t[2]
        tr = a + e + i
        minors = (e * i - f * h) + (a * i - c * g) + (a * e - b * d)
        det = a * (e * i - f * h) - b * (d * i - f * g) + c * (d * h - e * g)
        return [-det, minors, -tr, Fraction(1)]
    raise ValueError("oracle only handles k <= 3")


def _poly_at(coeffs, x):
    acc = Fraction(0)
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


def exact_top_eigenvalue(t, bits=60):
    """Largest eigenvalue of a small symmetric integer/rational matrix."""
    k = len(t)
    t = [[Fraction(x) for x in row] for row in t]
    p = _charpoly(t)
    v = [Fraction(1)] * k
    lo = None
    for _ in range(300):
        w = [sum(t[i][j] * v[j] for j in range(k)) for i in range(k)]
        num = sum(w[i] * sum(t[i][j] * w[j] for j in range(k)) for i in range(k))
        den = sum(x * x for x in w)
        if den == 0:
            break
        r = num / den
        if _poly_at(p, r) <= 0:
            lo = r
            break
        big = max(abs(x) for x in w)
        v = [x / big for x in w]
    assert lo is not None, "rational power iteration failed to pass lambda_2"
    hi = Fraction(max(sum(row) for row in t)) + 1
    assert _poly_at(p, hi) > 0
    for _ in range(bits + 20):
        mid = (lo + hi) / 2
        if _poly_at(p, mid) > 0:
            hi = mid
        else:
            lo = mid
        if hi - lo < Fraction(1, 10**18):
            break
    return (lo + hi) / 2


def brute_force_primitive(m):
    """Two-sided boolean-power primitivity, written from scratch.

    The coupling is primitive when some power of the row-side product
    M M^T and some power of the column-side product M^T M are entrywise
    positive, with Wielandt's exponent bound as the cutoff.
    """

    def bool_product(a, b):
        rows, inner, cols = len(a), len(b), len(b[0])
        return [
            [any(a[i][t] and b[t][j] for t in range(inner)) for j in range(cols)]
            for i in range(rows)
        ]

    def all_positive_power(sq):
        k = len(sq)
        cutoff = (k - 1) ** 2 + 1
        acc = sq
        for _ in range(cutoff):
            if all(all(row) for row in acc):
                return True
            acc = bool_product(acc, sq)
        return all(all(row) for row in acc)

    support = [[bool(x) for x in row] for row in m]
    transpose = [list(col) for col in zip(*support)]
    return all_positive_power(
        bool_product(support, transpose)
    ) and all_positive_power(bool_product(transpose, support))


# ---------------------------------------------------------------------------


def test_golden_two_by_two_against_closed_form():
    res = perron_solve(((2, 1), (1, 1)))
    assert abs(res.eigenvalue - (3 + math.sqrt(5)) / 2) < 1e-10
    phi = (1 + math.sqrt(5)) / 2
    expect = (phi / (1 + phi), 1 / (1 + phi))
    assert max(abs(a - b) for a, b in zip(res.vector, expect)) < 1e-8
    assert res.residual <= 1e-12
    assert abs(sum(res.vector) - 1.0) < 1e-14


def test_exact_oracle_agrees_with_closed_form():
    lam = exact_top_eigenvalue(((2, 1), (1, 1)))
    assert abs(float(lam) - (3 + math.sqrt(5)) / 2) < 1e-15


@pytest.mark.parametrize("seed", range(20))
def test_power_iteration_vs_exact_charpoly_oracle(seed):
    rng = random.Random(f"charpoly:{seed}")
    while True:
        m = random_matrix(rng, rng.randint(1, 3), rng.randint(1, 3))
        t = gram(m)
        if is_primitive(m) and all(t[i][i] > 0 for i in range(len(t))):
            break
    res = perron_solve(t)
    lam = exact_top_eigenvalue(t)
    assert abs(res.eigenvalue - float(lam)) < 1e-10 * max(1.0, float(lam))


@pytest.mark.parametrize("seed", range(8))
def test_power_iteration_vs_dense_eigensolver(seed):
    rng = random.Random(f"dense:{seed}")
    while True:
        m = random_matrix(rng, rng.randint(1, 4), rng.randint(1, 4))
        t = gram(m)
        if is_primitive(m) and all(t[i][i] > 0 for i in range(len(t))):
            break
    res = perron_solve(t)
    top = float(np.linalg.eigvalsh(np.array(t, dtype=float))[-1])
    assert abs(res.eigenvalue - top) < 1e-10 * max(1.0, top)


def test_different_seeds_land_on_one_ray():
    t = gram(((1, 2, 0), (0, 1, 1), (3, 0, 1)))
    a = perron_solve(t, seed=1)
    b = perron_solve(t, seed=2)
    assert max(abs(x - y) for x, y in zip(a.vector, b.vector)) < 1e-8


def test_gram_is_exact_on_rationals():
    m = ((Fraction(1, 2), Fraction(3)), (Fraction(2), Fraction(1, 3)))
    t = gram(m)
    assert t[0][0] == Fraction(1, 4) + 9
    assert t[0][1] == t[1][0] == Fraction(1) + Fraction(1)
    assert isinstance(t[0][0], Fraction)


def test_primitivity_against_brute_force():
    rng = random.Random("primitivity")
    for _ in range(300):
        m = random_matrix(rng, rng.randint(1, 5), rng.randint(1, 5))
        assert is_primitive(m) == brute_force_primitive(m)


def test_two_sided_oracle_matches_support_test():
    rng = random.Random("wielandt")
    for _ in range(200):
        m = random_matrix(rng, rng.randint(1, 5), rng.randint(1, 5))
        assert wielandt_oracle(m) == is_primitive(m)


def test_zero_column_is_not_primitive():
    m = ((1, 0), (1, 0))
    assert not is_primitive(m)
    assert not wielandt_oracle(m)
    assert not brute_force_primitive(m)


def test_periodic_matrix_refused():
    with pytest.raises(NotPrimitiveError):
        perron_solve(((0, 1), (1, 0)))


def test_malformed_matrices_refused():
    with pytest.raises(InputError):
        perron_solve(((1, 2), (3,)))
    with pytest.raises(InputError):
        perron_solve(((1, 2), (3, 4)))  # not symmetric
    with pytest.raises(InputError):
        perron_solve(((-1, 0), (0, 1)))
    with pytest.raises(InputError):
        perron_solve(())


def test_unreachable_tolerance_raises_no_convergence():
    with pytest.raises(NoConvergenceError) as err:
        perron_solve(((2, 1), (1, 1)), tol=1e-30)
    assert err.value.iterations > 0
    assert err.value.residual > 0


def test_result_serialization_shape():
    res = perron_solve(((2, 1), (1, 1)))
    data = res.to_json()
    assert set(data) >= {"lambda", "x", "residual", "iterations"}
    assert isinstance(data["lambda"], str)
    assert all(isinstance(s, str) for s in data["x"])
