r"""Certified leading eigendata for nonnegative coupling matrices.

The geodesic construction couples the two transverse curve families through
a nonnegative matrix ``M`` and needs the leading eigenpair of the symmetric
Gram matrix ``T = M M^T``.  ``T`` is primitive — positive diagonal and
connected support — exactly when ``M`` has no zero row and row-connectivity,
which for our inputs is the filling condition; a primitive symmetric
nonnegative matrix has a simple leading eigenvalue with a strictly positive
eigenvector, which is what makes the construction well-posed.

:func:`perron_solve` runs plain power iteration, stops only when the
residual ``||Tx - lambda x||_inf`` actually meets the tolerance, and re-runs
from several random starting vectors: agreement of all runs on one ray is
reported as the simplicity certificate (a non-simple leading eigenvalue
would leave different starts on different rays).

:func:`wielandt_oracle` is the brute-force characterization (some power of
the Gram matrix is entrywise positive, with the classical exponent bound
``(k-1)^2 + 1``), used by the self-check suites against
:func:`is_primitive`.  Note the oracle must look at *both* ``M M^T`` and
``M^T M``: a zero column of ``M`` leaves ``M M^T`` untouched but breaks the
transpose-side system, and such inputs are not primitive for our purposes.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Sequence, Tuple, Union

import numpy as np

from .errors import CertificationError, InputError, NoConvergenceError, NotPrimitiveError
from .multicurve import IntersectionMatrix

Matrix = Union[IntersectionMatrix, Sequence[Sequence[Union[int, float]]]]

DEFAULT_TOL = 1e-12
DEFAULT_MAX_ITERS = 10**6
DEFAULT_SEED_COUNT = 8
_STAGNATION_WINDOW = 2000


def _rows(matrix: Matrix) -> Tuple[Tuple, ...]:
    if isinstance(matrix, IntersectionMatrix):
        return matrix.entries
    rows = tuple(tuple(row) for row in matrix)
    if not rows or not rows[0]:
        raise InputError("matrix must be nonempty")
    if any(len(r) != len(rows[0]) for r in rows):
        raise InputError("ragged matrix")
    return rows


def gram(matrix: Matrix) -> Tuple[Tuple, ...]:
    """The symmetric product M·M^T, exact for exact entries.

    Entry (i, i') sums the products of rows i and i' and is computed once
    per unordered pair, so the result is symmetric entry-for-entry even in
    floating point.
    """
    rows = _rows(matrix)
    k = len(rows)
    out = [[None] * k for _ in range(k)]
    for i in range(k):
        for j in range(i, k):
            s = sum(a * b for a, b in zip(rows[i], rows[j]))
            out[i][j] = s
            out[j][i] = s
    return tuple(tuple(row) for row in out)


def is_primitive(matrix: Matrix) -> bool:
    """No zero row, no zero column, connected bipartite support graph.

    This is the shape condition under which the two-sided eigensystem
    closes: every component of either family meets the other family, and
    the support graph does not split into independent blocks.
    """
    rows = _rows(matrix)
    k, l = len(rows), len(rows[0])
    if any(all(x == 0 for x in row) for row in rows):
        return False
    if any(all(rows[i][j] == 0 for i in range(k)) for j in range(l)):
        return False
    seen_rows = {0}
    seen_cols = set()
    frontier = [("r", 0)]
    while frontier:
        kind, idx = frontier.pop()
        if kind == "r":
            for j in range(l):
                if j not in seen_cols and rows[idx][j] != 0:
                    seen_cols.add(j)
                    frontier.append(("c", j))
        else:
            for i in range(k):
                if i not in seen_rows and rows[i][idx] != 0:
                    seen_rows.add(i)
                    frontier.append(("r", i))
    return len(seen_rows) == k and len(seen_cols) == l


def _some_power_positive(t: Sequence[Sequence[int]]) -> bool:
    k = len(t)
    bound = (k - 1) ** 2 + 1
    # boolean (support) arithmetic is enough for positivity of powers
    cur = [[bool(x) for x in row] for row in t]
    base = [row[:] for row in cur]
    for _ in range(bound):
        if all(all(row) for row in cur):
            return True
        cur = [
            [any(cur[i][m] and base[m][j] for m in range(k)) for j in range(k)]
            for i in range(k)
        ]
    return all(all(row) for row in cur)


def wielandt_oracle(matrix: Matrix) -> bool:
    """Brute-force primitivity: both Gram matrices have a positive power."""
    rows = _rows(matrix)
    cols = tuple(zip(*rows))
    return _some_power_positive(gram(rows)) and _some_power_positive(gram(cols))


@dataclass(frozen=True)
class PerronResult:
    """Leading eigenpair with an a-posteriori residual certificate.

    ``vector`` is l1-normalized and strictly positive; ``residual`` is the
    infinity norm of T·x − lambda·x at the returned pair and is guaranteed
    not to exceed the tolerance the solve was run with.
    """

    eigenvalue: float
    vector: Tuple[float, ...]
    residual: float
    iterations: int

    def to_json(self) -> dict:
        return {
            "lambda": f"{self.eigenvalue:.15g}",
            "x": [f"{v:.15g}" for v in self.vector],
            "residual": self.residual,
            "iterations": self.iterations,
        }


def _check_symmetric_primitive(t: np.ndarray) -> None:
    if t.ndim != 2 or t.size == 0:
        raise InputError("matrix must be a nonempty square")
    k, l = t.shape
    if k != l:
        raise InputError(f"matrix must be square, got {k}x{l}")
    if np.any(t < 0):
        raise InputError("matrix must be entrywise nonnegative")
    if not np.array_equal(t, t.T):
        raise InputError("matrix must be symmetric (use gram())")
    if np.any(np.diag(t) == 0) or not is_primitive(t.tolist()):
        raise NotPrimitiveError(
            "matrix is not primitive: zero line or disconnected support"
        )


def _power_iteration(
    t: np.ndarray, x0: np.ndarray, tol: float, max_iters: int
) -> Tuple[float, np.ndarray, float, int]:
    x = x0 / x0.sum()
    y = t @ x
    best_residual = np.inf
    best_at = 0
    for it in range(1, max_iters + 1):
        lam = y.sum()  # l1 norm of the positive image
        xn = y / lam
        yn = t @ xn
        residual = float(np.max(np.abs(yn - lam * xn)))
        diff = float(np.max(np.abs(xn - x)))
        if residual <= tol and diff <= tol:
            return float(lam), xn, residual, it
        if residual < best_residual * (1 - 1e-3):
            best_residual = residual
            best_at = it
        elif it - best_at > _STAGNATION_WINDOW:
            raise NoConvergenceError(
                f"residual stagnated at {residual:.3g} (> tol {tol:.3g}) "
                f"after {it} iterations",
                iterations=it,
                residual=residual,
            )
        x, y = xn, yn
    raise NoConvergenceError(
        f"no convergence to tol {tol:.3g} within {max_iters} iterations",
        iterations=max_iters,
        residual=residual,
    )


def perron_solve(
    t: Matrix,
    tol: float = DEFAULT_TOL,
    max_iters: int = DEFAULT_MAX_ITERS,
    seed_count: int = DEFAULT_SEED_COUNT,
    seed: int = 0,
) -> PerronResult:
    """Leading eigenpair of a primitive symmetric nonnegative matrix.

    Power iteration from ``seed_count`` random positive starts; every run
    must converge to residual <= tol and all runs must agree on one ray
    within 10*tol (simplicity certificate — raises CertificationError
    otherwise).  Raises NotPrimitiveError without iterating when the matrix
    cannot have a unique positive eigenray, and NoConvergenceError when the
    tolerance is out of reach for the iteration budget.
    """
    if isinstance(t, IntersectionMatrix):
        t = t.entries
    rows = [tuple(row) for row in t]
    if any(len(row) != len(rows) for row in rows):
        raise InputError("matrix must be square")
    arr = np.array([[float(v) for v in row] for row in rows], dtype=float)
    _check_symmetric_primitive(arr)
    if not (tol > 0):
        raise InputError(f"tolerance must be positive, got {tol!r}")
    if seed_count < 1:
        raise InputError("need at least one starting vector")
    k = arr.shape[0]
    rng = random.Random(seed)
    runs = []
    for _ in range(seed_count):
        x0 = np.array([0.5 + rng.random() for _ in range(k)])
        runs.append(_power_iteration(arr, x0, tol, max_iters))
    lam0, x0_, res0, iters0 = runs[0]
    for lam, x, _, _ in runs[1:]:
        if np.max(np.abs(x - x0_)) > 10 * tol or abs(lam - lam0) > 10 * tol * max(
            1.0, lam0
        ):
            raise CertificationError(
                "restarted iterations disagree; leading eigenvalue "
                "may not be simple"
            )
    return PerronResult(lam0, tuple(float(v) for v in x0_), res0, iters0)
