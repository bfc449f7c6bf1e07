"""Closed intervals used to report certified enclosures.

Endpoints may be exact (``int``/``Fraction``) or floating point; mixed
comparisons are well defined in Python, so exact inputs keep exact endpoints
and everything downstream of an eigenvector is a float.  An interval is the
statement "the true value lies in [lo, hi]" — operations here only ever widen
soundly (interval difference etc.), never tighten.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Union

Number = Union[int, float, Fraction]


@dataclass(frozen=True)
class ValueInterval:
    """Certified enclosure [lo, hi] of a nonnegative quantity."""

    lo: Number
    hi: Number

    def __post_init__(self):
        if self.hi < self.lo:
            raise ValueError(f"empty interval [{self.lo}, {self.hi}]")

    @property
    def width(self) -> Number:
        return self.hi - self.lo

    def contains(self, value: Number, tol: Number = 0) -> bool:
        return self.lo - tol <= value <= self.hi + tol

    def minus(self, other: "ValueInterval") -> "ValueInterval":
        # enclosure of {a - b : a in self, b in other}
        return ValueInterval(self.lo - other.hi, self.hi - other.lo)

    def scale(self, factor: Number) -> "ValueInterval":
        if factor < 0:
            return ValueInterval(self.hi * factor, self.lo * factor)
        return ValueInterval(self.lo * factor, self.hi * factor)

    @staticmethod
    def exact(value: Number) -> "ValueInterval":
        return ValueInterval(value, value)


@dataclass(frozen=True)
class DistanceInterval:
    """Certified enclosure of a Teichmueller distance; lo is clamped at 0."""

    lo: Number
    hi: Number

    def __post_init__(self):
        if self.lo < 0:
            object.__setattr__(self, "lo", 0)
        if self.hi < self.lo:
            raise ValueError(f"empty distance interval [{self.lo}, {self.hi}]")

    @property
    def width(self) -> Number:
        return self.hi - self.lo

    def contains(self, value: Number, tol: Number = 0) -> bool:
        return self.lo - tol <= value <= self.hi + tol

    def as_value(self) -> ValueInterval:
        return ValueInterval(self.lo, self.hi)
