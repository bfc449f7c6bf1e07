"""Exception classes, grouped by how the command line reports them.

Input problems (malformed files, bad permutation data, degenerate weights,
bad configuration) raise :class:`InputError` subclasses; hypothesis failures
(the given curve systems cannot span a geodesic) raise
:class:`HypothesisError` subclasses; numerical non-convergence and violated
certificates get their own classes.  ``cli`` maps these to exit codes
2 / 3 / 4 / 5 respectively.
"""


class InputError(ValueError):
    """Malformed input data or configuration."""


class InvalidOrigami(InputError):
    """Permutation data does not describe a connected square-tiled surface."""


class ComplexityError(InvalidOrigami):
    """The surface is a torus or sphere cover of genus < 2."""


class SideMismatch(InputError):
    """Curve families on incompatible sides for the requested pairing."""


class HostMismatch(InputError):
    """Objects attached to different origamis were combined."""


class HypothesisError(Exception):
    """The mathematical hypotheses of the construction fail for this input."""


class NotFillingError(HypothesisError):
    """The two transverse families do not jointly fill the surface."""


class NotPrimitiveError(HypothesisError):
    """The coupling matrix is not primitive (zero line or disconnected)."""


class NoConvergenceError(Exception):
    """Iteration budget exhausted before the residual tolerance was met."""

    def __init__(self, message, iterations=None, residual=None):
        super().__init__(message)
        self.iterations = iterations
        self.residual = residual


class CertificationError(Exception):
    """An internal cross-check that must hold mathematically has failed."""
