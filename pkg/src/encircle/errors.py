"""Exception types shared across the package."""

from __future__ import annotations


class EncircleError(Exception):
    """Base class for all errors raised by this package."""


class DegenerateHull(EncircleError):
    """All supplied points are collinear (or too few to span a hull)."""


class RedundantPursuer(EncircleError):
    """One or more pursuers do not contribute a vertex to the hull."""

    def __init__(self, indices: tuple[int, ...]):
        self.indices = indices
        super().__init__(f"redundant pursuer(s): {', '.join(map(str, indices))}")


class DegenerateEdge(EncircleError):
    """Two consecutive hull vertices coincide."""


class ZeroDistance(EncircleError):
    """A heading toward a coincident point was requested."""


class SpeedRatioOutOfRange(EncircleError):
    """Evader/pursuer speed ratio outside the admissible range."""


class InvalidState(EncircleError):
    """A state argument violates a documented precondition."""


class NotInitiallyEncircled(EncircleError):
    """Episode start state does not strictly encircle the evader."""


class NumericalDivergence(EncircleError):
    """A non-finite value appeared in the simulation state."""


class ParseError(EncircleError):
    """Scenario file could not be read or decoded."""


class ValidationError(EncircleError):
    """Scenario contents violate an invariant."""


class ProtocolError(EncircleError):
    """Malformed or out-of-order steering message."""
