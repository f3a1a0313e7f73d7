"""Exception types shared across the package."""


class CuspwindError(Exception):
    """Base class for all library errors."""


# --- mobius ---------------------------------------------------------------

class PoleAtPoint(CuspwindError):
    """Derivative requested at the pole of the transformation."""


class InfiniteArgument(CuspwindError):
    """Finite-chart derivative requested at the point at infinity."""


class DegenerateArc(CuspwindError):
    """Arc above the horizontal line is empty (h >= r)."""


# --- fuchsian -------------------------------------------------------------

class GroupValidationError(CuspwindError):
    """Base class for presentation validation failures."""


class NotUnitDeterminant(GroupValidationError):
    pass


class NoParabolic(GroupValidationError):
    pass


class Elementary(GroupValidationError):
    pass


class NotFree(GroupValidationError):
    """Interval disjointness or the Markov covering failed."""


class NotParabolic(GroupValidationError):
    """Horocircle requested for a non-parabolic generator."""


# --- coding ---------------------------------------------------------------

class OutsideAllIntervals(CuspwindError):
    """Boundary point is on an interval endpoint or outside the coding domain."""


class CodingStalled(CuspwindError):
    """Orbit hit an interval endpoint before the requested number of blocks."""


class GeodesicMissesHorocircle(CuspwindError):
    """Arc decomposition could not locate a feature crossing.

    Signals an invalid presentation or a too-short prefix; the offending
    block index is carried in ``block_index``.
    """

    def __init__(self, message, block_index=None):
        super().__init__(message)
        self.block_index = block_index


# --- gdms -----------------------------------------------------------------

class NotIrreducible(CuspwindError):
    """Power iteration cannot converge to a simple dominant value."""


class NonConvergence(CuspwindError):
    """Power iteration did not converge within the iteration budget."""


class NoSignChange(CuspwindError):
    """Root bracketing for the pressure equation failed."""


# --- spectrum -------------------------------------------------------------

class NotConvex(CuspwindError):
    """Sampled function violates convexity above the noise floor."""


class InsufficientGridReach(CuspwindError):
    """Spectrum grid does not reach close enough to the endpoints."""
