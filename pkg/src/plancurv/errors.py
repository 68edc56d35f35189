"""Exception types shared across the package."""


class PlancurvError(Exception):
    """Base class for all package errors."""


class OutOfDomain(PlancurvError):
    """Evaluation point lies outside the function's interval."""


class DomainMismatch(PlancurvError):
    """Operands are defined on different intervals."""


class EmptyInput(PlancurvError):
    """An operation received an empty collection."""


class NotUnit(PlancurvError):
    """A direction vector is not of unit length."""


class DegenerateSegment(PlancurvError):
    """A polyline contains a (near-)zero-length segment."""


class NotSimple(PlancurvError):
    """A polyline self-intersects."""


class NotClosed(PlancurvError):
    """A closed polyline was required."""


class InvalidNesting(PlancurvError):
    """Region loops overlap or are nested inconsistently."""


class InvalidRegion(PlancurvError):
    """A polygonal region failed validation."""


class DegenerateContact(PlancurvError):
    """Scene pieces touch tangentially below the genericity tolerance."""


class TouchingHalfplane(PlancurvError):
    """A slicing halfplane grazes the scene boundary."""


class NotConvex(PlancurvError):
    """A convex piece was required."""


class NotBoundaryPoint(PlancurvError):
    """The query point does not lie on the scene boundary."""


class BadBounds(PlancurvError):
    """Slab bounds are inconsistent (upper below lower, or Lipschitz bound too small)."""


class WindowTooSmall(PlancurvError):
    """The motion sampling window does not cover all intersecting placements."""


class SingularCalibration(PlancurvError):
    """The calibration shapes do not determine the kinematic constants."""


class SceneFormatError(PlancurvError):
    """A scene file failed schema validation."""
