"""Exception types shared across the package."""


class GeometryError(ValueError):
    pass


class PointOutside(GeometryError):
    pass


class SegmentOutside(GeometryError):
    pass


class ObjectOutside(GeometryError):
    pass


class PointOnDiagonal(GeometryError):
    pass


class GeneralPositionViolation(GeometryError):
    pass


class ArityMismatch(GeometryError):
    pass


class SegmentNotSeparated(GeometryError):
    pass


class RayNotExiting(GeometryError):
    pass


class PreconditionViolated(GeometryError):
    pass


class NotRelatedDiagonals(GeometryError):
    pass


class IncompatibleStructure(GeometryError):
    pass
