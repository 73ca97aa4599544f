"""Exception hierarchy for the convex-body toolkit."""


class GeometryError(Exception):
    """Base class for every error raised by this package"""


class UnboundedBody(GeometryError):
    pass


class EmptyInterior(GeometryError):
    pass


class OriginNotInterior(GeometryError):
    pass


class DimensionTooLarge(GeometryError):
    pass


class DegenerateInput(GeometryError):
    pass


class NoConvergence(GeometryError):
    pass


class NotInJohnPosition(GeometryError):
    pass


class NotInLoewnerPosition(GeometryError):
    pass


class RepresentationUnavailable(GeometryError):
    pass


class ParameterOutOfRange(GeometryError):
    pass


class DomainError(GeometryError):
    pass


class ContainmentViolated(GeometryError):
    pass


class WrongDimension(GeometryError):
    pass


class GenerationFailed(GeometryError):
    pass


class BodyFormatError(GeometryError):
    """Malformed body/report input; `field` names the offending key"""

    def __init__(self, field, message):
        super().__init__(f"{field}: {message}")
        self.field = field
        self.message = message
