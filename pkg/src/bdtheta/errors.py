"""Exception hierarchy shared by every module of the package."""


class BDThetaError(Exception):
    """Base class for all errors raised by bdtheta."""


class PrecisionUnderflow(BDThetaError):
    """Certified precision would drop to zero, or a depth budget is exceeded."""


class NonUnitDivision(BDThetaError):
    pass


class NonUnitResidue(BDThetaError):
    pass


class InsufficientGuard(BDThetaError):
    """The logarithm series tail cannot be bounded with the available guard digits."""


class DepthTooSmall(BDThetaError):
    pass


class LevelMismatch(BDThetaError):
    pass


class RingMismatch(BDThetaError):
    pass


class ValuationWindowExceeded(BDThetaError):
    pass


class FormRadiusExceeded(BDThetaError):
    pass


class NonCanonicalModulus(BDThetaError):
    pass


class NotExact(BDThetaError):
    """A supplied sequence of module maps fails exactness or surjectivity.

    ``detail`` carries a JSON-serializable description of the failing check.
    """

    def __init__(self, message, detail=None):
        super().__init__(message)
        self.detail = detail or {}


class PresentationTooLarge(BDThetaError):
    pass
