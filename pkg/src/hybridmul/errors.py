"""Exception types raised by the library.

Every error derives from :class:`GF2Error`, itself a :class:`ValueError`, so
callers that only care about "bad input" can catch one type.
"""


class GF2Error(ValueError):
    pass


class ZeroModulus(GF2Error):
    pass


class OperandTooLarge(GF2Error):
    pass


class UnknownCurve(GF2Error):
    pass


class InvalidThreshold(GF2Error):
    pass


class InputTooWide(GF2Error):
    pass


class UnsupportedPolynomial(GF2Error):
    pass


class UnsupportedWordWidth(GF2Error):
    pass


class NotPowerOfTwo(GF2Error):
    pass


class InvalidLevelCount(GF2Error):
    pass


class NonPositiveWeight(GF2Error):
    pass


class WidthMismatch(GF2Error):
    pass
