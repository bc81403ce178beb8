"""Exception hierarchy shared by all witnesslab modules."""


class WitnessLabError(Exception):
    """Base class for every error raised by witnesslab."""


class NotHermitian(WitnessLabError, ValueError):
    pass


class NonSquare(WitnessLabError, ValueError):
    pass


class DimensionMismatch(WitnessLabError, ValueError):
    pass


class NonFinite(WitnessLabError, ValueError):
    pass


class NotPSD(WitnessLabError, ValueError):
    pass


class NotPSDAfterPT(NotPSD):
    pass


class EmptyTermList(WitnessLabError, ValueError):
    pass


class InvalidLambda(WitnessLabError, ValueError):
    pass


class TOutOfRange(WitnessLabError, ValueError):
    pass


class NonPositiveT(WitnessLabError, ValueError):
    pass


class BadDimension(WitnessLabError, ValueError):
    pass


class ParseError(WitnessLabError, ValueError):
    pass
