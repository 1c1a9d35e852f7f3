"""Exception hierarchy. Every error raised on bad input derives from TsdsError."""


class TsdsError(ValueError):
    pass


class NonFiniteError(TsdsError):
    def __init__(self, index):
        self.index = index
        super().__init__(f"non-finite value at index {index}")


class TooShortError(TsdsError):
    def __init__(self, needed, got):
        self.needed = needed
        self.got = got
        super().__init__(f"series too short: need {needed}, got {got}")


class IrregularSpacingError(TsdsError):
    def __init__(self, index):
        self.index = index
        super().__init__(f"timestamps not strictly increasing and equally spaced at index {index}")


class BadPeriodError(TsdsError):
    def __init__(self, m):
        self.m = m
        super().__init__(f"seasonal period must be an integer >= 2, got {m!r}")


class DivisionByZeroTrendError(TsdsError):
    def __init__(self, index):
        self.index = index
        super().__init__(f"trend is zero at index {index}")


class EmptySeasonError(TsdsError):
    def __init__(self, position):
        self.position = position
        super().__init__(f"no defined detrended values for season position {position}")


class NonPositiveValuesError(TsdsError):
    def __init__(self, index):
        self.index = index
        super().__init__(f"multiplicative model needs strictly positive values (index {index})")


class BadProbabilityError(TsdsError):
    pass


class RankDeficientError(TsdsError):
    pass


class TooFewRowsError(TsdsError):
    pass


class DegenerateVarianceError(TsdsError):
    pass


class AllZeroResidualsError(TsdsError):
    pass


class UnsupportedAlphaError(TsdsError):
    def __init__(self, alpha):
        self.alpha = alpha
        super().__init__(f"significance level {alpha} not supported (use 0.05 or 0.01)")


class RhoOutOfRangeError(TsdsError):
    pass


class InconclusivePolicyError(TsdsError):
    pass


class ParseError(TsdsError):
    def __init__(self, line, reason):
        self.line = line
        self.reason = reason
        super().__init__(f"line {line}: {reason}")


class EmptyFileError(TsdsError):
    pass


class RankDeficientAuxError(RankDeficientError):
    pass
