"""Exception hierarchy shared by every gainstats module."""


class GainStatsError(ValueError):
    """Base class for all library errors."""


class GainUndefined(GainStatsError):
    """Gain requested with an initial score of 1 (zero headroom)."""


class IncreaseUndefined(GainStatsError):
    """Fractional increase requested with an initial score of 0."""


class LogUndefined(GainStatsError):
    """Log difference requested with a zero score."""


class OutOfRange(GainStatsError):
    """A score or a derived score fell outside the unit interval."""


class EmptySample(GainStatsError):
    """An operation received no usable observations."""


class DegenerateSample(GainStatsError):
    """A statistic needs spread but the sample has none."""


class RankDeficient(GainStatsError):
    """A least-squares design matrix does not admit a unique fit."""


class SpecError(GainStatsError):
    """A synthetic cohort specification is impossible to sample."""


class ParseError(GainStatsError):
    """Malformed input row. ``line`` is the 1-based line number."""

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class RangeError(ParseError):
    """A parsed score lies outside the allowed bounds."""


class DuplicateId(ParseError):
    """A student id appears twice within the same cohort."""


class IoError(GainStatsError, OSError):
    """Failure reading or writing a file; carries the offending path."""

    def __init__(self, message, path=None):
        self.path = path
        if path is not None:
            message = f"{path}: {message}"
        super().__init__(message)
