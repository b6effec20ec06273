"""Exception types shared across the toolkit."""


class ScalarAdjError(Exception):
    """Base class for all toolkit errors."""


class ParseError(ScalarAdjError):
    """Malformed scale line, table row, or sentence record."""


class DuplicateError(ParseError):
    """The same adjective appears twice within one scale."""


class FormatError(ScalarAdjError):
    """Corrupt or inconsistent embedding-dump file."""


class DimensionError(ScalarAdjError):
    """Vector operands do not share a dimension."""


class MissingDataError(ScalarAdjError):
    """Required embeddings, contexts, or scores are absent.

    ``missing`` lists the offending identifiers.
    """

    def __init__(self, message, missing=()):
        super().__init__(message)
        self.missing = tuple(missing)


class DegenerateVectorError(ScalarAdjError):
    """A vector that must have positive norm is zero."""


class DegenerateDirectionError(ScalarAdjError):
    """An intensity direction collapsed to the zero vector."""


class EmptyReferenceSetError(ScalarAdjError):
    """Reference-pair selection produced no usable pairs."""


class UndefinedMetricError(ScalarAdjError):
    """The metric has a zero denominator (degenerate ranking)."""


class CoverageError(ScalarAdjError):
    """A lookup table covers none of the dataset's adjectives."""


class SubsampleError(ScalarAdjError):
    """Not enough candidates on one side of the frequency threshold."""


class SplitError(ScalarAdjError):
    """Train/dev/test split cannot be formed as requested."""


class DataError(ScalarAdjError):
    """Non-finite or otherwise unusable training data."""


class InsufficientCorpusError(ScalarAdjError):
    """Fewer eligible corpus sentences than requested.

    ``found`` is the number of eligible sentences encountered.
    """

    def __init__(self, message, found=0):
        super().__init__(message)
        self.found = int(found)


class CorruptContextError(ScalarAdjError):
    """A sentence record's target token does not match its adjective."""
