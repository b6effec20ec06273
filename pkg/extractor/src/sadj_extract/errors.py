"""Exception types for the extractor."""


class ExtractionError(Exception):
    """Base class for everything this package raises on purpose."""


class SentenceFormatError(ExtractionError):
    """Sentence JSONL file is malformed or internally inconsistent."""


class VectorFormatError(ExtractionError):
    """Static word-vector file is malformed."""


class CoverageError(ExtractionError):
    """None of the requested words were found in the vector file."""


class DumpFormatError(ExtractionError):
    """Records handed to the dump writer violate the format contract."""
