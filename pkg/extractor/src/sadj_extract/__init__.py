"""sadj-extract: produce SADJ embedding dumps.

Two paths into the same format: `extract_contextual` runs a transformer
checkpoint over sentence contexts and stores every layer's wordpiece
vectors for each target adjective; `extract_static` looks adjectives up
in a text word-vector file and stores them as a single-layer dump under
one shared pseudo-context.
"""

from .contextual import ExtractionJob, ExtractionReport, Skip, extract_contextual
from .errors import (
    CoverageError,
    DumpFormatError,
    ExtractionError,
    SentenceFormatError,
    VectorFormatError,
)
from .sadj import Manifest, Record, write_dump
from .sentences import Sentence, read_sentences, token_spans
from .static import PSEUDO_CONTEXT, CoverageReport, extract_static, read_vec

__all__ = [
    "ExtractionJob",
    "ExtractionReport",
    "Skip",
    "extract_contextual",
    "CoverageError",
    "DumpFormatError",
    "ExtractionError",
    "SentenceFormatError",
    "VectorFormatError",
    "Manifest",
    "Record",
    "write_dump",
    "Sentence",
    "read_sentences",
    "token_spans",
    "PSEUDO_CONTEXT",
    "CoverageReport",
    "extract_static",
    "read_vec",
]

__version__ = "0.1.0"
