"""Build SADJ dumps from static word-vector files (word2vec/GloVe text).

Static vectors have no contexts, so every covered word gets a single
record under one shared pseudo-context id.  Sharing the id is what lets
context-intersection ranking downstream treat the whole vocabulary as
one comparable context set.  The dump uses num_layers=1 with the same
vector stored at both layer indices, the format's convention for
single-layer sources.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Mapping

import numpy as np

from .errors import CoverageError, VectorFormatError
from .sadj import Manifest, Record, write_dump

logger = logging.getLogger("sadj_extract")

PSEUDO_CONTEXT = "static"


def read_vec(path: str | Path) -> dict[str, np.ndarray]:
    """Parse a text vector file: one `word v1 v2 ... vd` row per line.

    An optional word2vec-style `N d` count header is detected and
    skipped.  Rows must agree on dimensionality; the first occurrence
    of a duplicated word wins and later ones are ignored with a log
    line, matching the usual embedding-lookup convention.
    """
    path = Path(path)
    vecs: dict[str, np.ndarray] = {}
    dim: int | None = None
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            parts = line.split()
            if not parts:
                continue
            if lineno == 1 and len(parts) == 2 and all(p.isdigit() for p in parts):
                continue
            word, rest = parts[0], parts[1:]
            if not rest:
                raise VectorFormatError(f"{path}:{lineno}: no vector components")
            try:
                vec = np.array([float(x) for x in rest], dtype=np.float32)
            except ValueError as exc:
                raise VectorFormatError(f"{path}:{lineno}: {exc}") from exc
            if dim is None:
                dim = vec.shape[0]
            elif vec.shape[0] != dim:
                raise VectorFormatError(
                    f"{path}:{lineno}: dimension {vec.shape[0]} != {dim}"
                )
            if not np.all(np.isfinite(vec)):
                raise VectorFormatError(f"{path}:{lineno}: non-finite component")
            if word in vecs:
                logger.warning("%s:%d: duplicate word %r ignored", path, lineno, word)
                continue
            vecs[word] = vec
    if not vecs:
        raise VectorFormatError(f"{path}: no vectors found")
    return vecs


@dataclass(frozen=True)
class CoverageReport:
    covered: tuple[str, ...]
    missing: tuple[str, ...]

    @property
    def total(self) -> int:
        return len(self.covered) + len(self.missing)

    @property
    def fraction(self) -> float:
        return len(self.covered) / self.total if self.total else 0.0

    def summary(self) -> str:
        return (
            f"coverage {len(self.covered)}/{self.total} "
            f"({100.0 * self.fraction:.1f}%)"
        )


def extract_static(
    vectors: Mapping[str, np.ndarray] | str | Path,
    words: Iterable[str],
    out: str | Path,
    language: str = "en",
    model_id: str | None = None,
) -> CoverageReport:
    """Write a single-layer dump covering `words`; returns coverage.

    Lookup is case-insensitive on the word list side: requested words
    are lowercased before matching, since the adjective inventories
    this feeds are lowercase.  Vector-file keys are used as-is.
    """
    if isinstance(vectors, (str, Path)):
        if model_id is None:
            model_id = f"static:{Path(vectors).name}"
        vectors = read_vec(vectors)
    elif model_id is None:
        model_id = "static"
    wanted = sorted({w.lower() for w in words if w.strip()})
    if not wanted:
        raise CoverageError("no words requested")

    covered: list[str] = []
    missing: list[str] = []
    records: list[Record] = []
    dim = len(next(iter(vectors.values())))
    for word in wanted:
        vec = vectors.get(word)
        if vec is None:
            missing.append(word)
            continue
        covered.append(word)
        # one shared pseudo-context; vector duplicated at layers 0 and 1
        layers = np.tile(np.asarray(vec, dtype=np.float32), (2, 1, 1))
        records.append(Record(word, PSEUDO_CONTEXT, layers))
    if not covered:
        raise CoverageError(
            f"none of the {len(wanted)} requested words are in the vector file"
        )
    for word in missing:
        logger.warning("no vector for %r", word)

    manifest = Manifest(
        model_id=model_id,
        num_layers=1,
        hidden_dim=dim,
        cased=False,
        language=language,
    )
    write_dump(records, manifest, out)
    report = CoverageReport(covered=tuple(covered), missing=tuple(missing))
    logger.info("%s -> %s", report.summary(), out)
    return report
