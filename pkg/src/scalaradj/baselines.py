"""Frequency and polysemy ranking baselines.

Both baselines run off plain two-column TSV lookup tables (surface <TAB>
count, UTF-8, lowercase) so any corpus or sense inventory can feed them
offline.  Higher frequency / more senses predicts lower intensity, so the
score is just the negated count.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

from .errors import CoverageError, ParseError
from .scales import Scale, ScaleDataset


@dataclass(frozen=True)
class FrequencyTable:
    counts: dict[str, float]
    source: str = "unknown"

    def __post_init__(self):
        for word, count in self.counts.items():
            if count < 0:
                raise ValueError(f"negative frequency for {word!r}: {count}")

    def __contains__(self, surface: str) -> bool:
        return surface in self.counts

    def get(self, surface: str):
        return self.counts.get(surface)


@dataclass(frozen=True)
class SenseTable:
    senses: dict[str, int]
    source: str = "unknown"

    def __post_init__(self):
        for word, n in self.senses.items():
            if n < 1:
                raise ValueError(f"sense count for {word!r} must be >= 1, got {n}")

    def __contains__(self, surface: str) -> bool:
        return surface in self.senses

    def get(self, surface: str):
        return self.senses.get(surface)


def _load_tsv(path) -> dict[str, float]:
    out: dict[str, float] = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.rstrip("\n")
            if not line or line.startswith("#"):
                continue
            parts = line.split("\t")
            if len(parts) != 2:
                raise ParseError(f"{path}:{lineno}: expected 2 tab-separated columns")
            surface, raw = parts
            surface = surface.strip().lower()
            if not surface:
                raise ParseError(f"{path}:{lineno}: empty surface")
            try:
                value = float(raw)
            except ValueError:
                raise ParseError(
                    f"{path}:{lineno}: count {raw!r} is not a number"
                ) from None
            out[surface] = value
    return out


def load_frequency_table(path, source: str = "file") -> FrequencyTable:
    return FrequencyTable(counts=_load_tsv(path), source=source)


def load_sense_table(path, source: str = "file") -> SenseTable:
    raw = _load_tsv(path)
    senses = {}
    for word, value in raw.items():
        n = int(value)
        if n != value:
            raise ParseError(f"sense count for {word!r} must be an integer")
        senses[word] = n
    return SenseTable(senses=senses, source=source)


def freq_rank(scale: Scale, table: FrequencyTable) -> dict[str, float]:
    """score(a) = -frequency(a); higher score = more intense.

    Words absent from the table count as frequency 0 (rarest, so most
    intense) and trigger a warning rather than an error.
    """
    scores = {}
    for surface in scale.surfaces:
        count = table.get(surface)
        if count is None:
            warnings.warn(
                f"{surface!r} not in frequency table ({table.source}); "
                "treating as frequency 0",
                stacklevel=2,
            )
            count = 0.0
        scores[surface] = -float(count)
    return scores


def sense_rank(scale: Scale, table: SenseTable, default: float) -> dict[str, float]:
    """score(a) = -senses(a), falling back to ``default`` when uncovered.

    ``default`` should come from mean_sense_default over the evaluation
    dataset; for a fully covered scale its value is irrelevant.
    """
    return {
        surface: -float(table.get(surface) if surface in table else default)
        for surface in scale.surfaces
    }


def mean_sense_default(ds: ScaleDataset, table: SenseTable) -> float:
    """Mean sense count over the unique covered adjectives of ``ds``."""
    covered = {
        adj.surface
        for scale in ds.scales
        for adj in scale.adjectives
        if adj.surface in table
    }
    if not covered:
        raise CoverageError(
            f"sense table ({table.source}) covers none of {ds.name!r}; "
            "drop the sense baseline for this dataset"
        )
    return sum(table.senses[s] for s in sorted(covered)) / len(covered)


@dataclass(frozen=True)
class CoverageReport:
    dataset: str
    table_source: str
    covered: tuple[str, ...]
    uncovered: tuple[str, ...]

    @property
    def total(self) -> int:
        return len(self.covered) + len(self.uncovered)

    @property
    def fraction(self) -> float:
        return len(self.covered) / self.total if self.total else 0.0

    def as_dict(self) -> dict:
        return {
            "dataset": self.dataset,
            "table_source": self.table_source,
            "covered": len(self.covered),
            "uncovered": len(self.uncovered),
            "fraction": self.fraction,
            "missing": list(self.uncovered),
        }


def coverage_report(ds: ScaleDataset, table) -> CoverageReport:
    """Which unique adjectives of ``ds`` the lookup table knows about."""
    covered, uncovered = [], []
    seen = set()
    for scale in ds.scales:
        for adj in scale.adjectives:
            if adj.surface in seen:
                continue
            seen.add(adj.surface)
            (covered if adj.surface in table else uncovered).append(adj.surface)
    return CoverageReport(
        dataset=ds.name,
        table_source=table.source,
        covered=tuple(sorted(covered)),
        uncovered=tuple(sorted(uncovered)),
    )
