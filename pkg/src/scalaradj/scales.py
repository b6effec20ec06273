"""Half-scale datasets: parsing, canonical serialization, gold pairwise relations.

File format: UTF-8 text, one scale per line, ``<`` between intensity levels
(mild on the left, extreme on the right) and ``||`` between adjectives tied
at the same level.  ``#`` starts a comment.  An optional JSON sidecar
``<file>.manifest.json`` names the dataset and its language.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from enum import Enum
from itertools import combinations
from pathlib import Path

from .errors import DuplicateError, ParseError

LEVEL_SEP = "<"
TIE_SEP = "||"


@dataclass(frozen=True, order=True)
class Adjective:
    """A lowercase lemma form tagged with its ISO 639-1 language code."""

    surface: str
    language: str = "en"

    def __post_init__(self):
        if not self.surface:
            raise ParseError("adjective surface must be non-empty")
        if LEVEL_SEP in self.surface or TIE_SEP in self.surface:
            raise ParseError(
                f"adjective surface {self.surface!r} contains a scale separator"
            )


@dataclass(frozen=True)
class Scale:
    """One half-scale: tie-groups of adjectives ordered mild to extreme."""

    scale_id: str
    language: str
    levels: tuple[frozenset[Adjective], ...]
    dataset: str = "custom"

    def __post_init__(self):
        if not self.levels:
            raise ParseError(f"scale {self.scale_id!r} has no levels")
        seen: set[str] = set()
        for group in self.levels:
            if not group:
                raise ParseError(f"scale {self.scale_id!r} has an empty tie-group")
            for adj in group:
                if adj.surface in seen:
                    raise DuplicateError(
                        f"adjective {adj.surface!r} appears twice in scale "
                        f"{self.scale_id!r}"
                    )
                seen.add(adj.surface)

    @property
    def adjectives(self) -> tuple[Adjective, ...]:
        """All members, ordered by level then surface."""
        out = []
        for group in self.levels:
            out.extend(sorted(group))
        return tuple(out)

    @property
    def surfaces(self) -> tuple[str, ...]:
        return tuple(a.surface for a in self.adjectives)

    def __len__(self):
        return sum(len(g) for g in self.levels)

    def level_of(self, surface: str) -> int:
        for i, group in enumerate(self.levels):
            if any(a.surface == surface for a in group):
                return i
        raise KeyError(surface)


class Relation(Enum):
    LESS = "less"
    TIE = "tie"


@dataclass(frozen=True)
class GoldPair:
    """An unordered adjective pair with its gold relation.

    LESS pairs are oriented mild -> extreme (``a`` is the milder one);
    TIE pairs are stored with surfaces in sorted order.
    """

    a: Adjective
    b: Adjective
    relation: Relation

    def __post_init__(self):
        if self.a == self.b:
            raise ParseError("gold pair members must differ")

    @property
    def key(self) -> frozenset[str]:
        """Unordered surface identity, used for cross-scale deduplication."""
        return frozenset((self.a.surface, self.b.surface))


@dataclass(frozen=True)
class ScaleDataset:
    name: str
    language: str
    scales: tuple[Scale, ...]

    def __post_init__(self):
        ids = [s.scale_id for s in self.scales]
        if len(ids) != len(set(ids)):
            raise DuplicateError(f"dataset {self.name!r} has duplicate scale_ids")

    def __len__(self):
        return len(self.scales)

    def __iter__(self):
        return iter(self.scales)


@dataclass(frozen=True)
class DatasetStats:
    pairs: int
    unique_pairs: int
    adjectives: int
    unique_adjectives: int


def parse_scale_line(
    line: str,
    language: str = "en",
    scale_id: str | None = None,
    dataset: str = "custom",
) -> Scale:
    """Parse one ``a || b < c < d`` line into a Scale (levels mild to extreme).

    Surfaces are lowercased.  Raises ParseError on an empty line or empty
    tie-group, DuplicateError if an adjective occurs twice in the scale.
    """
    text = line.strip()
    if not text:
        raise ParseError("empty scale line")
    levels: list[frozenset[Adjective]] = []
    all_surfaces: list[str] = []
    for chunk in text.split(LEVEL_SEP):
        group = []
        for part in chunk.split(TIE_SEP):
            surface = part.strip().lower()
            if not surface:
                raise ParseError(f"empty adjective in scale line {line!r}")
            group.append(Adjective(surface, language))
            all_surfaces.append(surface)
        levels.append(frozenset(group))
    dupes = {s for s in all_surfaces if all_surfaces.count(s) > 1}
    if dupes:
        raise DuplicateError(
            f"duplicate adjective(s) {sorted(dupes)} in scale line {line!r}"
        )
    if scale_id is None:
        canonical = _canonical_text(levels)
        scale_id = hashlib.sha1(canonical.encode("utf-8")).hexdigest()[:12]
    return Scale(scale_id=scale_id, language=language, levels=tuple(levels),
                 dataset=dataset)


def _canonical_text(levels) -> str:
    return f" {LEVEL_SEP} ".join(
        f" {TIE_SEP} ".join(sorted(a.surface for a in group)) for group in levels
    )


def serialize_scale(scale: Scale) -> str:
    """Canonical line form: single spaces around separators, ties sorted."""
    return _canonical_text(scale.levels)


def unordered_pairs(scale: Scale) -> list[GoldPair]:
    """All C(n,2) within-scale pairs: TIE if same level, else LESS mild->extreme."""
    pairs: list[GoldPair] = []
    groups = [sorted(g) for g in scale.levels]
    for i, group in enumerate(groups):
        for a, b in combinations(group, 2):
            pairs.append(GoldPair(a, b, Relation.TIE))
        for later in groups[i + 1:]:
            for a in group:
                for b in later:
                    pairs.append(GoldPair(a, b, Relation.LESS))
    return pairs


def dataset_stats(ds: ScaleDataset) -> DatasetStats:
    """Pair/adjective totals, raw and deduplicated across scales.

    A pair or adjective occurring in two scales counts twice in the raw
    total and once in the unique total.
    """
    n_pairs = 0
    n_adjs = 0
    pair_keys: set[frozenset[str]] = set()
    surfaces: set[str] = set()
    for scale in ds.scales:
        pairs = unordered_pairs(scale)
        n_pairs += len(pairs)
        n_adjs += len(scale)
        pair_keys.update(p.key for p in pairs)
        surfaces.update(scale.surfaces)
    return DatasetStats(
        pairs=n_pairs,
        unique_pairs=len(pair_keys),
        adjectives=n_adjs,
        unique_adjectives=len(surfaces),
    )


def _sidecar_path(path: Path) -> Path:
    return Path(str(path) + ".manifest.json")


def load_scale_file(
    path,
    language: str | None = None,
    name: str | None = None,
    dataset: str | None = None,
) -> ScaleDataset:
    """Load a scale text file, honoring its sidecar manifest when present.

    Explicit arguments override the sidecar; absent both, the name falls
    back to the file stem and the language to ``en``.
    """
    path = Path(path)
    meta = {}
    sidecar = _sidecar_path(path)
    if sidecar.exists():
        meta = json.loads(sidecar.read_text(encoding="utf-8"))
    name = name or meta.get("name") or path.stem
    language = language or meta.get("language") or "en"
    dataset = dataset or meta.get("dataset") or "custom"

    scales: list[Scale] = []
    idx = 0
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            text = raw.split("#", 1)[0].strip()
            if not text:
                continue
            try:
                scales.append(
                    parse_scale_line(text, language=language,
                                     scale_id=f"{name}:{idx:03d}", dataset=dataset)
                )
            except ParseError as exc:
                raise type(exc)(f"{path}:{lineno}: {exc}") from exc
            idx += 1
    return ScaleDataset(name=name, language=language, scales=tuple(scales))


def save_scale_file(ds: ScaleDataset, path) -> None:
    """Write canonical scale lines plus the sidecar manifest."""
    path = Path(path)
    lines = [serialize_scale(s) for s in ds.scales]
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    manifest = {"name": ds.name, "language": ds.language}
    tags = {s.dataset for s in ds.scales}
    if len(tags) == 1:
        manifest["dataset"] = tags.pop()
    _sidecar_path(path).write_text(
        json.dumps(manifest, sort_keys=True, indent=2) + "\n", encoding="utf-8"
    )
