"""Scalar-vs-relational dataset assembly and classification.

Covers the pipeline from a pertainym candidate pool to classifier accuracy:
frequency-balanced subsampling, stratified train/dev/test splitting, five
single-purpose feature regimes, and deterministic logistic-regression
training with per-layer selection on dev accuracy.
"""

from __future__ import annotations

import dataclasses
import math
import random
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .baselines import FrequencyTable, SenseTable
from .dump import EmbeddingDump, PoolingMode, adjective_representation
from .errors import DataError, MissingDataError, ParseError, SplitError, SubsampleError
from .intensity import ReferencePair, build_intensity_direction, cosine
from .logreg import DEFAULT_HP, fit_logistic_gd
from .scales import Adjective

CONTEXTS_PER_ADJECTIVE = 10
FREQ_TRANSFORM = "log10(1+count)"


class Label(Enum):
    SCALAR = "scalar"
    RELATIONAL = "relational"


class Split(Enum):
    TRAIN = "train"
    DEV = "dev"
    TEST = "test"


@dataclass(frozen=True)
class LabeledAdjective:
    """One classification example.

    ``contexts`` lists the sentence ids backing the adjective's
    representation; None means "use every context the dump has for it".
    When given explicitly there must be exactly ten, matching how the
    dataset is constructed.
    """

    adjective: Adjective
    label: Label
    split: Split | None = None
    contexts: tuple[str, ...] | None = None

    def __post_init__(self):
        if self.contexts is not None:
            object.__setattr__(self, "contexts", tuple(self.contexts))
            if len(self.contexts) != CONTEXTS_PER_ADJECTIVE:
                raise ValueError(
                    f"{self.adjective.surface!r}: expected "
                    f"{CONTEXTS_PER_ADJECTIVE} contexts, got {len(self.contexts)}"
                )

    @property
    def surface(self) -> str:
        return self.adjective.surface


def subsample_relational(
    pertainyms,
    freq: FrequencyTable,
    n_freq: int = 222,
    n_rare: int = 221,
    seed=0,
) -> tuple[Adjective, ...]:
    """Frequency-balanced subsample of a pertainym pool.

    The threshold is the mean frequency of the whole input pool (words
    absent from the table count as 0); n_freq strictly-above-threshold and
    n_rare at-or-below-threshold adjectives are drawn uniformly, fixed by
    ``seed``.  Output is sorted by surface.
    """
    pool = sorted(set(pertainyms), key=lambda a: a.surface)
    if not pool:
        raise SubsampleError("empty pertainym pool")
    counts = {a.surface: float(freq.get(a.surface) or 0.0) for a in pool}
    threshold = sum(counts.values()) / len(pool)
    frequent = [a for a in pool if counts[a.surface] > threshold]
    rare = [a for a in pool if counts[a.surface] <= threshold]
    if len(frequent) < n_freq or len(rare) < n_rare:
        raise SubsampleError(
            f"need {n_freq} frequent / {n_rare} rare candidates, have "
            f"{len(frequent)} / {len(rare)} (threshold {threshold:.2f})"
        )
    rng = random.Random(str(seed))
    chosen = rng.sample(frequent, n_freq) + rng.sample(rare, n_rare)
    return tuple(sorted(chosen, key=lambda a: a.surface))


def largest_remainder(n: int, fractions) -> tuple[int, ...]:
    """Integer allocation of n by fractions, exact total, largest-remainder
    rounding; ties go to the earlier fraction."""
    fractions = tuple(float(f) for f in fractions)
    if any(f < 0 for f in fractions) or abs(sum(fractions) - 1.0) > 1e-9:
        raise ValueError(f"fractions must be >= 0 and sum to 1, got {fractions}")
    exact = [n * f for f in fractions]
    base = [math.floor(e) for e in exact]
    leftover = n - sum(base)
    order = sorted(range(len(fractions)), key=lambda i: (-(exact[i] - base[i]), i))
    for i in order[:leftover]:
        base[i] += 1
    return tuple(base)


def make_split(
    items,
    fractions=(0.65, 0.10, 0.25),
    seed=0,
) -> tuple[LabeledAdjective, ...]:
    """Assign train/dev/test stratified per label, deterministic by seed.

    Per-class counts follow largest-remainder rounding so the totals are
    exact; the per-class shuffle is seeded independently per label so adding
    one class cannot reshuffle the other.
    """
    items = list(items)
    if len(fractions) != 3:
        raise ValueError("fractions must be (train, dev, test)")
    by_label: dict[Label, list[LabeledAdjective]] = {}
    seen = set()
    for item in items:
        if item.surface in seen:
            raise SplitError(f"duplicate surface {item.surface!r} in split input")
        seen.add(item.surface)
        by_label.setdefault(item.label, []).append(item)
    for label in Label:
        if label not in by_label:
            raise SplitError(f"class {label.value!r} absent from split input")

    assignment: dict[str, Split] = {}
    for label in Label:
        members = sorted(by_label[label], key=lambda it: it.surface)
        rng = random.Random(f"{seed}:{label.value}")
        rng.shuffle(members)
        counts = largest_remainder(len(members), fractions)
        cursor = 0
        for split, count in zip(Split, counts):
            for item in members[cursor : cursor + count]:
                assignment[item.surface] = split
            cursor += count
    return tuple(
        dataclasses.replace(item, split=assignment[item.surface]) for item in items
    )


class RegimeKind(Enum):
    ADJ_REP = "adj-rep"
    PROTO_SIM = "proto-sim"
    DV1_ABS = "dv1-abs"
    FREQ = "freq"
    SENSE = "sense"


# regimes whose features are read off the embedding dump at a given layer
_LAYER_DEPENDENT = {RegimeKind.ADJ_REP, RegimeKind.PROTO_SIM, RegimeKind.DV1_ABS}


@dataclass(frozen=True)
class FeatureRegime:
    """A single-feature-family configuration for the classifier."""

    kind: RegimeKind
    prototype: Adjective | None = None
    pair: ReferencePair | None = None

    def __post_init__(self):
        if (self.prototype is not None) != (self.kind is RegimeKind.PROTO_SIM):
            raise ValueError("prototype is required by proto-sim and only it")
        if (self.pair is not None) != (self.kind is RegimeKind.DV1_ABS):
            raise ValueError("reference pair is required by dv1-abs and only it")

    @property
    def layer_dependent(self) -> bool:
        return self.kind in _LAYER_DEPENDENT

    @property
    def name(self) -> str:
        return self.kind.value


def make_regime(kind) -> FeatureRegime:
    """Regime with the stock parameters: prototype "good", pair
    ("good", "perfect")."""
    kind = RegimeKind(kind)
    if kind is RegimeKind.PROTO_SIM:
        return FeatureRegime(kind, prototype=Adjective("good"))
    if kind is RegimeKind.DV1_ABS:
        return FeatureRegime(
            kind, pair=ReferencePair(Adjective("good"), Adjective("perfect"))
        )
    return FeatureRegime(kind)


@dataclass(frozen=True)
class FeatureTables:
    """Lookup tables the FREQ and SENSE regimes read from."""

    freq: FrequencyTable | None = None
    senses: SenseTable | None = None
    sense_default: float | None = None


def _representation(dump, item: LabeledAdjective, layer, mode):
    contexts = item.contexts
    if contexts is None:
        contexts = dump.contexts_for(item.surface)
        if not contexts:
            raise MissingDataError(f"{item.surface!r} has no contexts in the dump")
    return adjective_representation(dump, item.surface, contexts, layer, mode)


def build_feature_matrix(
    items,
    regime: FeatureRegime,
    dump: EmbeddingDump | None,
    layer: int | None,
    mode: PoolingMode,
    tables: FeatureTables | None = None,
) -> np.ndarray:
    """Feature rows for ``items`` under one regime.

    ADJ_REP is the d-dim averaged representation; the other regimes are
    one-dimensional: cosine to the prototype, |cosine| to the difference
    vector, log10(1+frequency), or sense count with a default fill.
    """
    items = list(items)
    tables = tables or FeatureTables()
    kind = regime.kind

    if kind is RegimeKind.FREQ:
        if tables.freq is None:
            raise DataError("freq regime needs a frequency table")
        rows = [
            [math.log10(1.0 + float(tables.freq.get(it.surface) or 0.0))]
            for it in items
        ]
        return np.asarray(rows, dtype=np.float64)

    if kind is RegimeKind.SENSE:
        if tables.senses is None or tables.sense_default is None:
            raise DataError("sense regime needs a sense table and a default")
        rows = [
            [float(tables.senses.get(it.surface) or tables.sense_default)]
            for it in items
        ]
        return np.asarray(rows, dtype=np.float64)

    if dump is None or layer is None:
        raise DataError(f"{regime.name} regime needs an embedding dump and layer")
    reps = [_representation(dump, it, layer, mode) for it in items]

    if kind is RegimeKind.ADJ_REP:
        return np.asarray(reps, dtype=np.float64)

    if kind is RegimeKind.PROTO_SIM:
        proto = regime.prototype.surface
        proto_contexts = dump.contexts_for(proto)
        if not proto_contexts:
            raise MissingDataError(f"prototype {proto!r} has no contexts in dump")
        proto_rep = adjective_representation(dump, proto, proto_contexts, layer, mode)
        return np.asarray(
            [[cosine(rep, proto_rep)] for rep in reps], dtype=np.float64
        )

    # DV1_ABS: |cosine| folds mild and extreme scalars onto the same side,
    # leaving relational adjectives near zero
    direction = build_intensity_direction(
        dump, [regime.pair], layers=(layer,), pooling=mode
    )
    dvec = direction.vector_at(layer)
    return np.asarray(
        [[abs(cosine(rep, dvec))] for rep in reps], dtype=np.float64
    )


def build_features(
    item: LabeledAdjective,
    regime: FeatureRegime,
    dump: EmbeddingDump | None,
    layer: int | None,
    mode: PoolingMode,
    tables: FeatureTables | None = None,
) -> np.ndarray:
    """Single-item convenience over build_feature_matrix."""
    return build_feature_matrix([item], regime, dump, layer, mode, tables)[0]


@dataclass(frozen=True)
class ClassifierModel:
    """A trained linear model plus enough provenance to reproduce it."""

    weights: np.ndarray
    bias: float
    layer: int | None
    pooling: str
    hyperparams: dict
    n_iter: int = 0
    converged: bool = False
    feature_notes: tuple[str, ...] = ()

    def __post_init__(self):
        w = np.asarray(self.weights, dtype=np.float64)
        if w.ndim != 1 or not np.isfinite(w).all() or not math.isfinite(self.bias):
            raise DataError("classifier parameters must be finite")
        w.setflags(write=False)
        object.__setattr__(self, "weights", w)

    def decision_function(self, X) -> np.ndarray:
        X = np.asarray(X, dtype=np.float64)
        return X @ self.weights + self.bias

    def predict(self, X) -> np.ndarray:
        return (self.decision_function(X) >= 0.0).astype(int)

    def accuracy(self, X, y) -> float:
        y = np.asarray(y)
        return float((self.predict(X) == y).mean())


def train_logreg(
    X,
    y,
    hp: dict | None = None,
    layer: int | None = None,
    mode: PoolingMode = PoolingMode.WP,
    feature_notes=(),
) -> ClassifierModel:
    """Deterministic logistic regression; y holds 0/1 labels
    (1 = scalar by convention here)."""
    hp = dict(DEFAULT_HP if hp is None else hp)
    w, b, n_iter, converged = fit_logistic_gd(
        X, y, l2=hp["l2"], lr=hp["lr"], max_iter=hp["max_iter"], tol=hp["tol"]
    )
    return ClassifierModel(
        weights=w,
        bias=b,
        layer=layer,
        pooling=mode.value,
        hyperparams=hp,
        n_iter=n_iter,
        converged=converged,
        feature_notes=tuple(feature_notes),
    )


def labels_to_y(items) -> np.ndarray:
    return np.asarray(
        [1 if it.label is Label.SCALAR else 0 for it in items], dtype=np.float64
    )


@dataclass(frozen=True)
class RegimeResult:
    regime: str
    mode: str
    best_layer: int | None
    dev_acc: float
    test_acc: float
    dev_by_layer: tuple[tuple[int | None, float], ...]
    model: ClassifierModel


def select_layer_and_evaluate(
    items,
    regimes,
    dump: EmbeddingDump | None,
    mode: PoolingMode = PoolingMode.WP,
    tables: FeatureTables | None = None,
    hp: dict | None = None,
) -> dict[str, RegimeResult]:
    """Train each regime at every layer, pick the layer by dev accuracy
    (ties toward the lowest index), report test accuracy there only.

    Table-lookup regimes have no layer axis; their result carries
    best_layer None.
    """
    items = list(items)
    splits: dict[Split, list[LabeledAdjective]] = {s: [] for s in Split}
    for item in items:
        if item.split is None:
            raise SplitError(f"{item.surface!r} has no split assigned")
        splits[item.split].append(item)
    for split in Split:
        if not splits[split]:
            raise SplitError(f"split {split.value!r} is empty")

    y = {split: labels_to_y(splits[split]) for split in Split}
    results: dict[str, RegimeResult] = {}
    for regime in regimes:
        layers = (
            list(range(dump.num_layers + 1))
            if regime.layer_dependent
            else [None]
        )
        notes = (FREQ_TRANSFORM,) if regime.kind is RegimeKind.FREQ else ()
        trained = []
        for layer in layers:
            feats = {
                split: build_feature_matrix(
                    splits[split], regime, dump, layer, mode, tables
                )
                for split in Split
            }
            model = train_logreg(
                feats[Split.TRAIN], y[Split.TRAIN], hp,
                layer=layer, mode=mode, feature_notes=notes,
            )
            dev_acc = model.accuracy(feats[Split.DEV], y[Split.DEV])
            trained.append((layer, dev_acc, model, feats))
        # max dev accuracy; earlier (lower) layer wins ties because the
        # scan order is ascending and the comparison is strict
        best = trained[0]
        for cand in trained[1:]:
            if cand[1] > best[1]:
                best = cand
        layer, dev_acc, model, feats = best
        results[regime.name] = RegimeResult(
            regime=regime.name,
            mode=mode.value,
            best_layer=layer,
            dev_acc=dev_acc,
            test_acc=model.accuracy(feats[Split.TEST], y[Split.TEST]),
            dev_by_layer=tuple((l, a) for l, a, _, _ in trained),
            model=model,
        )
    return results


def results_csv(results: dict[str, RegimeResult]) -> str:
    lines = ["regime,mode,best_layer,dev_acc,test_acc"]
    for name in sorted(results):
        r = results[name]
        layer = "" if r.best_layer is None else str(r.best_layer)
        lines.append(
            f"{r.regime},{r.mode},{layer},{r.dev_acc:.6f},{r.test_acc:.6f}"
        )
    return "\n".join(lines) + "\n"


def mean_senses_by_label(items, table: SenseTable) -> dict[Label, float]:
    """Mean sense count per label over table-covered items (diagnostic)."""
    out: dict[Label, float] = {}
    for label in Label:
        counts = [
            table.senses[it.surface]
            for it in items
            if it.label is label and it.surface in table
        ]
        if counts:
            out[label] = sum(counts) / len(counts)
    return out


def save_scalrel_tsv(items, path) -> None:
    """(surface, label, split) rows; split must be assigned."""
    rows = []
    for item in sorted(items, key=lambda it: it.surface):
        if item.split is None:
            raise SplitError(f"{item.surface!r} has no split; run make_split first")
        rows.append(f"{item.surface}\t{item.label.value}\t{item.split.value}")
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(rows) + "\n")


def load_scalrel_tsv(path, language: str = "en") -> tuple[LabeledAdjective, ...]:
    items = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.rstrip("\n")
            if not line or line.startswith("#"):
                continue
            parts = line.split("\t")
            if len(parts) != 3:
                raise ParseError(f"{path}:{lineno}: expected 3 columns")
            surface, label, split = (p.strip() for p in parts)
            try:
                items.append(
                    LabeledAdjective(
                        adjective=Adjective(surface.lower(), language),
                        label=Label(label),
                        split=Split(split),
                    )
                )
            except ValueError as exc:
                raise ParseError(f"{path}:{lineno}: {exc}") from exc
    return tuple(items)
