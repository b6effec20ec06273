"""Intensity direction estimation and scale ranking.

The intensity of an adjective is scored by projecting its contextual
representation onto a difference-vector direction built from one or more
(mild, extreme) reference pairs: for each pair, average over the contexts
the two words share the difference (pooled extreme - pooled mild), then
average the per-pair vectors.  Ranking a scale = sorting by cosine between
each adjective's representation and that direction; representations use the
contexts shared by the whole scale so scores are comparable.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from sklearn.base import BaseEstimator

from ._validation import as_vector, check_nonzero, check_same_dim
from .dump import EmbeddingDump, PoolingMode, adjective_representation
from .errors import (
    DegenerateDirectionError,
    DegenerateVectorError,
    EmptyReferenceSetError,
    MissingDataError,
)
from .scales import Adjective, Scale, ScaleDataset

# the single transfer pair: mild "good", extreme "perfect"
DEFAULT_PAIR = ("good", "perfect")

METHOD_TAGS = ("dv1", "dv-dm", "dv-wk", "custom")


def cosine(u, v) -> float:
    """Cosine similarity of two vectors; zero vectors are an error."""
    u = as_vector(u, "u")
    v = as_vector(v, "v")
    check_same_dim(u, v)
    check_nonzero(u, "u")
    check_nonzero(v, "v")
    return float(np.dot(u, v) / (np.linalg.norm(u) * np.linalg.norm(v)))


@dataclass(frozen=True)
class ReferencePair:
    """A (mild, extreme) endpoint pair anchoring the intensity direction.

    ``contexts`` may be None, meaning "use every context the two words share
    in the dump", resolved when the direction is built.
    """

    mild: Adjective
    extreme: Adjective
    contexts: tuple[str, ...] | None = None

    def __post_init__(self):
        if self.mild.surface == self.extreme.surface:
            raise ValueError(f"degenerate pair ({self.mild.surface!r}, itself)")
        if self.contexts is not None:
            object.__setattr__(self, "contexts", tuple(self.contexts))
            if not self.contexts:
                raise ValueError(
                    f"pair ({self.mild.surface!r}, {self.extreme.surface!r}) "
                    "given an empty context list; use None for auto"
                )


@dataclass(frozen=True)
class IntensityDirection:
    """Per-layer difference vectors plus how they were built.

    ``vectors`` maps layer index to a d-dim float64 vector; only the layers
    that were requested are stored.  ``method`` tags the recipe (dv1, dv-dm,
    dv-wk, or custom).
    """

    vectors: dict[int, np.ndarray]
    pooling: PoolingMode
    pairs: tuple[ReferencePair, ...] = ()
    method: str = "custom"

    def __post_init__(self):
        if not self.vectors:
            raise DegenerateDirectionError("direction holds no layers")
        if self.method not in METHOD_TAGS:
            raise ValueError(f"method must be one of {METHOD_TAGS}")
        fixed = {}
        dim = None
        for layer, vec in self.vectors.items():
            vec = as_vector(vec, f"direction[layer {layer}]")
            if not np.any(vec):
                raise DegenerateDirectionError(
                    f"direction at layer {layer} is all zeros"
                )
            if dim is None:
                dim = vec.shape[0]
            elif vec.shape[0] != dim:
                raise DegenerateDirectionError(
                    f"direction layers disagree on dimension ({dim} vs "
                    f"{vec.shape[0]})"
                )
            vec.setflags(write=False)
            fixed[int(layer)] = vec
        object.__setattr__(self, "vectors", fixed)
        object.__setattr__(self, "pairs", tuple(self.pairs))

    @property
    def layers(self) -> tuple[int, ...]:
        return tuple(sorted(self.vectors))

    @property
    def dim(self) -> int:
        return next(iter(self.vectors.values())).shape[0]

    def vector_at(self, layer: int) -> np.ndarray:
        try:
            return self.vectors[layer]
        except KeyError:
            raise MissingDataError(
                f"direction was not built at layer {layer}; has {self.layers}"
            ) from None


def _resolve_contexts(dump: EmbeddingDump, pair: ReferencePair) -> tuple[str, ...]:
    if pair.contexts is not None:
        return pair.contexts
    shared = dump.shared_contexts([pair.mild.surface, pair.extreme.surface])
    if not shared:
        raise MissingDataError(
            f"pair ({pair.mild.surface!r}, {pair.extreme.surface!r}) shares "
            "no contexts in the dump"
        )
    return shared


def dvec_from_pair(
    pair: ReferencePair,
    dump: EmbeddingDump,
    layer: int,
    mode: PoolingMode,
) -> np.ndarray:
    """Difference vector for one pair: mean over shared contexts of
    (pooled extreme - pooled mild)."""
    contexts = _resolve_contexts(dump, pair)
    diffs = []
    for cid in sorted(contexts):
        lo = dump.pool(pair.mild.surface, cid, layer, mode)
        hi = dump.pool(pair.extreme.surface, cid, layer, mode)
        diffs.append(hi - lo)
    vec = np.mean(diffs, axis=0, dtype=np.float64)
    if not np.any(vec):
        raise DegenerateDirectionError(
            f"pair ({pair.mild.surface!r}, {pair.extreme.surface!r}) yields a "
            f"zero difference vector at layer {layer}"
        )
    return vec


def dvec_from_pairs(
    pairs,
    dump: EmbeddingDump,
    layer: int,
    mode: PoolingMode,
) -> np.ndarray:
    """Unweighted mean of the per-pair difference vectors."""
    pairs = tuple(pairs)
    if not pairs:
        raise EmptyReferenceSetError("no reference pairs to build a direction from")
    vecs = [dvec_from_pair(p, dump, layer, mode) for p in pairs]
    mean = np.mean(vecs, axis=0, dtype=np.float64)
    if not np.any(mean):
        raise DegenerateDirectionError(
            f"reference pairs cancel out to a zero direction at layer {layer}"
        )
    return mean


def endpoint_pairs(scale: Scale) -> tuple[ReferencePair, ...]:
    """(first-level, last-level) surface combinations of one scale as
    (mild, extreme) candidates; single-level scales yield nothing."""
    if len(scale.levels) < 2:
        return ()
    return tuple(
        ReferencePair(mild=lo, extreme=hi)
        for lo in sorted(scale.levels[0], key=lambda a: a.surface)
        for hi in sorted(scale.levels[-1], key=lambda a: a.surface)
    )


def select_reference_pairs(
    source: ScaleDataset,
    exclude: ScaleDataset | None = None,
) -> tuple[ReferencePair, ...]:
    """Endpoint pairs of ``source``, minus any unordered surface pair that
    also occurs anywhere in ``exclude``.

    The exclusion is what keeps evaluation on the other dataset honest: a
    pair present in both would leak gold knowledge into the direction.
    """
    if exclude is not None and exclude.language != source.language:
        raise ValueError(
            f"reference and exclusion datasets must share a language, got "
            f"{source.language!r} vs {exclude.language!r}"
        )
    banned: set[frozenset[str]] = set()
    if exclude is not None:
        for scale in exclude.scales:
            surfaces = scale.surfaces
            for i in range(len(surfaces)):
                for j in range(i + 1, len(surfaces)):
                    banned.add(frozenset((surfaces[i], surfaces[j])))
    out = []
    seen: set[frozenset[str]] = set()
    for scale in source.scales:
        for pair in endpoint_pairs(scale):
            key = frozenset((pair.mild.surface, pair.extreme.surface))
            if key in banned or key in seen:
                continue
            seen.add(key)
            out.append(pair)
    if not out:
        raise EmptyReferenceSetError(
            f"no usable reference pairs from {source.name!r} after exclusion"
        )
    return tuple(out)


def build_intensity_direction(
    dump: EmbeddingDump,
    pairs,
    layers,
    pooling: PoolingMode = PoolingMode.WP,
    method: str = "custom",
) -> IntensityDirection:
    """Resolve contexts and average pairs into per-layer directions.

    Pairs whose words never co-occur in the dump are skipped; it is an
    error only if none survive.
    """
    if isinstance(layers, int):
        layers = (layers,)
    usable = []
    for pair in tuple(pairs):
        try:
            _resolve_contexts(dump, pair)
        except MissingDataError:
            continue
        usable.append(pair)
    if not usable:
        raise EmptyReferenceSetError(
            "none of the reference pairs share contexts in the dump"
        )
    vectors = {
        layer: dvec_from_pairs(usable, dump, layer, pooling) for layer in layers
    }
    return IntensityDirection(
        vectors=vectors, pooling=pooling, pairs=tuple(usable), method=method
    )


def scale_contexts(dump: EmbeddingDump, scale: Scale) -> tuple[str, ...]:
    """Contexts shared by every adjective of the scale."""
    shared = dump.shared_contexts(scale.surfaces)
    if not shared:
        raise MissingDataError(
            f"scale {scale.scale_id!r}: no context is shared by all of "
            f"{list(scale.surfaces)}"
        )
    return shared


def rank_scale(
    scale: Scale,
    direction: IntensityDirection,
    dump: EmbeddingDump,
    layer: int,
    mode: PoolingMode | None = None,
    per_context: bool = False,
) -> dict[str, float]:
    """Score every adjective of ``scale``; higher = more intense.

    Default scoring averages the pooled vectors over the scale's shared
    contexts and takes one cosine against the direction.  With
    ``per_context`` the cosine is taken in each context and then averaged,
    kept as an ablation of the same ranking rule.
    """
    if mode is None:
        mode = direction.pooling
    elif mode is not direction.pooling:
        raise ValueError(
            f"direction was built with pooling {direction.pooling.value!r}, "
            f"asked to rank with {mode.value!r}"
        )
    dvec = direction.vector_at(layer)
    contexts = scale_contexts(dump, scale)
    scores: dict[str, float] = {}
    for surface in scale.surfaces:
        try:
            if per_context:
                sims = [
                    cosine(dump.pool(surface, cid, layer, mode), dvec)
                    for cid in sorted(contexts)
                ]
                scores[surface] = float(np.mean(sims))
            else:
                rep = adjective_representation(dump, surface, contexts, layer, mode)
                scores[surface] = cosine(rep, dvec)
        except DegenerateVectorError as exc:
            raise DegenerateVectorError(
                f"{surface!r} pooled to a zero vector; cannot score"
            ) from exc
    return scores


def score_adjective(
    dump: EmbeddingDump,
    direction: IntensityDirection,
    adjective,
    layer: int,
    contexts=None,
) -> float:
    """Cosine between one adjective's representation and the direction,
    over its own contexts unless some are given."""
    surface = adjective.surface if isinstance(adjective, Adjective) else adjective
    if contexts is None:
        contexts = dump.contexts_for(surface)
        if not contexts:
            raise MissingDataError(f"{surface!r} has no contexts in the dump")
    rep = adjective_representation(dump, surface, contexts, layer, direction.pooling)
    return cosine(rep, direction.vector_at(layer))


class DiffVecRanker(BaseEstimator):
    """Estimator wrapper: fit per-layer directions from reference pairs.

    The embedding dump is passed to fit() because the estimator itself
    holds no vector state; get_params/set_params cover layer, pooling, and
    the method tag.
    """

    def __init__(self, layer: int = 9, pooling: str = "wp", method: str = "custom"):
        self.layer = layer
        self.pooling = pooling
        self.method = method

    def fit(self, dump: EmbeddingDump, pairs):
        mode = PoolingMode(self.pooling)
        self.direction_ = build_intensity_direction(
            dump, pairs, layers=(self.layer,), pooling=mode, method=self.method
        )
        self.dump_ = dump
        return self

    def _check_fitted(self):
        if not hasattr(self, "direction_"):
            raise RuntimeError("DiffVecRanker is not fitted; call fit() first")

    def score_one(self, surface: str) -> float:
        self._check_fitted()
        return score_adjective(self.dump_, self.direction_, surface, self.layer)

    def predict(self, surfaces) -> list[float]:
        """Intensity scores for a sequence of surfaces (higher = stronger)."""
        self._check_fitted()
        return [self.score_one(s) for s in surfaces]

    def rank(self, scale: Scale, per_context: bool = False) -> dict[str, float]:
        self._check_fitted()
        return rank_scale(
            scale, self.direction_, self.dump_, self.layer,
            per_context=per_context,
        )
