"""Shared test builders: scales from level specs, synthetic dumps."""

import numpy as np

from scalaradj.dump import ContextEmbedding, DumpManifest, EmbeddingDump
from scalaradj.scales import Adjective, Scale, ScaleDataset


def make_scale(levels, scale_id="s", language="en", dataset="custom"):
    """levels like [["good"], ["great", "fine"], ["perfect"]]."""
    return Scale(
        scale_id=scale_id,
        language=language,
        levels=tuple(
            frozenset(Adjective(s, language) for s in level) for level in levels
        ),
        dataset=dataset,
    )


def make_dataset(scales, name="test", language="en"):
    return ScaleDataset(name=name, language=language, scales=tuple(scales))


def dump_from_vectors(vectors, num_layers=1, contexts=("c0",)):
    """Single-wordpiece dump where every layer holds the same vector.

    vectors: {surface: 1-D array}; every surface appears in every context.
    """
    dim = len(next(iter(vectors.values())))
    manifest = DumpManifest(model_id="synthetic", num_layers=num_layers,
                            hidden_dim=dim)
    records = []
    for surface, vec in vectors.items():
        arr = np.tile(np.asarray(vec, dtype=np.float32), (num_layers + 1, 1, 1))
        for cid in contexts:
            records.append(ContextEmbedding(
                adjective=Adjective(surface), context_id=cid, layers=arr.copy()
            ))
    return EmbeddingDump(manifest, records)


def dump_from_context_vectors(per_context, num_layers=1):
    """per_context: {(surface, context_id): 1-D array}; one wordpiece."""
    dim = len(next(iter(per_context.values())))
    manifest = DumpManifest(model_id="synthetic", num_layers=num_layers,
                            hidden_dim=dim)
    records = [
        ContextEmbedding(
            adjective=Adjective(surface),
            context_id=cid,
            layers=np.tile(np.asarray(vec, dtype=np.float32),
                           (num_layers + 1, 1, 1)),
        )
        for (surface, cid), vec in per_context.items()
    ]
    return EmbeddingDump(manifest, records)
