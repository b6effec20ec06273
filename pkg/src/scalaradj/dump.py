"""Model-agnostic embedding dump: binary IO, wordpiece pooling, representations.

The dump is the only bridge between this toolkit and whatever produced the
vectors.  Byte layout (all integers and floats little-endian):

    magic      b"SADJ"
    version    u16  (currently 1)
    manifest   u32 byte length, then UTF-8 JSON
    records    sorted by (adjective, context_id), each:
        u16 byte length + UTF-8 adjective surface
        u16 byte length + UTF-8 context_id
        u16 wordpiece count k
        (num_layers + 1) * k * hidden_dim float32 values, layer-major

Layer index 0 is the embedding (pre-transformer) layer; hidden layers are
1..num_layers.  Static word vectors are encoded as num_layers=1 with one
wordpiece and one pseudo-context per adjective, the same vector stored at
both layer indices.
"""

from __future__ import annotations

import json
import struct
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import FormatError, MissingDataError
from .scales import Adjective

MAGIC = b"SADJ"
VERSION = 1
DTYPE_TAG = "float32-le"
_U16_MAX = 0xFFFF


class PoolingMode(Enum):
    """How to pool a multi-wordpiece token into one vector."""

    WP = "wp"
    WP_MINUS_1 = "wp-1"


@dataclass(frozen=True)
class DumpManifest:
    model_id: str
    num_layers: int
    hidden_dim: int
    pooling_ready: bool = True
    language: str = "en"
    dtype: str = DTYPE_TAG

    def __post_init__(self):
        if self.num_layers < 1:
            raise FormatError(f"num_layers must be >= 1, got {self.num_layers}")
        if self.hidden_dim < 1:
            raise FormatError(f"hidden_dim must be >= 1, got {self.hidden_dim}")
        if self.dtype != DTYPE_TAG:
            raise FormatError(f"unsupported dtype {self.dtype!r}")

    def to_json(self) -> str:
        return json.dumps(
            {
                "model_id": self.model_id,
                "num_layers": self.num_layers,
                "hidden_dim": self.hidden_dim,
                "pooling_ready": self.pooling_ready,
                "language": self.language,
                "dtype": self.dtype,
            },
            sort_keys=True,
        )

    @classmethod
    def from_json(cls, text: str) -> "DumpManifest":
        try:
            raw = json.loads(text)
        except json.JSONDecodeError as exc:
            raise FormatError(f"manifest is not valid JSON: {exc}") from exc
        try:
            return cls(
                model_id=raw["model_id"],
                num_layers=int(raw["num_layers"]),
                hidden_dim=int(raw["hidden_dim"]),
                pooling_ready=bool(raw.get("pooling_ready", True)),
                language=raw.get("language", "en"),
                dtype=raw.get("dtype", DTYPE_TAG),
            )
        except KeyError as exc:
            raise FormatError(f"manifest missing field {exc}") from exc


@dataclass
class ContextEmbedding:
    """Wordpiece vectors for one (adjective, context) at every layer.

    ``layers`` has shape (num_layers + 1, wordpiece_count, hidden_dim),
    float32.  The same wordpiece count holds at every layer by construction.
    """

    adjective: Adjective
    context_id: str
    layers: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.layers, dtype=np.float32)
        if arr.ndim != 3:
            raise FormatError(
                f"layers must be (layers, pieces, dim), got shape {arr.shape}"
            )
        if arr.shape[1] < 1:
            raise FormatError("record must have at least one wordpiece")
        if not np.isfinite(arr).all():
            raise FormatError(
                f"non-finite values in record ({self.adjective.surface!r}, "
                f"{self.context_id!r})"
            )
        self.layers = arr

    @property
    def wordpiece_count(self) -> int:
        return self.layers.shape[1]

    @property
    def sort_key(self):
        return (self.adjective.surface, self.context_id)


def pool_wordpieces(rec: ContextEmbedding, layer: int, mode: PoolingMode) -> np.ndarray:
    """Pool one record's wordpieces at ``layer`` into a single float64 vector.

    WP averages all pieces; WP-1 averages all but the last (suffix) piece.
    A single-piece token yields that piece under both modes.
    """
    n_layers = rec.layers.shape[0]
    if not 0 <= layer < n_layers:
        raise IndexError(f"layer {layer} out of range 0..{n_layers - 1}")
    pieces = rec.layers[layer]
    if mode is PoolingMode.WP_MINUS_1 and pieces.shape[0] > 1:
        pieces = pieces[:-1]
    return pieces.mean(axis=0, dtype=np.float64)


def write_dump(records, manifest: DumpManifest, path) -> None:
    """Write records to ``path``, sorted by (adjective, context_id)."""
    expected = (manifest.num_layers + 1, manifest.hidden_dim)
    ordered = sorted(records, key=lambda r: r.sort_key)
    seen = set()
    for rec in ordered:
        if (rec.layers.shape[0], rec.layers.shape[2]) != expected:
            raise FormatError(
                f"record ({rec.adjective.surface!r}, {rec.context_id!r}) has "
                f"shape {rec.layers.shape}, manifest expects layers={expected[0]} "
                f"dim={expected[1]}"
            )
        if rec.sort_key in seen:
            raise FormatError(f"duplicate record key {rec.sort_key}")
        seen.add(rec.sort_key)

    with open(path, "wb") as fh:
        fh.write(MAGIC)
        fh.write(struct.pack("<H", VERSION))
        blob = manifest.to_json().encode("utf-8")
        fh.write(struct.pack("<I", len(blob)))
        fh.write(blob)
        for rec in ordered:
            _write_str(fh, rec.adjective.surface)
            _write_str(fh, rec.context_id)
            fh.write(struct.pack("<H", rec.wordpiece_count))
            fh.write(np.ascontiguousarray(rec.layers, dtype="<f4").tobytes())


def _write_str(fh, text: str) -> None:
    data = text.encode("utf-8")
    if len(data) > _U16_MAX:
        raise FormatError(f"string too long for dump format: {text[:40]!r}...")
    fh.write(struct.pack("<H", len(data)))
    fh.write(data)


def _read_exact(fh, n: int) -> bytes:
    data = fh.read(n)
    if len(data) != n:
        raise FormatError(f"truncated dump: wanted {n} bytes, got {len(data)}")
    return data


def read_dump(path):
    """Open a dump for streaming: returns (manifest, record iterator).

    Records come back in (adjective, context_id) order, bit-exact against
    what was written.  A truncated file raises FormatError without yielding
    the partial record.
    """
    fh = open(path, "rb")
    try:
        if _read_exact(fh, 4) != MAGIC:
            raise FormatError(f"{path}: bad magic, not an embedding dump")
        (version,) = struct.unpack("<H", _read_exact(fh, 2))
        if version != VERSION:
            raise FormatError(f"{path}: unsupported dump version {version}")
        (mlen,) = struct.unpack("<I", _read_exact(fh, 4))
        manifest = DumpManifest.from_json(_read_exact(fh, mlen).decode("utf-8"))
    except Exception:
        fh.close()
        raise
    return manifest, _iter_records(fh, manifest)


def _iter_records(fh, manifest: DumpManifest):
    n_layers = manifest.num_layers + 1
    dim = manifest.hidden_dim
    try:
        while True:
            head = fh.read(2)
            if head == b"":
                return
            if len(head) != 2:
                raise FormatError("truncated dump: partial record header")
            (slen,) = struct.unpack("<H", head)
            surface = _read_exact(fh, slen).decode("utf-8")
            (clen,) = struct.unpack("<H", _read_exact(fh, 2))
            context_id = _read_exact(fh, clen).decode("utf-8")
            (count,) = struct.unpack("<H", _read_exact(fh, 2))
            if count < 1:
                raise FormatError(
                    f"record ({surface!r}, {context_id!r}) has zero wordpieces"
                )
            payload = _read_exact(fh, n_layers * count * dim * 4)
            arr = (
                np.frombuffer(payload, dtype="<f4")
                .reshape(n_layers, count, dim)
                .copy()
            )
            yield ContextEmbedding(
                adjective=Adjective(surface, manifest.language),
                context_id=context_id,
                layers=arr,
            )
    finally:
        fh.close()


class EmbeddingDump:
    """An in-memory dump: (surface, context_id) -> layer/piece/dim array."""

    def __init__(self, manifest: DumpManifest, records=()):
        self.manifest = manifest
        self._records: dict[tuple[str, str], ContextEmbedding] = {}
        self._contexts: dict[str, list[str]] = {}
        for rec in records:
            self.add(rec)

    def add(self, rec: ContextEmbedding) -> None:
        expected = (self.manifest.num_layers + 1, self.manifest.hidden_dim)
        if (rec.layers.shape[0], rec.layers.shape[2]) != expected:
            raise FormatError(
                f"record ({rec.adjective.surface!r}, {rec.context_id!r}) does "
                f"not match manifest dims {expected}"
            )
        key = rec.sort_key
        if key in self._records:
            raise FormatError(f"duplicate record key {key}")
        self._records[key] = rec
        self._contexts.setdefault(key[0], []).append(key[1])

    @classmethod
    def load(cls, path) -> "EmbeddingDump":
        manifest, records = read_dump(path)
        return cls(manifest, records)

    def save(self, path) -> None:
        write_dump(self._records.values(), self.manifest, path)

    def __len__(self):
        return len(self._records)

    def __contains__(self, key) -> bool:
        return tuple(key) in self._records

    @property
    def num_layers(self) -> int:
        return self.manifest.num_layers

    @property
    def adjectives(self) -> tuple[str, ...]:
        return tuple(sorted(self._contexts))

    def record(self, surface: str, context_id: str) -> ContextEmbedding:
        try:
            return self._records[(surface, context_id)]
        except KeyError:
            raise MissingDataError(
                f"no record for ({surface!r}, {context_id!r})",
                missing=[(surface, context_id)],
            ) from None

    def contexts_for(self, surface: str) -> tuple[str, ...]:
        return tuple(sorted(self._contexts.get(surface, ())))

    def shared_contexts(self, surfaces) -> tuple[str, ...]:
        """Context ids available for every one of ``surfaces``."""
        surfaces = list(surfaces)
        if not surfaces:
            return ()
        shared = set(self._contexts.get(surfaces[0], ()))
        for surface in surfaces[1:]:
            shared &= set(self._contexts.get(surface, ()))
        return tuple(sorted(shared))

    def pool(self, surface: str, context_id: str, layer: int,
             mode: PoolingMode) -> np.ndarray:
        return pool_wordpieces(self.record(surface, context_id), layer, mode)


def adjective_representation(
    dump: EmbeddingDump,
    adjective,
    contexts,
    layer: int,
    mode: PoolingMode,
) -> np.ndarray:
    """Mean pooled vector of ``adjective`` over ``contexts`` at ``layer``.

    The mean is taken over contexts in sorted order, so the result does not
    depend on iteration order.  Missing contexts raise MissingDataError
    listing the absent ids.
    """
    surface = adjective.surface if isinstance(adjective, Adjective) else adjective
    ids = sorted(set(contexts))
    if not ids:
        raise MissingDataError(f"no contexts requested for {surface!r}")
    absent = [c for c in ids if (surface, c) not in dump]
    if absent:
        raise MissingDataError(
            f"{surface!r} is missing {len(absent)} context(s): {absent}",
            missing=absent,
        )
    pooled = [dump.pool(surface, c, layer, mode) for c in ids]
    return np.mean(pooled, axis=0, dtype=np.float64)
