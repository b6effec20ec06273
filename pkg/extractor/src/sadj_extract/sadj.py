"""Standalone writer for the SADJ embedding dump format.

The format is a small binary container: the ASCII magic ``SADJ``, a
little-endian u16 format version (currently 1), a u32-length-prefixed
UTF-8 JSON manifest, then one record per (surface, context_id) pair.
Each record stores length-prefixed surface and context_id strings, a
u16 wordpiece count k, and ``(num_layers + 1) * k * hidden_dim``
little-endian float32 values in layer-major order.  Layer 0 is the
embedding layer; layers 1..num_layers are transformer outputs.
Records are sorted by (surface, context_id) so byte output is a pure
function of the record set.

This module deliberately has no dependency on the consumer package;
round-trip compatibility is enforced by tests instead.
"""

from __future__ import annotations

import json
import struct
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable

import numpy as np

from .errors import DumpFormatError

MAGIC = b"SADJ"
VERSION = 1


@dataclass(frozen=True)
class Manifest:
    """Dump-level metadata, serialised into the file header."""

    model_id: str
    num_layers: int
    hidden_dim: int
    cased: bool = False
    language: str = "en"

    def to_json(self) -> str:
        # pooling_ready and dtype are fixed by this writer: we always emit
        # per-wordpiece float32 vectors, never pre-pooled ones.
        return json.dumps(
            {
                "model_id": self.model_id,
                "num_layers": self.num_layers,
                "hidden_dim": self.hidden_dim,
                "pooling_ready": True,
                "language": self.language,
                "dtype": "float32-le",
                "cased": self.cased,
            },
            sort_keys=True,
        )


@dataclass(frozen=True)
class Record:
    """One adjective occurrence: layers has shape (num_layers+1, k, hidden_dim)."""

    surface: str
    context_id: str
    layers: np.ndarray = field(repr=False)


def _encode_str(s: str) -> bytes:
    raw = s.encode("utf-8")
    if len(raw) > 0xFFFF:
        raise DumpFormatError(f"string too long for u16 length prefix: {s[:40]}...")
    return struct.pack("<H", len(raw)) + raw


def write_dump(records: Iterable[Record], manifest: Manifest, path: str | Path) -> int:
    """Write records to path; returns the number of records written.

    Records are validated against the manifest (layer count, hidden dim,
    finite values) and sorted by (surface, context_id).  Duplicate keys
    are an error: the format requires one record per occurrence.
    """
    recs = sorted(records, key=lambda r: (r.surface, r.context_id))
    expected_layers = manifest.num_layers + 1
    seen: set[tuple[str, str]] = set()
    for rec in recs:
        key = (rec.surface, rec.context_id)
        if key in seen:
            raise DumpFormatError(f"duplicate record key {key}")
        seen.add(key)
        arr = np.asarray(rec.layers)
        if arr.ndim != 3:
            raise DumpFormatError(
                f"record {key}: layers must be 3-dimensional, got shape {arr.shape}"
            )
        if arr.shape[0] != expected_layers:
            raise DumpFormatError(
                f"record {key}: expected {expected_layers} layer slices "
                f"(num_layers + embedding layer), got {arr.shape[0]}"
            )
        if arr.shape[1] < 1:
            raise DumpFormatError(f"record {key}: wordpiece count must be >= 1")
        if arr.shape[1] > 0xFFFF:
            raise DumpFormatError(f"record {key}: wordpiece count exceeds u16")
        if arr.shape[2] != manifest.hidden_dim:
            raise DumpFormatError(
                f"record {key}: hidden dim {arr.shape[2]} != manifest {manifest.hidden_dim}"
            )
        if not np.all(np.isfinite(arr)):
            raise DumpFormatError(f"record {key}: non-finite values")

    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    manifest_raw = manifest.to_json().encode("utf-8")
    with open(path, "wb") as fh:
        fh.write(MAGIC)
        fh.write(struct.pack("<H", VERSION))
        fh.write(struct.pack("<I", len(manifest_raw)))
        fh.write(manifest_raw)
        for rec in recs:
            arr = np.ascontiguousarray(rec.layers, dtype="<f4")
            fh.write(_encode_str(rec.surface))
            fh.write(_encode_str(rec.context_id))
            fh.write(struct.pack("<H", arr.shape[1]))
            fh.write(arr.tobytes())
    return len(recs)
