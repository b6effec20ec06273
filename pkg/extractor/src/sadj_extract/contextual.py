"""Contextual embedding extraction from transformer checkpoints.

Runs a masked-LM encoder over sentence contexts, locates each target
adjective's wordpiece span through the tokenizer's character offsets,
and writes all layers of those wordpiece vectors to a SADJ dump.
Sentences whose target cannot be recovered are skipped with a logged
reason rather than failing the run.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import ExtractionError, SentenceFormatError
from .sadj import Manifest, Record, write_dump
from .sentences import Sentence, read_sentences

logger = logging.getLogger("sadj_extract")


@dataclass(frozen=True)
class ExtractionJob:
    """Everything one contextual extraction run needs.

    model is a checkpoint name or local directory understood by
    AutoModel/AutoTokenizer.  cased is recorded in the manifest only;
    casing itself is whatever the checkpoint's tokenizer does.
    max_length caps input length in wordpieces; when None the model's
    position-embedding size is used (the tokenizer's own model_max_length
    is unreliable for local checkpoints).
    """

    model: str
    sentences: str | Path
    out: str | Path
    cased: bool = False
    batch_size: int = 16
    max_length: int | None = None


@dataclass(frozen=True)
class Skip:
    surface: str
    context_id: str
    reason: str


@dataclass(frozen=True)
class ExtractionReport:
    written: int
    skipped: tuple[Skip, ...] = ()
    num_layers: int = 0
    hidden_dim: int = 0

    def summary(self) -> str:
        msg = (
            f"wrote {self.written} records "
            f"({self.num_layers} layers + embeddings, dim {self.hidden_dim})"
        )
        if self.skipped:
            msg += f", skipped {len(self.skipped)}"
        return msg


def _locate_pieces(
    offsets: list[tuple[int, int]], start: int, end: int
) -> tuple[int, int] | str:
    """Indices of the wordpieces overlapping [start, end), or a reason string.

    Special tokens carry (0, 0) offsets and are excluded by the b > a
    test, so [CLS]/[SEP] can never be mistaken for target pieces.
    """
    hit = [
        i
        for i, (a, b) in enumerate(offsets)
        if b > a and a < end and b > start
    ]
    if not hit:
        return "target span not covered by any wordpiece"
    if hit != list(range(hit[0], hit[-1] + 1)):
        return "target wordpieces are not contiguous"
    return hit[0], hit[-1]


def extract_contextual(job: ExtractionJob) -> ExtractionReport:
    """Run the job end to end and write job.out; returns a report.

    Deterministic for a fixed checkpoint: the model runs in eval mode
    under no_grad, and record order in the dump is independent of batch
    boundaries.
    """
    import torch
    from transformers import AutoModel, AutoTokenizer

    sents = read_sentences(job.sentences)
    if not sents:
        raise SentenceFormatError(f"{job.sentences}: no sentence records")
    langs = {s.language for s in sents}
    if len(langs) > 1:
        raise SentenceFormatError(
            f"mixed languages in one extraction run: {sorted(langs)}; "
            "split the corpus per language and write one dump each"
        )

    tokenizer = AutoTokenizer.from_pretrained(job.model)
    if not tokenizer.is_fast:
        raise ExtractionError(
            "checkpoint has no fast tokenizer; character offsets are required"
        )
    model = AutoModel.from_pretrained(job.model)
    model.eval()
    num_layers = int(model.config.num_hidden_layers)
    hidden_dim = int(model.config.hidden_size)
    limit = job.max_length
    if limit is None:
        limit = int(getattr(model.config, "max_position_embeddings", 512))
    if limit < 3:
        raise ExtractionError(f"max_length {limit} leaves no room for content")

    plan: list[tuple[Sentence, int, int]] = []
    skipped: list[Skip] = []
    seen: set[tuple[str, str]] = set()

    def skip(sent: Sentence, reason: str) -> None:
        skipped.append(Skip(sent.adjective, sent.context_id, reason))
        logger.warning("skip (%s, %s): %s", sent.adjective, sent.context_id, reason)

    for sent in sents:
        key = (sent.adjective.lower(), sent.context_id)
        if key in seen:
            skip(sent, "duplicate (adjective, context_id) key")
            continue
        try:
            start, end = sent.target_span()
        except ValueError as exc:
            skip(sent, str(exc))
            continue
        enc = tokenizer(sent.text, return_offsets_mapping=True)
        if len(enc["input_ids"]) > limit:
            skip(sent, f"over-length: {len(enc['input_ids'])} wordpieces > {limit}")
            continue
        located = _locate_pieces(enc["offset_mapping"], start, end)
        if isinstance(located, str):
            skip(sent, located)
            continue
        seen.add(key)
        plan.append((sent, located[0], located[1]))

    records: list[Record] = []
    with torch.no_grad():
        for i in range(0, len(plan), job.batch_size):
            batch = plan[i : i + job.batch_size]
            enc = tokenizer(
                [s.text for s, _, _ in batch],
                padding=True,
                truncation=False,
                return_tensors="pt",
            )
            hidden = model(**enc, output_hidden_states=True).hidden_states
            for row, (sent, lo, hi) in enumerate(batch):
                arr = (
                    torch.stack([h[row, lo : hi + 1, :] for h in hidden])
                    .to(torch.float32)
                    .cpu()
                    .numpy()
                )
                records.append(Record(sent.adjective.lower(), sent.context_id, arr))

    manifest = Manifest(
        model_id=str(job.model),
        num_layers=num_layers,
        hidden_dim=hidden_dim,
        cased=job.cased,
        language=next(iter(langs)),
    )
    write_dump(records, manifest, job.out)
    report = ExtractionReport(
        written=len(records),
        skipped=tuple(skipped),
        num_layers=num_layers,
        hidden_dim=hidden_dim,
    )
    logger.info("%s -> %s", report.summary(), job.out)
    return report
