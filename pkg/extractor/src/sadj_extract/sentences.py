"""Reader for the sentence-context JSONL interchange format.

One JSON object per line with keys scale_id, context_id, adjective,
language, text, target_index, origin.  target_index points at the
adjective's slot under the shared whitespace/punctuation tokenizer, so a
sentence can contain the same word twice without ambiguity.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from pathlib import Path

from .errors import SentenceFormatError

# Same token contract as the consumer side: word characters with internal
# hyphens/apostrophes form one token, any other non-space char stands alone.
_TOKEN_RE = re.compile(r"\w+(?:[-']\w+)*|[^\w\s]")

_ORIGINS = frozenset({"sampled", "substituted"})


def token_spans(text: str) -> list[tuple[str, int, int]]:
    return [(m.group(), m.start(), m.end()) for m in _TOKEN_RE.finditer(text)]


@dataclass(frozen=True)
class Sentence:
    scale_id: str
    context_id: str
    adjective: str
    language: str
    text: str
    target_index: int
    origin: str

    def target_span(self) -> tuple[int, int]:
        """Character span of the target token; raises ValueError when the
        target_index does not land on the stated adjective."""
        spans = token_spans(self.text)
        if not 0 <= self.target_index < len(spans):
            raise ValueError(
                f"target_index {self.target_index} out of range "
                f"({len(spans)} tokens)"
            )
        tok, start, end = spans[self.target_index]
        if tok.lower() != self.adjective.lower():
            raise ValueError(
                f"token {tok!r} at target_index does not match adjective "
                f"{self.adjective!r}"
            )
        return start, end


def read_sentences(path: str | Path) -> tuple[Sentence, ...]:
    """Parse a sentence JSONL file; blank lines are skipped.

    Structural problems raise SentenceFormatError with the offending
    line number.  Semantic problems with an individual target (bad
    index, token mismatch) are left for the extraction loop to handle
    per sentence, so one bad record does not kill a whole corpus.
    """
    path = Path(path)
    out: list[Sentence] = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                raw = json.loads(line)
            except json.JSONDecodeError as exc:
                raise SentenceFormatError(f"{path}:{lineno}: {exc}") from exc
            if not isinstance(raw, dict):
                raise SentenceFormatError(f"{path}:{lineno}: expected a JSON object")
            try:
                sent = Sentence(
                    scale_id=str(raw["scale_id"]),
                    context_id=str(raw["context_id"]),
                    adjective=str(raw["adjective"]),
                    language=str(raw.get("language", "en")),
                    text=str(raw["text"]),
                    target_index=int(raw["target_index"]),
                    origin=str(raw["origin"]),
                )
            except (KeyError, TypeError, ValueError) as exc:
                raise SentenceFormatError(f"{path}:{lineno}: {exc}") from exc
            if sent.origin not in _ORIGINS:
                raise SentenceFormatError(
                    f"{path}:{lineno}: origin must be one of {sorted(_ORIGINS)}, "
                    f"got {sent.origin!r}"
                )
            if not sent.adjective or not sent.text:
                raise SentenceFormatError(
                    f"{path}:{lineno}: adjective and text must be non-empty"
                )
            out.append(sent)
    return tuple(out)
