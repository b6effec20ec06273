"""Shared-context sentence construction: sampling plus lexical substitution.

For each scale, n corpus sentences containing one of its adjectives are
sampled; every other adjective of the scale is then spliced into the same
slot, so all members of a scale are observed in exactly the same n
contexts.  The output JSONL is what the embedding extractor consumes.
"""

from __future__ import annotations

import dataclasses
import hashlib
import json
import random
import re
from dataclasses import dataclass
from enum import Enum

from .errors import CorruptContextError, InsufficientCorpusError, ParseError
from .scales import Adjective, Scale

# word tokens keep internal hyphens/apostrophes; everything else is
# punctuation, one char per token
_TOKEN_RE = re.compile(r"\w+(?:[-']\w+)*|[^\w\s]")


def token_spans(text: str) -> list[tuple[str, int, int]]:
    """(token, start, end) under whitespace+punctuation tokenization."""
    return [(m.group(), m.start(), m.end()) for m in _TOKEN_RE.finditer(text)]


def tokenize(text: str) -> list[str]:
    return [t for t, _, _ in token_spans(text)]


class Origin(Enum):
    SAMPLED = "sampled"
    SUBSTITUTED = "substituted"


@dataclass(frozen=True)
class SentenceContext:
    """One sentence with a single adjective slot filled.

    target_index is the token index of the occupant; all substituted
    variants of a sampled sentence share its context_id.
    """

    scale_id: str
    context_id: str
    adjective: Adjective
    text: str
    target_index: int
    origin: Origin

    def __post_init__(self):
        tokens = tokenize(self.text)
        if not 0 <= self.target_index < len(tokens):
            raise CorruptContextError(
                f"context {self.context_id!r}: target_index {self.target_index} "
                f"out of range for {len(tokens)} tokens"
            )
        if tokens[self.target_index].lower() != self.adjective.surface.lower():
            raise CorruptContextError(
                f"context {self.context_id!r}: token "
                f"{tokens[self.target_index]!r} at index {self.target_index} "
                f"is not {self.adjective.surface!r}"
            )


@dataclass(frozen=True)
class SamplingConstraints:
    min_tokens: int = 10
    max_tokens: int = 100
    drop_duplicates: bool = True

    def __post_init__(self):
        if not 1 <= self.min_tokens <= self.max_tokens:
            raise ValueError(
                f"need 1 <= min_tokens <= max_tokens, got "
                f"{self.min_tokens}/{self.max_tokens}"
            )


def context_id_for(scale_id: str, text: str) -> str:
    digest = hashlib.sha1(f"{scale_id}\x00{text}".encode("utf-8")).hexdigest()
    return digest[:16]


def _first_target(tokens, surfaces) -> tuple[int, str] | None:
    """First token that is some scale surface in unmarked (exact lowercase)
    form; capitalized or otherwise marked occurrences do not count."""
    for idx, token in enumerate(tokens):
        if token in surfaces:
            return idx, token
    return None


def sample_contexts(
    corpus,
    scale: Scale,
    n: int = 10,
    seed=0,
    constraints: SamplingConstraints | None = None,
) -> tuple[SentenceContext, ...]:
    """Uniformly sample n eligible sentences for ``scale``.

    A sentence is eligible when its token count is within the constraints
    and it contains at least one scale adjective exactly as listed.  The
    draw is seeded per scale, so adding scales never disturbs the sample of
    an existing one; selected sentences keep corpus order.
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    constraints = constraints or SamplingConstraints()
    surfaces = set(scale.surfaces)
    eligible: list[tuple[str, int, str]] = []
    seen_texts = set()
    for text in corpus:
        tokens = tokenize(text)
        if not constraints.min_tokens <= len(tokens) <= constraints.max_tokens:
            continue
        hit = _first_target(tokens, surfaces)
        if hit is None:
            continue
        if constraints.drop_duplicates:
            if text in seen_texts:
                continue
            seen_texts.add(text)
        eligible.append((text, hit[0], hit[1]))

    if len(eligible) < n:
        raise InsufficientCorpusError(
            f"scale {scale.scale_id!r}: need {n} eligible sentences, found "
            f"{len(eligible)}",
            found=len(eligible),
        )
    rng = random.Random(f"{seed}:{scale.scale_id}")
    picked = sorted(rng.sample(range(len(eligible)), n))
    out = []
    for idx in picked:
        text, target_index, surface = eligible[idx]
        out.append(
            SentenceContext(
                scale_id=scale.scale_id,
                context_id=context_id_for(scale.scale_id, text),
                adjective=Adjective(surface, scale.language),
                text=text,
                target_index=target_index,
                origin=Origin.SAMPLED,
            )
        )
    return tuple(out)


def substitute(context: SentenceContext, replacement: Adjective) -> SentenceContext:
    """Splice ``replacement`` into the target slot of one context.

    The swap must change exactly that one token; a replacement that the
    tokenizer would split differently is rejected.
    """
    spans = token_spans(context.text)
    token, start, end = spans[context.target_index]
    if token.lower() != context.adjective.surface.lower():
        raise CorruptContextError(
            f"context {context.context_id!r}: target token {token!r} does not "
            f"match occupant {context.adjective.surface!r}"
        )
    new_text = context.text[:start] + replacement.surface + context.text[end:]
    new_tokens = tokenize(new_text)
    old_tokens = tokenize(context.text)
    if (
        len(new_tokens) != len(old_tokens)
        or new_tokens[context.target_index] != replacement.surface
    ):
        raise CorruptContextError(
            f"substituting {replacement.surface!r} into context "
            f"{context.context_id!r} does not yield a single-token swap"
        )
    return dataclasses.replace(
        context,
        adjective=replacement,
        text=new_text,
        origin=Origin.SUBSTITUTED,
    )


def substitute_all(contexts, scale: Scale) -> tuple[SentenceContext, ...]:
    """Expand sampled contexts so every scale adjective fills every slot.

    Output size is |scale adjectives| * len(contexts); variants keep the
    sampled sentence's context_id, so per-adjective context sets are
    identical across the scale.
    """
    out = []
    for context in contexts:
        if context.scale_id != scale.scale_id:
            raise CorruptContextError(
                f"context {context.context_id!r} belongs to "
                f"{context.scale_id!r}, not {scale.scale_id!r}"
            )
        for adjective in scale.adjectives:
            if adjective.surface == context.adjective.surface:
                out.append(context)
            else:
                out.append(substitute(context, adjective))
    return tuple(out)


def save_contexts_jsonl(contexts, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for c in contexts:
            fh.write(
                json.dumps(
                    {
                        "scale_id": c.scale_id,
                        "context_id": c.context_id,
                        "adjective": c.adjective.surface,
                        "language": c.adjective.language,
                        "text": c.text,
                        "target_index": c.target_index,
                        "origin": c.origin.value,
                    },
                    ensure_ascii=False,
                    sort_keys=True,
                )
                + "\n"
            )


def load_contexts_jsonl(path) -> tuple[SentenceContext, ...]:
    out = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                raw = json.loads(line)
                out.append(
                    SentenceContext(
                        scale_id=raw["scale_id"],
                        context_id=raw["context_id"],
                        adjective=Adjective(
                            raw["adjective"], raw.get("language", "en")
                        ),
                        text=raw["text"],
                        target_index=int(raw["target_index"]),
                        origin=Origin(raw["origin"]),
                    )
                )
            except (json.JSONDecodeError, KeyError, ValueError) as exc:
                raise ParseError(f"{path}:{lineno}: {exc}") from exc
    return tuple(out)


def read_corpus(path):
    """Yield non-empty stripped lines of a one-sentence-per-line file."""
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if line:
                yield line
