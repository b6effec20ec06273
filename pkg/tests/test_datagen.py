import json

import pytest

from scalaradj.datagen import (
    Origin,
    SamplingConstraints,
    SentenceContext,
    context_id_for,
    load_contexts_jsonl,
    read_corpus,
    sample_contexts,
    substitute,
    substitute_all,
    tokenize,
    token_spans,
)
from scalaradj.errors import CorruptContextError, InsufficientCorpusError, ParseError
from scalaradj.scales import Adjective

from helpers import make_scale


def make_context(text, surface, scale_id="sc", origin=Origin.SAMPLED):
    tokens = tokenize(text)
    idx = tokens.index(surface)
    return SentenceContext(scale_id, context_id_for(scale_id, text),
                           Adjective(surface), text, idx, origin)


def pad(text, n=12):
    """Left-pad a sentence with filler tokens to satisfy the length floor."""
    return " ".join(["filler"] * n) + " " + text


class TestTokenizer:
    def test_words_and_punctuation(self):
        assert tokenize("The soup was good, really good!") == \
            ["The", "soup", "was", "good", ",", "really", "good", "!"]

    def test_hyphen_and_apostrophe_kept_inside_words(self):
        assert tokenize("a well-known actor isn't bad") == \
            ["a", "well-known", "actor", "isn't", "bad"]

    def test_spans_slice_back_to_tokens(self):
        text = "It was good -- very good."
        for tok, start, end in token_spans(text):
            assert text[start:end] == tok

    def test_empty(self):
        assert tokenize("") == []


class TestSentenceContext:
    def test_target_must_match_token(self):
        with pytest.raises(CorruptContextError):
            SentenceContext("sc", context_id_for("sc", "the food was great"),
                            Adjective("good"), "the food was great", 3,
                            Origin.SAMPLED)

    def test_target_index_bounds(self):
        with pytest.raises(CorruptContextError):
            SentenceContext("sc", "x" * 16, Adjective("good"),
                            "good food", 5, Origin.SAMPLED)

    def test_case_insensitive_match(self):
        ctx = SentenceContext("sc", context_id_for("sc", "Good soup here"),
                              Adjective("good"), "Good soup here", 0,
                              Origin.SAMPLED)
        assert ctx.adjective.surface == "good"

    def test_context_id_is_scale_and_text_hash(self):
        a = context_id_for("sc", "some text")
        assert a == context_id_for("sc", "some text")
        assert a != context_id_for("other", "some text")
        assert a != context_id_for("sc", "some text!")
        assert len(a) == 16
        int(a, 16)  # hex digest prefix


class TestSampling:
    def _corpus(self, n=30, word="good"):
        return [pad(f"the dish number {i} was really {word} overall")
                for i in range(n)]

    def _scale(self):
        return make_scale([["good"], ["great"], ["perfect"]], scale_id="sc")

    def test_exactly_n_and_deterministic(self):
        corpus = self._corpus()
        out1 = sample_contexts(corpus, self._scale(), n=10, seed=4)
        out2 = sample_contexts(corpus, self._scale(), n=10, seed=4)
        assert len(out1) == 10
        assert out1 == out2
        out3 = sample_contexts(corpus, self._scale(), n=10, seed=5)
        assert out1 != out3

    def test_selection_keeps_corpus_order(self):
        corpus = self._corpus()
        out = sample_contexts(corpus, self._scale(), n=8, seed=0)
        positions = [corpus.index(c.text) for c in out]
        assert positions == sorted(positions)

    def test_any_scale_member_is_eligible(self):
        corpus = [pad("it was honestly great to see")] * 1 + \
                 [pad(f"meal {i} was good value") for i in range(9)]
        out = sample_contexts(corpus, self._scale(), n=10, seed=0)
        assert sum(1 for c in out if c.adjective.surface == "great") == 1

    def test_first_occurrence_is_target(self):
        corpus = [pad("good food and good service all around")]
        out = sample_contexts(corpus, self._scale(), n=1, seed=0)
        tokens = tokenize(out[0].text)
        assert out[0].target_index == tokens.index("good")

    def test_substring_matches_do_not_count(self):
        # "goodness" contains the surface but is a different token
        corpus = [pad("the goodness of it all was striking")]
        with pytest.raises(InsufficientCorpusError):
            sample_contexts(corpus, self._scale(), n=1, seed=0)

    def test_length_constraints(self):
        corpus = ["too short good"] + self._corpus(12)
        constraints = SamplingConstraints(min_tokens=10, max_tokens=100)
        out = sample_contexts(corpus, self._scale(), n=12, seed=0,
                              constraints=constraints)
        assert all(10 <= len(tokenize(c.text)) <= 100 for c in out)
        long_corpus = [" ".join(["good"] + ["word"] * 200)]
        with pytest.raises(InsufficientCorpusError):
            sample_contexts(long_corpus, self._scale(), n=1, seed=0)

    def test_duplicates_dropped(self):
        corpus = [pad("such a good day it was")] * 50
        with pytest.raises(InsufficientCorpusError) as exc:
            sample_contexts(corpus, self._scale(), n=2, seed=0)
        assert exc.value.found == 1

    def test_insufficient_reports_found(self):
        with pytest.raises(InsufficientCorpusError) as exc:
            sample_contexts(self._corpus(3), self._scale(), n=10, seed=0)
        assert exc.value.found == 3

    def test_sampling_is_unbiased_enough(self):
        # over many seeds every eligible sentence should be picked sometimes
        corpus = self._corpus(12)
        seen = set()
        for seed in range(60):
            for c in sample_contexts(corpus, self._scale(), n=4, seed=seed):
                seen.add(c.text)
        assert len(seen) == 12


class TestSubstitution:
    def test_single_token_changes(self):
        ctx = make_context(pad("the soup was good today"), "good")
        out = substitute(ctx, Adjective("excellent"))
        assert out.adjective.surface == "excellent"
        assert out.origin is Origin.SUBSTITUTED
        assert tokenize(out.text)[out.target_index] == "excellent"
        before = tokenize(ctx.text)
        after = tokenize(out.text)
        assert len(before) == len(after)
        assert sum(1 for a, b in zip(before, after) if a != b) == 1

    def test_context_id_shared_across_variants(self):
        ctx = make_context(pad("the soup was good today"), "good")
        out = substitute(ctx, Adjective("excellent"))
        assert out.context_id == ctx.context_id
        assert out.scale_id == ctx.scale_id

    def test_other_occurrences_untouched(self):
        ctx = make_context(pad("good start and good end"), "good")
        out = substitute(ctx, Adjective("fine"))
        assert tokenize(out.text).count("good") == 1

    def test_substitute_all_cross_product(self):
        scale = make_scale([["good"], ["great"], ["perfect"]], scale_id="sc")
        corpus = [pad(f"venue {i} was good for us") for i in range(10)]
        sampled = sample_contexts(corpus, scale, n=10, seed=0)
        full = substitute_all(sampled, scale)
        assert len(full) == len(scale.adjectives) * 10
        by_adj = {}
        for c in full:
            by_adj.setdefault(c.adjective.surface, set()).add(c.context_id)
        # every adjective covers the identical context-id set
        sets = list(by_adj.values())
        assert all(s == sets[0] for s in sets)
        originals = [c for c in full if c.origin is Origin.SAMPLED]
        assert len(originals) == 10

    def test_substitute_all_rejects_foreign_context(self):
        scale = make_scale([["good"], ["great"]], scale_id="sc")
        foreign = make_context(pad("a good outcome"), "good",
                               scale_id="other")
        with pytest.raises(CorruptContextError):
            substitute_all([foreign], scale)


class TestJsonl:
    def test_roundtrip(self, tmp_path):
        scale = make_scale([["good"], ["great"]], scale_id="sc")
        corpus = [pad(f"item {i} looked good enough") for i in range(10)]
        contexts = substitute_all(sample_contexts(corpus, scale, n=10,
                                                  seed=1), scale)
        path = tmp_path / "ctx.jsonl"
        from scalaradj.datagen import save_contexts_jsonl
        save_contexts_jsonl(contexts, path)
        loaded = load_contexts_jsonl(path)
        assert list(loaded) == list(contexts)
        with open(path, encoding="utf-8") as fh:
            first = json.loads(fh.readline())
        assert first["language"] == "en"

    def test_parse_error_carries_line_number(self, tmp_path):
        path = tmp_path / "bad.jsonl"
        good = json.dumps({
            "scale_id": "sc", "context_id": "a" * 16, "adjective": "good",
            "text": pad("a good one"), "target_index": 13,
            "origin": "sampled", "language": "en"})
        path.write_text(good + "\n{broken\n", encoding="utf-8")
        with pytest.raises(ParseError, match=r":2:"):
            load_contexts_jsonl(path)

    def test_read_corpus_skips_blank_lines(self, tmp_path):
        path = tmp_path / "corpus.txt"
        path.write_text("one line\n\n  \nanother line\n", encoding="utf-8")
        assert list(read_corpus(path)) == ["one line", "another line"]
