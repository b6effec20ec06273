"""Shared fixtures: a tiny local BERT checkpoint and acceptance plumbing.

The checkpoint is built once per session from a hand-rolled WordPiece
vocabulary, so tests exercise real tokenizer offset mapping and real
transformer forward passes without any network access.  Weights are
random but seeded; nothing here depends on their values beyond
determinism.
"""

import contextlib

import pytest

# WordPiece inventory. Continuation pieces let a handful of words split
# into known multi-piece sequences: goodish -> good ##ish,
# minuscule -> min ##usc ##ule, gorgeous -> gor ##geous, filthy -> filth ##y.
VOCAB = [
    "[PAD]", "[UNK]", "[CLS]", "[SEP]", "[MASK]",
    "the", "a", "was", "is", "and", "very", "it", "felt",
    "room", "here", "today", ".", ",",
    "soup", "tea", "bread",
    "good", "bad", "warm", "cold", "big", "small",
    "min", "gor", "filth",
    "##ish", "##ly", "##er", "##usc", "##ule", "##geous", "##y",
]


def build_tiny_checkpoint(directory):
    import torch
    from tokenizers import Tokenizer, models, normalizers, pre_tokenizers, processors
    from transformers import BertConfig, BertModel, PreTrainedTokenizerFast

    vocab = {tok: i for i, tok in enumerate(VOCAB)}
    tk = Tokenizer(
        models.WordPiece(vocab=vocab, unk_token="[UNK]", max_input_chars_per_word=100)
    )
    tk.normalizer = normalizers.BertNormalizer(lowercase=True)
    tk.pre_tokenizer = pre_tokenizers.BertPreTokenizer()
    tk.post_processor = processors.TemplateProcessing(
        single="[CLS] $A [SEP]",
        pair="[CLS] $A [SEP] $B [SEP]",
        special_tokens=[("[CLS]", vocab["[CLS]"]), ("[SEP]", vocab["[SEP]"])],
    )
    fast = PreTrainedTokenizerFast(
        tokenizer_object=tk,
        unk_token="[UNK]",
        pad_token="[PAD]",
        cls_token="[CLS]",
        sep_token="[SEP]",
        mask_token="[MASK]",
    )

    torch.manual_seed(0)
    config = BertConfig(
        vocab_size=len(VOCAB),
        hidden_size=16,
        num_hidden_layers=2,
        num_attention_heads=2,
        intermediate_size=32,
        max_position_embeddings=64,
    )
    model = BertModel(config)
    model.eval()
    model.save_pretrained(directory)
    fast.save_pretrained(directory)
    return directory


@pytest.fixture(scope="session")
def tiny_model_dir(tmp_path_factory):
    return str(build_tiny_checkpoint(tmp_path_factory.mktemp("tiny_bert")))


_LINES = []


@pytest.fixture
def criterion():
    @contextlib.contextmanager
    def _criterion(name):
        info = {"detail": ""}
        try:
            yield info
        except pytest.skip.Exception as exc:
            _LINES.append(f"SKIP  {name}: {exc}")
            raise
        except BaseException:
            _LINES.append(f"FAIL  {name}")
            raise
        else:
            detail = f" ({info['detail']})" if info["detail"] else ""
            _LINES.append(f"PASS  {name}{detail}")

    return _criterion


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if _LINES:
        terminalreporter.section("acceptance criteria (extractor)")
        for line in _LINES:
            terminalreporter.write_line(line)
