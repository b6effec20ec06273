"""Round-trip acceptance: extractor output read back bit-exactly.

Ten hand-checked sentences cover single- and multi-wordpiece targets.
For each one the dump record, parsed by the consumer package's reader,
must equal a reference forward pass of the same checkpoint sliced at
hand-verified wordpiece positions, bitwise.
"""

import json

import numpy as np
from scalaradj.dump import EmbeddingDump

from sadj_extract import ExtractionJob, extract_contextual

# text, adjective, target_index, expected wordpiece count
CASES = [
    ("the soup was good today .", "good", 3, 1),
    ("the soup was goodish today .", "goodish", 3, 2),
    ("it felt minuscule here", "minuscule", 2, 3),
    ("the room was gorgeous and warm", "gorgeous", 3, 2),
    ("the tea was filthy today", "filthy", 3, 2),
    ("the bread was warm here", "warm", 3, 1),
    ("the soup felt cold today", "cold", 3, 1),
    ("a big room is here", "big", 1, 1),
    ("a small soup was here today", "small", 1, 1),
    ("the tea was bad and cold", "bad", 3, 1),
]


def test_dump_roundtrip_bit_exact(tiny_model_dir, tmp_path, criterion):
    import torch
    from transformers import AutoModel, AutoTokenizer

    sentences = tmp_path / "accept.jsonl"
    with open(sentences, "w", encoding="utf-8") as fh:
        for i, (text, adjective, target_index, _) in enumerate(CASES, start=1):
            fh.write(
                json.dumps(
                    {
                        "scale_id": "accept",
                        "context_id": f"accept:{i:02d}",
                        "adjective": adjective,
                        "language": "en",
                        "text": text,
                        "target_index": target_index,
                        "origin": "sampled",
                    }
                )
                + "\n"
            )

    out = tmp_path / "accept.sadj"
    with criterion("dump round-trip (extractor -> reader, bit-exact)") as info:
        report = extract_contextual(
            ExtractionJob(
                model=tiny_model_dir, sentences=sentences, out=out, batch_size=1
            )
        )
        assert report.written == len(CASES)
        assert report.skipped == ()

        dump = EmbeddingDump.load(out)
        assert len(dump) == len(CASES)
        assert dump.manifest.num_layers == 2
        assert dump.manifest.hidden_dim == 16

        tokenizer = AutoTokenizer.from_pretrained(tiny_model_dir)
        model = AutoModel.from_pretrained(tiny_model_dir)
        model.eval()

        multi = single = 0
        for i, (text, adjective, target_index, expected_k) in enumerate(
            CASES, start=1
        ):
            rec = dump.record(adjective, f"accept:{i:02d}")
            assert rec.wordpiece_count == expected_k, (adjective, expected_k)
            assert rec.layers.shape == (3, expected_k, 16)
            if expected_k > 1:
                multi += 1
            else:
                single += 1

            # reference pass: locate the span by hand from the offsets,
            # then slice every hidden state directly
            enc = tokenizer(text, return_offsets_mapping=True)
            spans = enc["offset_mapping"]
            tok_start = text.lower().index(adjective)
            tok_end = tok_start + len(adjective)
            piece_idx = [
                j
                for j, (a, b) in enumerate(spans)
                if b > a and a < tok_end and b > tok_start
            ]
            assert len(piece_idx) == expected_k
            with torch.no_grad():
                hidden = model(
                    **tokenizer(text, return_tensors="pt"), output_hidden_states=True
                ).hidden_states
            ref = (
                torch.stack(
                    [h[0, piece_idx[0] : piece_idx[-1] + 1, :] for h in hidden]
                )
                .numpy()
                .astype(np.float32)
            )
            assert rec.layers.dtype == np.float32
            assert np.array_equal(rec.layers, ref), adjective

        assert single == 6 and multi == 4
        info["detail"] = (
            f"{len(CASES)} sentences, {single} single / {multi} multi wordpiece, "
            "all layers bitwise equal"
        )
