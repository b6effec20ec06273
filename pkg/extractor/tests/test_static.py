"""Static vector path: .vec parsing, coverage, and the single-layer dump."""

import numpy as np
import pytest
from scalaradj.dump import EmbeddingDump, PoolingMode

from sadj_extract import (
    PSEUDO_CONTEXT,
    CoverageError,
    VectorFormatError,
    extract_static,
    read_vec,
)


def write_vec(path, rows, header=None):
    lines = []
    if header:
        lines.append(header)
    for word, vec in rows:
        lines.append(word + " " + " ".join(f"{x:.4f}" for x in vec))
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")


ROWS = [
    ("good", [0.5, -1.25, 2.0]),
    ("bad", [-0.5, 0.75, 1.0]),
    ("warm", [1.5, 0.25, -2.0]),
]


class TestReadVec:
    def test_with_count_header(self, tmp_path):
        p = tmp_path / "w.vec"
        write_vec(p, ROWS, header="3 3")
        vecs = read_vec(p)
        assert set(vecs) == {"good", "bad", "warm"}
        assert vecs["good"].dtype == np.float32

    def test_headerless(self, tmp_path):
        p = tmp_path / "w.vec"
        write_vec(p, ROWS)
        assert len(read_vec(p)) == 3

    def test_dimension_mismatch_names_line(self, tmp_path):
        p = tmp_path / "w.vec"
        p.write_text("good 1.0 2.0\nbad 1.0 2.0 3.0\n", encoding="utf-8")
        with pytest.raises(VectorFormatError, match=r":2:"):
            read_vec(p)

    def test_bad_float_names_line(self, tmp_path):
        p = tmp_path / "w.vec"
        p.write_text("good 1.0 oops\n", encoding="utf-8")
        with pytest.raises(VectorFormatError, match=r":1:"):
            read_vec(p)

    def test_duplicate_keeps_first(self, tmp_path):
        p = tmp_path / "w.vec"
        p.write_text("good 1.0\ngood 9.0\n", encoding="utf-8")
        assert read_vec(p)["good"][0] == pytest.approx(1.0)

    def test_empty_file_rejected(self, tmp_path):
        p = tmp_path / "w.vec"
        p.write_text("", encoding="utf-8")
        with pytest.raises(VectorFormatError, match="no vectors"):
            read_vec(p)


class TestExtractStatic:
    def test_vector_stored_verbatim(self, tmp_path):
        src = tmp_path / "w.vec"
        write_vec(src, ROWS, header="3 3")
        out = tmp_path / "static.sadj"
        report = extract_static(src, ["good", "bad"], out)
        assert report.missing == ()

        dump = EmbeddingDump.load(out)
        assert dump.manifest.num_layers == 1
        rec = dump.record("good", PSEUDO_CONTEXT)
        assert rec.wordpiece_count == 1
        expected = np.array([0.5, -1.25, 2.0], dtype=np.float32)
        # same vector at both layer indices, exactly
        assert np.array_equal(rec.layers[0, 0], expected)
        assert np.array_equal(rec.layers[1, 0], expected)
        pooled = dump.pool("good", PSEUDO_CONTEXT, 1, PoolingMode.WP)
        assert np.array_equal(pooled, expected)

    def test_shared_pseudo_context(self, tmp_path):
        src = tmp_path / "w.vec"
        write_vec(src, ROWS)
        out = tmp_path / "static.sadj"
        extract_static(src, ["good", "bad", "warm"], out)
        dump = EmbeddingDump.load(out)
        # every word comparable with every other through the one context
        assert dump.shared_contexts(["good", "bad", "warm"]) == (PSEUDO_CONTEXT,)

    def test_oov_listed_and_absent(self, tmp_path):
        src = tmp_path / "w.vec"
        write_vec(src, ROWS)
        out = tmp_path / "static.sadj"
        report = extract_static(src, ["good", "zorble"], out)
        assert report.missing == ("zorble",)
        assert report.fraction == pytest.approx(0.5)
        dump = EmbeddingDump.load(out)
        assert "zorble" not in dump.adjectives

    def test_zero_coverage_is_error(self, tmp_path):
        src = tmp_path / "w.vec"
        write_vec(src, ROWS)
        with pytest.raises(CoverageError):
            extract_static(src, ["zorble", "flumph"], tmp_path / "x.sadj")

    def test_word_list_lowercased_and_deduped(self, tmp_path):
        src = tmp_path / "w.vec"
        write_vec(src, ROWS)
        out = tmp_path / "static.sadj"
        report = extract_static(src, ["Good", "good", "GOOD"], out)
        assert report.covered == ("good",)
        assert len(EmbeddingDump.load(out)) == 1

    def test_manifest_dim_from_file(self, tmp_path):
        src = tmp_path / "w.vec"
        write_vec(src, [("good", list(range(300)))])
        out = tmp_path / "static.sadj"
        extract_static(src, ["good"], out)
        assert EmbeddingDump.load(out).manifest.hidden_dim == 300
