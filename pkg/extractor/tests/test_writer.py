"""Dump writer contract: byte-exact round trips through the consumer reader."""

import numpy as np
import pytest
from scalaradj.dump import EmbeddingDump

from sadj_extract import DumpFormatError, Manifest, Record, write_dump


def _records(rng, num_layers=3, dim=8):
    recs = []
    for surface, ctx, k in [
        ("good", "c1", 1),
        ("good", "c2", 1),
        ("goodish", "c1", 2),
        ("minuscule", "c9", 3),
    ]:
        arr = rng.standard_normal((num_layers + 1, k, dim)).astype(np.float32)
        recs.append(Record(surface, ctx, arr))
    return recs


class TestRoundTrip:
    def test_bit_exact_through_consumer_reader(self, tmp_path):
        rng = np.random.default_rng(3)
        recs = _records(rng)
        manifest = Manifest(model_id="tiny", num_layers=3, hidden_dim=8)
        path = tmp_path / "rt.sadj"
        n = write_dump(recs, manifest, path)
        assert n == 4

        dump = EmbeddingDump.load(path)
        assert dump.manifest.model_id == "tiny"
        assert dump.manifest.num_layers == 3
        assert dump.manifest.hidden_dim == 8
        assert dump.manifest.language == "en"
        assert dump.manifest.pooling_ready
        for rec in recs:
            got = dump.record(rec.surface, rec.context_id)
            assert got.layers.dtype == np.float32
            # exact bytes, not just close: the format is float32-le both ways
            assert np.array_equal(got.layers, rec.layers)

    def test_cased_flag_is_extra_metadata(self, tmp_path):
        # the consumer manifest parser ignores keys it does not know
        rng = np.random.default_rng(4)
        manifest = Manifest(model_id="t", num_layers=3, hidden_dim=8, cased=True)
        path = tmp_path / "cased.sadj"
        write_dump(_records(rng), manifest, path)
        dump = EmbeddingDump.load(path)
        assert dump.manifest.model_id == "t"

    def test_records_sorted_on_disk(self, tmp_path):
        rng = np.random.default_rng(5)
        recs = list(reversed(_records(rng)))
        manifest = Manifest(model_id="t", num_layers=3, hidden_dim=8)
        a = tmp_path / "a.sadj"
        b = tmp_path / "b.sadj"
        write_dump(recs, manifest, a)
        write_dump(list(reversed(recs)), manifest, b)
        assert a.read_bytes() == b.read_bytes()


class TestValidation:
    def test_duplicate_key_rejected(self, tmp_path):
        arr = np.zeros((4, 1, 8), dtype=np.float32)
        recs = [Record("good", "c1", arr), Record("good", "c1", arr)]
        manifest = Manifest(model_id="t", num_layers=3, hidden_dim=8)
        with pytest.raises(DumpFormatError, match="duplicate"):
            write_dump(recs, manifest, tmp_path / "x.sadj")

    def test_layer_count_mismatch_rejected(self, tmp_path):
        arr = np.zeros((3, 1, 8), dtype=np.float32)
        manifest = Manifest(model_id="t", num_layers=3, hidden_dim=8)
        with pytest.raises(DumpFormatError, match="layer"):
            write_dump([Record("good", "c1", arr)], manifest, tmp_path / "x.sadj")

    def test_hidden_dim_mismatch_rejected(self, tmp_path):
        arr = np.zeros((4, 1, 7), dtype=np.float32)
        manifest = Manifest(model_id="t", num_layers=3, hidden_dim=8)
        with pytest.raises(DumpFormatError, match="hidden dim"):
            write_dump([Record("good", "c1", arr)], manifest, tmp_path / "x.sadj")

    def test_nonfinite_rejected(self, tmp_path):
        arr = np.full((4, 1, 8), np.nan, dtype=np.float32)
        manifest = Manifest(model_id="t", num_layers=3, hidden_dim=8)
        with pytest.raises(DumpFormatError, match="finite"):
            write_dump([Record("good", "c1", arr)], manifest, tmp_path / "x.sadj")

    def test_zero_pieces_rejected(self, tmp_path):
        arr = np.zeros((4, 0, 8), dtype=np.float32)
        manifest = Manifest(model_id="t", num_layers=3, hidden_dim=8)
        with pytest.raises(DumpFormatError, match="wordpiece count"):
            write_dump([Record("good", "c1", arr)], manifest, tmp_path / "x.sadj")
