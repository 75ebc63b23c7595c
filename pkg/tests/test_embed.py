import gzip
import struct

import numpy as np
import pytest

from pparg.embed import (
    EmbeddingFormat,
    EmbeddingFormatError,
    EmbeddingTable,
    OovError,
    OovPolicy,
    load_embeddings,
    lookup,
)


def write_w2v_bin(path, entries, header=None):
    vocab = len(entries) if header is None else header[0]
    dim = len(entries[0][1]) if header is None else header[1]
    with open(path, "wb") as fh:
        fh.write(f"{vocab} {dim}\n".encode())
        for token, vec in entries:
            fh.write(token.encode() + b" ")
            fh.write(struct.pack(f"<{len(vec)}f", *vec))


class TestWord2vecBin:
    def test_basic_decode(self, tmp_path):
        path = tmp_path / "vecs.bin"
        write_w2v_bin(path, [("cat", [1.0, 2.0, 3.0]), ("dog", [4.0, 5.0, 6.0])])
        table = load_embeddings(path, EmbeddingFormat.WORD2VEC_BIN)
        assert table.dim == 3
        assert len(table) == 2
        np.testing.assert_array_equal(lookup(table, "dog"), [4.0, 5.0, 6.0])

    def test_f32_widening_is_bit_exact(self, tmp_path):
        path = tmp_path / "vecs.bin"
        vals = [0.1, -2.7, 1e-8]
        write_w2v_bin(path, [("x", vals)])
        table = load_embeddings(path, EmbeddingFormat.WORD2VEC_BIN)
        expect = np.array(vals, dtype=np.float32).astype(np.float64)
        np.testing.assert_array_equal(lookup(table, "x"), expect)

    def test_newline_separated_records(self, tmp_path):
        path = tmp_path / "vecs.bin"
        with open(path, "wb") as fh:
            fh.write(b"2 2\n")
            fh.write(b"a " + struct.pack("<2f", 1, 2) + b"\n")
            fh.write(b"b " + struct.pack("<2f", 3, 4))
        table = load_embeddings(path, EmbeddingFormat.WORD2VEC_BIN)
        assert set(table.vectors) == {"a", "b"}

    def test_truncated_vector_names_token(self, tmp_path):
        path = tmp_path / "vecs.bin"
        with open(path, "wb") as fh:
            fh.write(b"1 3\n")
            fh.write(b"oops " + struct.pack("<2f", 1, 2))
        with pytest.raises(EmbeddingFormatError, match="oops"):
            load_embeddings(path, EmbeddingFormat.WORD2VEC_BIN)

    def test_nan_component_rejected(self, tmp_path):
        path = tmp_path / "vecs.bin"
        write_w2v_bin(path, [("bad", [1.0, float("nan")])])
        with pytest.raises(EmbeddingFormatError, match="non-finite"):
            load_embeddings(path, EmbeddingFormat.WORD2VEC_BIN)

    def test_duplicate_tokens_last_wins_with_warning(self, tmp_path):
        path = tmp_path / "vecs.bin"
        write_w2v_bin(path, [("x", [1.0]), ("x", [2.0])])
        with pytest.warns(UserWarning, match="1 duplicate"):
            table = load_embeddings(path, EmbeddingFormat.WORD2VEC_BIN)
        np.testing.assert_array_equal(lookup(table, "x"), [2.0])

    def test_bad_header(self, tmp_path):
        path = tmp_path / "vecs.bin"
        path.write_bytes(b"not a header\n")
        with pytest.raises(EmbeddingFormatError, match="header"):
            load_embeddings(path, EmbeddingFormat.WORD2VEC_BIN)


class TestTextVec:
    def test_plain_rows(self, tmp_path):
        path = tmp_path / "vecs.txt"
        path.write_text("cat 1.0 2.0\ndog 3.0 4.0\n")
        table = load_embeddings(path, EmbeddingFormat.TEXT_VEC)
        assert table.dim == 2
        np.testing.assert_array_equal(lookup(table, "cat"), [1.0, 2.0])

    def test_count_header_consumed(self, tmp_path):
        path = tmp_path / "vecs.txt"
        path.write_text("2 3\na 1 2 3\nb 4 5 6\n")
        table = load_embeddings(path, EmbeddingFormat.TEXT_VEC)
        assert len(table) == 2
        assert "2" not in table

    def test_header_count_mismatch(self, tmp_path):
        path = tmp_path / "vecs.txt"
        path.write_text("3 2\na 1 2\nb 3 4\n")
        with pytest.raises(EmbeddingFormatError, match="declares 3"):
            load_embeddings(path, EmbeddingFormat.TEXT_VEC)

    def test_two_field_first_line_that_is_not_numeric_is_data(self, tmp_path):
        path = tmp_path / "vecs.txt"
        path.write_text("word 7\nother 8\n")
        table = load_embeddings(path, EmbeddingFormat.TEXT_VEC)
        assert table.dim == 1
        assert "word" in table

    def test_ragged_row_names_token(self, tmp_path):
        path = tmp_path / "vecs.txt"
        path.write_text("a 1 2\nshort 9\n")
        with pytest.raises(EmbeddingFormatError, match="short"):
            load_embeddings(path, EmbeddingFormat.TEXT_VEC)

    def test_gzip_detected_by_magic(self, tmp_path):
        path = tmp_path / "vecs.txt.gz"
        with gzip.open(path, "wb") as fh:
            fh.write(b"cat 1.0 2.0\n")
        table = load_embeddings(path, EmbeddingFormat.TEXT_VEC)
        np.testing.assert_array_equal(lookup(table, "cat"), [1.0, 2.0])

    def test_empty_file_rejected(self, tmp_path):
        path = tmp_path / "vecs.txt"
        path.write_text("")
        with pytest.raises(EmbeddingFormatError, match="empty"):
            load_embeddings(path, EmbeddingFormat.TEXT_VEC)


class TestLookup:
    @pytest.fixture
    def table(self):
        return EmbeddingTable(
            dim=2, vectors={"window": np.array([1.0, 2.0])}, name="test"
        )

    def test_hit(self, table):
        np.testing.assert_array_equal(lookup(table, "window"), [1.0, 2.0])

    def test_zero_policy(self, table):
        np.testing.assert_array_equal(
            lookup(table, "absent", OovPolicy.ZERO), [0.0, 0.0]
        )

    def test_error_policy(self, table):
        with pytest.raises(OovError):
            lookup(table, "absent", OovPolicy.ERROR)

    def test_lowercase_fallback_hits_lowercased_form(self, table):
        np.testing.assert_array_equal(
            lookup(table, "Window", OovPolicy.LOWERCASE_FALLBACK), [1.0, 2.0]
        )

    def test_lowercase_fallback_then_zero(self, table):
        np.testing.assert_array_equal(
            lookup(table, "Gone", OovPolicy.LOWERCASE_FALLBACK), [0.0, 0.0]
        )
