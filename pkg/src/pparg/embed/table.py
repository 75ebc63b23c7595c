"""Embedding file loading and lookup.

Two on-disk formats are supported:

* WORD2VEC_BIN: header line ``"<vocab> <dim>\n"``, then per token the utf-8
  token bytes, a single 0x20, and dim little-endian 32-bit floats. Records may
  be separated by a newline, which some writers emit; it is skipped.
* TEXT_VEC: one ``token v1 ... vd`` row per line. A first line consisting of
  exactly two integers is treated as a count header and consumed.

Gzip-compressed files are detected by magic bytes and decompressed
transparently. Stored 32-bit floats are widened to float64 on load.
"""

from __future__ import annotations

import gzip
import struct
import warnings
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path

import numpy as np


class EmbeddingFormat(Enum):
    WORD2VEC_BIN = "word2vec_bin"
    TEXT_VEC = "text_vec"


class OovPolicy(Enum):
    ZERO = "zero"
    ERROR = "error"
    LOWERCASE_FALLBACK = "lowercase_fallback"


class EmbeddingFormatError(ValueError):
    """Malformed embedding file: bad header, short record, or bad values."""


class OovError(KeyError):
    """Token missing from the table under the ERROR policy."""


@dataclass
class EmbeddingTable:
    dim: int
    vectors: dict[str, np.ndarray] = field(repr=False)
    name: str = ""

    def __post_init__(self) -> None:
        if self.dim < 1:
            raise ValueError("dim must be positive")

    def __len__(self) -> int:
        return len(self.vectors)

    def __contains__(self, token: str) -> bool:
        return token in self.vectors


def _open_maybe_gzip(path: Path):
    with open(path, "rb") as probe:
        magic = probe.read(2)
    if magic == b"\x1f\x8b":
        return gzip.open(path, "rb")
    return open(path, "rb")


def _check_vector(token: str, vec: np.ndarray, dim: int) -> None:
    if vec.shape != (dim,):
        raise EmbeddingFormatError(
            f"token {token!r}: expected {dim} components, got {vec.shape[0]}"
        )
    if not np.all(np.isfinite(vec)):
        raise EmbeddingFormatError(f"token {token!r}: non-finite component")


def _read_word2vec_bin(fh, name: str) -> EmbeddingTable:
    header = bytearray()
    while True:
        ch = fh.read(1)
        if not ch:
            raise EmbeddingFormatError("missing header line")
        if ch == b"\n":
            break
        header += ch
    parts = header.split()
    if len(parts) != 2:
        raise EmbeddingFormatError(f"header must be '<vocab> <dim>', got {bytes(header)!r}")
    try:
        vocab, dim = int(parts[0]), int(parts[1])
    except ValueError as exc:
        raise EmbeddingFormatError(f"non-integer header fields {bytes(header)!r}") from exc
    if vocab < 0 or dim < 1:
        raise EmbeddingFormatError(f"implausible header: vocab={vocab} dim={dim}")

    vectors: dict[str, np.ndarray] = {}
    duplicates = 0
    record = struct.Struct(f"<{dim}f")
    for i in range(vocab):
        token_bytes = bytearray()
        while True:
            ch = fh.read(1)
            if not ch:
                raise EmbeddingFormatError(f"file ends inside token {i} of {vocab}")
            if ch == b" ":
                break
            if ch == b"\n" and not token_bytes:
                continue  # record separator some writers insert
            token_bytes += ch
        try:
            token = token_bytes.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise EmbeddingFormatError(f"token {i} is not valid utf-8") from exc
        raw = fh.read(record.size)
        if len(raw) != record.size:
            raise EmbeddingFormatError(f"token {token!r}: truncated vector")
        vec = np.array(record.unpack(raw), dtype=np.float64)
        _check_vector(token, vec, dim)
        if token in vectors:
            duplicates += 1
        vectors[token] = vec
    if duplicates:
        warnings.warn(f"{name}: {duplicates} duplicate tokens, last occurrence kept")
    return EmbeddingTable(dim=dim, vectors=vectors, name=name)


def _is_count_header(fields: list[str]) -> bool:
    if len(fields) != 2:
        return False
    try:
        int(fields[0]), int(fields[1])
    except ValueError:
        return False
    return True


def _read_text_vec(fh, name: str) -> EmbeddingTable:
    vectors: dict[str, np.ndarray] = {}
    duplicates = 0
    dim: int | None = None
    declared: int | None = None
    for lineno, raw in enumerate(fh, start=1):
        line = raw.decode("utf-8").rstrip("\n")
        if not line.strip():
            continue
        fields = line.split()
        if lineno == 1 and _is_count_header(fields):
            declared = int(fields[0])
            dim = int(fields[1])
            if dim < 1:
                raise EmbeddingFormatError(f"header declares dim {dim}")
            continue
        token = fields[0]
        try:
            vec = np.array([float(x) for x in fields[1:]], dtype=np.float64)
        except ValueError as exc:
            raise EmbeddingFormatError(f"token {token!r}: unparseable component") from exc
        if dim is None:
            dim = vec.shape[0]
            if dim < 1:
                raise EmbeddingFormatError(f"token {token!r}: no components")
        _check_vector(token, vec, dim)
        if token in vectors:
            duplicates += 1
        vectors[token] = vec
    if dim is None:
        raise EmbeddingFormatError("empty embedding file")
    if declared is not None and len(vectors) != declared:
        raise EmbeddingFormatError(
            f"header declares {declared} tokens, file holds {len(vectors)}"
        )
    if duplicates:
        warnings.warn(f"{name}: {duplicates} duplicate tokens, last occurrence kept")
    return EmbeddingTable(dim=dim, vectors=vectors, name=name)


def load_embeddings(path: str | Path, format: EmbeddingFormat) -> EmbeddingTable:
    path = Path(path)
    name = path.name
    with _open_maybe_gzip(path) as fh:
        if format is EmbeddingFormat.WORD2VEC_BIN:
            return _read_word2vec_bin(fh, name)
        if format is EmbeddingFormat.TEXT_VEC:
            return _read_text_vec(fh, name)
    raise ValueError(f"unknown format {format!r}")


def lookup(table: EmbeddingTable, token: str, policy: OovPolicy = OovPolicy.ZERO) -> np.ndarray:
    vec = table.vectors.get(token)
    if vec is not None:
        return vec
    if policy is OovPolicy.LOWERCASE_FALLBACK:
        vec = table.vectors.get(token.lower())
        if vec is not None:
            return vec
        return np.zeros(table.dim)
    if policy is OovPolicy.ZERO:
        return np.zeros(table.dim)
    raise OovError(token)
