"""Binary model checkpoints.

Layout, all integers unsigned 32-bit little-endian:

    magic b"ARGM" | version | n_params
    then per parameter: name_len | name (utf-8) | rows | cols | rows*cols float64 LE
    then: config_len | config JSON (utf-8, sorted keys)

Parameters are written in the order given and read back in that order, so a
round trip preserves ordering exactly.
"""

from __future__ import annotations

import json
import struct
from pathlib import Path

import numpy as np

MAGIC = b"ARGM"
VERSION = 1

_U32 = struct.Struct("<I")


class CheckpointFormatError(ValueError):
    """Raised when a checkpoint file is truncated, corrupt, or unsupported."""


def save_checkpoint(
    path: str | Path,
    params: list[tuple[str, np.ndarray]],
    config: dict,
) -> None:
    """Write named 2-D float64 arrays plus a JSON config blob to ``path``."""
    chunks = [MAGIC, _U32.pack(VERSION), _U32.pack(len(params))]
    seen: set[str] = set()
    for name, value in params:
        if name in seen:
            raise ValueError(f"duplicate parameter name {name!r}")
        seen.add(name)
        arr = np.ascontiguousarray(value, dtype=np.float64)
        if arr.ndim != 2:
            raise ValueError(f"parameter {name!r} must be 2-D, got shape {arr.shape}")
        encoded = name.encode("utf-8")
        chunks.append(_U32.pack(len(encoded)))
        chunks.append(encoded)
        chunks.append(_U32.pack(arr.shape[0]))
        chunks.append(_U32.pack(arr.shape[1]))
        chunks.append(arr.astype("<f8").tobytes())
    blob = json.dumps(config, sort_keys=True).encode("utf-8")
    chunks.append(_U32.pack(len(blob)))
    chunks.append(blob)
    Path(path).write_bytes(b"".join(chunks))


class _Reader:
    def __init__(self, data: bytes) -> None:
        self.data = data
        self.pos = 0

    def take(self, n: int, what: str) -> bytes:
        if self.pos + n > len(self.data):
            raise CheckpointFormatError(f"truncated checkpoint while reading {what}")
        out = self.data[self.pos : self.pos + n]
        self.pos += n
        return out

    def u32(self, what: str) -> int:
        return _U32.unpack(self.take(4, what))[0]


def load_checkpoint(path: str | Path) -> tuple[list[tuple[str, np.ndarray]], dict]:
    """Read a checkpoint back as (ordered name/array pairs, config dict)."""
    reader = _Reader(Path(path).read_bytes())
    magic = reader.take(4, "magic")
    if magic != MAGIC:
        raise CheckpointFormatError(f"bad magic {magic!r}, expected {MAGIC!r}")
    version = reader.u32("version")
    if version != VERSION:
        raise CheckpointFormatError(f"unsupported checkpoint version {version}")
    n_params = reader.u32("parameter count")
    params: list[tuple[str, np.ndarray]] = []
    for k in range(n_params):
        name_len = reader.u32(f"name length of parameter {k}")
        try:
            name = reader.take(name_len, f"name of parameter {k}").decode("utf-8")
        except UnicodeDecodeError as exc:
            raise CheckpointFormatError(f"parameter {k} name is not valid utf-8") from exc
        rows = reader.u32(f"rows of {name!r}")
        cols = reader.u32(f"cols of {name!r}")
        raw = reader.take(rows * cols * 8, f"values of {name!r}")
        arr = np.frombuffer(raw, dtype="<f8").reshape(rows, cols).astype(np.float64)
        params.append((name, arr))
    config_len = reader.u32("config length")
    blob = reader.take(config_len, "config")
    try:
        config = json.loads(blob.decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise CheckpointFormatError("config trailer is not valid JSON") from exc
    if reader.pos != len(reader.data):
        raise CheckpointFormatError(
            f"{len(reader.data) - reader.pos} trailing bytes after config"
        )
    if not isinstance(config, dict):
        raise CheckpointFormatError("config trailer must be a JSON object")
    return params, config
