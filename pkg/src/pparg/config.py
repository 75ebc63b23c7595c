"""Run configuration: one JSON document drives every CLI command.

Command-line flags override individual keys; the effective configuration is
echoed into the output directory so a run can be reproduced byte for byte.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path
from typing import Optional

from pparg.embed import EmbeddingFormat, OovPolicy

_FORMATS = {"word2vec_bin": EmbeddingFormat.WORD2VEC_BIN, "text": EmbeddingFormat.TEXT_VEC}
_POLICIES = {
    "zero": OovPolicy.ZERO,
    "error": OovPolicy.ERROR,
    "lowercase": OovPolicy.LOWERCASE_FALLBACK,
}


class ConfigError(ValueError):
    """Invalid configuration contents or references to missing files."""


@dataclass
class RunConfig:
    output_dir: str = "out"
    seed: int = 0
    verbnet_dir: Optional[str] = None
    featural_map: Optional[str] = None
    corpus_file: Optional[str] = None
    embeddings: Optional[str] = None
    embeddings_format: str = "word2vec_bin"
    oov_policy: str = "zero"
    counts_file: Optional[str] = None
    diagnostics_file: Optional[str] = None
    judgments_file: Optional[str] = None
    gradient_file: Optional[str] = None
    dataset_dir: Optional[str] = None
    include_multiclass: bool = False
    balance: bool = True
    kfold: int = 10
    iterations: int = 1000
    classifier: dict = field(default_factory=dict)
    regressor: dict = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.seed < 0:
            raise ConfigError("seed must be >= 0")
        if self.kfold < 2:
            raise ConfigError("kfold must be >= 2")
        if self.iterations < 1:
            raise ConfigError("iterations must be >= 1")
        if self.embeddings_format not in _FORMATS:
            raise ConfigError(
                f"embeddings_format must be one of {sorted(_FORMATS)}, got {self.embeddings_format!r}"
            )
        if self.oov_policy not in _POLICIES:
            raise ConfigError(
                f"oov_policy must be one of {sorted(_POLICIES)}, got {self.oov_policy!r}"
            )
        for name in ("classifier", "regressor"):
            if not isinstance(getattr(self, name), dict):
                raise ConfigError(f"{name} must be a JSON object")

    @property
    def embedding_format(self) -> EmbeddingFormat:
        return _FORMATS[self.embeddings_format]

    @property
    def oov(self) -> OovPolicy:
        return _POLICIES[self.oov_policy]

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, raw: dict) -> "RunConfig":
        known = {f.name for f in fields(cls)}
        unknown = sorted(set(raw) - known)
        if unknown:
            raise ConfigError(f"unknown config keys: {unknown}")
        return cls(**raw)

    def require(self, *names: str) -> None:
        """Fail fast if any named path field is unset or missing on disk."""
        for name in names:
            value = getattr(self, name)
            if value is None:
                raise ConfigError(f"config field {name!r} is required for this command")
            if not Path(value).exists():
                raise ConfigError(f"{name}: no such path: {value}")


def load_config(path: str | Path) -> RunConfig:
    try:
        raw = json.loads(Path(path).read_text(encoding="utf-8"))
    except FileNotFoundError as exc:
        raise ConfigError(f"config file not found: {path}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: invalid JSON: {exc}") from exc
    if not isinstance(raw, dict):
        raise ConfigError(f"{path}: top level must be a JSON object")
    return RunConfig.from_dict(raw)


def save_config(path: str | Path, config: RunConfig) -> None:
    text = json.dumps(config.to_dict(), indent=2, sort_keys=True) + "\n"
    Path(path).write_text(text, encoding="utf-8")
