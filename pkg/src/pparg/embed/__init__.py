"""Static word-embedding tables and PCA reduction."""

from pparg.embed.pca import PcaModel, RankDeficientError, pca_fit, pca_project
from pparg.embed.table import (
    EmbeddingFormatError,
    EmbeddingFormat,
    EmbeddingTable,
    OovError,
    OovPolicy,
    load_embeddings,
    lookup,
)

__all__ = [
    "EmbeddingFormat",
    "EmbeddingFormatError",
    "EmbeddingTable",
    "OovError",
    "OovPolicy",
    "PcaModel",
    "RankDeficientError",
    "load_embeddings",
    "lookup",
    "pca_fit",
    "pca_project",
]
