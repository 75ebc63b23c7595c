"""Principal component analysis via SVD of the centered data matrix."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


class RankDeficientError(ValueError):
    """Requested more components than the data's effective rank supports."""


@dataclass
class PcaModel:
    mean: np.ndarray  # length d
    components: np.ndarray  # k x d, rows orthonormal
    explained_variance: np.ndarray  # length k, non-increasing

    @property
    def k(self) -> int:
        return self.components.shape[0]

    @property
    def dim(self) -> int:
        return self.components.shape[1]


def pca_fit(rows: np.ndarray, k: int) -> PcaModel:
    """Fit a k-component PCA.

    Components are the top-k right singular vectors of the centered matrix,
    sign-fixed so each row's largest-magnitude entry is non-negative.
    explained_variance[i] is the sample variance along component i.
    """
    rows = np.asarray(rows, dtype=np.float64)
    if rows.ndim != 2:
        raise ValueError(f"rows must be n x d, got shape {rows.shape}")
    n, d = rows.shape
    if n < 2:
        raise ValueError("need at least 2 rows")
    if not 1 <= k <= min(n, d):
        raise ValueError(f"k must be in [1, {min(n, d)}], got {k}")
    if not np.all(np.isfinite(rows)):
        raise ValueError("rows contain non-finite values")

    mean = rows.mean(axis=0)
    centered = rows - mean
    _, s, vt = np.linalg.svd(centered, full_matrices=False)
    tol = max(n, d) * np.finfo(np.float64).eps * (s[0] if s.size else 0.0)
    effective_rank = int(np.sum(s > tol))
    if effective_rank < k:
        raise RankDeficientError(
            f"effective rank {effective_rank} is below the requested k={k}"
        )

    components = vt[:k].copy()
    for row in components:
        if row[np.argmax(np.abs(row))] < 0:
            row *= -1.0
    explained_variance = (s[:k] ** 2) / (n - 1)
    return PcaModel(mean=mean, components=components, explained_variance=explained_variance)


def pca_project(model: PcaModel, v: np.ndarray) -> np.ndarray:
    """Project a length-d vector (or n x d matrix, row-wise) into PCA space."""
    v = np.asarray(v, dtype=np.float64)
    if v.ndim == 1:
        if v.shape[0] != model.dim:
            raise ValueError(f"expected length {model.dim}, got {v.shape[0]}")
        return model.components @ (v - model.mean)
    if v.ndim == 2:
        if v.shape[1] != model.dim:
            raise ValueError(f"expected width {model.dim}, got {v.shape[1]}")
        return (v - model.mean) @ model.components.T
    raise ValueError(f"v must be 1-D or 2-D, got shape {v.shape}")
