"""K-fold partitioning and the cross-validated regression report."""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Optional, Sequence

from pparg.evaluation.metrics import fisher_average


def kfold(data: Sequence, k: int = 10, seed: int = 0) -> list[tuple[list, list]]:
    """Seeded shuffle, then k contiguous folds; the first n % k are larger.

    Returns (train, test) pairs; test folds partition the data.
    """
    n = len(data)
    if k < 2:
        raise ValueError("k must be at least 2")
    if n < k:
        raise ValueError(f"cannot make {k} folds from {n} items")
    order = list(range(n))
    random.Random(seed).shuffle(order)
    base, extra = divmod(n, k)
    folds = []
    start = 0
    for i in range(k):
        size = base + (1 if i < extra else 0)
        folds.append(order[start : start + size])
        start += size
    out = []
    for i in range(k):
        test_idx = folds[i]
        train_idx = [j for f in folds[: i] + folds[i + 1 :] for j in f]
        out.append(([data[j] for j in train_idx], [data[j] for j in test_idx]))
    return out


@dataclass(frozen=True)
class RegressionReport:
    pearson_r: float
    r2: float
    r2_adj: float
    n: int
    p: int
    fold_rs: tuple[float, ...] = ()
    r2_fold_mean: Optional[float] = None

    def __post_init__(self) -> None:
        if self.fold_rs:
            expected = fisher_average(self.fold_rs)
            if abs(expected - self.pearson_r) > 1e-9:
                raise ValueError(
                    "pearson_r must be the Fisher average of fold_rs: "
                    f"{self.pearson_r} vs {expected}"
                )

    def to_dict(self) -> dict:
        out = {
            "pearson_r": self.pearson_r,
            "r2": self.r2,
            "r2_adj": self.r2_adj,
            "n": self.n,
            "p": self.p,
            "fold_rs": list(self.fold_rs),
        }
        if self.r2_fold_mean is not None:
            out["r2_fold_mean"] = self.r2_fold_mean
        return out
