"""Paired approximate randomization.

Each iteration flips every item's system assignment with probability one
half and recomputes the metric delta. Iteration i draws from a generator
seeded with (seed, i), so results do not depend on execution order.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np


@dataclass(frozen=True)
class SignificanceResult:
    observed_delta: float
    p_value: float
    iterations: int
    seed: int
    count_ge: int

    def __post_init__(self) -> None:
        if not 0.0 < self.p_value <= 1.0:
            raise ValueError("p must lie in (0, 1]")

    def to_dict(self) -> dict:
        return {
            "observed_delta": self.observed_delta,
            "p_value": self.p_value,
            "iterations": self.iterations,
            "seed": self.seed,
            "count_ge": self.count_ge,
        }


def _iteration_flips(seed: int, index: int, n: int) -> np.ndarray:
    rng = np.random.default_rng((seed, index))
    return rng.random(n) < 0.5


def approx_randomization(
    scores_a: Sequence[float],
    scores_b: Sequence[float],
    iterations: int = 1000,
    seed: int = 0,
) -> SignificanceResult:
    """AR over per-item scores; the metric is their mean.

    p = (#{pseudo-delta >= observed} + 1) / (iterations + 1).
    """
    a = np.asarray(scores_a, dtype=np.float64)
    b = np.asarray(scores_b, dtype=np.float64)
    if a.shape != b.shape or a.ndim != 1:
        raise ValueError("score vectors must be equal-length 1-D sequences")
    if a.size == 0:
        raise ValueError("no items")
    if iterations < 1:
        raise ValueError("need at least one iteration")
    observed = abs(float(a.mean()) - float(b.mean()))
    count = 0
    for i in range(iterations):
        flips = _iteration_flips(seed, i, a.size)
        pseudo_a = np.where(flips, b, a)
        pseudo_b = np.where(flips, a, b)
        if abs(float(pseudo_a.mean()) - float(pseudo_b.mean())) >= observed:
            count += 1
    return SignificanceResult(
        observed_delta=observed,
        p_value=(count + 1) / (iterations + 1),
        iterations=iterations,
        seed=seed,
        count_ge=count,
    )


def approx_randomization_metric(
    items_a: Sequence,
    items_b: Sequence,
    metric: Callable[[list], float],
    iterations: int = 1000,
    seed: int = 0,
) -> SignificanceResult:
    """AR recomputing an arbitrary set-level metric inside every iteration.

    Use this when the metric does not decompose into per-item means (F1).
    """
    items_a = list(items_a)
    items_b = list(items_b)
    if len(items_a) != len(items_b):
        raise ValueError("item lists must have equal length")
    if not items_a:
        raise ValueError("no items")
    if iterations < 1:
        raise ValueError("need at least one iteration")
    observed = abs(metric(items_a) - metric(items_b))
    n = len(items_a)
    count = 0
    for i in range(iterations):
        flips = _iteration_flips(seed, i, n)
        pseudo_a = [items_b[j] if flips[j] else items_a[j] for j in range(n)]
        pseudo_b = [items_a[j] if flips[j] else items_b[j] for j in range(n)]
        if abs(metric(pseudo_a) - metric(pseudo_b)) >= observed:
            count += 1
    return SignificanceResult(
        observed_delta=observed,
        p_value=(count + 1) / (iterations + 1),
        iterations=iterations,
        seed=seed,
        count_ge=count,
    )
