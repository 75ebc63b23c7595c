"""Verb-preposition pair datasets: generation, balancing, and splitting."""

from __future__ import annotations

import random
from dataclasses import dataclass
from enum import Enum
from typing import Sequence

from pparg.corpus.verbnet import FrameInventory

__all__ = [
    "ArgLabel",
    "DatasetSplit",
    "LabeledPair",
    "balance_subsample",
    "generate_pair_dataset",
    "stratified_split",
]


class ArgLabel(Enum):
    ARG = "ARG"
    ADJ = "ADJ"
    UNOBSERVED = "UNOBSERVED"


@dataclass(frozen=True)
class LabeledPair:
    verb: str
    prep: str
    label: ArgLabel

    def __post_init__(self) -> None:
        if self.label is ArgLabel.UNOBSERVED:
            raise ValueError("pair labels are binary; UNOBSERVED is for sentence datasets")


@dataclass(frozen=True)
class DatasetSplit:
    train: tuple
    dev: tuple
    test: tuple
    seed: int

    def __iter__(self):
        yield from (self.train, self.dev, self.test)


def generate_pair_dataset(
    inventory: FrameInventory, verbs: Sequence[str], preps: Sequence[str]
) -> list[LabeledPair]:
    """Cross every verb with every preposition, verb-major order.

    (v, p) is ARG iff p is licensed for v in the inventory, else ADJ.
    """
    if not verbs or not preps:
        raise ValueError("verbs and preps must be non-empty")
    if len(set(verbs)) != len(verbs):
        raise ValueError("duplicate verbs in input")
    if len(set(preps)) != len(preps):
        raise ValueError("duplicate preps in input")
    out = []
    for v in verbs:
        licensed = inventory.licensed(v)
        for p in preps:
            label = ArgLabel.ARG if p in licensed else ArgLabel.ADJ
            out.append(LabeledPair(v, p, label))
    return out


def balance_subsample(pairs: Sequence[LabeledPair], seed: int) -> list[LabeledPair]:
    """Keep every ARG pair and a same-sized uniform sample of ADJ pairs.

    The combined result is shuffled; both the sample and the shuffle are
    driven by ``seed``, so reruns are identical.
    """
    args = [p for p in pairs if p.label is ArgLabel.ARG]
    adjs = [p for p in pairs if p.label is ArgLabel.ADJ]
    if len(args) > len(adjs):
        raise ValueError(
            f"cannot downsample: {len(args)} ARG > {len(adjs)} ADJ"
        )
    rng = random.Random(seed)
    out = args + rng.sample(adjs, len(args))
    rng.shuffle(out)
    return out


def _part_sizes(n: int, ratios: tuple[float, float, float]) -> tuple[int, int, int]:
    # The nudge keeps an exact product like 330 * 0.7 from flooring to 230.
    n_train = int(n * ratios[0] + 1e-9)
    n_dev = int(n * ratios[1] + 1e-9)
    return n_train, n_dev, n - n_train - n_dev


def _apportion(counts: list[int], total: int) -> list[int]:
    """Largest-remainder split of ``total`` seats proportional to ``counts``."""
    whole = sum(counts)
    if whole == 0:
        return [0] * len(counts)
    quotas = [c * total / whole for c in counts]
    alloc = [int(q) for q in quotas]
    leftover = total - sum(alloc)
    order = sorted(range(len(counts)), key=lambda i: (-(quotas[i] - alloc[i]), i))
    for i in order[:leftover]:
        alloc[i] += 1
    return alloc


def stratified_split(
    examples: Sequence,
    ratios: tuple[float, float, float] = (0.70, 0.15, 0.15),
    seed: int = 0,
) -> DatasetSplit:
    """70/15/15-style split, stratified by each example's ``label``.

    Sizes are floor(n * r_train) and floor(n * r_dev), remainder to test.
    Per-part label counts stay within one example of exact proportionality:
    each part is filled by largest-remainder apportionment over the strata
    still unassigned when that part is processed.
    """
    if any(r <= 0 for r in ratios):
        raise ValueError("ratios must be positive")
    if abs(sum(ratios) - 1.0) > 1e-9:
        raise ValueError(f"ratios must sum to 1, got {sum(ratios)}")
    n = len(examples)
    strata: dict[str, list] = {}
    for ex in examples:
        strata.setdefault(ex.label.value, []).append(ex)
    if n == 0 or n < len(strata):
        raise ValueError(f"{n} examples cannot cover {max(len(strata), 1)} strata")

    rng = random.Random(seed)
    pools = {}
    for key in sorted(strata):
        pool = list(strata[key])
        rng.shuffle(pool)
        pools[key] = pool

    keys = sorted(pools)
    remaining = {k: len(pools[k]) for k in keys}
    cursors = {k: 0 for k in keys}
    sizes = _part_sizes(n, ratios)
    parts: list[list] = []
    for part_size in sizes:
        take = _apportion([remaining[k] for k in keys], part_size)
        part: list = []
        for k, count in zip(keys, take):
            part.extend(pools[k][cursors[k] : cursors[k] + count])
            cursors[k] += count
            remaining[k] -= count
        rng.shuffle(part)
        parts.append(part)
    return DatasetSplit(train=tuple(parts[0]), dev=tuple(parts[1]), test=tuple(parts[2]), seed=seed)
