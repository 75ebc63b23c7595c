"""Likert judgment matrices and within-subject z-normalization."""

from __future__ import annotations

from dataclasses import dataclass
from statistics import mean, stdev
from typing import Optional

from pparg.corpus.pairs import ArgLabel
from pparg.corpus.sentences import SentenceExample


class JudgmentError(ValueError):
    """Ratings that cannot be normalized: constant subject, uncovered item."""


@dataclass(frozen=True)
class JudgmentMatrix:
    ratings: dict[tuple[str, str], int]
    items: tuple[str, ...]

    def __post_init__(self) -> None:
        item_set = set(self.items)
        if len(item_set) != len(self.items):
            raise ValueError("duplicate item ids")
        for (subject, item), rating in self.ratings.items():
            if not 1 <= rating <= 7:
                raise ValueError(
                    f"rating {rating} for ({subject}, {item}) outside the 1..7 scale"
                )
            if item not in item_set:
                raise ValueError(f"rating references unknown item {item!r}")

    def subjects(self) -> list[str]:
        return sorted({subject for subject, _ in self.ratings})


def normalize_judgments(ratings: JudgmentMatrix) -> list[tuple[str, float]]:
    """Per-subject z-scores (sample sd), averaged per item across subjects.

    Output follows the matrix's item order.
    """
    by_subject: dict[str, list[tuple[str, int]]] = {}
    for (subject, item), rating in ratings.ratings.items():
        by_subject.setdefault(subject, []).append((item, rating))

    z_by_item: dict[str, list[float]] = {item: [] for item in ratings.items}
    for subject in sorted(by_subject):
        rows = by_subject[subject]
        values = [r for _, r in rows]
        if len(set(values)) < 2:
            raise JudgmentError(
                f"subject {subject!r} gave constant ratings; z-scores undefined"
            )
        mu = mean(values)
        sd = stdev(values)
        for item, rating in rows:
            z_by_item[item].append((rating - mu) / sd)

    out = []
    for item in ratings.items:
        zs = z_by_item[item]
        if not zs:
            raise JudgmentError(f"item {item!r} has no ratings")
        out.append((item, mean(zs)))
    return out


@dataclass(frozen=True)
class GradientExample:
    tokens: tuple[str, ...]
    verb: str
    prep: str
    head_noun: Optional[str]
    has_direct_object: bool
    score: float

    def __post_init__(self) -> None:
        if self.score != self.score or self.score in (float("inf"), float("-inf")):
            raise ValueError(f"score must be finite, got {self.score}")

    @classmethod
    def from_sentence(cls, ex: SentenceExample, score: float) -> "GradientExample":
        if ex.label is ArgLabel.UNOBSERVED:
            raise ValueError("cannot score an UNOBSERVED example")
        return cls(
            tokens=ex.tokens,
            verb=ex.verb,
            prep=ex.prep,
            head_noun=ex.head_noun,
            has_direct_object=ex.has_direct_object,
            score=score,
        )
