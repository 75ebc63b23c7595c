"""On-disk formats: TSV datasets and the judgments CSV.

All files are UTF-8 with LF line endings. Pair rows are
``verb<TAB>prep<TAB>label``; sentence rows add head noun, direct-object flag,
and space-joined tokens; gradient rows carry a score instead of a label.
"""

from __future__ import annotations

import csv
from pathlib import Path
from typing import Sequence

from pparg.corpus.judgments import GradientExample, JudgmentMatrix
from pparg.corpus.pairs import ArgLabel, LabeledPair
from pparg.corpus.sentences import SentenceExample


def write_pairs(path: str | Path, pairs: Sequence[LabeledPair]) -> None:
    lines = [f"{p.verb}\t{p.prep}\t{p.label.value}" for p in pairs]
    Path(path).write_text("\n".join(lines) + ("\n" if lines else ""), encoding="utf-8", newline="\n")


def read_pairs(path: str | Path) -> list[LabeledPair]:
    out = []
    for lineno, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        if not line.strip():
            continue
        fields = line.split("\t")
        if len(fields) != 3:
            raise ValueError(f"{path}:{lineno}: expected 3 tab-separated fields")
        verb, prep, label = fields
        out.append(LabeledPair(verb, prep, ArgLabel(label)))
    return out


def _sentence_row(ex: SentenceExample) -> str:
    return "\t".join(
        [
            ex.verb,
            ex.prep,
            ex.head_noun or "",
            "1" if ex.has_direct_object else "0",
            ex.label.value,
            " ".join(ex.tokens),
        ]
    )


def write_sentence_examples(path: str | Path, examples: Sequence[SentenceExample]) -> None:
    lines = [_sentence_row(ex) for ex in examples]
    Path(path).write_text("\n".join(lines) + ("\n" if lines else ""), encoding="utf-8", newline="\n")


def read_sentence_examples(path: str | Path) -> list[SentenceExample]:
    out = []
    for lineno, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        if not line:
            continue
        fields = line.split("\t")
        if len(fields) != 6:
            raise ValueError(f"{path}:{lineno}: expected 6 tab-separated fields")
        verb, prep, head, dobj, label, tokens = fields
        out.append(
            SentenceExample(
                tokens=tuple(tokens.split(" ")) if tokens else (),
                verb=verb,
                prep=prep,
                head_noun=head or None,
                has_direct_object=dobj == "1",
                label=ArgLabel(label),
            )
        )
    return out


def write_gradient_examples(path: str | Path, examples: Sequence[GradientExample]) -> None:
    lines = [
        "\t".join(
            [
                ex.verb,
                ex.prep,
                ex.head_noun or "",
                "1" if ex.has_direct_object else "0",
                repr(ex.score),
                " ".join(ex.tokens),
            ]
        )
        for ex in examples
    ]
    Path(path).write_text("\n".join(lines) + ("\n" if lines else ""), encoding="utf-8", newline="\n")


def read_gradient_examples(path: str | Path) -> list[GradientExample]:
    out = []
    for lineno, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        if not line:
            continue
        fields = line.split("\t")
        if len(fields) != 6:
            raise ValueError(f"{path}:{lineno}: expected 6 tab-separated fields")
        verb, prep, head, dobj, score, tokens = fields
        out.append(
            GradientExample(
                tokens=tuple(tokens.split(" ")) if tokens else (),
                verb=verb,
                prep=prep,
                head_noun=head or None,
                has_direct_object=dobj == "1",
                score=float(score),
            )
        )
    return out


def read_judgments_csv(path: str | Path) -> JudgmentMatrix:
    """``subject_id,item_id,rating`` rows; an optional header is detected."""
    ratings: dict[tuple[str, str], int] = {}
    items: list[str] = []
    seen_items: set[str] = set()
    with open(path, newline="", encoding="utf-8") as fh:
        for lineno, row in enumerate(csv.reader(fh), 1):
            if not row or all(not f.strip() for f in row):
                continue
            if len(row) != 3:
                raise ValueError(f"{path}:{lineno}: expected 3 CSV fields")
            subject, item, rating_text = (f.strip() for f in row)
            if lineno == 1 and not rating_text.lstrip("-").isdigit():
                continue  # header row
            try:
                rating = int(rating_text)
            except ValueError as exc:
                raise ValueError(f"{path}:{lineno}: rating {rating_text!r} is not an integer") from exc
            key = (subject, item)
            if key in ratings:
                raise ValueError(f"{path}:{lineno}: duplicate rating for {key}")
            ratings[key] = rating
            if item not in seen_items:
                seen_items.add(item)
                items.append(item)
    return JudgmentMatrix(ratings=ratings, items=tuple(items))
