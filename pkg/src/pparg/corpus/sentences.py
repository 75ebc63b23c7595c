"""Verb-PP construction extraction from parse trees and sentence datasets.

A construction is a VP whose head verb (first VB* leaf child) has a PP
sibling-child headed by an IN or TO leaf. The PP's head noun is the rightmost
noun-tagged leaf inside its first NP child; a direct object is any NP child
of the VP preceding the PP.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Optional, Sequence

from pparg.corpus.lemmas import Lemmatizer
from pparg.corpus.pairs import ArgLabel, LabeledPair
from pparg.corpus.trees import ParseTree, TreeParseError, parse_ptb_tree

log = logging.getLogger(__name__)


class SentenceMode(Enum):
    KEEP_LABELS = "keep_labels"
    TERNARY = "ternary"


@dataclass(frozen=True)
class SentenceExample:
    tokens: tuple[str, ...]
    verb: str
    prep: str
    head_noun: Optional[str]
    has_direct_object: bool
    label: ArgLabel

    def __post_init__(self) -> None:
        if self.label is ArgLabel.UNOBSERVED:
            if self.tokens:
                raise ValueError("UNOBSERVED examples carry no sentence")
            return
        lowered = [t.lower() for t in self.tokens]
        if self.prep not in lowered:
            raise ValueError(f"prep {self.prep!r} not in tokens")
        if self.head_noun is not None and self.head_noun not in lowered:
            raise ValueError(f"head noun {self.head_noun!r} not in tokens")


@dataclass(frozen=True)
class VpConstruction:
    verb: str
    prep: str
    head_noun: Optional[str]
    has_direct_object: bool


def _head_verb(vp: ParseTree) -> Optional[str]:
    for child in vp.children:
        if child.is_leaf and child.label.startswith("VB"):
            return child.token
    return None


def _pp_prep(pp: ParseTree) -> Optional[str]:
    for child in pp.children:
        if child.is_leaf and child.label in ("IN", "TO"):
            return child.token.lower()
    return None


def _rightmost_noun(node: ParseTree) -> Optional[str]:
    found = None
    for sub in node.walk():
        if sub.is_leaf and sub.label.startswith("NN"):
            found = sub.token
    return found


def _pp_head_noun(pp: ParseTree) -> Optional[str]:
    for child in pp.children:
        if not child.is_leaf and child.label.split("-")[0] == "NP":
            noun = _rightmost_noun(child)
            return noun.lower() if noun else None
    return None


def extract_vp_constructions(
    tree: ParseTree, lemmatizer: Lemmatizer
) -> list[VpConstruction]:
    """One record per (VP head verb, PP child), in traversal order."""
    records = []
    for node in tree.walk():
        if node.is_leaf or node.label.split("-")[0] != "VP":
            continue
        verb_token = _head_verb(node)
        if verb_token is None:
            continue
        verb = lemmatizer(verb_token)
        np_seen = False
        for child in node.children:
            base = child.label.split("-")[0] if not child.is_leaf else child.label
            if not child.is_leaf and base == "PP":
                prep = _pp_prep(child)
                if prep is None or "_" in prep:
                    continue
                records.append(
                    VpConstruction(
                        verb=verb,
                        prep=prep,
                        head_noun=_pp_head_noun(child),
                        has_direct_object=np_seen,
                    )
                )
            elif not child.is_leaf and base == "NP":
                np_seen = True
    return records


def _normalize_sentence(text: str) -> str:
    return " ".join(text.split())


def build_fullsentence_dataset(
    corpus_lines: Iterable[str],
    pairs: Sequence[LabeledPair],
    mode: SentenceMode,
    lemmatizer: Lemmatizer,
) -> list[SentenceExample]:
    """Scan SNLI/MNLI-layout JSON lines for sentences realizing known pairs.

    KEEP_LABELS: each matched sentence inherits the pair's label; the same
    pair may recur across distinct sentences (exact-string dedup).
    TERNARY: additionally, pairs never matched are appended once each as
    sentence-free UNOBSERVED examples.
    """
    label_of = {(p.verb, p.prep): p.label for p in pairs}
    lem = lemmatizer.with_vocab({p.verb for p in pairs})
    out: list[SentenceExample] = []
    seen: set[tuple[str, str, str]] = set()
    matched: set[tuple[str, str]] = set()
    skipped = 0
    for line in corpus_lines:
        line = line.strip()
        if not line:
            continue
        try:
            row = json.loads(line)
        except json.JSONDecodeError:
            skipped += 1
            log.warning("skipping line: not valid JSON")
            continue
        for side in ("sentence1", "sentence2"):
            sentence = row.get(side)
            parse = row.get(f"{side}_parse")
            if not isinstance(sentence, str) or not isinstance(parse, str):
                skipped += 1
                log.warning("skipping %s: missing sentence or parse field", side)
                continue
            try:
                tree = parse_ptb_tree(parse)
            except TreeParseError as exc:
                skipped += 1
                log.warning("skipping %s: %s", side, exc)
                continue
            tokens = tuple(tree.leaves())
            norm = _normalize_sentence(sentence)
            for con in extract_vp_constructions(tree, lem):
                label = label_of.get((con.verb, con.prep))
                if label is None:
                    continue
                key = (con.verb, con.prep, norm)
                if key in seen:
                    continue
                seen.add(key)
                matched.add((con.verb, con.prep))
                out.append(
                    SentenceExample(
                        tokens=tokens,
                        verb=con.verb,
                        prep=con.prep,
                        head_noun=con.head_noun,
                        has_direct_object=con.has_direct_object,
                        label=label,
                    )
                )
    if skipped:
        log.warning("%d corpus entries skipped", skipped)
    if mode is SentenceMode.TERNARY:
        for p in pairs:
            if (p.verb, p.prep) not in matched:
                out.append(
                    SentenceExample(
                        tokens=(),
                        verb=p.verb,
                        prep=p.prep,
                        head_noun=None,
                        has_direct_object=False,
                        label=ArgLabel.UNOBSERVED,
                    )
                )
    return out
