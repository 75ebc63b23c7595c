import json

import pytest

from pparg.corpus import (
    ArgLabel,
    LabeledPair,
    SentenceExample,
    SentenceMode,
    build_fullsentence_dataset,
    default_lemmatizer,
    extract_vp_constructions,
    parse_ptb_tree,
)

LEM = default_lemmatizer(vocab={"open", "hide", "put", "sleep", "rely", "talk"})


def extract(text):
    return extract_vp_constructions(parse_ptb_tree(text), LEM)


class TestExtraction:
    def test_verb_pp_with_direct_object(self):
        recs = extract(
            "(S (NP (NNP John)) (VP (VBD opened) (NP (DT the) (NN window))"
            " (PP (IN with) (NP (NNP Mary)))))"
        )
        assert len(recs) == 1
        r = recs[0]
        assert (r.verb, r.prep, r.head_noun, r.has_direct_object) == (
            "open", "with", "mary", True,
        )

    def test_verb_pp_without_direct_object(self):
        recs = extract(
            "(S (NP (PRP They)) (VP (VBD hid) (PP (IN in) (NP (DT a) (NN hurry)))))"
        )
        assert len(recs) == 1
        r = recs[0]
        assert (r.verb, r.prep, r.head_noun, r.has_direct_object) == (
            "hide", "in", "hurry", False,
        )

    def test_no_pp_yields_nothing(self):
        assert extract("(S (NP (PRP He)) (VP (VBD slept)))") == []

    def test_two_pps_two_records(self):
        recs = extract(
            "(S (NP (PRP He)) (VP (VBD hid) (PP (IN in) (NP (NN attic)))"
            " (PP (IN with) (NP (NN care)))))"
        )
        assert [(r.verb, r.prep) for r in recs] == [("hide", "in"), ("hide", "with")]

    def test_nested_vp_searched_independently(self):
        recs = extract(
            "(S (NP (PRP He)) (VP (VBD wanted) (S (VP (TO to)"
            " (VP (VB hide) (PP (IN under) (NP (DT the) (NN bed))))))))"
        )
        assert [(r.verb, r.prep) for r in recs] == [("hide", "under")]

    def test_rightmost_noun_is_head(self):
        recs = extract(
            "(S (NP (PRP He)) (VP (VBD hid) (PP (IN in) (NP (DT the) (NN tool) (NN shed)))))"
        )
        assert recs[0].head_noun == "shed"

    def test_pp_without_np_has_no_head_noun(self):
        recs = extract("(S (NP (PRP He)) (VP (VBD hid) (PP (IN in) (ADVP (RB there)))))")
        assert recs[0].head_noun is None

    def test_to_tagged_preposition(self):
        recs = extract("(S (NP (PRP He)) (VP (VBD talked) (PP (TO to) (NP (NN crowd)))))")
        assert recs[0].prep == "to"

    def test_np_after_pp_is_not_direct_object(self):
        recs = extract(
            "(S (NP (PRP He)) (VP (VBD hid) (PP (IN in) (NP (NN attic))) (NP (NN yesterday))))"
        )
        assert recs[0].has_direct_object is False

    def test_vp_without_verb_leaf_skipped(self):
        assert extract("(S (VP (ADVP (RB quickly)) (PP (IN in) (NP (NN town)))))") == []


def make_line(*sentence_parse_pairs):
    row = {}
    for i, (sentence, parse) in enumerate(sentence_parse_pairs, start=1):
        row[f"sentence{i}"] = sentence
        row[f"sentence{i}_parse"] = parse
    return json.dumps(row)


PAIRS = [
    LabeledPair("hide", "in", ArgLabel.ARG),
    LabeledPair("hide", "during", ArgLabel.ADJ),
    LabeledPair("rely", "on", ArgLabel.ARG),
]

HIDE_IN = (
    "He hid in the attic",
    "(S (NP (PRP He)) (VP (VBD hid) (PP (IN in) (NP (DT the) (NN attic)))))",
)
RELY_ON = (
    "They rely on luck",
    "(S (NP (PRP They)) (VP (VBP rely) (PP (IN on) (NP (NN luck)))))",
)


class TestFullSentenceDataset:
    def test_matched_pairs_inherit_labels(self):
        lines = [make_line(HIDE_IN, RELY_ON)]
        out = build_fullsentence_dataset(lines, PAIRS, SentenceMode.KEEP_LABELS, LEM)
        assert {(e.verb, e.prep, e.label) for e in out} == {
            ("hide", "in", ArgLabel.ARG),
            ("rely", "on", ArgLabel.ARG),
        }

    def test_same_pair_kept_for_distinct_sentences(self):
        other = (
            "She hid in a closet",
            "(S (NP (PRP She)) (VP (VBD hid) (PP (IN in) (NP (DT a) (NN closet)))))",
        )
        lines = [make_line(HIDE_IN), make_line(other)]
        out = build_fullsentence_dataset(lines, PAIRS, SentenceMode.KEEP_LABELS, LEM)
        assert len(out) == 2

    def test_duplicate_sentence_dropped(self):
        lines = [make_line(HIDE_IN), make_line(HIDE_IN)]
        out = build_fullsentence_dataset(lines, PAIRS, SentenceMode.KEEP_LABELS, LEM)
        assert len(out) == 1

    def test_unknown_pair_ignored(self):
        lines = [
            make_line(
                (
                    "He slept near the fire",
                    "(S (NP (PRP He)) (VP (VBD slept) (PP (IN near) (NP (DT the) (NN fire)))))",
                )
            )
        ]
        out = build_fullsentence_dataset(lines, PAIRS, SentenceMode.KEEP_LABELS, LEM)
        assert out == []

    def test_ternary_adds_unmatched_as_unobserved(self):
        lines = [make_line(HIDE_IN)]
        out = build_fullsentence_dataset(lines, PAIRS, SentenceMode.TERNARY, LEM)
        labels = {(e.verb, e.prep): e.label for e in out}
        assert labels[("hide", "in")] is ArgLabel.ARG
        assert labels[("hide", "during")] is ArgLabel.UNOBSERVED
        assert labels[("rely", "on")] is ArgLabel.UNOBSERVED

    def test_ternary_empty_corpus_all_unobserved(self):
        out = build_fullsentence_dataset([], PAIRS, SentenceMode.TERNARY, LEM)
        assert len(out) == len(PAIRS)
        assert all(e.label is ArgLabel.UNOBSERVED for e in out)
        assert all(e.tokens == () for e in out)

    def test_keep_labels_empty_corpus_empty(self):
        assert build_fullsentence_dataset([], PAIRS, SentenceMode.KEEP_LABELS, LEM) == []

    def test_bad_lines_skipped_with_warning(self, caplog):
        lines = ["not json", json.dumps({"sentence1": "only text"}), make_line(HIDE_IN)]
        with caplog.at_level("WARNING"):
            out = build_fullsentence_dataset(lines, PAIRS, SentenceMode.KEEP_LABELS, LEM)
        assert len(out) == 1
        assert any("skipping" in r.message for r in caplog.records)

    def test_tokens_come_from_parse_leaves(self):
        lines = [make_line(HIDE_IN)]
        out = build_fullsentence_dataset(lines, PAIRS, SentenceMode.KEEP_LABELS, LEM)
        assert out[0].tokens == ("He", "hid", "in", "the", "attic")
        assert out[0].head_noun == "attic"


class TestSentenceExampleInvariants:
    def test_prep_must_be_in_tokens(self):
        with pytest.raises(ValueError, match="prep"):
            SentenceExample(
                tokens=("He", "slept"),
                verb="sleep",
                prep="in",
                head_noun=None,
                has_direct_object=False,
                label=ArgLabel.ADJ,
            )

    def test_unobserved_must_be_sentence_free(self):
        with pytest.raises(ValueError, match="UNOBSERVED"):
            SentenceExample(
                tokens=("He", "hid", "in"),
                verb="hide",
                prep="in",
                head_noun=None,
                has_direct_object=False,
                label=ArgLabel.UNOBSERVED,
            )
