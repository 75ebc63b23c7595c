import collections

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pparg.corpus import (
    ArgLabel,
    FrameInventory,
    LabeledPair,
    balance_subsample,
    generate_pair_dataset,
    stratified_split,
)

INV = FrameInventory.from_entries(
    {
        "put": frozenset({"in", "on"}),
        "sleep": frozenset(),
        "rely": frozenset({"on"}),
    }
)


def make_pairs(n_arg, n_adj):
    out = []
    for i in range(n_arg):
        out.append(LabeledPair(f"v{i}", "in", ArgLabel.ARG))
    for i in range(n_adj):
        out.append(LabeledPair(f"w{i}", "of", ArgLabel.ADJ))
    return out


class TestGenerate:
    def test_cross_product_size_and_order(self):
        pairs = generate_pair_dataset(INV, ["put", "sleep"], ["in", "of", "on"])
        assert len(pairs) == 6
        assert [(p.verb, p.prep) for p in pairs] == [
            ("put", "in"), ("put", "of"), ("put", "on"),
            ("sleep", "in"), ("sleep", "of"), ("sleep", "on"),
        ]

    def test_labels_follow_inventory(self):
        pairs = generate_pair_dataset(INV, ["put"], ["in", "of", "on"])
        assert [p.label for p in pairs] == [ArgLabel.ARG, ArgLabel.ADJ, ArgLabel.ARG]

    def test_frameless_verb_is_all_adj(self):
        pairs = generate_pair_dataset(INV, ["sleep"], ["in", "of", "on"])
        assert all(p.label is ArgLabel.ADJ for p in pairs)

    def test_arg_count_matches_intersection(self, mini_inventory):
        verbs = sorted(mini_inventory.entries)
        preps = list(mini_inventory.prep_universe)
        pairs = generate_pair_dataset(mini_inventory, verbs, preps)
        assert len(pairs) == 1000
        n_arg = sum(1 for p in pairs if p.label is ArgLabel.ARG)
        assert n_arg == 167

    def test_duplicates_rejected(self):
        with pytest.raises(ValueError, match="duplicate"):
            generate_pair_dataset(INV, ["put", "put"], ["in"])
        with pytest.raises(ValueError, match="duplicate"):
            generate_pair_dataset(INV, ["put"], ["in", "in"])

    def test_empty_inputs_rejected(self):
        with pytest.raises(ValueError):
            generate_pair_dataset(INV, [], ["in"])


class TestBalance:
    def test_equal_label_counts(self):
        out = balance_subsample(make_pairs(3, 10), seed=0)
        counts = collections.Counter(p.label for p in out)
        assert counts[ArgLabel.ARG] == counts[ArgLabel.ADJ] == 3

    def test_all_arg_retained_and_subset(self):
        pairs = make_pairs(4, 9)
        out = balance_subsample(pairs, seed=5)
        assert set(p for p in out if p.label is ArgLabel.ARG) == set(
            p for p in pairs if p.label is ArgLabel.ARG
        )
        assert set(out) <= set(pairs)

    def test_same_seed_same_output(self):
        pairs = make_pairs(5, 40)
        assert balance_subsample(pairs, seed=11) == balance_subsample(pairs, seed=11)

    def test_different_seed_different_sample(self):
        pairs = make_pairs(5, 200)
        a = balance_subsample(pairs, seed=1)
        b = balance_subsample(pairs, seed=2)
        assert set(a) != set(b)

    def test_already_balanced_is_permutation(self):
        pairs = make_pairs(6, 6)
        out = balance_subsample(pairs, seed=3)
        assert sorted(out, key=str) == sorted(pairs, key=str)

    def test_wrong_direction_rejected(self):
        with pytest.raises(ValueError, match="ARG"):
            balance_subsample(make_pairs(5, 2), seed=0)


class TestSplit:
    def test_published_scale_sizes(self):
        pairs = make_pairs(13544, 13544)
        split = stratified_split(pairs, seed=0)
        assert (len(split.train), len(split.dev), len(split.test)) == (18961, 4063, 4064)

    def test_small_n_floor_rule(self):
        pairs = make_pairs(10, 0)
        split = stratified_split(pairs, seed=0)
        assert (len(split.train), len(split.dev), len(split.test)) == (7, 1, 2)

    def test_disjoint_and_exhaustive(self):
        pairs = make_pairs(30, 50)
        split = stratified_split(pairs, seed=4)
        rejoined = list(split.train) + list(split.dev) + list(split.test)
        assert sorted(rejoined, key=str) == sorted(pairs, key=str)
        assert len(set(rejoined)) == len(pairs)

    def test_deterministic(self):
        pairs = make_pairs(40, 40)
        a = stratified_split(pairs, seed=9)
        b = stratified_split(pairs, seed=9)
        assert a.train == b.train and a.dev == b.dev and a.test == b.test

    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            stratified_split([], seed=0)

    def test_bad_ratios_rejected(self):
        pairs = make_pairs(5, 5)
        with pytest.raises(ValueError):
            stratified_split(pairs, ratios=(0.5, 0.3, 0.3), seed=0)
        with pytest.raises(ValueError):
            stratified_split(pairs, ratios=(0.9, 0.2, -0.1), seed=0)

    @given(
        st.integers(2, 400),
        st.floats(0.05, 0.9),
        st.integers(0, 2**31 - 1),
    )
    @settings(max_examples=60, deadline=None)
    def test_stratification_within_one_example(self, n_arg, arg_frac, seed):
        n_adj = max(1, int(n_arg * (1 - arg_frac) / arg_frac))
        pairs = make_pairs(n_arg, n_adj)
        n = len(pairs)
        split = stratified_split(pairs, seed=seed)
        global_share = n_arg / n
        for part in split:
            if not part:
                continue
            got = sum(1 for p in part if p.label is ArgLabel.ARG)
            assert abs(got - len(part) * global_share) <= 1.0 + 1e-9

    @given(st.integers(3, 300), st.integers(0, 2**31 - 1))
    @settings(max_examples=40, deadline=None)
    def test_sizes_obey_floor_rule(self, n, seed):
        pairs = make_pairs(n, n)
        split = stratified_split(pairs, seed=seed)
        total = 2 * n
        assert len(split.train) == int(total * 0.70 + 1e-9)
        assert len(split.dev) == int(total * 0.15 + 1e-9)
        assert len(split.test) == total - len(split.train) - len(split.dev)


class TestLabeledPair:
    def test_unobserved_not_allowed(self):
        with pytest.raises(ValueError):
            LabeledPair("put", "in", ArgLabel.UNOBSERVED)
