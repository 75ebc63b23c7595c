import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pparg.evaluation import RegressionReport, fisher_average, kfold


class TestKfold:
    def test_uneven_fold_sizes(self):
        folds = kfold(list(range(259)), k=10, seed=0)
        sizes = sorted(len(test) for _, test in folds)
        assert sizes == [25] + [26] * 9

    def test_even_split(self):
        folds = kfold(list(range(100)), k=10, seed=3)
        assert all(len(test) == 10 for _, test in folds)
        assert all(len(train) == 90 for train, _ in folds)

    def test_leave_one_out(self):
        folds = kfold([10, 20, 30], k=3, seed=1)
        for train, test in folds:
            assert len(test) == 1
            assert len(train) == 2
            assert set(train + test) == {10, 20, 30}

    def test_deterministic(self):
        a = kfold(list(range(50)), k=5, seed=9)
        b = kfold(list(range(50)), k=5, seed=9)
        assert a == b

    def test_seed_changes_assignment(self):
        a = kfold(list(range(50)), k=5, seed=1)
        b = kfold(list(range(50)), k=5, seed=2)
        assert any(x != y for (_, x), (_, y) in zip(a, b))

    def test_k_too_small(self):
        with pytest.raises(ValueError):
            kfold([1, 2, 3], k=1)

    def test_more_folds_than_items(self):
        with pytest.raises(ValueError):
            kfold([1, 2], k=3)

    @given(st.integers(2, 120), st.integers(2, 12), st.integers(0, 2**31 - 1))
    @settings(max_examples=60, deadline=None)
    def test_partition_property(self, n, k, seed):
        if n < k:
            return
        data = list(range(n))
        folds = kfold(data, k=k, seed=seed)
        assert len(folds) == k
        all_test = [x for _, test in folds for x in test]
        assert sorted(all_test) == data
        for train, test in folds:
            assert sorted(train + test) == data
            assert not set(train) & set(test)
        sizes = {len(test) for _, test in folds}
        assert max(sizes) - min(sizes) <= 1


class TestRegressionReport:
    def test_summary_r_must_match_fold_average(self):
        folds = (0.5, 0.6, 0.7)
        good = fisher_average(folds)
        rep = RegressionReport(
            pearson_r=good, r2=0.3, r2_adj=0.25, n=100, p=28, fold_rs=folds
        )
        assert rep.pearson_r == good

    def test_mismatched_summary_rejected(self):
        with pytest.raises(ValueError):
            RegressionReport(
                pearson_r=0.6,
                r2=0.3,
                r2_adj=0.25,
                n=100,
                p=28,
                fold_rs=(0.1, 0.2),
            )

    def test_no_folds_skips_check(self):
        rep = RegressionReport(pearson_r=0.9, r2=0.8, r2_adj=0.79, n=50, p=3)
        assert rep.fold_rs == ()

    def test_to_dict_round_trips_fields(self):
        rep = RegressionReport(
            pearson_r=0.9, r2=0.8, r2_adj=0.79, n=50, p=3, r2_fold_mean=0.77
        )
        d = rep.to_dict()
        assert d["pearson_r"] == 0.9
        assert d["r2_fold_mean"] == 0.77
        assert d["n"] == 50
