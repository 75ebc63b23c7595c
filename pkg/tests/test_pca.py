import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pparg.embed import RankDeficientError, pca_fit, pca_project


class TestFit:
    def test_cross_shaped_points(self):
        # Covariance is diag(2/3, 8/3): vertical axis dominates.
        rows = np.array([[1.0, 0.0], [-1.0, 0.0], [0.0, 2.0], [0.0, -2.0]])
        model = pca_fit(rows, k=2)
        np.testing.assert_allclose(model.components[0], [0.0, 1.0], atol=1e-12)
        np.testing.assert_allclose(model.components[1], [1.0, 0.0], atol=1e-12)
        np.testing.assert_allclose(model.explained_variance, [8 / 3, 2 / 3])

    def test_collinear_points_capture_all_variance(self):
        t = np.linspace(-2, 2, 9)
        rows = np.outer(t, [1.0, 2.0, -1.0]) + np.array([5.0, 5.0, 5.0])
        model = pca_fit(rows, k=1)
        total = np.var(rows, axis=0, ddof=1).sum()
        assert model.explained_variance[0] == pytest.approx(total, abs=1e-9)

    def test_full_k_preserves_total_variance(self):
        rng = np.random.default_rng(0)
        rows = rng.standard_normal((40, 6))
        model = pca_fit(rows, k=6)
        total = np.var(rows, axis=0, ddof=1).sum()
        assert model.explained_variance.sum() == pytest.approx(total, abs=1e-8)

    def test_variance_sorted_descending(self):
        rng = np.random.default_rng(1)
        model = pca_fit(rng.standard_normal((30, 8)), k=8)
        assert np.all(np.diff(model.explained_variance) <= 1e-12)

    def test_sign_convention_largest_entry_nonneg(self):
        rng = np.random.default_rng(2)
        model = pca_fit(rng.standard_normal((25, 5)), k=5)
        for row in model.components:
            assert row[np.argmax(np.abs(row))] >= 0

    def test_deterministic(self):
        rng = np.random.default_rng(3)
        rows = rng.standard_normal((20, 4))
        a = pca_fit(rows, k=3)
        b = pca_fit(rows.copy(), k=3)
        np.testing.assert_array_equal(a.components, b.components)

    def test_rank_deficient_reports_effective_rank(self):
        rows = np.array([[1.0, 2.0, 3.0], [2.0, 4.0, 6.0], [3.0, 6.0, 9.0], [0.0, 0.0, 0.0]])
        with pytest.raises(RankDeficientError, match="rank 1"):
            pca_fit(rows, k=2)

    def test_input_validation(self):
        with pytest.raises(ValueError):
            pca_fit(np.zeros((1, 3)), k=1)
        with pytest.raises(ValueError):
            pca_fit(np.ones((4, 3)) * np.nan, k=1)
        with pytest.raises(ValueError):
            pca_fit(np.random.default_rng(0).standard_normal((4, 3)), k=4)

    @given(st.integers(0, 2**32 - 1), st.integers(3, 10), st.integers(10, 30))
    @settings(max_examples=25, deadline=None)
    def test_components_orthonormal(self, seed, d, n):
        rng = np.random.default_rng(seed)
        # Centering costs one rank, so a full-k fit needs n > d.
        k = int(rng.integers(1, min(d, n - 1) + 1))
        model = pca_fit(rng.standard_normal((n, d)), k=k)
        gram = model.components @ model.components.T
        np.testing.assert_allclose(gram, np.eye(k), atol=1e-8)

    @given(st.integers(0, 2**32 - 1))
    @settings(max_examples=25, deadline=None)
    def test_projection_variance_matches_explained(self, seed):
        rng = np.random.default_rng(seed)
        rows = rng.standard_normal((25, 6))
        model = pca_fit(rows, k=4)
        proj = pca_project(model, rows)
        np.testing.assert_allclose(
            np.var(proj, axis=0, ddof=1), model.explained_variance, atol=1e-8
        )


class TestProject:
    @pytest.fixture
    def model(self):
        rng = np.random.default_rng(4)
        self.rows = rng.standard_normal((30, 5))
        return pca_fit(self.rows, k=5)

    def test_mean_maps_to_origin(self, model):
        np.testing.assert_allclose(pca_project(model, model.mean), np.zeros(5), atol=1e-12)

    def test_full_rank_projection_round_trips(self, model):
        row = self.rows[3]
        proj = pca_project(model, row)
        recon = model.mean + proj @ model.components
        np.testing.assert_allclose(recon, row, atol=1e-8)

    def test_unit_step_along_axis_is_one_hot(self, model):
        for i in range(model.k):
            out = pca_project(model, model.mean + model.components[i])
            np.testing.assert_allclose(out, np.eye(model.k)[i], atol=1e-8)

    def test_matrix_rows_project_like_vectors(self, model):
        batch = pca_project(model, self.rows[:4])
        singles = np.stack([pca_project(model, r) for r in self.rows[:4]])
        np.testing.assert_allclose(batch, singles, atol=1e-12)

    def test_length_mismatch(self, model):
        with pytest.raises(ValueError):
            pca_project(model, np.zeros(4))
