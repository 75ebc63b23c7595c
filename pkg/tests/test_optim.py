import numpy as np
import pytest

from pparg.nn import (
    NonFiniteGradientError,
    OptimizerConfig,
    Parameter,
    adadelta_step,
    glorot_uniform,
)


class TestParameter:
    def test_buffers_created_with_matching_shape(self):
        p = Parameter("w", np.zeros((3, 4)))
        assert p.grad.shape == (3, 4)
        assert p.accum_sq_grad.shape == (3, 4)
        assert p.accum_sq_update.shape == (3, 4)

    def test_rejects_non_2d(self):
        with pytest.raises(ValueError):
            Parameter("w", np.zeros(3))

    def test_zero_grad(self):
        p = Parameter("w", np.ones((2, 2)))
        p.grad += 5.0
        p.zero_grad()
        np.testing.assert_array_equal(p.grad, np.zeros((2, 2)))


class TestAdadelta:
    def test_first_step_from_unit_gradient(self):
        # E[g^2] = 0.05 after one update, so the step is
        # -sqrt(1e-6) / sqrt(0.05 + 1e-6) ~= -0.0044721.
        p = Parameter("w", np.zeros((1, 1)))
        p.grad[:] = 1.0
        adadelta_step([p], OptimizerConfig())
        assert p.value[0, 0] == pytest.approx(-0.00447214, rel=1e-4)

    def test_matches_reference_recurrence(self):
        rng = np.random.default_rng(5)
        p = Parameter("w", rng.standard_normal((3, 2)))
        cfg = OptimizerConfig(rho=0.9, epsilon=1e-5)
        eg2 = np.zeros((3, 2))
        ex2 = np.zeros((3, 2))
        expect = p.value.copy()
        for _ in range(20):
            g = rng.standard_normal((3, 2))
            p.grad[:] = g
            eg2 = cfg.rho * eg2 + (1 - cfg.rho) * g * g
            delta = -np.sqrt(ex2 + cfg.epsilon) / np.sqrt(eg2 + cfg.epsilon) * g
            ex2 = cfg.rho * ex2 + (1 - cfg.rho) * delta * delta
            expect += delta
            adadelta_step([p], cfg)
        np.testing.assert_allclose(p.value, expect, rtol=1e-12)

    def test_grad_cleared_after_step(self):
        p = Parameter("w", np.zeros((2, 2)))
        p.grad[:] = 1.0
        adadelta_step([p], OptimizerConfig())
        np.testing.assert_array_equal(p.grad, np.zeros((2, 2)))

    def test_nan_gradient_raises_with_param_name(self):
        p = Parameter("w_hidden", np.zeros((1, 1)))
        p.grad[:] = np.nan
        with pytest.raises(NonFiniteGradientError, match="w_hidden"):
            adadelta_step([p], OptimizerConfig())

    def test_inf_gradient_raises(self):
        p = Parameter("w", np.zeros((1, 1)))
        p.grad[:] = np.inf
        with pytest.raises(NonFiniteGradientError):
            adadelta_step([p], OptimizerConfig())

    def test_config_validation(self):
        with pytest.raises(ValueError):
            OptimizerConfig(rho=1.5)
        with pytest.raises(ValueError):
            OptimizerConfig(epsilon=0.0)
        with pytest.raises(ValueError):
            OptimizerConfig(batch_size=0)


class TestGlorot:
    def test_values_within_limit(self):
        rng = np.random.default_rng(0)
        w = glorot_uniform(rng, 30, 20)
        limit = np.sqrt(6.0 / 50.0)
        assert w.shape == (30, 20)
        assert np.all(np.abs(w) <= limit)
        # Draws should actually spread over the interval.
        assert w.std() > limit / 4

    def test_explicit_shape_decoupled_from_fans(self):
        rng = np.random.default_rng(0)
        w = glorot_uniform(rng, 100, 100, shape=(4, 7))
        assert w.shape == (4, 7)
        assert np.all(np.abs(w) <= np.sqrt(6.0 / 200.0))

    def test_deterministic_given_seed(self):
        a = glorot_uniform(np.random.default_rng(42), 5, 5)
        b = glorot_uniform(np.random.default_rng(42), 5, 5)
        np.testing.assert_array_equal(a, b)
