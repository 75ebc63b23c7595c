import numpy as np
import pytest

from pparg.nn import Parameter, grad_check


class TestGradCheck:
    def test_exact_gradient_scores_near_zero(self):
        # loss = sum(w^2), gradient 2w.
        w = Parameter("w", np.array([[1.0, -2.0], [3.0, 0.5]]))

        def loss():
            return float(np.sum(w.value**2))

        w.grad[:] = 2.0 * w.value
        assert grad_check(loss, [w]) < 1e-9

    def test_doubled_gradient_scores_one_half(self):
        # |2g - g| / max(|2g|, |g|) = 0.5 for any nonzero g.
        w = Parameter("w", np.array([[1.0, 2.0]]))

        def loss():
            return float(np.sum(w.value**2))

        w.grad[:] = 4.0 * w.value
        assert grad_check(loss, [w]) == pytest.approx(0.5, abs=1e-6)

    def test_zero_gradient_on_flat_loss_passes(self):
        w = Parameter("w", np.ones((2, 2)))

        def loss():
            return 7.0

        assert grad_check(loss, [w]) == 0.0

    def test_restores_values_after_probing(self):
        w = Parameter("w", np.array([[1.0, 2.0, 3.0]]))
        before = w.value.copy()

        def loss():
            return float(np.sum(w.value))

        w.grad[:] = 1.0
        grad_check(loss, [w])
        np.testing.assert_array_equal(w.value, before)

    def test_checks_all_params_not_just_first(self):
        a = Parameter("a", np.array([[1.0]]))
        b = Parameter("b", np.array([[1.0]]))

        def loss():
            return float(a.value[0, 0] + b.value[0, 0] ** 2)

        a.grad[:] = 1.0
        b.grad[:] = 99.0  # wrong on purpose
        assert grad_check(loss, [a, b]) > 0.9

    def test_rejects_nonpositive_delta(self):
        with pytest.raises(ValueError):
            grad_check(lambda: 0.0, [], delta=0.0)
