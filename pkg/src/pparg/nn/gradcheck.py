"""Central-difference gradient checking against analytic backward passes."""

from __future__ import annotations

from typing import Callable

import numpy as np

from pparg.nn.optim import Parameter


def grad_check(
    loss_fn: Callable[[], float],
    params: list[Parameter],
    delta: float = 1e-5,
) -> float:
    """Return the worst relative error between analytic and numeric gradients.

    ``loss_fn`` must evaluate the scalar loss from the current parameter
    values without touching ``.grad``; each parameter's ``.grad`` is expected
    to already hold the analytic gradient for those values. Every entry of
    every parameter is perturbed by +/- delta in turn:

        numeric = (loss(x + delta) - loss(x - delta)) / (2 * delta)
        rel_err = |analytic - numeric| / max(|analytic|, |numeric|, 1e-8)
    """
    if delta <= 0.0:
        raise ValueError("delta must be positive")
    worst = 0.0
    for param in params:
        value = param.value
        analytic = param.grad
        it = np.nditer(value, flags=["multi_index"])
        while not it.finished:
            idx = it.multi_index
            original = value[idx]
            value[idx] = original + delta
            loss_plus = float(loss_fn())
            value[idx] = original - delta
            loss_minus = float(loss_fn())
            value[idx] = original
            numeric = (loss_plus - loss_minus) / (2.0 * delta)
            a = float(analytic[idx])
            rel = abs(a - numeric) / max(abs(a), abs(numeric), 1e-8)
            if rel > worst:
                worst = rel
            it.iternext()
    return worst
