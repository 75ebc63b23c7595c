"""Trainable parameters and the Adadelta update rule."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np


class NonFiniteGradientError(RuntimeError):
    """A gradient buffer contains NaN or infinity; training must abort."""


@dataclass
class OptimizerConfig:
    """Adadelta hyperparameters.

    ``lr`` scales the computed update and defaults to 1.0, which is the
    plain Adadelta rule; it exists so learning-rate grids can be swept.
    """

    rho: float = 0.95
    epsilon: float = 1e-6
    batch_size: int = 32
    lr: float = 1.0

    def __post_init__(self) -> None:
        if not 0.0 < self.rho < 1.0:
            raise ValueError(f"rho must be in (0, 1), got {self.rho}")
        if self.epsilon <= 0.0:
            raise ValueError(f"epsilon must be positive, got {self.epsilon}")
        if self.batch_size < 1:
            raise ValueError(f"batch_size must be positive, got {self.batch_size}")


@dataclass
class Parameter:
    """A weight matrix with its gradient and Adadelta accumulators.

    All four arrays share one shape. The accumulators hold running averages
    of squared gradients and squared updates and stay non-negative.
    """

    name: str
    value: np.ndarray
    grad: np.ndarray = field(default=None)  # type: ignore[assignment]
    accum_sq_grad: np.ndarray = field(default=None)  # type: ignore[assignment]
    accum_sq_update: np.ndarray = field(default=None)  # type: ignore[assignment]

    def __post_init__(self) -> None:
        self.value = np.ascontiguousarray(self.value, dtype=np.float64)
        if self.value.ndim != 2:
            raise ValueError(f"parameter {self.name!r} must be 2-D, got shape {self.value.shape}")
        if self.grad is None:
            self.grad = np.zeros_like(self.value)
        if self.accum_sq_grad is None:
            self.accum_sq_grad = np.zeros_like(self.value)
        if self.accum_sq_update is None:
            self.accum_sq_update = np.zeros_like(self.value)
        for buf in (self.grad, self.accum_sq_grad, self.accum_sq_update):
            if buf.shape != self.value.shape:
                raise ValueError(f"parameter {self.name!r} has mismatched buffer shapes")

    @classmethod
    def zeros(cls, name: str, rows: int, cols: int) -> "Parameter":
        return cls(name, np.zeros((rows, cols)))

    def zero_grad(self) -> None:
        self.grad.fill(0.0)


def glorot_uniform(
    rng: np.random.Generator, fan_in: int, fan_out: int, shape: tuple[int, int] | None = None
) -> np.ndarray:
    """Uniform(-limit, limit) with limit = sqrt(6 / (fan_in + fan_out))."""
    limit = np.sqrt(6.0 / (fan_in + fan_out))
    if shape is None:
        shape = (fan_in, fan_out)
    return rng.uniform(-limit, limit, size=shape)


def adadelta_step(params: Iterable[Parameter], config: OptimizerConfig) -> None:
    """Apply one Adadelta update to every parameter and zero the gradients.

    Per element: E[g2] <- rho E[g2] + (1 - rho) g2, then
    delta = -lr * sqrt(E[dx2] + eps) / sqrt(E[g2] + eps) * g, then
    E[dx2] <- rho E[dx2] + (1 - rho) delta2, then value += delta.
    """
    rho, eps = config.rho, config.epsilon
    for p in params:
        g = p.grad
        if not np.all(np.isfinite(g)):
            raise NonFiniteGradientError(f"non-finite gradient in parameter {p.name!r}")
        p.accum_sq_grad *= rho
        p.accum_sq_grad += (1.0 - rho) * g * g
        delta = -config.lr * np.sqrt(p.accum_sq_update + eps) / np.sqrt(p.accum_sq_grad + eps) * g
        p.accum_sq_update *= rho
        p.accum_sq_update += (1.0 - rho) * delta * delta
        p.value += delta
        p.grad.fill(0.0)


def snapshot_values(params: Sequence[Parameter]) -> list[np.ndarray]:
    return [p.value.copy() for p in params]


def restore_values(params: Sequence[Parameter], values: Sequence[np.ndarray]) -> None:
    if len(params) != len(values):
        raise ValueError("snapshot length does not match parameter list")
    for p, v in zip(params, values):
        p.value[...] = v
