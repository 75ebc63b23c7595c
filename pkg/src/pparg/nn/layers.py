"""Dense layers, activations, losses, and temporal max-pooling.

Forward functions are pure; backward functions take the upstream gradient
plus whatever the forward pass needed and return exact analytic gradients
with the same shapes as their inputs.
"""

from __future__ import annotations

from enum import Enum

import numpy as np


class Activation(Enum):
    TANH = "tanh"
    RELU = "relu"
    SIGMOID = "sigmoid"


def _require_2d(name: str, x: np.ndarray) -> np.ndarray:
    x = np.asarray(x, dtype=np.float64)
    if x.ndim != 2:
        raise ValueError(f"{name} must be 2-D, got shape {x.shape}")
    return x


def affine_forward(x: np.ndarray, w: np.ndarray, b: np.ndarray) -> np.ndarray:
    """x @ w + b with b broadcast across rows. x: n x d, w: d x h, b: 1 x h."""
    x, w, b = _require_2d("x", x), _require_2d("w", w), _require_2d("b", b)
    if x.shape[1] != w.shape[0]:
        raise ValueError(f"x has {x.shape[1]} columns but w has {w.shape[0]} rows")
    if b.shape != (1, w.shape[1]):
        raise ValueError(f"b must be 1 x {w.shape[1]}, got {b.shape}")
    return x @ w + b


def affine_backward(
    upstream: np.ndarray, x: np.ndarray, w: np.ndarray
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Gradients (dx, dw, db) for y = x @ w + b."""
    upstream = _require_2d("upstream", upstream)
    dx = upstream @ w.T
    dw = x.T @ upstream
    db = upstream.sum(axis=0, keepdims=True)
    return dx, dw, db


def sigmoid(x: np.ndarray) -> np.ndarray:
    # Split by sign to avoid overflow in exp.
    out = np.empty_like(x)
    pos = x >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-x[pos]))
    ex = np.exp(x[~pos])
    out[~pos] = ex / (1.0 + ex)
    return out


def activation_forward(x: np.ndarray, kind: Activation) -> np.ndarray:
    x = np.asarray(x, dtype=np.float64)
    if kind is Activation.TANH:
        return np.tanh(x)
    if kind is Activation.RELU:
        return np.maximum(x, 0.0)
    if kind is Activation.SIGMOID:
        return sigmoid(x)
    raise ValueError(f"unknown activation {kind!r}")


def activation_backward(
    upstream: np.ndarray, x: np.ndarray, y: np.ndarray, kind: Activation
) -> np.ndarray:
    """dx given upstream dy, the input x, and the stored output y.

    ReLU passes gradient only where x > 0; the subgradient at 0 is 0.
    """
    if kind is Activation.TANH:
        return upstream * (1.0 - y * y)
    if kind is Activation.RELU:
        return upstream * (x > 0.0)
    if kind is Activation.SIGMOID:
        return upstream * y * (1.0 - y)
    raise ValueError(f"unknown activation {kind!r}")


def softmax(logits: np.ndarray) -> np.ndarray:
    """Row-wise stabilized softmax."""
    logits = _require_2d("logits", logits)
    shifted = logits - logits.max(axis=1, keepdims=True)
    e = np.exp(shifted)
    return e / e.sum(axis=1, keepdims=True)


def softmax_xent(logits: np.ndarray, labels: np.ndarray) -> tuple[float, np.ndarray]:
    """Mean cross-entropy over rows plus the gradient w.r.t. the logits.

    ``labels`` are integer class indices in [0, c). The gradient is
    (softmax - one_hot) / n.
    """
    logits = _require_2d("logits", logits)
    labels = np.asarray(labels)
    n, c = logits.shape
    if labels.shape != (n,):
        raise ValueError(f"labels must have shape ({n},), got {labels.shape}")
    if labels.size and (labels.min() < 0 or labels.max() >= c):
        raise ValueError(f"labels must lie in [0, {c}), got range [{labels.min()}, {labels.max()}]")
    shifted = logits - logits.max(axis=1, keepdims=True)
    log_z = np.log(np.exp(shifted).sum(axis=1))
    log_probs = shifted - log_z[:, None]
    rows = np.arange(n)
    loss = float(-log_probs[rows, labels].mean())
    grad = np.exp(log_probs)
    grad[rows, labels] -= 1.0
    grad /= n
    return loss, grad


def smooth_l1(pred: np.ndarray, target: np.ndarray) -> tuple[float, np.ndarray]:
    """Huber-style loss: 0.5 r^2 for |r| < 1, |r| - 0.5 otherwise; mean over n.

    Gradient w.r.t. pred is clamp(r, -1, 1) / n.
    """
    pred = np.asarray(pred, dtype=np.float64)
    target = np.asarray(target, dtype=np.float64)
    if pred.shape != target.shape:
        raise ValueError(f"pred and target shapes differ: {pred.shape} vs {target.shape}")
    if pred.size == 0:
        raise ValueError("smooth_l1 needs at least one element")
    r = pred - target
    absr = np.abs(r)
    per_elem = np.where(absr < 1.0, 0.5 * r * r, absr - 0.5)
    loss = float(per_elem.mean())
    grad = np.clip(r, -1.0, 1.0) / r.size
    return loss, grad


def max_pool_time(states: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Columnwise max over time. states: T x k -> (1 x k pooled, argmax per column).

    np.argmax takes the first occurrence, so ties break to the earliest
    timestep; the backward pass routes gradient only to those cells.
    """
    states = _require_2d("states", states)
    if states.shape[0] < 1:
        raise ValueError("max_pool_time needs at least one timestep")
    idx = states.argmax(axis=0)
    pooled = states[idx, np.arange(states.shape[1])].reshape(1, -1)
    return pooled, idx


def max_pool_time_backward(upstream: np.ndarray, argmax: np.ndarray, t: int) -> np.ndarray:
    """Scatter the 1 x k upstream gradient back to the argmax cells of a T x k input."""
    upstream = _require_2d("upstream", upstream)
    k = upstream.shape[1]
    out = np.zeros((t, k))
    out[argmax, np.arange(k)] = upstream[0]
    return out
