"""Single-direction LSTM with backpropagation through time, plus a BiLSTM wrapper.

Gate weights are stored per gate: W_x is h x d, W_h is h x h, biases are
1 x h, matching the row-vector convention used elsewhere. The recurrence is

    i = sigmoid(W_xi x + W_hi h + b_i)      f = sigmoid(W_xf x + W_hf h + b_f)
    g = tanh(W_xg x + W_hg h + b_g)         o = sigmoid(W_xo x + W_ho h + b_o)
    c_t = f * c_{t-1} + i * g               h_t = o * tanh(c_t)

with h_0 = c_0 = 0. REVERSE processes the sequence back-to-front and
re-reverses its outputs so states always align with the input order.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from pparg.nn.layers import sigmoid
from pparg.nn.optim import Parameter, glorot_uniform

_GATES = ("i", "f", "g", "o")


class Direction(Enum):
    FORWARD = "forward"
    REVERSE = "reverse"


@dataclass
class LstmCellParams:
    """Weights for one LSTM direction: input, forget, cell, and output gates."""

    w_xi: Parameter
    w_hi: Parameter
    b_i: Parameter
    w_xf: Parameter
    w_hf: Parameter
    b_f: Parameter
    w_xg: Parameter
    w_hg: Parameter
    b_g: Parameter
    w_xo: Parameter
    w_ho: Parameter
    b_o: Parameter

    def __post_init__(self) -> None:
        h, d = self.w_xi.value.shape
        for gate in _GATES:
            if getattr(self, f"w_x{gate}").value.shape != (h, d):
                raise ValueError(f"w_x{gate} must be {h} x {d}")
            if getattr(self, f"w_h{gate}").value.shape != (h, h):
                raise ValueError(f"w_h{gate} must be {h} x {h}")
            if getattr(self, f"b_{gate}").value.shape != (1, h):
                raise ValueError(f"b_{gate} must be 1 x {h}")

    @property
    def input_dim(self) -> int:
        return self.w_xi.value.shape[1]

    @property
    def hidden_dim(self) -> int:
        return self.w_xi.value.shape[0]

    @classmethod
    def create(
        cls, input_dim: int, hidden_dim: int, rng: np.random.Generator, name_prefix: str = "lstm"
    ) -> "LstmCellParams":
        """Glorot-uniform weights; forget-gate bias starts at 1, others at 0."""
        kwargs = {}
        for gate in _GATES:
            kwargs[f"w_x{gate}"] = Parameter(
                f"{name_prefix}.w_x{gate}",
                glorot_uniform(rng, input_dim, hidden_dim, shape=(hidden_dim, input_dim)),
            )
            kwargs[f"w_h{gate}"] = Parameter(
                f"{name_prefix}.w_h{gate}",
                glorot_uniform(rng, hidden_dim, hidden_dim, shape=(hidden_dim, hidden_dim)),
            )
            bias = np.ones((1, hidden_dim)) if gate == "f" else np.zeros((1, hidden_dim))
            kwargs[f"b_{gate}"] = Parameter(f"{name_prefix}.b_{gate}", bias)
        return cls(**kwargs)

    def parameters(self) -> list[Parameter]:
        out = []
        for gate in _GATES:
            out.extend([getattr(self, f"w_x{gate}"), getattr(self, f"w_h{gate}"), getattr(self, f"b_{gate}")])
        return out

    def accumulate_grads(self, grads: dict[str, np.ndarray]) -> None:
        for key, g in grads.items():
            getattr(self, key).grad += g


@dataclass
class LstmCache:
    """Forward-pass intermediates needed by backpropagation through time."""

    xs: np.ndarray  # T x d, in processing order
    h_prev: np.ndarray  # T x h, row t holds h_{t-1}
    c_prev: np.ndarray  # T x h, row t holds c_{t-1}
    gates: dict[str, np.ndarray]  # activated gate values, each T x h
    c: np.ndarray  # T x h
    tanh_c: np.ndarray  # T x h
    direction: Direction
    params: LstmCellParams


def lstm_forward(
    sequence: np.ndarray, params: LstmCellParams, direction: Direction = Direction.FORWARD
) -> tuple[np.ndarray, LstmCache]:
    """Run the recurrence over a T x d sequence; returns T x h states and a cache."""
    sequence = np.asarray(sequence, dtype=np.float64)
    if sequence.ndim != 2:
        raise ValueError(f"sequence must be T x d, got shape {sequence.shape}")
    t_len, d = sequence.shape
    if t_len < 1:
        raise ValueError("sequence must have at least one timestep")
    if d != params.input_dim:
        raise ValueError(f"sequence dim {d} does not match cell input dim {params.input_dim}")
    h_dim = params.hidden_dim

    xs = sequence[::-1] if direction is Direction.REVERSE else sequence
    # Input projections for the whole sequence at once, one matmul per gate.
    x_proj = {g: xs @ getattr(params, f"w_x{g}").value.T for g in _GATES}

    h_prev = np.zeros((t_len, h_dim))
    c_prev = np.zeros((t_len, h_dim))
    gates = {g: np.zeros((t_len, h_dim)) for g in _GATES}
    c_all = np.zeros((t_len, h_dim))
    tanh_c = np.zeros((t_len, h_dim))
    states = np.zeros((t_len, h_dim))

    h = np.zeros(h_dim)
    c = np.zeros(h_dim)
    for t in range(t_len):
        h_prev[t] = h
        c_prev[t] = c
        i = sigmoid(x_proj["i"][t] + h @ params.w_hi.value.T + params.b_i.value[0])
        f = sigmoid(x_proj["f"][t] + h @ params.w_hf.value.T + params.b_f.value[0])
        g = np.tanh(x_proj["g"][t] + h @ params.w_hg.value.T + params.b_g.value[0])
        o = sigmoid(x_proj["o"][t] + h @ params.w_ho.value.T + params.b_o.value[0])
        c = f * c + i * g
        tc = np.tanh(c)
        h = o * tc
        gates["i"][t], gates["f"][t], gates["g"][t], gates["o"][t] = i, f, g, o
        c_all[t] = c
        tanh_c[t] = tc
        states[t] = h

    cache = LstmCache(xs, h_prev, c_prev, gates, c_all, tanh_c, direction, params)
    if direction is Direction.REVERSE:
        return states[::-1].copy(), cache
    return states, cache


def lstm_backward(
    dstates: np.ndarray, cache: LstmCache
) -> tuple[np.ndarray, dict[str, np.ndarray]]:
    """Backprop through time.

    ``dstates`` is the T x h gradient w.r.t. the returned states (input
    order). Returns the T x d gradient w.r.t. the input sequence plus a dict
    of parameter gradients keyed by LstmCellParams field name.
    """
    p = cache.params
    dstates = np.asarray(dstates, dtype=np.float64)
    t_len, h_dim = cache.c.shape
    if dstates.shape != (t_len, h_dim):
        raise ValueError(f"dstates must be {t_len} x {h_dim}, got {dstates.shape}")
    if cache.direction is Direction.REVERSE:
        dstates = dstates[::-1]

    da = {g: np.zeros((t_len, h_dim)) for g in _GATES}
    dh_next = np.zeros(h_dim)
    dc_next = np.zeros(h_dim)
    for t in range(t_len - 1, -1, -1):
        dh = dstates[t] + dh_next
        i, f, g, o = (cache.gates[k][t] for k in _GATES)
        tc = cache.tanh_c[t]
        dc = dc_next + dh * o * (1.0 - tc * tc)
        do = dh * tc
        df = dc * cache.c_prev[t]
        di = dc * g
        dg = dc * i
        da["i"][t] = di * i * (1.0 - i)
        da["f"][t] = df * f * (1.0 - f)
        da["g"][t] = dg * (1.0 - g * g)
        da["o"][t] = do * o * (1.0 - o)
        dc_next = dc * f
        dh_next = (
            da["i"][t] @ p.w_hi.value
            + da["f"][t] @ p.w_hf.value
            + da["g"][t] @ p.w_hg.value
            + da["o"][t] @ p.w_ho.value
        )

    dxs = np.zeros_like(cache.xs)
    grads: dict[str, np.ndarray] = {}
    for gate in _GATES:
        dxs += da[gate] @ getattr(p, f"w_x{gate}").value
        grads[f"w_x{gate}"] = da[gate].T @ cache.xs
        grads[f"w_h{gate}"] = da[gate].T @ cache.h_prev
        grads[f"b_{gate}"] = da[gate].sum(axis=0, keepdims=True)

    if cache.direction is Direction.REVERSE:
        dxs = dxs[::-1].copy()
    return dxs, grads


@dataclass
class BilstmCache:
    fwd: LstmCache
    bwd: LstmCache
    hidden_dim: int


def bilstm_encode(
    sequence: np.ndarray, fwd_params: LstmCellParams, bwd_params: LstmCellParams
) -> tuple[np.ndarray, BilstmCache]:
    """Concatenate forward and reverse LSTM states per timestep: T x 2h."""
    if fwd_params.hidden_dim != bwd_params.hidden_dim:
        raise ValueError("forward and backward hidden sizes differ")
    fwd_states, fwd_cache = lstm_forward(sequence, fwd_params, Direction.FORWARD)
    bwd_states, bwd_cache = lstm_forward(sequence, bwd_params, Direction.REVERSE)
    out = np.concatenate([fwd_states, bwd_states], axis=1)
    return out, BilstmCache(fwd_cache, bwd_cache, fwd_params.hidden_dim)


def bilstm_backward(
    dout: np.ndarray, cache: BilstmCache
) -> tuple[np.ndarray, dict[str, np.ndarray], dict[str, np.ndarray]]:
    """Split the T x 2h upstream gradient and backprop both directions."""
    h = cache.hidden_dim
    dout = np.asarray(dout, dtype=np.float64)
    dx_fwd, fwd_grads = lstm_backward(dout[:, :h], cache.fwd)
    dx_bwd, bwd_grads = lstm_backward(dout[:, h:], cache.bwd)
    return dx_fwd + dx_bwd, fwd_grads, bwd_grads
