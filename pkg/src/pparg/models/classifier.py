"""Pair/sentence encoders and the softmax classifier stacked on top.

Three encoders produce a fixed-width vector from the token embeddings of an
input: BOW averages them, CONCAT joins them in order, BILSTM runs both
directions and max-pools over time.  The vector is then linearly projected
(no bias) and fed through one tanh layer into a softmax.
"""

from __future__ import annotations

import logging
import math
import random
from dataclasses import dataclass, field, fields
from enum import Enum
from typing import Optional, Sequence

import numpy as np

from pparg.nn import (
    LstmCellParams,
    NonFiniteGradientError,
    OptimizerConfig,
    Parameter,
    activation_backward,
    adadelta_step,
    affine_backward,
    affine_forward,
    bilstm_backward,
    bilstm_encode,
    glorot_uniform,
    load_checkpoint,
    max_pool_time,
    max_pool_time_backward,
    restore_values,
    save_checkpoint,
    snapshot_values,
    softmax,
    softmax_xent,
)
from pparg.nn.layers import Activation

log = logging.getLogger(__name__)

# One training example: token embedding rows (T x d) plus a class index.
Example = tuple[np.ndarray, int]


class EncoderKind(Enum):
    BOW = "bow"
    CONCAT = "concat"
    BILSTM = "bilstm"


class UnsupportedEncoderInput(ValueError):
    """Raised when an encoder cannot consume the given input shape."""


@dataclass(frozen=True)
class ClassifierConfig:
    encoder: EncoderKind
    embedding_dim: int
    proj_dim: int = 512
    hidden_dim: int = 512
    num_classes: int = 2
    lstm_hidden: int = 256
    concat_len: int = 2
    seed: int = 0
    max_epochs: int = 100
    patience: int = 10
    optimizer: OptimizerConfig = field(default_factory=OptimizerConfig)

    def __post_init__(self) -> None:
        for name in ("embedding_dim", "proj_dim", "hidden_dim", "lstm_hidden", "concat_len"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be positive")
        if self.num_classes not in (2, 3):
            raise ValueError(f"num_classes must be 2 or 3, got {self.num_classes}")
        if self.max_epochs < 0 or self.patience < 0:
            raise ValueError("max_epochs and patience must be >= 0")

    @property
    def encoder_input_dim(self) -> int:
        if self.encoder is EncoderKind.BOW:
            return self.embedding_dim
        if self.encoder is EncoderKind.CONCAT:
            return self.concat_len * self.embedding_dim
        return 2 * self.lstm_hidden

    def to_dict(self) -> dict:
        out = {}
        for f in fields(self):
            v = getattr(self, f.name)
            if isinstance(v, EncoderKind):
                v = v.value
            elif isinstance(v, OptimizerConfig):
                v = {"rho": v.rho, "epsilon": v.epsilon, "batch_size": v.batch_size, "lr": v.lr}
            out[f.name] = v
        return out

    @classmethod
    def from_dict(cls, d: dict) -> "ClassifierConfig":
        d = dict(d)
        d["encoder"] = EncoderKind(d["encoder"])
        d["optimizer"] = OptimizerConfig(**d["optimizer"])
        return cls(**d)


@dataclass
class ClassifierParams:
    w_proj: Parameter
    w_h: Parameter
    b_h: Parameter
    w_o: Parameter
    b_o: Parameter
    lstm_fwd: Optional[LstmCellParams] = None
    lstm_bwd: Optional[LstmCellParams] = None

    @classmethod
    def create(cls, config: ClassifierConfig) -> "ClassifierParams":
        rng = np.random.default_rng(config.seed)
        enc = config.encoder_input_dim
        w_proj = Parameter("w_proj", glorot_uniform(rng, enc, config.proj_dim, (enc, config.proj_dim)))
        w_h = Parameter(
            "w_h",
            glorot_uniform(rng, config.proj_dim, config.hidden_dim, (config.proj_dim, config.hidden_dim)),
        )
        b_h = Parameter.zeros("b_h", 1, config.hidden_dim)
        w_o = Parameter(
            "w_o",
            glorot_uniform(rng, config.hidden_dim, config.num_classes, (config.hidden_dim, config.num_classes)),
        )
        b_o = Parameter.zeros("b_o", 1, config.num_classes)
        lstm_fwd = lstm_bwd = None
        if config.encoder is EncoderKind.BILSTM:
            lstm_fwd = LstmCellParams.create(config.embedding_dim, config.lstm_hidden, rng, "lstm_fwd")
            lstm_bwd = LstmCellParams.create(config.embedding_dim, config.lstm_hidden, rng, "lstm_bwd")
        return cls(w_proj, w_h, b_h, w_o, b_o, lstm_fwd, lstm_bwd)

    def parameters(self) -> list[Parameter]:
        out = [self.w_proj, self.w_h, self.b_h, self.w_o, self.b_o]
        if self.lstm_fwd is not None:
            out.extend(self.lstm_fwd.parameters())
            out.extend(self.lstm_bwd.parameters())
        return out


def _tokens_matrix(tokens: np.ndarray, config: ClassifierConfig) -> np.ndarray:
    m = np.asarray(tokens, dtype=np.float64)
    if m.ndim != 2 or m.shape[0] < 1:
        raise UnsupportedEncoderInput(f"need a T x d token matrix, got shape {m.shape}")
    if m.shape[1] != config.embedding_dim:
        raise UnsupportedEncoderInput(
            f"token width {m.shape[1]} != embedding_dim {config.embedding_dim}"
        )
    return m


def _encode_forward(
    config: ClassifierConfig, params: ClassifierParams, tokens: np.ndarray
) -> tuple[np.ndarray, object]:
    """Pre-projection encoder output (1 x encoder_input_dim) plus backward cache."""
    m = _tokens_matrix(tokens, config)
    if config.encoder is EncoderKind.BOW:
        return m.mean(axis=0, keepdims=True), None
    if config.encoder is EncoderKind.CONCAT:
        if m.shape[0] != config.concat_len:
            raise UnsupportedEncoderInput(
                f"concat encoder is fixed to {config.concat_len} tokens, got {m.shape[0]}"
            )
        return m.reshape(1, -1), None
    states, cache = bilstm_encode(m, params.lstm_fwd, params.lstm_bwd)
    pooled, argmax = max_pool_time(states)
    return pooled, (cache, argmax, m.shape[0])


def _encode_backward(
    config: ClassifierConfig, params: ClassifierParams, denc: np.ndarray, cache: object
) -> None:
    """Route gradient from one encoder-output row into the LSTM parameters."""
    if config.encoder is not EncoderKind.BILSTM:
        return
    bicache, argmax, t = cache
    dstates = max_pool_time_backward(denc.reshape(1, -1), argmax, t)
    _, fwd_grads, bwd_grads = bilstm_backward(dstates, bicache)
    params.lstm_fwd.accumulate_grads(fwd_grads)
    params.lstm_bwd.accumulate_grads(bwd_grads)


def encode_pair(
    config: ClassifierConfig, params: ClassifierParams, tokens: np.ndarray
) -> np.ndarray:
    """Encode a token sequence and project it: the 1 x proj_dim input to Eq-style head."""
    enc, _ = _encode_forward(config, params, tokens)
    return enc @ params.w_proj.value


def classify(
    config: ClassifierConfig, params: ClassifierParams, tokens: np.ndarray
) -> tuple[int, np.ndarray]:
    """Predicted class index (lowest index wins exact ties) and class probabilities."""
    v = encode_pair(config, params, tokens)
    hidden = np.tanh(affine_forward(v, params.w_h.value, params.b_h.value))
    logits = affine_forward(hidden, params.w_o.value, params.b_o.value)
    probs = softmax(logits)[0]
    return int(np.argmax(probs)), probs


def _forward_batch(
    config: ClassifierConfig, params: ClassifierParams, batch: Sequence[Example]
) -> tuple[np.ndarray, dict]:
    rows, caches = [], []
    for tokens, _ in batch:
        enc, cache = _encode_forward(config, params, tokens)
        rows.append(enc[0])
        caches.append(cache)
    enc_out = np.stack(rows)
    v = enc_out @ params.w_proj.value
    pre = affine_forward(v, params.w_h.value, params.b_h.value)
    hidden = np.tanh(pre)
    logits = affine_forward(hidden, params.w_o.value, params.b_o.value)
    saved = {"enc_out": enc_out, "caches": caches, "pre": pre, "hidden": hidden, "v": v}
    return logits, saved


def _backward_batch(
    config: ClassifierConfig, params: ClassifierParams, dlogits: np.ndarray, saved: dict
) -> None:
    dhidden, dw_o, db_o = affine_backward(dlogits, saved["hidden"], params.w_o.value)
    params.w_o.grad += dw_o
    params.b_o.grad += db_o
    dpre = activation_backward(dhidden, saved["pre"], saved["hidden"], Activation.TANH)
    dv, dw_h, db_h = affine_backward(dpre, saved["v"], params.w_h.value)
    params.w_h.grad += dw_h
    params.b_h.grad += db_h
    params.w_proj.grad += saved["enc_out"].T @ dv
    denc = dv @ params.w_proj.value.T
    for i, cache in enumerate(saved["caches"]):
        _encode_backward(config, params, denc[i], cache)


def evaluate_accuracy(
    config: ClassifierConfig, params: ClassifierParams, data: Sequence[Example]
) -> float:
    if not data:
        raise ValueError("cannot evaluate on an empty dataset")
    correct = 0
    for tokens, label in data:
        pred, _ = classify(config, params, tokens)
        correct += pred == label
    return correct / len(data)


def _check_dataset(name: str, data: Sequence[Example], num_classes: int) -> None:
    if not data:
        raise ValueError(f"{name} dataset is empty")
    for _, label in data:
        if not 0 <= label < num_classes:
            raise ValueError(f"label {label} outside 0..{num_classes - 1}")


def train_classifier(
    train: Sequence[Example], dev: Sequence[Example], config: ClassifierConfig
) -> tuple[ClassifierParams, list[dict]]:
    """Mini-batch training with dev-accuracy model selection.

    Keeps the parameters of the best dev epoch, stopping after `patience`
    epochs without improvement.  A non-finite loss aborts the run and the
    best checkpoint so far is returned.
    """
    _check_dataset("train", train, config.num_classes)
    _check_dataset("dev", dev, config.num_classes)
    params = ClassifierParams.create(config)
    plist = params.parameters()
    shuffler = random.Random(config.seed)
    best = snapshot_values(plist)
    best_acc = evaluate_accuracy(config, params, dev)
    epochs_log: list[dict] = []
    stale = 0
    order = list(range(len(train)))
    bsz = config.optimizer.batch_size
    for epoch in range(1, config.max_epochs + 1):
        shuffler.shuffle(order)
        total_loss = 0.0
        aborted = False
        for start in range(0, len(order), bsz):
            batch = [train[i] for i in order[start : start + bsz]]
            logits, saved = _forward_batch(config, params, batch)
            labels = np.array([label for _, label in batch])
            loss, dlogits = softmax_xent(logits, labels)
            if not math.isfinite(loss):
                log.warning("non-finite loss at epoch %d; keeping last best checkpoint", epoch)
                aborted = True
                break
            total_loss += loss * len(batch)
            _backward_batch(config, params, dlogits, saved)
            try:
                adadelta_step(plist, config.optimizer)
            except NonFiniteGradientError:
                log.warning("non-finite gradient at epoch %d; keeping last best checkpoint", epoch)
                aborted = True
                break
        if aborted:
            break
        dev_acc = evaluate_accuracy(config, params, dev)
        epochs_log.append(
            {"epoch": epoch, "train_loss": total_loss / len(train), "dev_accuracy": dev_acc}
        )
        if dev_acc > best_acc:
            best_acc = dev_acc
            best = snapshot_values(plist)
            stale = 0
        else:
            stale += 1
            if stale >= config.patience:
                break
    restore_values(plist, best)
    return params, epochs_log


def save_classifier(path, config: ClassifierConfig, params: ClassifierParams) -> None:
    arrays = [(p.name, p.value) for p in params.parameters()]
    save_checkpoint(path, arrays, config.to_dict())


def load_classifier(path) -> tuple[ClassifierConfig, ClassifierParams]:
    arrays, raw = load_checkpoint(path)
    config = ClassifierConfig.from_dict(raw)
    params = ClassifierParams.create(config)
    by_name = dict(arrays)
    for p in params.parameters():
        if p.name not in by_name:
            raise ValueError(f"checkpoint missing parameter {p.name}")
        stored = by_name.pop(p.name)
        if stored.shape != p.value.shape:
            raise ValueError(
                f"parameter {p.name}: stored shape {stored.shape} != expected {p.value.shape}"
            )
        p.value = stored
    if by_name:
        raise ValueError(f"checkpoint has extra parameters: {sorted(by_name)}")
    return config, params
