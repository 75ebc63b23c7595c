"""MLP regressor, closed-form linear baseline, grid search, cross-validation."""

from __future__ import annotations

import itertools
import logging
import math
import random
from dataclasses import dataclass, field, fields, replace
from typing import Mapping, Optional, Sequence

import numpy as np

from pparg.corpus import GradientExample
from pparg.embed import EmbeddingTable, OovPolicy, lookup, pca_fit
from pparg.evaluation import (
    DegenerateInputError,
    RegressionReport,
    fisher_average,
    kfold,
    pearson_r,
    r2_scores,
)
from pparg.models.features import (
    CooccurrenceCounts,
    DiagnosticsScore,
    build_feature_vector,
    feature_schema,
)
from pparg.nn import (
    Activation,
    NonFiniteGradientError,
    OptimizerConfig,
    Parameter,
    activation_backward,
    activation_forward,
    adadelta_step,
    affine_backward,
    affine_forward,
    glorot_uniform,
    restore_values,
    smooth_l1,
    snapshot_values,
)

log = logging.getLogger(__name__)

HIDDEN_GRID = (8, 16, 32, 64)
ACTIVATION_GRID = (Activation.RELU, Activation.TANH, Activation.SIGMOID)
LR_GRID = (1.0, 0.5, 0.1)


class SingularSystemError(ValueError):
    """Normal equations unsolvable even with the ridge jitter."""


@dataclass(frozen=True)
class RegressorConfig:
    use_mi: bool = True
    use_dobj: bool = True
    use_diag: bool = False
    use_interactions: bool = False
    use_embeddings: bool = True
    pca_k: int = 5
    hidden_units: int = 32
    activation: Activation = Activation.RELU
    seed: int = 0
    max_epochs: int = 100
    patience: int = 10
    batch_size: Optional[int] = None  # None trains full-batch
    optimizer: OptimizerConfig = field(default_factory=OptimizerConfig)

    def __post_init__(self) -> None:
        if self.pca_k < 1:
            raise ValueError("pca_k must be >= 1")
        if self.hidden_units < 1:
            raise ValueError("hidden_units must be >= 1")
        if self.max_epochs < 0 or self.patience < 0:
            raise ValueError("max_epochs and patience must be >= 0")
        if self.batch_size is not None and self.batch_size < 1:
            raise ValueError("batch_size must be >= 1 or None")

    def to_dict(self) -> dict:
        out = {}
        for f in fields(self):
            v = getattr(self, f.name)
            if isinstance(v, Activation):
                v = v.name
            elif isinstance(v, OptimizerConfig):
                v = {"rho": v.rho, "epsilon": v.epsilon, "batch_size": v.batch_size, "lr": v.lr}
            out[f.name] = v
        return out

    @classmethod
    def from_dict(cls, d: dict) -> "RegressorConfig":
        d = dict(d)
        d["activation"] = Activation[d["activation"]]
        d["optimizer"] = OptimizerConfig(**d["optimizer"])
        return cls(**d)


@dataclass
class RegressorParams:
    w1: Parameter
    b1: Parameter
    w2: Parameter
    b2: Parameter

    @classmethod
    def create(cls, config: RegressorConfig, n_features: int) -> "RegressorParams":
        if n_features < 1:
            raise ValueError("need at least one feature")
        m = config.hidden_units
        rng = np.random.default_rng(config.seed)
        return cls(
            w1=Parameter("w1", glorot_uniform(rng, n_features, m, (n_features, m))),
            b1=Parameter.zeros("b1", 1, m),
            w2=Parameter("w2", glorot_uniform(rng, m, 1, (m, 1))),
            b2=Parameter.zeros("b2", 1, 1),
        )

    def parameters(self) -> list[Parameter]:
        return [self.w1, self.b1, self.w2, self.b2]


def _as_matrix(x, n_features: Optional[int] = None) -> np.ndarray:
    m = np.asarray(x, dtype=np.float64)
    if m.ndim == 1:
        m = m.reshape(1, -1) if n_features is None or m.shape[0] == n_features else m.reshape(-1, 1)
    if m.ndim != 2:
        raise ValueError(f"expected a 2-D matrix, got shape {m.shape}")
    return m


def _forward(
    params: RegressorParams, x: np.ndarray, activation: Activation
) -> tuple[np.ndarray, dict]:
    pre = affine_forward(x, params.w1.value, params.b1.value)
    hidden = activation_forward(pre, activation)
    pred = affine_forward(hidden, params.w2.value, params.b2.value)
    return pred, {"x": x, "pre": pre, "hidden": hidden}


def _backward(
    params: RegressorParams, dpred: np.ndarray, saved: dict, activation: Activation
) -> None:
    dhidden, dw2, db2 = affine_backward(dpred, saved["hidden"], params.w2.value)
    params.w2.grad += dw2
    params.b2.grad += db2
    dpre = activation_backward(dhidden, saved["pre"], saved["hidden"], activation)
    _, dw1, db1 = affine_backward(dpre, saved["x"], params.w1.value)
    params.w1.grad += dw1
    params.b1.grad += db1


def predict_score(config: RegressorConfig, params: RegressorParams, features) -> np.ndarray:
    """Predictions for a feature matrix (or a single feature vector) as a flat array."""
    values = getattr(features, "values", features)
    x = _as_matrix(values, params.w1.value.shape[0])
    pred, _ = _forward(params, x, config.activation)
    return pred.reshape(-1)


def _dev_pearson(preds: np.ndarray, targets: np.ndarray) -> float:
    """Pearson against dev targets; a constant-prediction model scores -1."""
    try:
        return pearson_r(preds, targets)
    except DegenerateInputError:
        if np.ptp(np.asarray(targets, dtype=np.float64)) == 0:
            raise
        return -1.0


def train_regressor(
    train_x, train_y, dev_x, dev_y, config: RegressorConfig
) -> tuple[RegressorParams, list[dict]]:
    """Smooth-L1 training with dev-Pearson model selection and early stopping."""
    x = _as_matrix(train_x)
    y = np.asarray(train_y, dtype=np.float64).reshape(-1, 1)
    if x.shape[0] != y.shape[0]:
        raise ValueError(f"{x.shape[0]} feature rows but {y.shape[0]} targets")
    if x.shape[0] == 0:
        raise ValueError("training set is empty")
    dx = _as_matrix(dev_x)
    dy = np.asarray(dev_y, dtype=np.float64).reshape(-1)
    params = RegressorParams.create(config, x.shape[1])
    plist = params.parameters()
    shuffler = random.Random(config.seed)
    best = snapshot_values(plist)
    best_r = _dev_pearson(predict_score(config, params, dx), dy)
    bsz = config.batch_size or x.shape[0]
    order = list(range(x.shape[0]))
    epochs_log: list[dict] = []
    stale = 0
    for epoch in range(1, config.max_epochs + 1):
        shuffler.shuffle(order)
        total_loss = 0.0
        aborted = False
        for start in range(0, len(order), bsz):
            idx = order[start : start + bsz]
            pred, saved = _forward(params, x[idx], config.activation)
            loss, dpred = smooth_l1(pred, y[idx])
            if not math.isfinite(loss):
                log.warning("non-finite loss at epoch %d; keeping best checkpoint", epoch)
                aborted = True
                break
            total_loss += loss * len(idx)
            _backward(params, dpred, saved, config.activation)
            try:
                adadelta_step(plist, config.optimizer)
            except NonFiniteGradientError:
                log.warning("non-finite gradient at epoch %d; keeping best checkpoint", epoch)
                aborted = True
                break
        if aborted:
            break
        dev_r = _dev_pearson(predict_score(config, params, dx), dy)
        epochs_log.append(
            {"epoch": epoch, "train_loss": total_loss / x.shape[0], "dev_pearson": dev_r}
        )
        if dev_r > best_r:
            best_r = dev_r
            best = snapshot_values(plist)
            stale = 0
        else:
            stale += 1
            if stale >= config.patience:
                break
    restore_values(plist, best)
    return params, epochs_log


def grid_search_regressor(
    train_x,
    train_y,
    dev_x,
    dev_y,
    base_config: RegressorConfig,
    hidden_grid: Sequence[int] = HIDDEN_GRID,
    activations: Sequence[Activation] = ACTIVATION_GRID,
    lr_grid: Sequence[float] = LR_GRID,
) -> tuple[RegressorConfig, RegressorParams, list[dict]]:
    """Pick the (m, activation, lr) cell with the best dev Pearson.

    Each cell gets its own seed derived from (base seed, cell index), so
    cells are independent jobs; the first best cell wins ties.
    """
    results: list[dict] = []
    best_cell = None
    for idx, (m, act, lr) in enumerate(itertools.product(hidden_grid, activations, lr_grid)):
        seed = int(np.random.SeedSequence((base_config.seed, idx)).generate_state(1)[0])
        config = replace(
            base_config,
            hidden_units=m,
            activation=act,
            seed=seed,
            optimizer=replace(base_config.optimizer, lr=lr),
        )
        params, _ = train_regressor(train_x, train_y, dev_x, dev_y, config)
        dev_r = _dev_pearson(
            predict_score(config, params, dev_x), np.asarray(dev_y, dtype=np.float64)
        )
        results.append({"hidden_units": m, "activation": act.name, "lr": lr, "dev_pearson": dev_r})
        if best_cell is None or dev_r > best_cell[0]:
            best_cell = (dev_r, config, params)
    return best_cell[1], best_cell[2], results


@dataclass(frozen=True)
class LinearModel:
    weights: np.ndarray
    intercept: float


def train_linear(features, targets) -> LinearModel:
    """Ordinary least squares via normal equations with a 1e-8 ridge jitter."""
    x = _as_matrix(features)
    y = np.asarray(targets, dtype=np.float64).reshape(-1)
    n, p = x.shape
    if y.shape[0] != n:
        raise ValueError(f"{n} feature rows but {y.shape[0]} targets")
    if n <= p:
        raise ValueError(f"need more rows than features, got {n} x {p}")
    a = np.hstack([x, np.ones((n, 1))])
    gram = a.T @ a + 1e-8 * np.eye(p + 1)
    try:
        solution = np.linalg.solve(gram, a.T @ y)
    except np.linalg.LinAlgError as exc:
        raise SingularSystemError(str(exc)) from exc
    if not np.all(np.isfinite(solution)):
        raise SingularSystemError("non-finite solution")
    return LinearModel(weights=solution[:-1], intercept=float(solution[-1]))


def predict_linear(model: LinearModel, features) -> np.ndarray:
    x = _as_matrix(features, model.weights.shape[0])
    return (x @ model.weights + model.intercept).reshape(-1)


def _fit_pca_on(items: Sequence[GradientExample], table, config, oov_policy):
    """PCA over the distinct tokens used by the fitting fold, in first-seen order."""
    vectors: dict[str, np.ndarray] = {}
    for ex in items:
        tokens = [ex.verb, ex.prep] + ([ex.head_noun] if ex.head_noun else [])
        for token in tokens:
            if token not in vectors:
                vectors[token] = lookup(table, token, oov_policy)
    return pca_fit(np.stack(list(vectors.values())), config.pca_k)


def _split_inner_dev(items: list, seed_pair) -> tuple[list, list]:
    order = list(range(len(items)))
    seed = int(np.random.SeedSequence(seed_pair).generate_state(1)[0])
    random.Random(seed).shuffle(order)
    n_dev = max(1, round(0.15 * len(items)))
    dev_idx = set(order[:n_dev])
    fit = [items[i] for i in range(len(items)) if i not in dev_idx]
    dev = [items[i] for i in sorted(dev_idx)]
    return fit, dev


def crossval_regression(
    examples: Sequence[GradientExample],
    config: RegressorConfig,
    table: Optional[EmbeddingTable] = None,
    counts: Optional[CooccurrenceCounts] = None,
    diagnostics: Optional[Mapping[tuple[str, str], DiagnosticsScore]] = None,
    k: int = 10,
    seed: int = 0,
    linear: bool = False,
    oov_policy: OovPolicy = OovPolicy.ERROR,
) -> tuple[RegressionReport, list[dict]]:
    """K-fold evaluation with the PCA refit inside every fold.

    Reports the Fisher-averaged per-fold Pearson r, pooled out-of-fold R^2
    (adjusted with p = schema width), and the per-fold mean R^2.
    """
    schema = feature_schema(config)
    if not schema:
        raise ValueError("feature configuration selects no features")

    def featurize(items, pca):
        xs, ys = [], []
        for ex in items:
            diag = diagnostics.get((ex.verb, ex.prep)) if diagnostics else None
            if config.use_diag and diag is None:
                raise ValueError(f"no diagnostics row for {ex.verb}/{ex.prep}")
            fv = build_feature_vector(
                ex, config, table=table, pca=pca, counts=counts, diag=diag,
                oov_policy=oov_policy,
            )
            xs.append(fv.values)
            ys.append(ex.score)
        return np.stack(xs), np.array(ys)

    fold_rs: list[float] = []
    fold_r2s: list[float] = []
    fold_log: list[dict] = []
    all_preds: list[float] = []
    all_golds: list[float] = []
    for fold_idx, (train_items, test_items) in enumerate(kfold(list(examples), k=k, seed=seed)):
        pca = _fit_pca_on(train_items, table, config, oov_policy) if config.use_embeddings else None
        if linear:
            x_fit, y_fit = featurize(train_items, pca)
            model = train_linear(x_fit, y_fit)
            x_test, y_test = featurize(test_items, pca)
            preds = predict_linear(model, x_test)
        else:
            fit_items, dev_items = _split_inner_dev(list(train_items), (seed, fold_idx))
            x_fit, y_fit = featurize(fit_items, pca)
            x_dev, y_dev = featurize(dev_items, pca)
            fold_config = replace(config, seed=int(
                np.random.SeedSequence((config.seed, fold_idx)).generate_state(1)[0]
            ))
            params, _ = train_regressor(x_fit, y_fit, x_dev, y_dev, fold_config)
            x_test, y_test = featurize(test_items, pca)
            preds = predict_score(fold_config, params, x_test)
        r = pearson_r(preds, y_test)
        r2, _ = r2_scores(preds, y_test, p=0)
        fold_rs.append(r)
        fold_r2s.append(r2)
        fold_log.append({"fold": fold_idx, "n_test": len(test_items), "pearson_r": r, "r2": r2})
        all_preds.extend(preds.tolist())
        all_golds.extend(y_test.tolist())
    pooled_r2, pooled_adj = r2_scores(all_preds, all_golds, p=len(schema))
    report = RegressionReport(
        pearson_r=fisher_average(fold_rs),
        r2=pooled_r2,
        r2_adj=pooled_adj,
        n=len(all_golds),
        p=len(schema),
        fold_rs=tuple(fold_rs),
        r2_fold_mean=float(np.mean(fold_r2s)),
    )
    return report, fold_log
