"""Command-line pipeline driver.

Subcommands: gen-dataset, train, evaluate, ablate, significance, predict,
stats.  Logs go to standard error; each command prints one JSON object to
standard out and writes its artifacts under the output directory.  Exit
status 1 means a validation problem, 2 a runtime failure.
"""

from __future__ import annotations

import argparse
import json
import logging
import random
import sys
from dataclasses import replace
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from pparg.config import ConfigError, RunConfig, load_config, save_config
from pparg.corpus import (
    ArgLabel,
    SentenceMode,
    balance_subsample,
    build_fullsentence_dataset,
    default_featural_map,
    default_lemmatizer,
    generate_pair_dataset,
    load_featural_map,
    load_verbnet_dir,
    normalize_judgments,
    read_gradient_examples,
    read_judgments_csv,
    read_pairs,
    read_sentence_examples,
    stratified_split,
    write_pairs,
    write_sentence_examples,
)
from pparg.embed import EmbeddingTable, load_embeddings, lookup, pca_fit
from pparg.evaluation import (
    approx_randomization,
    approx_randomization_metric,
    classification_metrics,
    render_table,
    score_distribution_stats,
    table_to_tsv,
)
from pparg.models import ClassifierConfig, EncoderKind, RegressorConfig

log = logging.getLogger("pparg")

# Fixed class order for all classifier label indices and probability output.
LABEL_ORDER = (ArgLabel.ARG, ArgLabel.ADJ, ArgLabel.UNOBSERVED)
LABEL_INDEX = {label: i for i, label in enumerate(LABEL_ORDER)}


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # usage problems are validation errors: exit 1
        raise ConfigError(message)


def _write_json(path: Path, obj) -> None:
    path.write_text(json.dumps(obj, indent=2, sort_keys=True) + "\n", encoding="utf-8")


def _write_lines(path: Path, lines: Sequence[str]) -> None:
    path.write_text("\n".join(lines) + ("\n" if lines else ""), encoding="utf-8")


def _dataset_dir(config: RunConfig) -> Path:
    return Path(config.dataset_dir or config.output_dir)


def _require_files(*paths: Path) -> None:
    for p in paths:
        if not p.exists():
            raise ConfigError(f"missing dataset file: {p} (run gen-dataset first?)")


def _load_table(config: RunConfig) -> EmbeddingTable:
    config.require("embeddings")
    log.info("loading embeddings from %s", config.embeddings)
    return load_embeddings(config.embeddings, config.embedding_format)


def _featural_map(config: RunConfig):
    if config.featural_map is not None:
        config.require("featural_map")
        return load_featural_map(config.featural_map)
    return default_featural_map()


def _build_pairs(config: RunConfig):
    config.require("verbnet_dir")
    inventory = load_verbnet_dir(
        config.verbnet_dir, _featural_map(config), config.include_multiclass
    )
    verbs = sorted(inventory.entries)
    pairs = generate_pair_dataset(inventory, verbs, inventory.prep_universe)
    if config.balance:
        pairs = balance_subsample(pairs, config.seed)
    return inventory, pairs


def cmd_gen_dataset(config: RunConfig, args, out_dir: Path) -> dict:
    inventory, pairs = _build_pairs(config)
    if args.task == "binary":
        split = stratified_split(pairs, seed=config.seed)
        names = ("pairs-train.tsv", "pairs-dev.tsv", "pairs-test.tsv")
        for name, part in zip(names, split):
            write_pairs(out_dir / name, part)
    else:
        config.require("corpus_file")
        mode = SentenceMode.KEEP_LABELS if args.task == "fullsent" else SentenceMode.TERNARY
        lemmatizer = default_lemmatizer(vocab={p.verb for p in pairs})
        with open(config.corpus_file, encoding="utf-8") as fh:
            examples = build_fullsentence_dataset(fh, pairs, mode, lemmatizer)
        if not examples:
            raise ValueError("no sentences matched the pair dataset")
        split = stratified_split(examples, seed=config.seed)
        names = ("sentences-train.tsv", "sentences-dev.tsv", "sentences-test.tsv")
        for name, part in zip(names, split):
            write_sentence_examples(out_dir / name, part)
    train, dev, test = split
    return {
        "task": args.task,
        "n_verbs": len(inventory.entries),
        "n_preps": len(inventory.prep_universe),
        "n_total": len(train) + len(dev) + len(test),
        "n_train": len(train),
        "n_dev": len(dev),
        "n_test": len(test),
        "files": [str(out_dir / n) for n in names],
    }


def _encode_pairs_file(path: Path, table: EmbeddingTable, policy):
    out = []
    for pair in read_pairs(path):
        tokens = np.stack([lookup(table, pair.verb, policy), lookup(table, pair.prep, policy)])
        out.append((tokens, LABEL_INDEX[pair.label]))
    return out


def _encode_sentences_file(path: Path, table: EmbeddingTable, policy):
    out = []
    for ex in read_sentence_examples(path):
        words = ex.tokens if ex.tokens else (ex.verb, ex.prep)
        tokens = np.stack([lookup(table, w, policy) for w in words])
        out.append((tokens, LABEL_INDEX[ex.label]))
    return out


def _classifier_config(config: RunConfig, encoder: EncoderKind, dim: int, num_classes: int):
    overrides = dict(config.classifier)
    opt_kwargs = overrides.pop("optimizer", {})
    from pparg.nn import OptimizerConfig

    try:
        return ClassifierConfig(
            encoder=encoder,
            embedding_dim=dim,
            num_classes=num_classes,
            seed=overrides.pop("seed", config.seed),
            optimizer=OptimizerConfig(**opt_kwargs),
            **overrides,
        )
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"bad classifier config: {exc}") from exc


def _regressor_config(config: RunConfig):
    from pparg.nn import Activation, OptimizerConfig

    overrides = dict(config.regressor)
    opt_kwargs = overrides.pop("optimizer", {})
    if "activation" in overrides:
        try:
            overrides["activation"] = Activation[overrides["activation"]]
        except KeyError as exc:
            raise ConfigError(f"unknown activation {overrides['activation']!r}") from exc
    try:
        return RegressorConfig(
            seed=overrides.pop("seed", config.seed),
            optimizer=OptimizerConfig(**opt_kwargs),
            **overrides,
        )
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"bad regressor config: {exc}") from exc


def _train_cls(config: RunConfig, args, out_dir: Path) -> dict:
    from pparg.models import save_classifier, train_classifier

    data_dir = _dataset_dir(config)
    prefix = "pairs" if args.dataset == "pairs" else "sentences"
    train_path = data_dir / f"{prefix}-train.tsv"
    dev_path = data_dir / f"{prefix}-dev.tsv"
    _require_files(train_path, dev_path)
    encoder = EncoderKind(args.encoder)
    if encoder is EncoderKind.CONCAT and prefix == "sentences":
        raise ConfigError("the concat encoder only takes fixed-length pair input")
    table = _load_table(config)
    encode = _encode_pairs_file if prefix == "pairs" else _encode_sentences_file
    train = encode(train_path, table, config.oov)
    dev = encode(dev_path, table, config.oov)
    classes = {label for _, label in train} | {label for _, label in dev}
    num_classes = 3 if LABEL_INDEX[ArgLabel.UNOBSERVED] in classes else 2
    ccfg = _classifier_config(config, encoder, table.dim, num_classes)
    log.info("training %s classifier on %d examples", encoder.value, len(train))
    params, epochs = train_classifier(train, dev, ccfg)
    ckpt = out_dir / f"classifier-{encoder.value}.ckpt"
    save_classifier(ckpt, ccfg, params)
    _write_lines(
        out_dir / "train-cls-log.jsonl",
        [json.dumps(e, sort_keys=True) for e in epochs],
    )
    from pparg.models import evaluate_accuracy

    return {
        "task": "cls",
        "encoder": encoder.value,
        "checkpoint": str(ckpt),
        "epochs_run": len(epochs),
        "dev_accuracy": evaluate_accuracy(ccfg, params, dev),
        "n_train": len(train),
    }


def _plain_split(items: list, seed: int) -> tuple[list, list, list]:
    """Seeded 70/15/15 split; the floor nudge mirrors the pair splitter."""
    order = list(range(len(items)))
    random.Random(seed).shuffle(order)
    n = len(items)
    n_train = int(n * 0.70 + 1e-9)
    n_dev = int(n * 0.15 + 1e-9)
    picked = [items[i] for i in order]
    return (
        picked[:n_train],
        picked[n_train : n_train + n_dev],
        picked[n_train + n_dev :],
    )


def _fit_pca(items, table, config: RunConfig, rcfg: RegressorConfig):
    vectors = {}
    for ex in items:
        for token in (ex.verb, ex.prep) + ((ex.head_noun,) if ex.head_noun else ()):
            if token not in vectors:
                vectors[token] = lookup(table, token, config.oov)
    return pca_fit(np.stack(list(vectors.values())), rcfg.pca_k)


def _gradient_inputs(config: RunConfig, rcfg: RegressorConfig):
    from pparg.models import read_counts_file, read_diagnostics_csv

    config.require("gradient_file")
    items = read_gradient_examples(config.gradient_file)
    counts = None
    if rcfg.use_mi:
        config.require("counts_file")
        counts = read_counts_file(config.counts_file)
    diagnostics = None
    if rcfg.use_diag:
        config.require("diagnostics_file")
        by_item = read_diagnostics_csv(config.diagnostics_file)
        diagnostics = {}
        for key, score in by_item.items():
            verb, _, prep = key.partition("/")
            diagnostics[(verb, prep)] = score
    return items, counts, diagnostics


def _train_reg(config: RunConfig, args, out_dir: Path) -> dict:
    from pparg.evaluation import pearson_r
    from pparg.models import (
        build_feature_vector,
        feature_schema,
        grid_search_regressor,
        predict_score,
        train_regressor,
    )
    from pparg.nn import save_checkpoint

    rcfg = _regressor_config(config)
    items, counts, diagnostics = _gradient_inputs(config, rcfg)
    table = _load_table(config) if rcfg.use_embeddings else None
    train, dev, test = _plain_split(items, config.seed)
    if not train or not dev or not test:
        raise ConfigError(f"{len(items)} items is too few for a 70/15/15 split")
    pca = _fit_pca(train, table, config, rcfg) if rcfg.use_embeddings else None
    schema = feature_schema(rcfg)

    def featurize(part):
        xs, ys = [], []
        for ex in part:
            diag = diagnostics.get((ex.verb, ex.prep)) if diagnostics else None
            if rcfg.use_diag and diag is None:
                raise ValueError(f"no diagnostics row for {ex.verb}/{ex.prep}")
            fv = build_feature_vector(
                ex, rcfg, table=table, pca=pca, counts=counts, diag=diag,
                oov_policy=config.oov,
            )
            xs.append(fv.values)
            ys.append(ex.score)
        return np.stack(xs), np.array(ys)

    x_train, y_train = featurize(train)
    x_dev, y_dev = featurize(dev)
    x_test, y_test = featurize(test)
    grid_rows = None
    if args.grid:
        rcfg, params, grid_rows = grid_search_regressor(
            x_train, y_train, x_dev, y_dev, rcfg
        )
    else:
        params, _ = train_regressor(x_train, y_train, x_dev, y_dev, rcfg)
    arrays = [(p.name, p.value) for p in params.parameters()]
    if pca is not None:
        arrays.append(("pca.mean", pca.mean.reshape(1, -1)))
        arrays.append(("pca.components", pca.components))
    ckpt = out_dir / "regressor.ckpt"
    save_checkpoint(ckpt, arrays, {"regressor": rcfg.to_dict(), "schema": list(schema)})
    result = {
        "task": "reg",
        "checkpoint": str(ckpt),
        "n_features": len(schema),
        "dev_pearson": pearson_r(predict_score(rcfg, params, x_dev), y_dev),
        "test_pearson": pearson_r(predict_score(rcfg, params, x_test), y_test),
        "n_train": len(train),
    }
    if grid_rows is not None:
        result["grid_cells"] = len(grid_rows)
        _write_lines(
            out_dir / "grid-log.jsonl", [json.dumps(r, sort_keys=True) for r in grid_rows]
        )
    return result


def cmd_train(config: RunConfig, args, out_dir: Path) -> dict:
    if args.task == "cls":
        return _train_cls(config, args, out_dir)
    return _train_reg(config, args, out_dir)


def cmd_evaluate(config: RunConfig, args, out_dir: Path) -> dict:
    from pparg.models import classify, load_classifier

    ckpt = Path(args.checkpoint)
    if not ckpt.exists():
        raise ConfigError(f"no such checkpoint: {ckpt}")
    data_dir = _dataset_dir(config)
    prefix = "pairs" if args.dataset == "pairs" else "sentences"
    data_path = data_dir / f"{prefix}-{args.split}.tsv"
    _require_files(data_path)
    table = _load_table(config)
    ccfg, params = load_classifier(ckpt)
    encode = _encode_pairs_file if prefix == "pairs" else _encode_sentences_file
    data = encode(data_path, table, config.oov)
    preds, golds = [], []
    for tokens, label in data:
        pred, _ = classify(ccfg, params, tokens)
        preds.append(LABEL_ORDER[pred])
        golds.append(LABEL_ORDER[label])
    report = classification_metrics(preds, golds)
    _write_json(out_dir / f"eval-{args.split}.json", report.to_dict())
    _write_lines(
        out_dir / f"preds-{args.split}.scores",
        [repr(1.0 if p is g else 0.0) for p, g in zip(preds, golds)],
    )
    _write_lines(
        out_dir / f"preds-{args.split}.predgold",
        [f"{p.value}\t{g.value}" for p, g in zip(preds, golds)],
    )
    return report.to_dict()


_ABLATION_FLAGS = ("mi", "dobj", "diag", "interactions")


def cmd_ablate(config: RunConfig, args, out_dir: Path) -> dict:
    from pparg.evaluation import ablation_sweep
    from pparg.models import crossval_regression

    flags = [f.strip() for f in args.flags.split(",") if f.strip()]
    bad = sorted(set(flags) - set(_ABLATION_FLAGS))
    if bad:
        raise ConfigError(f"unknown ablation flags {bad}; valid: {list(_ABLATION_FLAGS)}")
    if not flags:
        raise ConfigError("need at least one flag to ablate")
    base = _regressor_config(config)
    full = replace(base, **{f"use_{f}": True for f in flags})
    subsets = [("full", full)]
    subsets.extend(
        (f"no-{f}", replace(full, **{f"use_{f}": False})) for f in flags
    )
    items, counts, diagnostics = _gradient_inputs(config, full)
    table = _load_table(config) if full.use_embeddings else None

    def evaluate(cfg):
        report, _ = crossval_regression(
            items, cfg, table=table, counts=counts, diagnostics=diagnostics,
            k=config.kfold, seed=config.seed, oov_policy=config.oov,
        )
        return report

    rows = ablation_sweep(subsets, evaluate)
    (out_dir / "ablation.txt").write_text(render_table(rows) + "\n", encoding="utf-8")
    (out_dir / "ablation.tsv").write_text(table_to_tsv(rows), encoding="utf-8")
    return {
        "rows": [
            {"features": name, **report.to_dict()} for name, report in rows
        ]
    }


def _read_scores(path: Path) -> list[float]:
    out = []
    for lineno, line in enumerate(path.read_text(encoding="utf-8").splitlines(), 1):
        if not line.strip():
            continue
        try:
            out.append(float(line))
        except ValueError as exc:
            raise ValueError(f"{path}:{lineno}: not a number: {line!r}") from exc
    if not out:
        raise ValueError(f"{path}: no scores")
    return out


def _read_predgold(path: Path) -> list[tuple[str, str]]:
    out = []
    for lineno, line in enumerate(path.read_text(encoding="utf-8").splitlines(), 1):
        if not line.strip():
            continue
        parts = line.split("\t")
        if len(parts) != 2:
            raise ValueError(f"{path}:{lineno}: expected pred<TAB>gold")
        out.append((parts[0], parts[1]))
    if not out:
        raise ValueError(f"{path}: no rows")
    return out


def cmd_significance(config: RunConfig, args, out_dir: Path) -> dict:
    path_a, path_b = Path(args.a), Path(args.b)
    for p in (path_a, path_b):
        if not p.exists():
            raise ConfigError(f"no such score file: {p}")
    iterations = args.R if args.R is not None else config.iterations
    if iterations < 1:
        raise ConfigError("--R must be >= 1")
    if args.metric == "acc":
        result = approx_randomization(
            _read_scores(path_a), _read_scores(path_b), iterations, config.seed
        )
    else:
        positive = args.positive

        def f1(items):
            tp = sum(1 for p, g in items if p == positive and g == positive)
            fp = sum(1 for p, g in items if p == positive and g != positive)
            fn = sum(1 for p, g in items if p != positive and g == positive)
            return 0.0 if tp == 0 else 2 * tp / (2 * tp + fp + fn)

        result = approx_randomization_metric(
            _read_predgold(path_a), _read_predgold(path_b), f1, iterations, config.seed
        )
    payload = {"metric": args.metric, **result.to_dict()}
    _write_json(out_dir / "significance.json", payload)
    return payload


def cmd_predict(config: RunConfig, args, out_dir: Path) -> dict:
    from pparg.models import classify, load_classifier

    ckpt = Path(args.checkpoint)
    if not ckpt.exists():
        raise ConfigError(f"no such checkpoint: {ckpt}")
    table = _load_table(config)
    ccfg, params = load_classifier(ckpt)
    tokens = np.stack(
        [lookup(table, args.verb, config.oov), lookup(table, args.prep, config.oov)]
    )
    label, probs = classify(ccfg, params, tokens)
    return {
        "verb": args.verb,
        "prep": args.prep,
        "label": LABEL_ORDER[label].value,
        "probs": {
            LABEL_ORDER[i].value: float(p) for i, p in enumerate(probs)
        },
    }


def cmd_stats(config: RunConfig, args, out_dir: Path) -> dict:
    judgments = args.judgments or config.judgments_file
    if judgments is None:
        raise ConfigError("give --judgments or set judgments_file in the config")
    if not Path(judgments).exists():
        raise ConfigError(f"no such judgments file: {judgments}")
    matrix = read_judgments_csv(judgments)
    normalized = normalize_judgments(matrix)
    scores = [score for _, score in normalized]
    mean, sd, z = score_distribution_stats(scores)
    _write_lines(
        out_dir / "judgments-z.tsv",
        [f"{item}\t{score!r}" for item, score in normalized],
    )
    payload = {
        "n_items": len(normalized),
        "n_subjects": len(matrix.subjects()),
        "mean": mean,
        "sd": sd,
        "sign_test_z": z,
        "min": min(scores),
        "max": max(scores),
    }
    _write_json(out_dir / "judgment-stats.json", payload)
    return payload


_COMMANDS = {
    "gen-dataset": cmd_gen_dataset,
    "train": cmd_train,
    "evaluate": cmd_evaluate,
    "ablate": cmd_ablate,
    "significance": cmd_significance,
    "predict": cmd_predict,
    "stats": cmd_stats,
}


def build_parser() -> argparse.ArgumentParser:
    shared = _Parser(add_help=False)
    shared.add_argument("--config", help="JSON config file")
    shared.add_argument("--output-dir", help="override the config output_dir")
    shared.add_argument("--seed", type=int, help="override the config seed")
    shared.add_argument("--embeddings", help="override the config embeddings path")

    parser = _Parser(prog="pparg", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen-dataset", parents=[shared])
    p.add_argument("--task", choices=["binary", "fullsent", "fullsent3"], required=True)

    p = sub.add_parser("train", parents=[shared])
    p.add_argument("--task", choices=["cls", "reg"], required=True)
    p.add_argument("--encoder", choices=[k.value for k in EncoderKind], default="bow")
    p.add_argument("--dataset", choices=["pairs", "sentences"], default="pairs")
    p.add_argument("--grid", action="store_true", help="grid-search the regressor")

    p = sub.add_parser("evaluate", parents=[shared])
    p.add_argument("--checkpoint", required=True)
    p.add_argument("--split", choices=["train", "dev", "test"], default="test")
    p.add_argument("--dataset", choices=["pairs", "sentences"], default="pairs")

    p = sub.add_parser("ablate", parents=[shared])
    p.add_argument("--flags", required=True, help="comma list from: mi,dobj,diag,interactions")

    p = sub.add_parser("significance", parents=[shared])
    p.add_argument("--a", required=True)
    p.add_argument("--b", required=True)
    p.add_argument("--R", type=int, default=None)
    p.add_argument("--metric", choices=["acc", "f1"], default="acc")
    p.add_argument("--positive", default="ARG")

    p = sub.add_parser("predict", parents=[shared])
    p.add_argument("--verb", required=True)
    p.add_argument("--prep", required=True)
    p.add_argument("--checkpoint", required=True)

    p = sub.add_parser("stats", parents=[shared])
    p.add_argument("--judgments")

    return parser


def _effective_config(args) -> RunConfig:
    config = load_config(args.config) if args.config else RunConfig()
    if args.output_dir:
        config.output_dir = args.output_dir
    if args.seed is not None:
        config = RunConfig.from_dict({**config.to_dict(), "seed": args.seed})
    if getattr(args, "embeddings", None):
        config.embeddings = args.embeddings
    return config


def main(argv: Optional[Sequence[str]] = None) -> int:
    if not logging.getLogger().handlers:
        logging.basicConfig(stream=sys.stderr, level=logging.INFO, format="%(message)s")
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        config = _effective_config(args)
        out_dir = Path(config.output_dir)
        out_dir.mkdir(parents=True, exist_ok=True)
        save_config(out_dir / "effective-config.json", config)
        result = _COMMANDS[args.command](config, args, out_dir)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except Exception as exc:  # noqa: BLE001 - runtime failures map to exit 2
        print(f"error: {exc}", file=sys.stderr)
        return 2
    print(json.dumps(result, sort_keys=True))
    return 0


if __name__ == "__main__":
    sys.exit(main())
