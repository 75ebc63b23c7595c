"""Feature construction for the gradient regression task.

A feature vector concatenates, in fixed schema order: PCA projections of the
verb, preposition, and head-noun embeddings, a smoothed pointwise mutual
information score, a direct-object indicator, a combined diagnostics score,
and optional elementwise interactions between the verb and preposition
projections.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Mapping, Optional

import numpy as np

from pparg.corpus import GradientExample
from pparg.embed import EmbeddingTable, OovPolicy, PcaModel, lookup, pca_project


class MiDomainError(ValueError):
    """PMI undefined for the given counts and smoothing."""


class FeatureBuildError(ValueError):
    """A requested feature component cannot be resolved for an item."""


@dataclass(frozen=True)
class CooccurrenceCounts:
    """Verb/preposition co-occurrence table with add-alpha smoothing defaults.

    Marginals may come from explicit wildcard rows and need not equal the
    joint sums (they can be drawn from a larger corpus).
    """

    n_total: int
    joint: Mapping[tuple[str, str], int]
    verb_counts: Mapping[str, int]
    prep_counts: Mapping[str, int]
    alpha: float = 1.0

    def __post_init__(self) -> None:
        if self.n_total < 0:
            raise ValueError("n_total must be >= 0")
        if self.alpha < 0:
            raise ValueError("alpha must be >= 0")
        for table in (self.joint, self.verb_counts, self.prep_counts):
            for key, count in table.items():
                if count < 0:
                    raise ValueError(f"negative count for {key!r}")

    @property
    def verb_types(self) -> int:
        return len(self.verb_counts)

    @property
    def prep_types(self) -> int:
        return len(self.prep_counts)

    @classmethod
    def from_observations(
        cls, observations: Iterable[tuple[str, str]], alpha: float = 1.0
    ) -> "CooccurrenceCounts":
        """Build joint and marginal counts from (verb, prep) occurrences."""
        joint: dict[tuple[str, str], int] = {}
        verbs: dict[str, int] = {}
        preps: dict[str, int] = {}
        n = 0
        for verb, prep in observations:
            joint[(verb, prep)] = joint.get((verb, prep), 0) + 1
            verbs[verb] = verbs.get(verb, 0) + 1
            preps[prep] = preps.get(prep, 0) + 1
            n += 1
        return cls(n_total=n, joint=joint, verb_counts=verbs, prep_counts=preps, alpha=alpha)


def mutual_information(
    counts: CooccurrenceCounts, verb: str, prep: str, alpha: Optional[float] = None
) -> float:
    """Smoothed PMI of a verb/preposition pair.

    ln[(c(v,p)+a)(N+a*V*P) / ((c(v)+a*P)(c(p)+a*V))] with a defaulting to
    the table's alpha.  V and P are the marginal type counts.
    """
    a = counts.alpha if alpha is None else alpha
    if a < 0:
        raise ValueError("alpha must be >= 0")
    if counts.n_total == 0:
        raise MiDomainError("empty counts table (N=0)")
    cvp = counts.joint.get((verb, prep), 0)
    cv = counts.verb_counts.get(verb, 0)
    cp = counts.prep_counts.get(prep, 0)
    if a == 0 and (cvp == 0 or cv == 0 or cp == 0):
        raise MiDomainError(
            f"zero count for ({verb!r}, {prep!r}) with alpha=0; use alpha > 0"
        )
    v_types = counts.verb_types
    p_types = counts.prep_types
    num = (cvp + a) * (counts.n_total + a * v_types * p_types)
    den = (cv + a * p_types) * (cp + a * v_types)
    return math.log(num / den)


_HEADER_PREFIX = "#N="


def write_counts_file(path: str | Path, counts: CooccurrenceCounts) -> None:
    """TSV with a `#N=<int> alpha=<float>` header, joint rows, then `_` marginal rows."""
    lines = [f"{_HEADER_PREFIX}{counts.n_total} alpha={counts.alpha!r}"]
    for (verb, prep), c in sorted(counts.joint.items()):
        lines.append(f"{verb}\t{prep}\t{c}")
    for verb, c in sorted(counts.verb_counts.items()):
        lines.append(f"{verb}\t_\t{c}")
    for prep, c in sorted(counts.prep_counts.items()):
        lines.append(f"_\t{prep}\t{c}")
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def read_counts_file(path: str | Path) -> CooccurrenceCounts:
    text = Path(path).read_text(encoding="utf-8")
    lines = text.splitlines()
    if not lines or not lines[0].startswith(_HEADER_PREFIX):
        raise ValueError(f"{path}: first line must start with {_HEADER_PREFIX!r}")
    header = lines[0][1:].split()
    fields = dict(part.split("=", 1) for part in header if "=" in part)
    try:
        n_total = int(fields["N"])
        alpha = float(fields["alpha"])
    except (KeyError, ValueError) as exc:
        raise ValueError(f"{path}: bad header {lines[0]!r}") from exc
    joint: dict[tuple[str, str], int] = {}
    verb_override: dict[str, int] = {}
    prep_override: dict[str, int] = {}
    for lineno, line in enumerate(lines[1:], start=2):
        if not line.strip() or line.startswith("#"):
            continue
        parts = line.split("\t")
        if len(parts) != 3:
            raise ValueError(f"{path}:{lineno}: expected 3 tab-separated fields")
        verb, prep, raw = parts
        try:
            count = int(raw)
        except ValueError as exc:
            raise ValueError(f"{path}:{lineno}: bad count {raw!r}") from exc
        if verb == "_" and prep == "_":
            raise ValueError(f"{path}:{lineno}: double wildcard row")
        if prep == "_":
            target, key = verb_override, verb
        elif verb == "_":
            target, key = prep_override, prep
        else:
            if (verb, prep) in joint:
                raise ValueError(f"{path}:{lineno}: duplicate joint row {verb}/{prep}")
            joint[(verb, prep)] = count
            continue
        if key in target:
            raise ValueError(f"{path}:{lineno}: duplicate marginal row for {key!r}")
        target[key] = count
    # Marginals default to joint sums; explicit wildcard rows override.
    verbs: dict[str, int] = {}
    preps: dict[str, int] = {}
    for (verb, prep), c in joint.items():
        verbs[verb] = verbs.get(verb, 0) + c
        preps[prep] = preps.get(prep, 0) + c
    verbs.update(verb_override)
    preps.update(prep_override)
    return CooccurrenceCounts(
        n_total=n_total, joint=joint, verb_counts=verbs, prep_counts=preps, alpha=alpha
    )


@dataclass(frozen=True)
class DiagnosticsScore:
    """Weighted combination of two gradable diagnostic test results."""

    omissibility: float
    pseudo_cleft: float
    weights: tuple[float, float] = (0.5, 0.5)

    def __post_init__(self) -> None:
        for name in ("omissibility", "pseudo_cleft"):
            v = getattr(self, name)
            if not 0.0 <= v <= 1.0:
                raise ValueError(f"{name} must be in [0, 1], got {v}")
        w1, w2 = self.weights
        if w1 < 0 or w2 < 0 or abs(w1 + w2 - 1.0) > 1e-9:
            raise ValueError(f"weights must be non-negative and sum to 1, got {self.weights}")

    @property
    def combined(self) -> float:
        w1, w2 = self.weights
        return w1 * self.omissibility + w2 * self.pseudo_cleft


def read_diagnostics_csv(
    path: str | Path, weights: tuple[float, float] = (0.5, 0.5)
) -> dict[str, DiagnosticsScore]:
    """CSV of item_id,omissibility,pseudo_cleft; an optional header row is skipped."""
    out: dict[str, DiagnosticsScore] = {}
    with open(path, newline="", encoding="utf-8") as fh:
        rows = list(csv.reader(fh))
    if not rows:
        raise ValueError(f"{path}: empty diagnostics file")
    start = 0
    try:
        float(rows[0][1])
    except (IndexError, ValueError):
        start = 1
    for lineno, row in enumerate(rows[start:], start=start + 1):
        if len(row) != 3:
            raise ValueError(f"{path}:{lineno}: expected 3 fields, got {len(row)}")
        item, raw_om, raw_pc = row
        if item in out:
            raise ValueError(f"{path}:{lineno}: duplicate item {item!r}")
        try:
            score = DiagnosticsScore(float(raw_om), float(raw_pc), weights)
        except ValueError as exc:
            raise ValueError(f"{path}:{lineno}: {exc}") from exc
        out[item] = score
    if not out:
        raise ValueError(f"{path}: no diagnostics rows")
    return out


@dataclass(frozen=True)
class FeatureVector:
    values: np.ndarray
    schema: tuple[str, ...]

    def __post_init__(self) -> None:
        object.__setattr__(
            self, "values", np.asarray(self.values, dtype=np.float64).reshape(-1)
        )
        if self.values.shape[0] != len(self.schema):
            raise ValueError(
                f"{self.values.shape[0]} values for a {len(self.schema)}-name schema"
            )
        if not np.all(np.isfinite(self.values)):
            raise ValueError("feature values must be finite")


def feature_schema(config) -> tuple[str, ...]:
    """Per-dimension feature names in concatenation order for a flag setting."""
    if config.use_interactions and not config.use_embeddings:
        raise ValueError("interaction features require embeddings")
    names: list[str] = []
    k = config.pca_k
    if config.use_embeddings:
        for group in ("verb-pca", "prep-pca", "head-pca"):
            names.extend(f"{group}:{i}" for i in range(k))
    if config.use_mi:
        names.append("mi")
    if config.use_dobj:
        names.append("dobj")
    if config.use_diag:
        names.append("diag")
    if config.use_interactions:
        names.extend(f"prod:{i}" for i in range(k))
        names.extend(f"diff:{i}" for i in range(k))
    return tuple(names)


def build_feature_vector(
    example: GradientExample,
    config,
    table: Optional[EmbeddingTable] = None,
    pca: Optional[PcaModel] = None,
    counts: Optional[CooccurrenceCounts] = None,
    diag: Optional[DiagnosticsScore] = None,
    oov_policy: OovPolicy = OovPolicy.ERROR,
) -> FeatureVector:
    """Assemble one item's features in schema order.  Pure: no state is touched."""
    item = f"{example.verb}/{example.prep}"
    schema = feature_schema(config)
    blocks: list[np.ndarray] = []
    verb_proj = prep_proj = None
    if config.use_embeddings:
        if table is None or pca is None:
            raise FeatureBuildError(f"{item}: embedding features need a table and PCA model")
        if example.head_noun is None:
            raise FeatureBuildError(f"{item}: head-noun features enabled but no head noun")
        verb_proj = pca_project(pca, lookup(table, example.verb, oov_policy))
        prep_proj = pca_project(pca, lookup(table, example.prep, oov_policy))
        head_proj = pca_project(pca, lookup(table, example.head_noun, oov_policy))
        blocks.extend([verb_proj, prep_proj, head_proj])
    if config.use_mi:
        if counts is None:
            raise FeatureBuildError(f"{item}: MI feature enabled but no counts table")
        blocks.append(np.array([mutual_information(counts, example.verb, example.prep)]))
    if config.use_dobj:
        blocks.append(np.array([1.0 if example.has_direct_object else 0.0]))
    if config.use_diag:
        if diag is None:
            raise FeatureBuildError(f"{item}: diagnostics enabled but no score row")
        blocks.append(np.array([diag.combined]))
    if config.use_interactions:
        blocks.append(verb_proj * prep_proj)
        blocks.append(verb_proj - prep_proj)
    return FeatureVector(np.concatenate(blocks) if blocks else np.empty(0), schema)
