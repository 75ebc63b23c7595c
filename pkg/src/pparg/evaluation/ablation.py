"""Ablation sweeps: one cross-validated evaluation per feature-flag subset."""

from __future__ import annotations

from typing import Callable, Sequence

from pparg.evaluation.crossval import RegressionReport


def ablation_sweep(
    flag_subsets: Sequence[tuple[str, object]],
    evaluate: Callable[[object], RegressionReport],
) -> list[tuple[str, RegressionReport]]:
    """Run ``evaluate`` once per named subset, in the order given.

    The caller's evaluate must hold folds and seeds fixed so rows differ
    only in the feature configuration.
    """
    if not flag_subsets:
        raise ValueError("need at least one subset")
    names = [name for name, _ in flag_subsets]
    if len(set(names)) != len(names):
        raise ValueError("subset names must be unique")
    return [(name, evaluate(config)) for name, config in flag_subsets]


_COLUMNS = ("pearson_r", "r2", "r2_adj")


def render_table(rows: Sequence[tuple[str, RegressionReport]]) -> str:
    """Aligned plain-text table of regression reports."""
    header = ("features",) + _COLUMNS
    body = [
        (name,) + tuple(f"{getattr(rep, c):.4f}" for c in _COLUMNS)
        for name, rep in rows
    ]
    widths = [
        max(len(header[i]), *(len(r[i]) for r in body)) if body else len(header[i])
        for i in range(len(header))
    ]
    lines = [
        "  ".join(h.ljust(w) for h, w in zip(header, widths)).rstrip(),
        "  ".join("-" * w for w in widths),
    ]
    for r in body:
        lines.append("  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip())
    return "\n".join(lines)


def table_to_tsv(rows: Sequence[tuple[str, RegressionReport]]) -> str:
    lines = ["\t".join(("features",) + _COLUMNS)]
    for name, rep in rows:
        lines.append(
            "\t".join([name] + [repr(getattr(rep, c)) for c in _COLUMNS])
        )
    return "\n".join(lines)
