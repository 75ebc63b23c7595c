"""Metrics, cross-validation, significance testing, and ablation tables."""

from pparg.evaluation.ablation import ablation_sweep, render_table, table_to_tsv
from pparg.evaluation.crossval import RegressionReport, kfold
from pparg.evaluation.metrics import (
    ClassificationReport,
    DegenerateInputError,
    classification_metrics,
    fisher_average,
    pearson_r,
    r2_scores,
    score_distribution_stats,
)
from pparg.evaluation.significance import (
    SignificanceResult,
    approx_randomization,
    approx_randomization_metric,
)

__all__ = [
    "ClassificationReport",
    "DegenerateInputError",
    "RegressionReport",
    "SignificanceResult",
    "ablation_sweep",
    "approx_randomization",
    "approx_randomization_metric",
    "classification_metrics",
    "fisher_average",
    "kfold",
    "pearson_r",
    "r2_scores",
    "render_table",
    "score_distribution_stats",
    "table_to_tsv",
]
