from pparg.models.classifier import (
    ClassifierConfig,
    ClassifierParams,
    EncoderKind,
    UnsupportedEncoderInput,
    classify,
    encode_pair,
    evaluate_accuracy,
    load_classifier,
    save_classifier,
    train_classifier,
)
from pparg.models.features import (
    CooccurrenceCounts,
    DiagnosticsScore,
    FeatureBuildError,
    FeatureVector,
    MiDomainError,
    build_feature_vector,
    feature_schema,
    mutual_information,
    read_counts_file,
    read_diagnostics_csv,
    write_counts_file,
)
from pparg.models.regressor import (
    ACTIVATION_GRID,
    HIDDEN_GRID,
    LR_GRID,
    LinearModel,
    RegressorConfig,
    RegressorParams,
    SingularSystemError,
    crossval_regression,
    grid_search_regressor,
    predict_linear,
    predict_score,
    train_linear,
    train_regressor,
)

__all__ = [
    "ACTIVATION_GRID",
    "ClassifierConfig",
    "ClassifierParams",
    "CooccurrenceCounts",
    "DiagnosticsScore",
    "EncoderKind",
    "FeatureBuildError",
    "FeatureVector",
    "HIDDEN_GRID",
    "LR_GRID",
    "LinearModel",
    "MiDomainError",
    "RegressorConfig",
    "RegressorParams",
    "SingularSystemError",
    "UnsupportedEncoderInput",
    "build_feature_vector",
    "classify",
    "crossval_regression",
    "encode_pair",
    "evaluate_accuracy",
    "feature_schema",
    "grid_search_regressor",
    "load_classifier",
    "mutual_information",
    "predict_linear",
    "predict_score",
    "read_counts_file",
    "read_diagnostics_csv",
    "save_classifier",
    "train_classifier",
    "train_linear",
    "train_regressor",
    "write_counts_file",
]
