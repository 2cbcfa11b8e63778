"""Random-projection methods for high-dimensional binary classification.

A library and CLI covering: random projection samplers with
Johnson-Lindenstrauss guarantees, low-dimensional base classifiers
(LDA/QDA/kNN), the random-projection ensemble classifier with
error-estimate projection selection and a data-driven vote threshold,
LDA with sketched precision-matrix estimates, and a reproducible
benchmark harness.
"""

from .base_classifiers import (
    BaseClassifierSpec,
    ClassifierKind,
    FittedClassifier,
    GaussianModelFit,
    GaussianPopulation,
    bayes_lda_classify,
    bayes_lda_classify_many,
    bayes_lda_risk,
    fit_base_classifier,
    fit_gaussian_model,
    knn_loo_predictions,
    lda_discriminant,
    predict_knn,
    predict_knn_many,
    predict_lda,
    predict_lda_many,
    predict_qda,
    predict_qda_many,
    qda_discriminant,
)
from .data import LabeledDataset
from .error_estimation import (
    ErrorEstimate,
    ErrorEstimator,
    default_estimator,
    estimate_error,
    leave_one_out_error,
    training_error,
)
from .errors import (
    ChecksumMismatch,
    ConfigError,
    DegenerateSeparation,
    DimMismatch,
    DuplicatePoints,
    FoldDegenerate,
    InsufficientData,
    InvalidDims,
    InvalidK,
    InvalidSparsity,
    LabelError,
    MissingClass,
    NetworkError,
    NonFinite,
    ParseError,
    RpclassError,
    SingularCovariance,
    SingularSketch,
    UntrainableEnsemble,
)
from .harness import (
    ExperimentConfig,
    ExperimentReport,
    MethodConfig,
    RunResult,
    SweepPoint,
    b1_sweep,
    emit_report,
    emit_sweep,
    load_report_json,
    run_experiment,
    summarize,
)
from .ingest import (
    DatasetFile,
    fetch_epilepsy_dataset,
    load_csv,
    load_epilepsy,
)
from .lda_ensemble import (
    LdaEnsembleModel,
    PrecisionEnsembleEstimate,
    SketchedLdaModel,
    fit_lda_ensemble,
    fit_sketched_lda,
    precision_ensemble,
    precision_ensemble_apply,
    predict_lda_ensemble,
    predict_lda_ensemble_many,
    predict_sketched_lda,
    predict_sketched_lda_many,
)
from .model_io import load_model, save_model
from .projections import (
    DistortionReport,
    Family,
    JlParams,
    Projection,
    check_distortion,
    jl_bound_value,
    jl_dimension_bound,
    project,
    sample_axis_aligned,
    sample_gaussian,
    sample_haar,
    sample_projection,
    sample_sparse,
)
from .rp_ensemble import (
    RpEnsembleConfig,
    RpEnsembleModel,
    predict_rp_ensemble,
    predict_rp_ensemble_many,
    select_alpha,
    test_error,
    train_rp_ensemble,
    vote_fraction,
    vote_fractions,
    with_alpha,
)
from .streams import derive_seed, stream
from .synthetic import SyntheticModel, SyntheticSpec, generate_synthetic

__version__ = "0.1.0"
