"""Tactile sensing from tendon strain: simulation, features, classification.

The library simulates palpation trials of a tendon-driven finger (texture
glides and stiffness taps), extracts spectral and hold-phase features from
the strain traces, discriminates classes with four classifiers under repeated
stratified cross-validation, and scores per-feature class separability with
rank-sum tests. The `tendonsense` CLI drives the same pipeline over JSONL/CSV
artifacts.
"""

__version__ = "0.1.0"

from .core import (
    STIFFNESS,
    STIFFNESS_LABELS,
    TEXTURE,
    TEXTURE_LABELS,
    ClassLabel,
    Dataset,
    FeatureVector,
    StrainTrace,
    build_dataset,
    label_for,
    split_by_indices,
    task_labels,
    values_for,
)
from .evaluate import (
    CorpusConfig,
    CvReport,
    FoldPlan,
    accuracy,
    confusion,
    cross_validate,
    make_folds,
    run_experiment,
)
from .features import (
    PhaseSegmentation,
    RegressionResult,
    Window,
    dft_magnitudes,
    extract_dataset,
    linear_fit,
    segment_phases,
    stiffness_features,
    texture_features,
    window_trace,
    zero_mean,
)
from .learn import (
    ClassifierSpec,
    KnnModel,
    Standardizer,
    SvmModel,
    TreeModel,
    classifier_spec,
    knn_predict,
    knn_train,
    standardize_apply,
    standardize_fit,
    svm_predict,
    svm_train,
    tree_predict,
    tree_train,
)
from .simulator import (
    SimConfig,
    StiffnessClassSpec,
    TexturePlateSpec,
    generate_corpus,
    height_profile,
    presets,
    simulate_stiffness_trial,
    simulate_texture_trial,
)
from .stats import (
    PValueMatrix,
    SignificanceProfile,
    pvalue_matrix,
    rank_sum_p,
    significance_profile,
)

__all__ = [
    "__version__",
    "STIFFNESS",
    "STIFFNESS_LABELS",
    "TEXTURE",
    "TEXTURE_LABELS",
    "ClassLabel",
    "ClassifierSpec",
    "CorpusConfig",
    "CvReport",
    "Dataset",
    "FeatureVector",
    "FoldPlan",
    "KnnModel",
    "PValueMatrix",
    "PhaseSegmentation",
    "RegressionResult",
    "SignificanceProfile",
    "SimConfig",
    "Standardizer",
    "StiffnessClassSpec",
    "StrainTrace",
    "SvmModel",
    "TexturePlateSpec",
    "TreeModel",
    "Window",
    "accuracy",
    "build_dataset",
    "classifier_spec",
    "confusion",
    "cross_validate",
    "dft_magnitudes",
    "extract_dataset",
    "generate_corpus",
    "height_profile",
    "knn_predict",
    "knn_train",
    "label_for",
    "linear_fit",
    "make_folds",
    "presets",
    "pvalue_matrix",
    "rank_sum_p",
    "run_experiment",
    "segment_phases",
    "significance_profile",
    "simulate_stiffness_trial",
    "simulate_texture_trial",
    "split_by_indices",
    "standardize_apply",
    "standardize_fit",
    "stiffness_features",
    "svm_predict",
    "svm_train",
    "task_labels",
    "texture_features",
    "tree_predict",
    "tree_train",
    "values_for",
    "window_trace",
    "zero_mean",
]
