"""Random-projection ensemble classifier.

Training draws ``b1`` groups of ``b2`` candidate projections, keeps the
candidate with the smallest estimated test error in each group, and fits
the base classifier on each winner's projected training set.  A point is
classified 1 when the fraction of the ``b1`` projected classifiers voting
1 reaches the threshold ``alpha``, which by default is chosen from the
training data rather than fixed at a plain majority.

Each candidate projection draws from the stream keyed by
``(seed, group, candidate)``, so training is reproducible and the groups
can be evaluated in any order or in parallel.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np
from joblib import Parallel, delayed

from .base_classifiers import (
    BaseClassifierSpec,
    ClassifierKind,
    FittedClassifier,
    fit_base_classifier,
)
from .data import LabeledDataset
from .error_estimation import ErrorEstimator, default_estimator, estimate_error
from .errors import (
    DimMismatch,
    FoldDegenerate,
    InsufficientData,
    InvalidDims,
    InvalidK,
    MissingClass,
    SingularCovariance,
    UntrainableEnsemble,
)
from .projections import Family, Projection, project, sample_projection

# Fitting failures that disqualify one candidate projection without
# aborting the group: the candidate keeps the worst possible estimate.
_CANDIDATE_ERRORS = (SingularCovariance, FoldDegenerate, InsufficientData, InvalidK)
_FAILED_ESTIMATE = 1.0


@dataclass(frozen=True)
class RpEnsembleConfig:
    """Hyperparameters of the ensemble.

    ``estimator=None`` selects the default pairing for the base classifier
    and ``alpha=None`` requests the data-driven threshold.
    """

    d: int = 5
    b1: int = 500
    b2: int = 50
    base: BaseClassifierSpec = BaseClassifierSpec(ClassifierKind.LDA)
    estimator: ErrorEstimator | None = None
    family: Family = Family.GAUSSIAN
    alpha: float | None = None
    sparse_s: float | None = None
    seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "family", Family(self.family))
        if self.d < 1:
            raise InvalidDims(f"projected dimension must be positive, got {self.d}")
        if self.b1 < 1 or self.b2 < 1:
            raise ValueError("b1 and b2 must be at least 1")
        if self.alpha is not None and not 0.0 <= self.alpha <= 1.0:
            raise ValueError("a fixed alpha must lie in [0, 1]")


@dataclass(frozen=True)
class RpEnsembleModel:
    """Trained ensemble: one winning projection and fitted base per group."""

    config: RpEnsembleConfig
    projections: tuple[Projection, ...]
    classifiers: tuple[FittedClassifier, ...]
    alpha: float
    selected_estimates: np.ndarray
    candidate_estimates: np.ndarray | None = None

    @property
    def b1(self) -> int:
        return len(self.projections)

    @property
    def ambient_dim(self) -> int:
        return self.projections[0].cols


def _sample_candidate(config: RpEnsembleConfig, p: int, b1: int, b2: int) -> Projection:
    return sample_projection(
        config.family, config.d, p, config.seed, b1, b2, sparse_s=config.sparse_s
    )


def _train_group(
    data: LabeledDataset,
    config: RpEnsembleConfig,
    estimator: ErrorEstimator,
    group: int,
) -> tuple[Projection, FittedClassifier, float, np.ndarray]:
    p = data.dim
    values = np.full(config.b2, _FAILED_ESTIMATE)
    usable = np.zeros(config.b2, dtype=bool)
    for cand in range(config.b2):
        projected = project(_sample_candidate(config, p, group, cand), data)
        try:
            values[cand] = estimate_error(config.base, estimator, projected).value
            usable[cand] = True
        except _CANDIDATE_ERRORS:
            pass
    # Winner: smallest estimate, ties to the smallest candidate index.  The
    # winning projection is re-drawn from its keyed stream and refitted on
    # the full projected data, so only the winner is ever kept in memory.
    for cand in np.lexsort((np.arange(config.b2), values)):
        if not usable[cand]:
            continue
        projection = _sample_candidate(config, p, group, cand)
        try:
            classifier = fit_base_classifier(config.base, project(projection, data))
        except _CANDIDATE_ERRORS:
            continue
        return projection, classifier, float(values[cand]), values
    raise UntrainableEnsemble(f"all {config.b2} candidates failed in group {group}")


def train_rp_ensemble(
    data: LabeledDataset,
    config: RpEnsembleConfig,
    keep_candidates: bool = False,
    n_jobs: int = 1,
) -> RpEnsembleModel:
    """Train the ensemble on a dataset.

    ``keep_candidates`` retains the full (b1, b2) matrix of candidate error
    estimates on the model for inspection.  ``n_jobs`` parallelises the
    group loop; results are reduced in group order, so the model does not
    depend on scheduling.
    """
    if not 1 <= config.d <= data.dim:
        raise InvalidDims(f"need d <= data dimension, got d={config.d}, p={data.dim}")
    n0, n1 = data.class_counts()
    if n0 == 0 or n1 == 0:
        raise MissingClass("training data must contain both classes")
    estimator = config.estimator or default_estimator(config.base)
    groups = range(config.b1)
    if n_jobs == 1:
        results = [_train_group(data, config, estimator, g) for g in groups]
    else:
        results = Parallel(n_jobs=n_jobs)(
            delayed(_train_group)(data, config, estimator, g) for g in groups
        )
    projections = tuple(r[0] for r in results)
    classifiers = tuple(r[1] for r in results)
    selected = np.array([r[2] for r in results])
    candidates = np.vstack([r[3] for r in results]) if keep_candidates else None
    if config.alpha is not None:
        alpha = float(config.alpha)
    else:
        votes = _ensemble_votes(projections, classifiers, data.features)
        alpha = select_alpha(votes, data.labels, config.b1)
    return RpEnsembleModel(
        config=config,
        projections=projections,
        classifiers=classifiers,
        alpha=alpha,
        selected_estimates=selected,
        candidate_estimates=candidates,
    )


def _ensemble_votes(
    projections: tuple[Projection, ...],
    classifiers: tuple[FittedClassifier, ...],
    points: np.ndarray,
) -> np.ndarray:
    counts = np.zeros(points.shape[0], dtype=np.int64)
    for projection, classifier in zip(projections, classifiers):
        counts += classifier.predict_many(projection.apply(points))
    return counts / len(projections)


def vote_fractions(model: RpEnsembleModel, points: np.ndarray) -> np.ndarray:
    """Fraction of the ensemble voting 1 at each of the (m, p) points."""
    points = np.asarray(points, dtype=np.float64)
    if points.ndim != 2 or points.shape[1] != model.ambient_dim:
        raise DimMismatch(f"points must be 2-D with dimension {model.ambient_dim}")
    return _ensemble_votes(model.projections, model.classifiers, points)


def vote_fraction(model: RpEnsembleModel, x: np.ndarray) -> float:
    """Fraction of the ensemble voting 1 at a single point."""
    return float(vote_fractions(model, np.asarray(x, dtype=np.float64)[None, :])[0])


def predict_rp_ensemble_many(model: RpEnsembleModel, points: np.ndarray) -> np.ndarray:
    """Label 1 wherever the vote fraction reaches the threshold."""
    return (vote_fractions(model, points) >= model.alpha).astype(np.int64)


def predict_rp_ensemble(model: RpEnsembleModel, x: np.ndarray) -> int:
    return int(predict_rp_ensemble_many(model, np.asarray(x, dtype=np.float64)[None, :])[0])


def select_alpha(votes: np.ndarray, labels: np.ndarray, b1: int) -> float:
    """Vote threshold minimising the empirical error of 1{vote >= alpha}.

    Candidates are 0, 1, every observed vote fraction, and every observed
    fraction plus half a vote step, so both strict and non-strict optima
    are reachable.  Ties are broken toward the candidate closest to the
    class-1 prior, then toward the smaller threshold.
    """
    votes = np.asarray(votes, dtype=np.float64)
    labels = np.asarray(labels)
    n0 = int(np.sum(labels == 0))
    n1 = int(np.sum(labels == 1))
    if n0 == 0 or n1 == 0:
        raise MissingClass("alpha selection needs votes from both classes")
    candidates = np.unique(
        np.clip(np.concatenate(([0.0, 1.0], votes, votes + 0.5 / b1)), 0.0, 1.0)
    )
    votes0 = np.sort(votes[labels == 0])
    votes1 = np.sort(votes[labels == 1])
    # mistakes(alpha) = #{class 0 with vote >= alpha} + #{class 1 with vote < alpha}
    mistakes = (n0 - np.searchsorted(votes0, candidates, side="left")) + np.searchsorted(
        votes1, candidates, side="left"
    )
    pi_1 = n1 / (n0 + n1)
    best = np.lexsort((candidates, np.abs(candidates - pi_1), mistakes))[0]
    return float(candidates[best])


def test_error(classify, test: LabeledDataset) -> float:
    """Empirical misclassification rate of ``classify`` on a test set.

    ``classify`` maps an (m, p) feature array to m labels.
    """
    predictions = np.asarray(classify(test.features))
    if predictions.shape != test.labels.shape:
        raise ValueError("classifier returned the wrong number of labels")
    return float(np.mean(predictions != test.labels))


def with_alpha(model: RpEnsembleModel, alpha: float) -> RpEnsembleModel:
    """Copy of the model with a different vote threshold."""
    if not 0.0 <= alpha <= 1.0:
        raise ValueError("alpha must lie in [0, 1]")
    return replace(model, alpha=float(alpha))
