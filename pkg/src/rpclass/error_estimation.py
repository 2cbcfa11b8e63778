"""Test-error estimators for base classifiers on (projected) training data."""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .base_classifiers import (
    BaseClassifierSpec,
    ClassifierKind,
    fit_base_classifier,
    knn_loo_predictions,
)
from .data import LabeledDataset
from .errors import FoldDegenerate, InsufficientData


class ErrorEstimator(str, Enum):
    TRAINING = "training"
    LEAVE_ONE_OUT = "leave_one_out"


@dataclass(frozen=True)
class ErrorEstimate:
    """An empirical misclassification fraction: value * n_evaluated mistakes."""

    value: float
    estimator: ErrorEstimator
    n_evaluated: int


def default_estimator(spec: BaseClassifierSpec) -> ErrorEstimator:
    """Training error for LDA/QDA, leave-one-out for kNN.

    The training error of a nearest-neighbour rule is zero by
    memorisation, so kNN needs the held-out variant; for LDA/QDA the
    training error is informative and avoids n refits.
    """
    if spec.kind is ClassifierKind.KNN:
        return ErrorEstimator.LEAVE_ONE_OUT
    return ErrorEstimator.TRAINING


def training_error(spec: BaseClassifierSpec, data: LabeledDataset) -> ErrorEstimate:
    """Fit once on the data and count mistakes on the same data."""
    classifier = fit_base_classifier(spec, data)
    predictions = classifier.predict_many(data.features)
    value = float(np.mean(predictions != data.labels))
    return ErrorEstimate(value, ErrorEstimator.TRAINING, data.n)


def leave_one_out_error(spec: BaseClassifierSpec, data: LabeledDataset) -> ErrorEstimate:
    """Refit without each observation in turn and count held-out mistakes.

    For kNN no refit is needed: excluding the held-out point from the
    neighbour search is exact.  For LDA/QDA each fold is refitted, and the
    estimate is refused when removing a point would empty a class.
    """
    if data.n < 2:
        raise InsufficientData("leave-one-out needs at least 2 observations")
    if spec.kind is ClassifierKind.KNN:
        predictions = knn_loo_predictions(data, spec.knn_k)
        value = float(np.mean(predictions != data.labels))
        return ErrorEstimate(value, ErrorEstimator.LEAVE_ONE_OUT, data.n)
    n0, n1 = data.class_counts()
    if min(n0, n1) < 2:
        raise FoldDegenerate("removing an observation would leave a class empty")
    mistakes = 0
    keep = np.ones(data.n, dtype=bool)
    for i in range(data.n):
        keep[i] = False
        classifier = fit_base_classifier(spec, data.subset(keep))
        mistakes += classifier.predict(data.features[i]) != data.labels[i]
        keep[i] = True
    return ErrorEstimate(mistakes / data.n, ErrorEstimator.LEAVE_ONE_OUT, data.n)


def estimate_error(
    spec: BaseClassifierSpec, estimator: ErrorEstimator, data: LabeledDataset
) -> ErrorEstimate:
    """Dispatch to the requested estimator."""
    if ErrorEstimator(estimator) is ErrorEstimator.TRAINING:
        return training_error(spec, data)
    return leave_one_out_error(spec, data)
