"""Low-dimensional base classifiers and the Gaussian-model optimum.

LDA and QDA plug-in rules fitted by moment estimates, a deterministic
k-nearest-neighbour rule, and the population (known-parameter) linear
rule together with its closed-form risk.

Decision convention everywhere: a point sits in class 1 exactly when the
discriminant is >= 0, so boundary points go to class 1.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np
from scipy.stats import norm

from .data import LabeledDataset
from .errors import (
    DegenerateSeparation,
    InsufficientData,
    InvalidK,
    MissingClass,
    SingularCovariance,
)

# Reciprocal-condition-number threshold below which a covariance solve is
# refused instead of silently falling back to a pseudo-inverse.
RCOND_THRESHOLD = 1e-12


class ClassifierKind(str, Enum):
    LDA = "lda"
    QDA = "qda"
    KNN = "knn"


@dataclass(frozen=True)
class BaseClassifierSpec:
    """Which base classifier to use, plus its hyperparameters."""

    kind: ClassifierKind
    knn_k: int = 5

    def __post_init__(self):
        object.__setattr__(self, "kind", ClassifierKind(self.kind))
        if self.kind is ClassifierKind.KNN and self.knn_k < 1:
            raise InvalidK(f"k must be at least 1, got {self.knn_k}")


@dataclass(frozen=True)
class GaussianModelFit:
    """Moment estimates of the two-class Gaussian model.

    ``sigma_hat`` is the pooled covariance (LDA); ``sigma_hat_0/1`` are the
    per-class covariances (QDA).  Only the variant that was requested at
    fit time is populated.
    """

    pi_hat_0: float
    pi_hat_1: float
    mu_hat_0: np.ndarray
    mu_hat_1: np.ndarray
    sigma_hat: np.ndarray | None = None
    sigma_hat_0: np.ndarray | None = None
    sigma_hat_1: np.ndarray | None = None


@dataclass(frozen=True)
class GaussianPopulation:
    """Known parameters of the common-covariance two-class Gaussian model."""

    pi_0: float
    pi_1: float
    mu_0: np.ndarray
    mu_1: np.ndarray
    sigma: np.ndarray

    def __post_init__(self):
        if not 0.0 < self.pi_0 < 1.0 or abs(self.pi_0 + self.pi_1 - 1.0) > 1e-12:
            raise ValueError("priors must be strictly positive and sum to one")
        mu_0 = np.asarray(self.mu_0, dtype=np.float64)
        mu_1 = np.asarray(self.mu_1, dtype=np.float64)
        sigma = np.asarray(self.sigma, dtype=np.float64)
        if sigma.shape != (mu_0.size, mu_0.size) or mu_0.shape != mu_1.shape:
            raise ValueError("incompatible mean / covariance shapes")
        # fails with SingularCovariance unless sigma is (numerically) SPD
        _spd_eig(sigma, "population covariance")
        object.__setattr__(self, "mu_0", mu_0)
        object.__setattr__(self, "mu_1", mu_1)
        object.__setattr__(self, "sigma", sigma)

    @property
    def delta(self) -> float:
        """Mahalanobis distance between the class means."""
        diff = self.mu_1 - self.mu_0
        return float(np.sqrt(diff @ _spd_solve(self.sigma, diff, "population covariance")))


def _spd_eig(matrix: np.ndarray, what: str) -> tuple[np.ndarray, np.ndarray]:
    """Eigendecomposition of a symmetric PSD matrix, refusing ill-conditioned ones."""
    sym = (matrix + matrix.T) / 2.0
    vals, vecs = np.linalg.eigh(sym)
    top = vals[-1]
    if top <= 0.0 or vals[0] / top < RCOND_THRESHOLD:
        raise SingularCovariance(f"{what} is numerically singular")
    return vals, vecs


def _spd_solve(matrix: np.ndarray, rhs: np.ndarray, what: str) -> np.ndarray:
    vals, vecs = _spd_eig(matrix, what)
    return vecs @ ((vecs.T @ rhs) / vals)


def fit_gaussian_model(data: LabeledDataset, pooled: bool = True) -> GaussianModelFit:
    """Estimate priors, class means and covariance(s) from a dataset.

    The pooled covariance divides by n - 2 (two estimated means); the
    per-class covariances divide by n_r - 1.
    """
    n0, n1 = data.class_counts()
    if n0 == 0 or n1 == 0:
        raise MissingClass("both classes must be present to fit the Gaussian model")
    n = data.n
    x0 = data.features[data.labels == 0]
    x1 = data.features[data.labels == 1]
    mu0 = x0.mean(axis=0)
    mu1 = x1.mean(axis=0)
    c0 = x0 - mu0
    c1 = x1 - mu1
    if pooled:
        if n < 3:
            raise InsufficientData("pooled covariance needs at least 3 observations")
        pooled_sigma = (c0.T @ c0 + c1.T @ c1) / (n - 2)
        pooled_sigma = (pooled_sigma + pooled_sigma.T) / 2.0
        return GaussianModelFit(n0 / n, n1 / n, mu0, mu1, sigma_hat=pooled_sigma)
    if n0 < 2 or n1 < 2:
        raise InsufficientData("per-class covariances need at least 2 observations per class")
    s0 = c0.T @ c0 / (n0 - 1)
    s1 = c1.T @ c1 / (n1 - 1)
    return GaussianModelFit(
        n0 / n,
        n1 / n,
        mu0,
        mu1,
        sigma_hat_0=(s0 + s0.T) / 2.0,
        sigma_hat_1=(s1 + s1.T) / 2.0,
    )


def _linear_discriminant(
    pi_0: float,
    pi_1: float,
    mu_0: np.ndarray,
    mu_1: np.ndarray,
    sigma: np.ndarray,
    points: np.ndarray,
    what: str,
) -> np.ndarray:
    direction = _spd_solve(sigma, mu_1 - mu_0, what)
    midpoint = (mu_0 + mu_1) / 2.0
    return np.log(pi_1 / pi_0) + (points - midpoint) @ direction


def _as_points(x: np.ndarray, dim: int) -> np.ndarray:
    points = np.asarray(x, dtype=np.float64)
    squeeze = points.ndim == 1
    if squeeze:
        points = points[None, :]
    if points.ndim != 2 or points.shape[1] != dim:
        raise ValueError(f"points must have dimension {dim}")
    return points


def lda_discriminant(fit: GaussianModelFit, points: np.ndarray) -> np.ndarray:
    if fit.sigma_hat is None:
        raise ValueError("fit has no pooled covariance; refit with pooled=True")
    points = _as_points(points, fit.mu_hat_0.size)
    return _linear_discriminant(
        fit.pi_hat_0, fit.pi_hat_1, fit.mu_hat_0, fit.mu_hat_1, fit.sigma_hat,
        points, "pooled covariance",
    )


def predict_lda_many(fit: GaussianModelFit, points: np.ndarray) -> np.ndarray:
    """Plug-in linear rule for an (m, d) array of points."""
    return (lda_discriminant(fit, points) >= 0.0).astype(np.int64)


def predict_lda(fit: GaussianModelFit, x: np.ndarray) -> int:
    return int(predict_lda_many(fit, np.asarray(x, dtype=np.float64)[None, :])[0])


def qda_discriminant(fit: GaussianModelFit, points: np.ndarray) -> np.ndarray:
    if fit.sigma_hat_0 is None or fit.sigma_hat_1 is None:
        raise ValueError("fit has no per-class covariances; refit with pooled=False")
    points = _as_points(points, fit.mu_hat_0.size)
    vals0, vecs0 = _spd_eig(fit.sigma_hat_0, "class-0 covariance")
    vals1, vecs1 = _spd_eig(fit.sigma_hat_1, "class-1 covariance")
    z0 = (points - fit.mu_hat_0) @ vecs0
    z1 = (points - fit.mu_hat_1) @ vecs1
    maha0 = (z0 * z0 / vals0).sum(axis=1)
    maha1 = (z1 * z1 / vals1).sum(axis=1)
    logdet_term = 0.5 * (np.log(vals1).sum() - np.log(vals0).sum())
    return np.log(fit.pi_hat_1 / fit.pi_hat_0) - logdet_term - 0.5 * (maha1 - maha0)


def predict_qda_many(fit: GaussianModelFit, points: np.ndarray) -> np.ndarray:
    """Quadratic rule with per-class covariances and log-determinant terms."""
    return (qda_discriminant(fit, points) >= 0.0).astype(np.int64)


def predict_qda(fit: GaussianModelFit, x: np.ndarray) -> int:
    return int(predict_qda_many(fit, np.asarray(x, dtype=np.float64)[None, :])[0])


def _sq_distances(queries: np.ndarray, points: np.ndarray) -> np.ndarray:
    qq = np.einsum("ij,ij->i", queries, queries)[:, None]
    pp = np.einsum("ij,ij->i", points, points)[None, :]
    d = qq + pp - 2.0 * (queries @ points.T)
    np.maximum(d, 0.0, out=d)
    return d


def _knn_vote(
    distances: np.ndarray,
    labels: np.ndarray,
    k: int,
    tie_n0: np.ndarray,
    tie_n1: np.ndarray,
) -> np.ndarray:
    """Majority vote over the k nearest columns of each distance row.

    Distance ties at the k-th position are resolved toward the lower
    training index; vote ties go to the class with the larger count in
    ``tie_n0/tie_n1``, then to class 0.
    """
    m, n = distances.shape
    if k == n:
        ones = np.full(m, int(labels.sum()))
    else:
        nearest = np.argpartition(distances, k - 1, axis=1)[:, :k]
        kth = np.take_along_axis(distances, nearest, axis=1).max(axis=1)
        next_val = np.partition(distances, k, axis=1)[:, k]
        ones = labels[nearest].sum(axis=1)
        for row in np.nonzero(kth == next_val)[0]:
            order = np.argsort(distances[row], kind="stable")[:k]
            ones[row] = labels[order].sum()
    zeros = k - ones
    tie_label = (tie_n1 > tie_n0).astype(np.int64)
    return np.where(ones > zeros, 1, np.where(ones < zeros, 0, tie_label))


def predict_knn_many(train: LabeledDataset, k: int, points: np.ndarray) -> np.ndarray:
    """k-nearest-neighbour labels for an (m, d) array of query points."""
    if not 1 <= k <= train.n:
        raise InvalidK(f"k must lie in [1, {train.n}], got {k}")
    points = _as_points(points, train.dim)
    distances = _sq_distances(points, train.features)
    n0, n1 = train.class_counts()
    m = points.shape[0]
    return _knn_vote(distances, train.labels, k, np.full(m, n0), np.full(m, n1))


def predict_knn(train: LabeledDataset, k: int, x: np.ndarray) -> int:
    return int(predict_knn_many(train, k, np.asarray(x, dtype=np.float64)[None, :])[0])


def knn_loo_predictions(train: LabeledDataset, k: int) -> np.ndarray:
    """Label for each training point from its k nearest other points.

    Equivalent to refitting on the dataset minus each point in turn: the
    point itself is excluded from the neighbour search and from the
    tie-break class counts.
    """
    if train.n < 2:
        raise InsufficientData("leave-one-out needs at least 2 observations")
    if not 1 <= k <= train.n - 1:
        raise InvalidK(f"k must lie in [1, {train.n - 1}] for leave-one-out, got {k}")
    distances = _sq_distances(train.features, train.features)
    np.fill_diagonal(distances, np.inf)
    n0, n1 = train.class_counts()
    tie_n0 = n0 - (train.labels == 0)
    tie_n1 = n1 - train.labels
    return _knn_vote(distances, train.labels, k, tie_n0, tie_n1)


def bayes_lda_classify(pop: GaussianPopulation, x: np.ndarray) -> int:
    """Optimal rule when the Gaussian-model parameters are known."""
    return int(bayes_lda_classify_many(pop, np.asarray(x, dtype=np.float64)[None, :])[0])


def bayes_lda_classify_many(pop: GaussianPopulation, points: np.ndarray) -> np.ndarray:
    points = _as_points(points, pop.mu_0.size)
    disc = _linear_discriminant(
        pop.pi_0, pop.pi_1, pop.mu_0, pop.mu_1, pop.sigma, points, "population covariance"
    )
    return (disc >= 0.0).astype(np.int64)


def bayes_lda_risk(pop: GaussianPopulation) -> float:
    """Closed-form misclassification probability of the optimal linear rule.

    With priors pi_0, pi_1 and Mahalanobis separation D between the means:
    pi_0 * Phi(log(pi_1/pi_0)/D - D/2) + pi_1 * Phi(log(pi_0/pi_1)/D - D/2).
    """
    delta = pop.delta
    if delta == 0.0:
        raise DegenerateSeparation("class means coincide (zero separation)")
    log_ratio = np.log(pop.pi_1 / pop.pi_0)
    return float(
        pop.pi_0 * norm.cdf(log_ratio / delta - delta / 2.0)
        + pop.pi_1 * norm.cdf(-log_ratio / delta - delta / 2.0)
    )


@dataclass(frozen=True)
class FittedClassifier:
    """A base classifier fitted on one (possibly projected) training set.

    LDA/QDA keep their moment estimates; kNN keeps the training set itself.
    Instances are immutable, so they can be shared freely across threads.
    """

    spec: BaseClassifierSpec
    fit: GaussianModelFit | None = None
    train: LabeledDataset | None = None

    def predict_many(self, points: np.ndarray) -> np.ndarray:
        if self.spec.kind is ClassifierKind.LDA:
            return predict_lda_many(self.fit, points)
        if self.spec.kind is ClassifierKind.QDA:
            return predict_qda_many(self.fit, points)
        return predict_knn_many(self.train, self.spec.knn_k, points)

    def predict(self, x: np.ndarray) -> int:
        return int(self.predict_many(np.asarray(x, dtype=np.float64)[None, :])[0])


def fit_base_classifier(spec: BaseClassifierSpec, data: LabeledDataset) -> FittedClassifier:
    """Fit the requested base classifier on a dataset."""
    if spec.kind is ClassifierKind.LDA:
        return FittedClassifier(spec, fit=fit_gaussian_model(data, pooled=True))
    if spec.kind is ClassifierKind.QDA:
        return FittedClassifier(spec, fit=fit_gaussian_model(data, pooled=False))
    if spec.knn_k > data.n:
        raise InvalidK(f"k={spec.knn_k} exceeds the {data.n} training points")
    return FittedClassifier(spec, train=data)
