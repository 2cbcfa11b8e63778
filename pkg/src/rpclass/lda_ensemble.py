"""Linear discriminant rules built from projected covariance sketches.

Instead of inverting a p x p sample covariance (impossible when p exceeds
the sample size), these classifiers invert d x d projected covariances
A @ Sigma @ A.T and lift the result back: a B-member average
(1/B) * sum_b A_b.T (A_b Sigma A_b.T)^-1 A_b estimates the precision
matrix, and the single-projection (B = 1) variant is the sketched LDA
classifier.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .base_classifiers import (
    GaussianModelFit,
    RCOND_THRESHOLD,
    fit_gaussian_model,
)
from .data import LabeledDataset
from .errors import DimMismatch, InvalidDims, SingularSketch
from .projections import Family, Projection, sample_projection

# Above this ambient dimension the p x p precision estimate is not
# materialised; the discriminant direction is accumulated per projection.
MATERIALIZE_LIMIT = 2000


@dataclass(frozen=True)
class PrecisionEnsembleEstimate:
    """Averaged lifted-inverse estimate of a precision matrix."""

    matrix: np.ndarray
    n_projections: int
    d: int
    family: Family
    seed: int


@dataclass(frozen=True)
class SketchedLdaModel:
    """Ambient Gaussian fit, the single projection, and the derived direction."""

    fit: GaussianModelFit
    projection: Projection
    direction: np.ndarray

    @property
    def ambient_dim(self) -> int:
        return self.projection.cols


def _sketch_inverse_apply(
    projection: Projection, sigma: np.ndarray, rhs: np.ndarray, index: int
) -> np.ndarray:
    """Compute A.T (A Sigma A.T)^-1 A @ rhs, refusing singular sketches."""
    a = projection.matrix
    small = a @ sigma @ a.T
    small = (small + small.T) / 2.0
    vals, vecs = np.linalg.eigh(small)
    if vals[-1] <= 0.0 or vals[0] / vals[-1] < RCOND_THRESHOLD:
        raise SingularSketch(f"projected covariance is singular for projection {index}")
    return a.T @ (vecs @ ((vecs.T @ (a @ rhs)) / (vals if rhs.ndim == 1 else vals[:, None])))


def precision_ensemble(
    sigma_hat: np.ndarray,
    d: int,
    b: int,
    family: Family = Family.GAUSSIAN,
    seed: int = 0,
    sparse_s: float | None = None,
) -> PrecisionEnsembleEstimate:
    """Average of B lifted projected-covariance inverses.

    Deterministic given the seed: projection ``i`` draws from the stream
    keyed by ``(seed, i)`` and the sum runs in index order.
    """
    sigma_hat = np.asarray(sigma_hat, dtype=np.float64)
    p = sigma_hat.shape[0]
    if sigma_hat.shape != (p, p):
        raise ValueError("covariance must be square")
    if not 1 <= d <= p:
        raise InvalidDims(f"need 1 <= d <= p, got d={d}, p={p}")
    if b < 1:
        raise ValueError("need at least one projection")
    family = Family(family)
    accumulated = np.zeros((p, p))
    eye = np.eye(p)
    for i in range(b):
        projection = sample_projection(family, d, p, seed, i, sparse_s=sparse_s)
        accumulated += _sketch_inverse_apply(projection, sigma_hat, eye, i)
    matrix = accumulated / b
    matrix = (matrix + matrix.T) / 2.0
    return PrecisionEnsembleEstimate(matrix, b, d, family, seed)


def precision_ensemble_apply(
    sigma_hat: np.ndarray,
    d: int,
    b: int,
    rhs: np.ndarray,
    family: Family = Family.GAUSSIAN,
    seed: int = 0,
    sparse_s: float | None = None,
) -> np.ndarray:
    """The precision-ensemble estimate applied to a vector, without
    materialising the p x p matrix.  Uses the same keyed streams as
    ``precision_ensemble``, so both routes agree up to rounding."""
    sigma_hat = np.asarray(sigma_hat, dtype=np.float64)
    rhs = np.asarray(rhs, dtype=np.float64)
    p = sigma_hat.shape[0]
    if not 1 <= d <= p:
        raise InvalidDims(f"need 1 <= d <= p, got d={d}, p={p}")
    family = Family(family)
    accumulated = np.zeros_like(rhs)
    for i in range(b):
        projection = sample_projection(family, d, p, seed, i, sparse_s=sparse_s)
        accumulated += _sketch_inverse_apply(projection, sigma_hat, rhs, i)
    return accumulated / b


def _linear_labels(fit: GaussianModelFit, direction: np.ndarray, points: np.ndarray) -> np.ndarray:
    points = np.asarray(points, dtype=np.float64)
    if points.ndim == 1:
        points = points[None, :]
    if points.shape[1] != fit.mu_hat_0.size:
        raise DimMismatch(f"points must have dimension {fit.mu_hat_0.size}")
    midpoint = (fit.mu_hat_0 + fit.mu_hat_1) / 2.0
    disc = np.log(fit.pi_hat_1 / fit.pi_hat_0) + (points - midpoint) @ direction
    return (disc >= 0.0).astype(np.int64)


def predict_lda_ensemble_many(
    fit: GaussianModelFit, prec: PrecisionEnsembleEstimate, points: np.ndarray
) -> np.ndarray:
    """Linear rule using the ensemble precision estimate in place of Sigma^-1."""
    direction = prec.matrix @ (fit.mu_hat_1 - fit.mu_hat_0)
    return _linear_labels(fit, direction, points)


def predict_lda_ensemble(
    fit: GaussianModelFit, prec: PrecisionEnsembleEstimate, x: np.ndarray
) -> int:
    return int(predict_lda_ensemble_many(fit, prec, np.asarray(x, dtype=np.float64)[None, :])[0])


@dataclass(frozen=True)
class LdaEnsembleModel:
    """Fitted B-projection LDA: ambient moments plus the averaged direction."""

    fit: GaussianModelFit
    direction: np.ndarray
    d: int
    b: int
    family: Family
    seed: int
    precision: PrecisionEnsembleEstimate | None = None

    def predict_many(self, points: np.ndarray) -> np.ndarray:
        return _linear_labels(self.fit, self.direction, points)


def fit_lda_ensemble(
    data: LabeledDataset,
    d: int,
    b: int,
    family: Family = Family.GAUSSIAN,
    seed: int = 0,
) -> LdaEnsembleModel:
    """Fit the Gaussian model and the B-projection precision estimate.

    For moderate p the p x p estimate is materialised and kept on the
    model; for larger p only the discriminant direction is accumulated.
    """
    fit = fit_gaussian_model(data, pooled=True)
    diff = fit.mu_hat_1 - fit.mu_hat_0
    if data.dim <= MATERIALIZE_LIMIT:
        prec = precision_ensemble(fit.sigma_hat, d, b, family, seed)
        direction = prec.matrix @ diff
    else:
        prec = None
        direction = precision_ensemble_apply(fit.sigma_hat, d, b, diff, family, seed)
    return LdaEnsembleModel(fit, direction, d, b, Family(family), seed, prec)


def fit_sketched_lda(
    data: LabeledDataset,
    d: int,
    family: Family = Family.GAUSSIAN,
    seed: int = 0,
    sparse_s: float | None = None,
) -> SketchedLdaModel:
    """LDA after a single random projection of the covariance.

    Requires the d x d projected covariance to be invertible, which holds
    almost surely for Gaussian/Haar projections when d is below both the
    sample size and the ambient dimension; the fit fails with
    SingularSketch otherwise.
    """
    if not 1 <= d <= data.dim:
        raise InvalidDims(f"need 1 <= d <= p, got d={d}, p={data.dim}")
    fit = fit_gaussian_model(data, pooled=True)
    projection = sample_projection(family, d, data.dim, seed)
    direction = _sketch_inverse_apply(
        projection, fit.sigma_hat, fit.mu_hat_1 - fit.mu_hat_0, 0
    )
    return SketchedLdaModel(fit, projection, direction)


def predict_sketched_lda_many(model: SketchedLdaModel, points: np.ndarray) -> np.ndarray:
    return _linear_labels(model.fit, model.direction, points)


def predict_sketched_lda(model: SketchedLdaModel, x: np.ndarray) -> int:
    return int(predict_sketched_lda_many(model, np.asarray(x, dtype=np.float64)[None, :])[0])
