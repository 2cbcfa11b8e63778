"""Random projection matrices and Johnson-Lindenstrauss machinery.

Samplers for the projection families used throughout the package
(Gaussian, Haar, axis-aligned, very sparse), the embedding-dimension
bound of the Johnson-Lindenstrauss lemma, and an exact pairwise
distortion check.

Every sampler is a pure function of its arguments: the same
``(d, p, seed)`` always yields the same matrix.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np
from scipy.spatial.distance import pdist

from .data import LabeledDataset
from .errors import DimMismatch, DuplicatePoints, InvalidDims, InvalidSparsity
from .streams import stream


class Family(str, Enum):
    """Distribution family a projection matrix was drawn from."""

    GAUSSIAN = "gaussian"
    HAAR = "haar"
    AXIS_ALIGNED = "axis_aligned"
    SPARSE = "sparse"


@dataclass(frozen=True)
class Projection:
    """A d x p linear map onto d dimensions, tagged with its family."""

    matrix: np.ndarray
    family: Family

    def __post_init__(self):
        matrix = np.ascontiguousarray(np.asarray(self.matrix, dtype=np.float64))
        if matrix.ndim != 2:
            raise InvalidDims("projection matrix must be 2-D")
        d, p = matrix.shape
        if not 1 <= d <= p:
            raise InvalidDims(f"need 1 <= d <= p, got d={d}, p={p}")
        family = Family(self.family)
        if family is Family.HAAR:
            if np.abs(matrix @ matrix.T - np.eye(d)).max() > 1e-10:
                raise InvalidDims("haar projection rows must be orthonormal")
        elif family is Family.AXIS_ALIGNED:
            cols = matrix.argmax(axis=1)
            basis = np.zeros((d, p))
            basis[np.arange(d), cols] = 1.0
            if len(set(cols.tolist())) != d or not np.array_equal(matrix, basis):
                raise InvalidDims(
                    "axis-aligned rows must be distinct standard basis vectors"
                )
        matrix.setflags(write=False)
        object.__setattr__(self, "matrix", matrix)
        object.__setattr__(self, "family", family)

    @property
    def rows(self) -> int:
        return self.matrix.shape[0]

    @property
    def cols(self) -> int:
        return self.matrix.shape[1]

    def apply(self, points: np.ndarray) -> np.ndarray:
        """Project an (m, p) array of row vectors (or a single p-vector)."""
        points = np.asarray(points, dtype=np.float64)
        if points.shape[-1] != self.cols:
            raise DimMismatch(
                f"projection expects dimension {self.cols}, got {points.shape[-1]}"
            )
        return points @ self.matrix.T


def _check_dims(d: int, p: int):
    if not 1 <= d <= p:
        raise InvalidDims(f"need 1 <= d <= p, got d={d}, p={p}")


def _gaussian_matrix(rng: np.random.Generator, d: int, p: int) -> np.ndarray:
    return rng.standard_normal((d, p)) / math.sqrt(p)


def _haar_matrix(rng: np.random.Generator, d: int, p: int) -> np.ndarray:
    # QR of a p x d Gaussian matrix; forcing the R diagonal positive makes
    # the Q factor unique and exactly Haar-distributed, which plain QR is not.
    g = rng.standard_normal((p, d))
    q, r = np.linalg.qr(g, mode="reduced")
    signs = np.where(np.diag(r) >= 0.0, 1.0, -1.0)
    return (q * signs).T


def _axis_aligned_matrix(rng: np.random.Generator, d: int, p: int) -> np.ndarray:
    coords = rng.permutation(p)[:d]
    matrix = np.zeros((d, p))
    matrix[np.arange(d), coords] = 1.0
    return matrix


def _sparse_matrix(rng: np.random.Generator, d: int, p: int, s: float) -> np.ndarray:
    value = math.sqrt(s / p)
    u = rng.random((d, p))
    return np.where(u < 0.5 / s, value, np.where(u < 1.0 / s, -value, 0.0))


def sample_gaussian(d: int, p: int, seed: int) -> Projection:
    """Projection with i.i.d. N(0, 1/p) entries.

    The 1/p variance keeps the expected squared norm of each row equal
    to 1, so squared distances are preserved in expectation.
    """
    _check_dims(d, p)
    return Projection(_gaussian_matrix(stream(seed), d, p), Family.GAUSSIAN)


def sample_haar(d: int, p: int, seed: int) -> Projection:
    """Projection drawn uniformly from {A : A @ A.T = I_d}."""
    _check_dims(d, p)
    return Projection(_haar_matrix(stream(seed), d, p), Family.HAAR)


def sample_axis_aligned(d: int, p: int, seed: int) -> Projection:
    """Projection whose rows select d distinct coordinates uniformly at random."""
    _check_dims(d, p)
    return Projection(_axis_aligned_matrix(stream(seed), d, p), Family.AXIS_ALIGNED)


def sample_sparse(d: int, p: int, seed: int, s: float | None = None) -> Projection:
    """Very sparse projection with three-point entries.

    Each entry is +sqrt(s/p) or -sqrt(s/p) with probability 1/(2s) each and
    0 otherwise, i.i.d., so the entry second moment is 1/p as for the
    Gaussian family.  ``s`` defaults to sqrt(p); ``s = 1`` gives a dense
    sign matrix.
    """
    _check_dims(d, p)
    if s is None:
        s = math.sqrt(p)
    if s < 1.0:
        raise InvalidSparsity(f"sparsity must satisfy s >= 1, got {s}")
    return Projection(_sparse_matrix(stream(seed), d, p, float(s)), Family.SPARSE)


def sample_projection(
    family: Family,
    d: int,
    p: int,
    seed: int,
    *path,
    sparse_s: float | None = None,
) -> Projection:
    """Sample from ``family`` using the stream keyed by ``(seed, *path)``.

    Ensembles use the path argument to give each member projection its own
    stream, independent of the order members are generated in.
    """
    _check_dims(d, p)
    rng = stream(seed, *path)
    family = Family(family)
    if family is Family.GAUSSIAN:
        return Projection(_gaussian_matrix(rng, d, p), family)
    if family is Family.HAAR:
        return Projection(_haar_matrix(rng, d, p), family)
    if family is Family.AXIS_ALIGNED:
        return Projection(_axis_aligned_matrix(rng, d, p), family)
    s = math.sqrt(p) if sparse_s is None else float(sparse_s)
    if s < 1.0:
        raise InvalidSparsity(f"sparsity must satisfy s >= 1, got {s}")
    return Projection(_sparse_matrix(rng, d, p, s), family)


def project(projection: Projection, dataset: LabeledDataset) -> LabeledDataset:
    """Apply a projection to the features of a dataset, keeping the labels."""
    if projection.cols != dataset.dim:
        raise DimMismatch(
            f"projection has {projection.cols} columns, data has dimension {dataset.dim}"
        )
    return LabeledDataset(projection.apply(dataset.features), dataset.labels)


@dataclass(frozen=True)
class JlParams:
    """Distortion tolerance, failure probability and point count for the bound."""

    epsilon: float
    delta: float
    n_points: int

    def __post_init__(self):
        if not 0.0 < self.epsilon < 1.0:
            raise ValueError("epsilon must lie in (0, 1)")
        if not 0.0 < self.delta < 1.0:
            raise ValueError("delta must lie in (0, 1)")
        if self.n_points < 2:
            raise ValueError("n_points must be at least 2")


def jl_bound_value(params: JlParams) -> float:
    """The real-valued dimension bound 16*ln(n/delta)/epsilon^2."""
    return 16.0 * math.log(params.n_points / params.delta) / params.epsilon**2


def jl_dimension_bound(params: JlParams) -> int:
    """Integer projected dimension for the (1 +/- epsilon) distance guarantee.

    Rounds the real-valued bound up to the next integer and adds one, so
    the result exceeds the bound strictly even when it is integral.
    """
    return math.ceil(jl_bound_value(params)) + 1


@dataclass(frozen=True)
class DistortionReport:
    """Extremes of the pairwise squared-distance ratios under a projection."""

    min_ratio: float
    max_ratio: float
    n_pairs: int

    def within(self, epsilon: float) -> bool:
        """True when every pairwise ratio lies in (1 - epsilon, 1 + epsilon)."""
        return 1.0 - epsilon < self.min_ratio and self.max_ratio < 1.0 + epsilon


def check_distortion(projection: Projection, points: np.ndarray) -> DistortionReport:
    """Exact extremes of |A x_i - A x_j|^2 / |x_i - x_j|^2 over all pairs.

    Points must be pairwise distinct; coincident pairs make the ratio
    undefined and raise DuplicatePoints.
    """
    points = np.asarray(points, dtype=np.float64)
    if points.ndim != 2 or points.shape[0] < 2:
        raise ValueError("need at least two points in a 2-D array")
    if points.shape[1] != projection.cols:
        raise DimMismatch(
            f"points have dimension {points.shape[1]}, projection expects {projection.cols}"
        )
    sq_original = pdist(points, "sqeuclidean")
    if np.any(sq_original == 0.0):
        raise DuplicatePoints("duplicate points make distance ratios undefined")
    sq_projected = pdist(projection.apply(points), "sqeuclidean")
    ratios = sq_projected / sq_original
    return DistortionReport(
        min_ratio=float(ratios.min()),
        max_ratio=float(ratios.max()),
        n_pairs=int(ratios.size),
    )
