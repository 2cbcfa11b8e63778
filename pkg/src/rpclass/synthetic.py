"""Synthetic two-class Gaussian data with a controlled separation."""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .base_classifiers import GaussianPopulation
from .data import LabeledDataset
from .streams import stream


class SyntheticModel(str, Enum):
    # common covariance, mean shift along the first coordinate
    GAUSSIAN_COMMON_COV = "gaussian_common_cov"
    # common covariance, mean shift spread over the first n_relevant coordinates
    SPARSE_LINEAR = "sparse_linear"


@dataclass(frozen=True)
class SyntheticSpec:
    """Population spec: the mean shift is scaled so the Mahalanobis
    separation between the classes equals ``delta`` exactly."""

    model: SyntheticModel
    p: int
    pi_0: float = 0.5
    delta: float = 2.0
    n_relevant: int | None = None
    sigma: np.ndarray | None = None

    def __post_init__(self):
        object.__setattr__(self, "model", SyntheticModel(self.model))
        if self.p < 1:
            raise ValueError("dimension must be positive")
        if not 0.0 <= self.pi_0 <= 1.0:
            raise ValueError("pi_0 must lie in [0, 1]")
        if self.delta <= 0.0:
            raise ValueError("delta must be positive")
        if self.model is SyntheticModel.SPARSE_LINEAR:
            if self.n_relevant is None or not 1 <= self.n_relevant <= self.p:
                raise ValueError("sparse model needs 1 <= n_relevant <= p")
        if self.sigma is not None:
            sigma = np.asarray(self.sigma, dtype=np.float64)
            if sigma.shape != (self.p, self.p):
                raise ValueError("sigma must be p x p")
            object.__setattr__(self, "sigma", sigma)

    def means(self) -> tuple[np.ndarray, np.ndarray]:
        """Class means: zero and a shift scaled to Mahalanobis distance delta."""
        sigma = np.eye(self.p) if self.sigma is None else self.sigma
        u = np.zeros(self.p)
        if self.model is SyntheticModel.SPARSE_LINEAR:
            u[: self.n_relevant] = 1.0 / np.sqrt(self.n_relevant)
        else:
            u[0] = 1.0
        scale = self.delta / np.sqrt(u @ np.linalg.solve(sigma, u))
        return np.zeros(self.p), scale * u

    def population(self) -> GaussianPopulation:
        """The population object; requires non-degenerate priors."""
        mu_0, mu_1 = self.means()
        return GaussianPopulation(
            pi_0=self.pi_0,
            pi_1=1.0 - self.pi_0,
            mu_0=mu_0,
            mu_1=mu_1,
            sigma=np.eye(self.p) if self.sigma is None else self.sigma,
        )


def generate_synthetic(spec: SyntheticSpec, n: int, seed: int) -> LabeledDataset:
    """Draw n labelled observations from the population; deterministic in seed."""
    if n < 1:
        raise ValueError("need at least one observation")
    mu_0, mu_1 = spec.means()
    rng = stream(seed)
    labels = (rng.random(n) < 1.0 - spec.pi_0).astype(np.int64)
    noise = rng.standard_normal((n, spec.p))
    if spec.sigma is not None:
        noise = noise @ np.linalg.cholesky(spec.sigma).T
    means = np.where(labels[:, None] == 1, mu_1, mu_0)
    return LabeledDataset(means + noise, labels)
