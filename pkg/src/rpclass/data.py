"""Labeled datasets for binary classification."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NonFinite


@dataclass(frozen=True)
class LabeledDataset:
    """An n x p feature matrix with one {0, 1} label per row.

    Arrays are coerced to float64/int64, validated, and frozen, so instances
    are safe to share across threads.
    """

    features: np.ndarray
    labels: np.ndarray

    def __post_init__(self):
        features = np.ascontiguousarray(np.asarray(self.features, dtype=np.float64))
        labels = np.asarray(self.labels)
        if features.ndim != 2:
            raise ValueError("features must be a 2-D array")
        if features.shape[0] < 1:
            raise ValueError("dataset needs at least one observation")
        if labels.shape != (features.shape[0],):
            raise ValueError("labels must be a vector with one entry per observation")
        if not np.isfinite(features).all():
            raise NonFinite("features contain NaN or infinite values")
        if not np.isin(labels, (0, 1)).all():
            raise ValueError("labels must take values in {0, 1}")
        labels = np.ascontiguousarray(labels.astype(np.int64))
        features.setflags(write=False)
        labels.setflags(write=False)
        object.__setattr__(self, "features", features)
        object.__setattr__(self, "labels", labels)

    @property
    def n(self) -> int:
        return self.features.shape[0]

    @property
    def dim(self) -> int:
        return self.features.shape[1]

    def class_counts(self) -> tuple[int, int]:
        """Return (n0, n1), the number of observations in each class."""
        n1 = int(self.labels.sum())
        return self.n - n1, n1

    def subset(self, index) -> "LabeledDataset":
        """Dataset restricted to the given row index array."""
        return LabeledDataset(self.features[index], self.labels[index])
