"""Exception types shared across the package."""


class RpclassError(Exception):
    """Base class for all errors raised by this package."""


class InvalidDims(RpclassError):
    """Projection dimensions violate 1 <= d <= p."""


class InvalidSparsity(RpclassError):
    """Sparse projection parameter s is below 1."""


class DimMismatch(RpclassError):
    """Operands have incompatible dimensions."""


class DuplicatePoints(RpclassError):
    """Two supposedly distinct points coincide exactly."""


class MissingClass(RpclassError):
    """A class has zero observations where both are required."""


class InsufficientData(RpclassError):
    """Too few observations for the requested estimate."""


class SingularCovariance(RpclassError):
    """A covariance matrix is numerically singular (rcond below 1e-12)."""


class InvalidK(RpclassError):
    """Neighbour count k is outside [1, n]."""


class DegenerateSeparation(RpclassError):
    """Class means coincide, so the separation-based formula is undefined."""


class FoldDegenerate(RpclassError):
    """A leave-one-out fold would be left without one of the classes."""


class UntrainableEnsemble(RpclassError):
    """Every candidate projection in some group failed to train."""


class SingularSketch(RpclassError):
    """A projected covariance A @ Sigma @ A.T is numerically singular."""


class ParseError(RpclassError):
    """A data file is malformed."""


class LabelError(RpclassError):
    """A label could not be mapped to {0, 1}."""


class NonFinite(RpclassError):
    """Features contain NaN or infinite values."""


class NetworkError(RpclassError):
    """A dataset download failed."""


class ChecksumMismatch(RpclassError):
    """A cached file does not match its recorded digest."""


class ConfigError(RpclassError):
    """An experiment configuration is invalid."""


# Fit-infeasibility errors the benchmark runner records as intractable
# markers instead of aborting the experiment.
INTRACTABLE_ERRORS = (
    MissingClass,
    InsufficientData,
    SingularCovariance,
    InvalidK,
    FoldDegenerate,
    UntrainableEnsemble,
    SingularSketch,
)
