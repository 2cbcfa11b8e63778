"""Portable on-disk model format.

Models are stored as a single ``.npz`` archive: a JSON metadata entry
(model kind, hyperparameters, threshold, seed) plus the numeric arrays
(projection matrices and fitted parameters, or the projected training set
for kNN bases).  Arrays round-trip exactly, so a reloaded model reproduces
predictions bit for bit.
"""

from __future__ import annotations

import json

import numpy as np

from .base_classifiers import (
    BaseClassifierSpec,
    ClassifierKind,
    FittedClassifier,
    GaussianModelFit,
)
from .data import LabeledDataset
from .error_estimation import ErrorEstimator
from .errors import ParseError
from .lda_ensemble import SketchedLdaModel
from .projections import Family, Projection
from .rp_ensemble import RpEnsembleConfig, RpEnsembleModel

FORMAT_VERSION = 1


def save_model(model, path):
    """Serialize an ensemble or sketched-LDA model to ``path``."""
    if isinstance(model, RpEnsembleModel):
        meta, arrays = _pack_rp_ensemble(model)
    elif isinstance(model, SketchedLdaModel):
        meta, arrays = _pack_sketched(model)
    else:
        raise TypeError(f"cannot serialize {type(model).__name__}")
    meta["format_version"] = FORMAT_VERSION
    with open(path, "wb") as handle:
        np.savez(handle, meta=np.asarray(json.dumps(meta)), **arrays)


def load_model(path):
    """Load a model saved by ``save_model``."""
    with np.load(path, allow_pickle=False) as archive:
        try:
            meta = json.loads(str(archive["meta"]))
        except (KeyError, json.JSONDecodeError) as exc:
            raise ParseError(f"{path}: not a model file ({exc})") from exc
        arrays = {key: archive[key] for key in archive.files if key != "meta"}
    kind = meta.get("kind")
    if kind == "rp_ensemble":
        return _unpack_rp_ensemble(meta, arrays)
    if kind == "sketched_lda":
        return _unpack_sketched(meta, arrays)
    raise ParseError(f"{path}: unknown model kind {kind!r}")


def _pack_rp_ensemble(model: RpEnsembleModel):
    config = model.config
    meta = {
        "kind": "rp_ensemble",
        "base": config.base.kind.value,
        "knn_k": config.base.knn_k,
        "estimator": None if config.estimator is None else ErrorEstimator(config.estimator).value,
        "family": config.family.value,
        "d": config.d,
        "b1": config.b1,
        "b2": config.b2,
        "config_alpha": config.alpha,
        "sparse_s": config.sparse_s,
        "seed": config.seed,
        "alpha": model.alpha,
    }
    arrays = {
        "projections": np.stack([proj.matrix for proj in model.projections]),
        "selected_estimates": model.selected_estimates,
    }
    if model.candidate_estimates is not None:
        arrays["candidate_estimates"] = model.candidate_estimates
    base = config.base.kind
    if base is ClassifierKind.KNN:
        arrays["train_features"] = np.stack([c.train.features for c in model.classifiers])
        arrays["train_labels"] = model.classifiers[0].train.labels
    else:
        fits = [c.fit for c in model.classifiers]
        arrays["pi"] = np.array([[f.pi_hat_0, f.pi_hat_1] for f in fits])
        arrays["mu0"] = np.stack([f.mu_hat_0 for f in fits])
        arrays["mu1"] = np.stack([f.mu_hat_1 for f in fits])
        if base is ClassifierKind.LDA:
            arrays["sigma"] = np.stack([f.sigma_hat for f in fits])
        else:
            arrays["sigma0"] = np.stack([f.sigma_hat_0 for f in fits])
            arrays["sigma1"] = np.stack([f.sigma_hat_1 for f in fits])
    return meta, arrays


def _unpack_rp_ensemble(meta: dict, arrays: dict) -> RpEnsembleModel:
    base_kind = ClassifierKind(meta["base"])
    spec = BaseClassifierSpec(base_kind, knn_k=meta["knn_k"])
    config = RpEnsembleConfig(
        d=meta["d"],
        b1=meta["b1"],
        b2=meta["b2"],
        base=spec,
        estimator=None if meta["estimator"] is None else ErrorEstimator(meta["estimator"]),
        family=Family(meta["family"]),
        alpha=meta["config_alpha"],
        sparse_s=meta["sparse_s"],
        seed=meta["seed"],
    )
    family = Family(meta["family"])
    projections = tuple(Projection(m, family) for m in arrays["projections"])
    if base_kind is ClassifierKind.KNN:
        labels = arrays["train_labels"]
        classifiers = tuple(
            FittedClassifier(spec, train=LabeledDataset(features, labels))
            for features in arrays["train_features"]
        )
    else:
        classifiers = []
        for b in range(meta["b1"]):
            pi0, pi1 = arrays["pi"][b]
            if base_kind is ClassifierKind.LDA:
                fit = GaussianModelFit(
                    pi0, pi1, arrays["mu0"][b], arrays["mu1"][b], sigma_hat=arrays["sigma"][b]
                )
            else:
                fit = GaussianModelFit(
                    pi0,
                    pi1,
                    arrays["mu0"][b],
                    arrays["mu1"][b],
                    sigma_hat_0=arrays["sigma0"][b],
                    sigma_hat_1=arrays["sigma1"][b],
                )
            classifiers.append(FittedClassifier(spec, fit=fit))
        classifiers = tuple(classifiers)
    return RpEnsembleModel(
        config=config,
        projections=projections,
        classifiers=classifiers,
        alpha=meta["alpha"],
        selected_estimates=arrays["selected_estimates"],
        candidate_estimates=arrays.get("candidate_estimates"),
    )


def _pack_sketched(model: SketchedLdaModel):
    meta = {"kind": "sketched_lda", "family": model.projection.family.value}
    fit = model.fit
    arrays = {
        "pi": np.array([fit.pi_hat_0, fit.pi_hat_1]),
        "mu0": fit.mu_hat_0,
        "mu1": fit.mu_hat_1,
        "sigma": fit.sigma_hat,
        "projection": model.projection.matrix,
        "direction": model.direction,
    }
    return meta, arrays


def _unpack_sketched(meta: dict, arrays: dict) -> SketchedLdaModel:
    pi0, pi1 = arrays["pi"]
    fit = GaussianModelFit(
        float(pi0), float(pi1), arrays["mu0"], arrays["mu1"], sigma_hat=arrays["sigma"]
    )
    projection = Projection(arrays["projection"], Family(meta["family"]))
    return SketchedLdaModel(fit, projection, arrays["direction"])
