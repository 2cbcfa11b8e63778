import numpy as np
import pytest

import rpclass as rp
from rpclass.base_classifiers import ClassifierKind
from rpclass.projections import Family


def _dataset(seed=0, n=50, p=6):
    rng = np.random.default_rng(seed)
    labels = rng.integers(0, 2, n)
    labels[:2] = [0, 1]
    features = rng.normal(size=(n, p)) + 1.2 * labels[:, None]
    return rp.LabeledDataset(features, labels)


@pytest.mark.parametrize("kind", [ClassifierKind.LDA, ClassifierKind.QDA, ClassifierKind.KNN])
def test_rp_ensemble_round_trip_is_bit_exact(tmp_path, kind):
    data = _dataset()
    spec = rp.BaseClassifierSpec(kind, knn_k=3)
    config = rp.RpEnsembleConfig(d=2, b1=5, b2=3, base=spec, seed=31)
    model = rp.train_rp_ensemble(data, config, keep_candidates=True)
    path = tmp_path / "model.npz"
    rp.save_model(model, path)
    loaded = rp.load_model(path)
    assert loaded.config == model.config
    assert loaded.alpha == model.alpha
    assert np.array_equal(loaded.selected_estimates, model.selected_estimates)
    assert np.array_equal(loaded.candidate_estimates, model.candidate_estimates)
    x = np.random.default_rng(1).normal(size=(40, data.dim))
    assert np.array_equal(rp.vote_fractions(loaded, x), rp.vote_fractions(model, x))
    assert np.array_equal(
        rp.predict_rp_ensemble_many(loaded, x), rp.predict_rp_ensemble_many(model, x)
    )


def test_sketched_round_trip_is_bit_exact(tmp_path):
    data = _dataset(seed=2)
    model = rp.fit_sketched_lda(data, d=3, family=Family.HAAR, seed=7)
    path = tmp_path / "sketched.npz"
    rp.save_model(model, path)
    loaded = rp.load_model(path)
    assert np.array_equal(loaded.projection.matrix, model.projection.matrix)
    assert np.array_equal(loaded.direction, model.direction)
    x = np.random.default_rng(3).normal(size=(60, data.dim))
    assert np.array_equal(
        rp.predict_sketched_lda_many(loaded, x), rp.predict_sketched_lda_many(model, x)
    )


def test_load_rejects_non_model_files(tmp_path):
    path = tmp_path / "junk.npz"
    np.savez(path, stuff=np.arange(3))
    with pytest.raises(rp.ParseError):
        rp.load_model(path)


def test_save_rejects_unknown_types(tmp_path):
    with pytest.raises(TypeError):
        rp.save_model(object(), tmp_path / "nope.npz")
