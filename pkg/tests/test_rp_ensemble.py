import numpy as np
import pytest

import rpclass as rp
from rpclass.base_classifiers import ClassifierKind, FittedClassifier, GaussianModelFit
from rpclass.projections import Family

LDA = rp.BaseClassifierSpec(ClassifierKind.LDA)


def _dataset(seed=0, n=40, p=6, shift=1.5):
    rng = np.random.default_rng(seed)
    labels = rng.integers(0, 2, n)
    labels[:2] = [0, 1]
    features = rng.normal(size=(n, p)) + shift * labels[:, None]
    return rp.LabeledDataset(features, labels)


def test_degenerate_ensemble_is_single_projected_classifier():
    data = _dataset()
    config = rp.RpEnsembleConfig(d=2, b1=1, b2=1, base=LDA, seed=5)
    model = rp.train_rp_ensemble(data, config)
    assert model.b1 == 1
    projection = rp.sample_projection(Family.GAUSSIAN, 2, data.dim, 5, 0, 0)
    assert np.array_equal(model.projections[0].matrix, projection.matrix)
    direct = rp.fit_base_classifier(LDA, rp.project(projection, data))
    x = np.random.default_rng(1).normal(size=(30, data.dim))
    assert np.array_equal(
        direct.predict_many(projection.apply(x)),
        (rp.vote_fractions(model, x) > 0.5).astype(int),
    )


def test_more_candidates_never_hurt_selected_estimates():
    data = _dataset(seed=2)
    small = rp.train_rp_ensemble(data, rp.RpEnsembleConfig(d=2, b1=6, b2=1, base=LDA, seed=9))
    large = rp.train_rp_ensemble(data, rp.RpEnsembleConfig(d=2, b1=6, b2=4, base=LDA, seed=9))
    # candidate (g, 0) is shared, so the min over four candidates is <= it
    assert np.all(large.selected_estimates <= small.selected_estimates)


def test_training_is_deterministic():
    data = _dataset(seed=3)
    config = rp.RpEnsembleConfig(d=3, b1=5, b2=3, base=LDA, seed=17)
    a = rp.train_rp_ensemble(data, config)
    b = rp.train_rp_ensemble(data, config)
    assert a.alpha == b.alpha
    assert np.array_equal(a.selected_estimates, b.selected_estimates)
    for left, right in zip(a.projections, b.projections):
        assert np.array_equal(left.matrix, right.matrix)


def test_parallel_training_matches_serial():
    data = _dataset(seed=4)
    config = rp.RpEnsembleConfig(d=2, b1=6, b2=2, base=LDA, seed=21)
    serial = rp.train_rp_ensemble(data, config, n_jobs=1)
    parallel = rp.train_rp_ensemble(data, config, n_jobs=2)
    assert serial.alpha == parallel.alpha
    for left, right in zip(serial.projections, parallel.projections):
        assert np.array_equal(left.matrix, right.matrix)


def test_group_streams_independent_of_b1():
    data = _dataset(seed=5)
    two = rp.train_rp_ensemble(data, rp.RpEnsembleConfig(d=2, b1=2, b2=3, base=LDA, seed=7))
    three = rp.train_rp_ensemble(data, rp.RpEnsembleConfig(d=2, b1=3, b2=3, base=LDA, seed=7))
    for left, right in zip(two.projections, three.projections):
        assert np.array_equal(left.matrix, right.matrix)


def _constant_classifier(label):
    # equal means make the discriminant constant log(pi_1/pi_0)
    pi1 = 0.75 if label == 1 else 0.25
    fit = GaussianModelFit(1 - pi1, pi1, np.zeros(2), np.zeros(2), sigma_hat=np.eye(2))
    return FittedClassifier(LDA, fit=fit)


def _hand_model(labels, alpha=0.5):
    projections = tuple(
        rp.sample_projection(Family.GAUSSIAN, 2, 4, 99, i) for i in range(len(labels))
    )
    classifiers = tuple(_constant_classifier(lbl) for lbl in labels)
    config = rp.RpEnsembleConfig(d=2, b1=len(labels), b2=1, base=LDA, alpha=alpha, seed=99)
    return rp.RpEnsembleModel(
        config=config,
        projections=projections,
        classifiers=classifiers,
        alpha=alpha,
        selected_estimates=np.zeros(len(labels)),
    )


def test_vote_fraction_unanimity_and_split():
    x = np.random.default_rng(0).normal(size=4)
    assert rp.vote_fraction(_hand_model([1, 1, 1]), x) == 1.0
    assert rp.vote_fraction(_hand_model([1, 0]), x) == 0.5
    assert rp.vote_fraction(_hand_model([0, 0, 0, 0]), x) == 0.0


def test_vote_fraction_is_multiple_of_one_over_b1():
    data = _dataset(seed=6)
    model = rp.train_rp_ensemble(data, rp.RpEnsembleConfig(d=2, b1=7, b2=2, base=LDA, seed=3))
    votes = rp.vote_fractions(model, np.random.default_rng(2).normal(size=(25, data.dim)))
    assert np.allclose(votes * 7, np.round(votes * 7), atol=1e-12)


def test_predict_threshold_extremes():
    x = np.random.default_rng(1).normal(size=(10, 4))
    all_zero = _hand_model([0, 0, 0], alpha=0.0)
    assert np.all(rp.predict_rp_ensemble_many(all_zero, x) == 1)  # nu >= 0 always
    mixed = _hand_model([1, 1, 0], alpha=1.0)
    assert np.all(rp.predict_rp_ensemble_many(mixed, x) == 0)
    unanimous = _hand_model([1, 1, 1], alpha=1.0)
    assert np.all(rp.predict_rp_ensemble_many(unanimous, x) == 1)


def test_predict_majority_recount():
    data = _dataset(seed=7)
    model = rp.train_rp_ensemble(
        data, rp.RpEnsembleConfig(d=2, b1=9, b2=2, base=LDA, alpha=0.5, seed=13)
    )
    x = np.random.default_rng(3).normal(size=(50, data.dim))
    counts = np.zeros(50)
    for projection, classifier in zip(model.projections, model.classifiers):
        counts += classifier.predict_many(projection.apply(x))
    majority = (counts / 9 >= 0.5).astype(int)
    assert np.array_equal(rp.predict_rp_ensemble_many(model, x), majority)


def test_predict_monotone_in_alpha():
    data = _dataset(seed=8)
    model = rp.train_rp_ensemble(data, rp.RpEnsembleConfig(d=2, b1=6, b2=2, base=LDA, seed=1))
    x = np.random.default_rng(4).normal(size=(20, data.dim))
    previous = np.ones(20, dtype=int)
    for alpha in np.linspace(0.0, 1.0, 13):
        current = rp.predict_rp_ensemble_many(rp.with_alpha(model, alpha), x)
        assert np.all(current <= previous)
        previous = current


def test_selection_optimality_in_debug_mode():
    data = _dataset(seed=9)
    model = rp.train_rp_ensemble(
        data, rp.RpEnsembleConfig(d=2, b1=8, b2=5, base=LDA, seed=2), keep_candidates=True
    )
    assert model.candidate_estimates.shape == (8, 5)
    assert np.array_equal(model.candidate_estimates.min(axis=1), model.selected_estimates)


def _alpha_error(votes, labels, alpha):
    votes, labels = np.asarray(votes), np.asarray(labels)
    wrong = ((votes >= alpha) & (labels == 0)) | ((votes < alpha) & (labels == 1))
    return wrong.mean()


def test_select_alpha_separable_votes():
    votes = np.array([0.1, 0.2, 0.2, 0.8, 0.9, 1.0])
    labels = np.array([0, 0, 0, 1, 1, 1])
    alpha = rp.select_alpha(votes, labels, b1=10)
    assert 0.2 < alpha <= 0.8
    assert _alpha_error(votes, labels, alpha) == 0.0


def test_select_alpha_constant_votes():
    votes = np.full(10, 0.4)
    labels = np.array([0] * 7 + [1] * 3)
    alpha = rp.select_alpha(votes, labels, b1=5)
    # min(pi0, pi1) = 0.3 achieved by classifying everything as 0
    assert _alpha_error(votes, labels, alpha) == pytest.approx(0.3)


def test_select_alpha_matches_grid_search():
    rng = np.random.default_rng(12)
    for _ in range(20):
        votes = rng.integers(0, 5, 12) / 4.0
        labels = rng.integers(0, 2, 12)
        labels[:2] = [0, 1]
        best = rp.select_alpha(votes, labels, b1=4)
        grid = np.linspace(0.0, 1.0, 10_001)
        grid_best = min(_alpha_error(votes, labels, a) for a in grid)
        assert _alpha_error(votes, labels, best) == pytest.approx(grid_best, abs=1e-12)


def test_select_alpha_requires_both_classes():
    with pytest.raises(rp.MissingClass):
        rp.select_alpha(np.array([0.5, 0.5]), np.array([1, 1]), b1=2)


def test_square_haar_ensemble_reproduces_vanilla_lda():
    data = _dataset(seed=10, n=60, p=4)
    config = rp.RpEnsembleConfig(d=4, b1=5, b2=2, base=LDA, family=Family.HAAR, seed=6)
    model = rp.train_rp_ensemble(data, config)
    vanilla = rp.fit_base_classifier(LDA, data)
    x = np.random.default_rng(5).normal(size=(200, 4))
    votes = rp.vote_fractions(model, x)
    assert set(np.unique(votes)) <= {0.0, 1.0}
    assert np.array_equal(rp.predict_rp_ensemble_many(model, x), vanilla.predict_many(x))


def test_untrainable_ensemble():
    # QDA with 2 points in class 1 cannot invert a 3x3 class covariance
    rng = np.random.default_rng(11)
    features = np.vstack([rng.normal(size=(10, 5)), rng.normal(size=(2, 5))])
    data = rp.LabeledDataset(features, [0] * 10 + [1] * 2)
    config = rp.RpEnsembleConfig(
        d=3, b1=2, b2=3, base=rp.BaseClassifierSpec(ClassifierKind.QDA), seed=0
    )
    with pytest.raises(rp.UntrainableEnsemble):
        rp.train_rp_ensemble(data, config)


def test_train_validates_inputs():
    data = _dataset(seed=12, p=4)
    with pytest.raises(rp.InvalidDims):
        rp.train_rp_ensemble(data, rp.RpEnsembleConfig(d=5, b1=2, b2=2, base=LDA))
    single_class = rp.LabeledDataset(np.eye(3), [1, 1, 1])
    with pytest.raises(rp.MissingClass):
        rp.train_rp_ensemble(single_class, rp.RpEnsembleConfig(d=1, b1=1, b2=1, base=LDA))


def test_knn_base_with_loo_selection():
    data = _dataset(seed=13, n=30)
    config = rp.RpEnsembleConfig(
        d=2, b1=4, b2=3, base=rp.BaseClassifierSpec(ClassifierKind.KNN, knn_k=3), seed=8
    )
    model = rp.train_rp_ensemble(data, config)
    assert model.b1 == 4
    x = np.random.default_rng(6).normal(size=(10, data.dim))
    votes = rp.vote_fractions(model, x)
    assert np.all((0.0 <= votes) & (votes <= 1.0))


def test_test_error_trivial_cases():
    data = _dataset(seed=14)
    assert rp.test_error(lambda x: data.labels, data) == 0.0
    n0, n1 = data.class_counts()
    constant = rp.test_error(lambda x: np.zeros(len(x), dtype=int), data)
    assert constant == pytest.approx(n1 / data.n)
    counted = rp.test_error(lambda x: 1 - data.labels, data)
    assert counted == 1.0


def test_vote_dim_mismatch():
    data = _dataset(seed=15)
    model = rp.train_rp_ensemble(data, rp.RpEnsembleConfig(d=2, b1=2, b2=1, base=LDA, seed=4))
    with pytest.raises(rp.DimMismatch):
        rp.vote_fraction(model, np.zeros(data.dim + 1))
