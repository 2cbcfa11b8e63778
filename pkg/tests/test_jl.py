import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

import rpclass as rp
from rpclass.projections import Family


def test_bound_worked_example():
    # 16 * ln(1000/0.01) / 0.1^2 = 18420.68...
    assert rp.jl_dimension_bound(rp.JlParams(epsilon=0.1, delta=0.01, n_points=1000)) == 18422


def test_bound_small_case():
    # 16 * ln(4) / 0.25 = 88.7228...
    assert rp.jl_dimension_bound(rp.JlParams(epsilon=0.5, delta=0.5, n_points=2)) == 90


def test_bound_doubling_adds_constant_shift():
    eps = 0.3
    for n in (10, 100, 5000):
        small = rp.jl_bound_value(rp.JlParams(eps, 0.05, n))
        large = rp.jl_bound_value(rp.JlParams(eps, 0.05, 2 * n))
        assert large - small == pytest.approx(16.0 * math.log(2.0) / eps**2, rel=1e-9)


@given(
    n=st.integers(min_value=2, max_value=10**6),
    eps=st.floats(min_value=0.01, max_value=0.99),
    delta=st.floats(min_value=0.01, max_value=0.99),
)
def test_bound_exceeds_value_strictly(n, eps, delta):
    params = rp.JlParams(eps, delta, n)
    assert rp.jl_dimension_bound(params) > rp.jl_bound_value(params)


def test_bound_monotonicity():
    base = dict(epsilon=0.3, delta=0.1, n_points=100)
    grid_n = [rp.jl_dimension_bound(rp.JlParams(0.3, 0.1, n)) for n in (2, 10, 100, 10**4)]
    assert grid_n == sorted(grid_n)
    grid_eps = [rp.jl_dimension_bound(rp.JlParams(e, 0.1, 100)) for e in (0.05, 0.1, 0.3, 0.9)]
    assert grid_eps == sorted(grid_eps, reverse=True)
    grid_delta = [rp.jl_dimension_bound(rp.JlParams(0.3, d, 100)) for d in (0.01, 0.1, 0.5, 0.9)]
    assert grid_delta == sorted(grid_delta, reverse=True)
    assert rp.jl_dimension_bound(rp.JlParams(**base)) == grid_eps[2]


def test_params_validation():
    with pytest.raises(ValueError):
        rp.JlParams(epsilon=0.0, delta=0.1, n_points=10)
    with pytest.raises(ValueError):
        rp.JlParams(epsilon=0.5, delta=1.0, n_points=10)
    with pytest.raises(ValueError):
        rp.JlParams(epsilon=0.5, delta=0.1, n_points=1)


def _points(n, p, seed=0):
    return np.random.default_rng(seed).normal(size=(n, p))


def test_distortion_identity():
    report = rp.check_distortion(rp.Projection(np.eye(4), Family.AXIS_ALIGNED), _points(10, 4))
    assert report.min_ratio == pytest.approx(1.0)
    assert report.max_ratio == pytest.approx(1.0)
    assert report.n_pairs == 45


def test_distortion_scaling():
    report = rp.check_distortion(rp.Projection(2.0 * np.eye(3), Family.GAUSSIAN), _points(6, 3))
    assert report.min_ratio == pytest.approx(4.0)
    assert report.max_ratio == pytest.approx(4.0)


def test_distortion_orthogonal_square():
    a = rp.sample_haar(7, 7, seed=11)
    report = rp.check_distortion(a, _points(20, 7))
    assert abs(report.min_ratio - 1.0) < 1e-10
    assert abs(report.max_ratio - 1.0) < 1e-10


def test_distortion_duplicate_points():
    points = np.vstack([_points(5, 3), _points(5, 3)[:1]])
    with pytest.raises(rp.DuplicatePoints):
        rp.check_distortion(rp.sample_gaussian(2, 3, seed=0), points)


def test_distortion_dim_mismatch_and_too_few():
    with pytest.raises(rp.DimMismatch):
        rp.check_distortion(rp.sample_gaussian(2, 4, seed=0), _points(5, 3))
    with pytest.raises(ValueError):
        rp.check_distortion(rp.sample_gaussian(2, 3, seed=0), _points(1, 3))


def test_distortion_gaussian_projection_mostly_within():
    # small-scale preview of the probabilistic guarantee
    eps, p = 0.5, 400
    d = rp.jl_dimension_bound(rp.JlParams(eps, 0.1, 20))
    assert d < p
    points = _points(20, p, seed=1)
    hits = sum(
        rp.check_distortion(rp.sample_gaussian(d, p, seed=s), points).within(eps)
        for s in range(20)
    )
    assert hits >= 16
