import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import phi, trapezoid, w1_transport
from driftfield.core import DriftConfig
from driftfield.density import (
    DensityModel,
    cosine_deformation,
    density_difference,
    frequency_l2,
    frequency_wasserstein,
    kde_density,
    kl_discrete,
    kl_divergence,
    model_from_cloud,
    wasserstein_1d,
)
from driftfield.errors import DimensionMismatch, EmptySample, EmptyText, NotADistribution, ZeroVector
from driftfield.ingest import tokenize


def m1(points, h=1.0):
    return DensityModel(np.asarray(points, dtype=float).reshape(-1, 1), [h])


def test_single_gaussian_at_center():
    assert kde_density(m1([0.0]), [0.0]) == pytest.approx(1 / math.sqrt(2 * math.pi), abs=1e-15)
    assert kde_density(m1([0.0]), [0.0]) == pytest.approx(0.398942, abs=1e-6)


def test_tail_decay():
    v = kde_density(m1([0.0]), [100.0])
    assert 0 <= v < 1e-300


def test_two_points():
    assert kde_density(m1([-1.0, 1.0]), [0.0]) == pytest.approx(phi(1.0), abs=1e-15)
    assert kde_density(m1([-1.0, 1.0]), [0.0]) == pytest.approx(0.241971, abs=1e-6)


def test_product_kernel_matches_direct_formula(rng):
    pts, h = rng.normal(size=(7, 3)), np.array([0.5, 1.2, 2.0])
    x = rng.normal(size=3)
    expected = np.mean([np.prod([phi((x[j] - p[j]) / h[j]) / h[j] for j in range(3)]) for p in pts])
    assert kde_density(DensityModel(pts, h), x) == pytest.approx(expected, rel=1e-13)


@pytest.mark.parametrize("pts,h", [([0.0], 1.0), ([-3.0, 0.5, 2.0], 0.7), ([1.0, 1.0, 4.0], 2.5)])
def test_integrates_to_one(pts, h):
    model = m1(pts, h)
    total = trapezoid(model.evaluate, min(pts) - 10 * h, max(pts) + 10 * h)
    assert total == pytest.approx(1.0, abs=1e-6)


def test_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        kde_density(DensityModel(np.zeros((2, 2)), [1, 1]), [0, 0, 0])


def test_density_difference_examples():
    old, new = m1([0.0]), m1([10.0])
    assert density_difference(old, old, [3.0]) == 0.0
    assert density_difference(old, new, [10.0]) == pytest.approx(0.398942, abs=1e-6)
    assert density_difference(old, new, [0.0]) == pytest.approx(-0.398942, abs=1e-6)


def test_density_difference_vectorised(rng):
    old, new = model_from_cloud(rng.normal(size=(30, 2))), model_from_cloud(rng.normal(size=(30, 2)) + 1)
    q = rng.normal(size=(5, 2))
    many = density_difference(old, new, q)
    assert many.shape == (5,)
    assert many[2] == pytest.approx(density_difference(old, new, q[2]), abs=1e-16)


def test_kl_identity_exact(rng):
    m = model_from_cloud(rng.normal(size=(50, 3)))
    assert kl_divergence(m, m) == 0.0


def test_kl_different_bandwidths_positive():
    # p(0) = phi(0), q(0) = phi(0)/2, so the estimate is ln 2
    kl = kl_divergence(m1([0.0], 1.0), m1([0.0], 2.0))
    assert kl > 0
    assert kl == pytest.approx(math.log(2), abs=1e-12)


def test_kl_floor_bounds_estimate():
    kl = kl_divergence(m1([0.0]), m1([1e3]), DriftConfig(kl_floor=1e-12))
    assert kl == pytest.approx(math.log(phi(0.0) / 1e-12), rel=1e-12)


def test_kl_discrete_examples():
    assert kl_discrete([0.3, 0.7], [0.3, 0.7]) == 0.0
    assert kl_discrete([0.5, 0.5], [0.9, 0.1]) == pytest.approx(0.510826, abs=1e-6)
    assert kl_discrete([1, 0], [0.5, 0.5]) == pytest.approx(math.log(2), abs=1e-15)
    expected = 0.5 * math.log(2) + 0.5 * math.log(2 / 3)
    assert kl_discrete([0.5, 0.5], [0.25, 0.75]) == pytest.approx(expected, abs=1e-15)
    assert expected == pytest.approx(0.143841, abs=1e-6)


def test_kl_discrete_support_violation():
    assert math.isinf(kl_discrete([0.5, 0.5], [1.0, 0.0]))


@pytest.mark.parametrize("p,q", [([0.5, 0.6], [0.5, 0.5]), ([-0.1, 1.1], [0.5, 0.5]), ([], [])])
def test_kl_discrete_not_distribution(p, q):
    with pytest.raises(NotADistribution):
        kl_discrete(p, q)


probs = st.lists(st.floats(0.0, 1.0), min_size=1, max_size=8).filter(lambda v: sum(v) > 1e-6)


@settings(max_examples=200, deadline=None)
@given(st.integers(1, 8), st.integers(0, 2**32 - 1))
def test_gibbs(d, seed):
    r = np.random.default_rng(seed)
    p, q = r.dirichlet(np.ones(d)), r.dirichlet(np.ones(d))
    assert kl_discrete(p, q) >= -1e-12
    assert abs(kl_discrete(p, p)) <= 1e-12


def test_wasserstein_examples():
    assert wasserstein_1d([1, 5, 2], [5, 2, 1]) == 0.0
    assert wasserstein_1d([0, 0], [1, 1]) == 1.0
    assert wasserstein_1d([0, 1], [0, 3]) == 1.0


def test_wasserstein_unequal_sizes():
    # half the mass of {0, 1} moves 1 to reach {1}
    assert wasserstein_1d([0, 1], [1]) == pytest.approx(0.5)
    assert wasserstein_1d([0, 1, 2], [0, 2]) == pytest.approx(w1_transport([0, 1, 2], [0, 2]), abs=1e-12)


def test_wasserstein_empty():
    with pytest.raises(EmptySample):
        wasserstein_1d([], [1.0])


samples = st.lists(st.floats(-50, 50, allow_nan=False), min_size=1, max_size=4)


@settings(max_examples=200, deadline=None)
@given(samples, samples)
def test_wasserstein_matches_transport_oracle(a, b):
    assert wasserstein_1d(a, b) == pytest.approx(w1_transport(a, b), abs=1e-10)


small = st.lists(st.floats(-50, 50, allow_nan=False), min_size=1, max_size=8)


@settings(max_examples=200, deadline=None)
@given(small, small, small)
def test_wasserstein_metric(a, b, c):
    assert wasserstein_1d(a, b) == wasserstein_1d(b, a)
    assert wasserstein_1d(a, c) <= wasserstein_1d(a, b) + wasserstein_1d(b, c) + 1e-12


@settings(max_examples=100, deadline=None)
@given(small, st.floats(-20, 20))
def test_wasserstein_translation(a, c):
    shifted = [x + c for x in a]
    assert wasserstein_1d(a, shifted) == pytest.approx(abs(c), abs=1e-12)


def test_cosine_examples():
    assert cosine_deformation([1, 1], [1, 1]) == 0.0
    assert cosine_deformation([1, 0], [0, 1]) == pytest.approx(1.0, abs=1e-15)
    assert cosine_deformation([1, 1], [2, 2]) == pytest.approx(0.0, abs=1e-15)
    assert cosine_deformation([1, 0], [-1, 0]) == pytest.approx(2.0)
    with pytest.raises(ZeroVector):
        cosine_deformation([0, 0], [1, 0])


@settings(max_examples=100, deadline=None)
@given(
    st.lists(st.floats(-10, 10), min_size=3, max_size=3).filter(lambda v: np.linalg.norm(v) > 1e-3),
    st.lists(st.floats(-10, 10), min_size=3, max_size=3).filter(lambda v: np.linalg.norm(v) > 1e-3),
    st.floats(1e-3, 1e3),
)
def test_cosine_scale_invariance(u, v, s):
    base = cosine_deformation(u, v)
    assert 0 <= base <= 2
    assert cosine_deformation(np.multiply(u, s), v) == pytest.approx(base, abs=1e-12)


def test_frequency_l2_examples():
    t = tokenize("a b c a")
    assert frequency_l2(t, t) == 0.0
    assert frequency_l2(tokenize("a"), tokenize("b")) == pytest.approx(math.sqrt(2), abs=1e-12)
    assert frequency_l2(tokenize("a a b b"), tokenize("a b b b")) == pytest.approx(0.353553, abs=1e-6)
    with pytest.raises(EmptyText):
        frequency_l2(tokenize(""), t)


def test_frequency_wasserstein():
    # union vocab {a, b}: old frequencies {0.5, 0.5}, new {0.25, 0.75}
    assert frequency_wasserstein(tokenize("a a b b"), tokenize("a b b b")) == pytest.approx(0.25)
    assert frequency_wasserstein(tokenize("x y"), tokenize("y x")) == 0.0
