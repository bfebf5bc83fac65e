import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from ecm.data import Dataset, normalize_minmax
from ecm.datagen import BUILTIN_SPECS, builtin
from ecm.errors import DimensionMismatch
from oracles import GRID_STEP, conflict_instance, grid_extremes

from ecm.fuzzy import (
    ECMProblem, chromosome_bounds, entropy_memberships, evaluate, objective_f1, objective_f2,
    pairwise_sq_dist, sigma_heuristic,
)


def test_sq_dist_examples():
    assert pairwise_sq_dist([[0.0, 0.0]], [[3.0, 4.0]])[0, 0] == 25.0
    assert pairwise_sq_dist([[1.5, -2.0]], [[1.5, -2.0]])[0, 0] == 0.0
    np.testing.assert_array_equal(
        pairwise_sq_dist([[0, 0], [1, 0]], [[0, 0], [0, 1]]), [[0, 1], [1, 2]])


def test_sq_dist_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        pairwise_sq_dist(np.zeros((3, 2)), np.zeros((2, 3)))


def test_memberships_equal_distances_are_uniform():
    mu = entropy_memberships(np.full((2, 4), 3.7), sigma=0.5)
    np.testing.assert_allclose(mu, 0.25, atol=1e-15)


def test_memberships_two_thirds():
    sigma = 0.8
    mu = entropy_memberships(np.array([[0.0, math.log(2) * sigma]]), sigma)
    np.testing.assert_allclose(mu, [[2 / 3, 1 / 3]], atol=1e-12)


def test_memberships_saturate_without_overflow():
    mu = entropy_memberships(np.array([[0.0, 1e6], [1e300, 0.0]]), sigma=1.0)
    assert np.all(np.isfinite(mu))
    np.testing.assert_allclose(mu.sum(axis=1), 1.0, atol=1e-12)
    assert mu[0, 0] == pytest.approx(1.0) and mu[1, 1] == pytest.approx(1.0)


@pytest.mark.parametrize("form,expected", [
    ("d2_over_sigma", 1.0), ("d2_over_sigma_sq", 0.5), ("raw_d2", 2.0)])
def test_exponent_forms(form, expected):
    # with sigma = 2 and d2 gap 2, the exponent gap is 1, 0.5 or 2
    mu = entropy_memberships(np.array([[0.0, 2.0]]), 2.0, form)
    assert mu[0, 1] / mu[0, 0] == pytest.approx(math.exp(-expected))


def test_unknown_exponent_form():
    with pytest.raises(ValueError):
        entropy_memberships(np.zeros((1, 2)), 1.0, "d2_over_pi")


@settings(max_examples=60, deadline=None)
@given(arrays(float, (5, 3), elements=st.floats(0, 50)), st.floats(-100, 100),
       st.floats(0.05, 10))
def test_memberships_shift_invariant(d2, shift, sigma):
    a = entropy_memberships(d2, sigma)
    b = entropy_memberships(d2 + shift, sigma)
    np.testing.assert_allclose(a, b, atol=1e-12)


def test_f1_examples():
    d2 = np.array([[0.0, 2.0], [2.0, 0.0]])
    assert objective_f1(d2, np.full((2, 2), 0.5)) == 2.0
    crisp = np.array([[1.0, 0.0], [0.0, 1.0]])
    assert objective_f1(d2, crisp) == 0.0
    d2 = np.array([[1.0, 4.0], [9.0, 0.25], [2.0, 3.0]])
    crisp = np.eye(2)[[0, 1, 0]]
    assert objective_f1(d2, crisp) == pytest.approx(1.0 + 0.25 + 2.0)


def test_f2_examples():
    assert objective_f2(np.eye(3)) == 0.0
    assert objective_f2(np.full((4, 3), 1 / 3)) == pytest.approx(4 * math.log(3), abs=1e-12)
    assert objective_f2(np.array([[0.5, 0.5]])) == pytest.approx(0.6931, abs=1e-4)


def test_sigma_examples():
    assert sigma_heuristic(np.array([[0.0], [1.0], [2.0], [3.0]])) == pytest.approx(1.0)
    angles = np.arange(8) * np.pi / 4
    circle = np.column_stack([np.cos(angles), np.sin(angles)])
    assert sigma_heuristic(circle) == pytest.approx(1.0)
    assert sigma_heuristic(np.full((5, 2), 7.0)) == 1.0


def test_single_cluster_has_zero_entropy():
    ds = Dataset(np.random.default_rng(0).normal(size=(20, 2)))
    g = evaluate(np.array([0.1, -0.2]), ds, sigma=1.0)
    assert g.g2 == 0.0


def test_duplicate_centers_give_uniform_memberships():
    ds = Dataset(np.random.default_rng(1).normal(size=(10, 2)))
    g = evaluate(np.tile([0.3, 0.3], 3), ds, sigma=0.7)
    assert g.g2 == pytest.approx(-10 * math.log(3), abs=1e-12)


def test_true_means_beat_random_chromosomes():
    ld = builtin("proximity1", seed=0)
    # normalize with the same affine map that will be applied to the means
    lo, hi = ld.points.min(axis=0), ld.points.max(axis=0)
    ds = normalize_minmax(ld.dataset)
    means = np.array([comp.mean for comp in BUILTIN_SPECS["proximity1"].components])
    genes = (2 * (means - lo) / (hi - lo) - 1).ravel()
    problem = ECMProblem(ds, 4)
    best = problem(genes).g1
    rng = np.random.default_rng(7)
    lo_b, hi_b = problem.bounds
    for _ in range(100):
        assert best < problem(lo_b + rng.random(lo_b.size) * (hi_b - lo_b)).g1
    assert problem.n_evals == 101


def test_evaluate_deterministic_and_bounded():
    ld = builtin("spread3", seed=4)
    ds = normalize_minmax(ld.dataset)
    problem = ECMProblem(ds, 4)
    lo, hi = problem.bounds
    rng = np.random.default_rng(3)
    for _ in range(20):
        x = lo + rng.random(lo.size) * (hi - lo)
        a, b = problem(x), problem(x.copy())
        assert a == b
        assert a.g1 >= 0
        assert -ds.n * math.log(4) - 1e-9 <= a.g2 <= 0


def test_chromosome_bounds_tile_feature_ranges():
    ds = Dataset(np.array([[0.0, -2.0], [1.0, 5.0], [0.5, 0.0]]))
    lo, hi = chromosome_bounds(ds, 3)
    np.testing.assert_array_equal(lo, [0, -2] * 3)
    np.testing.assert_array_equal(hi, [1, 5] * 3)


def test_problem_memberships_match_softmax():
    ds = Dataset(np.array([[0.0, 0.0], [1.0, 1.0], [2.0, 0.0]]))
    problem = ECMProblem(ds, 2, sigma=0.5)
    genes = np.array([0.0, 0.0, 2.0, 0.0])
    mu = problem.memberships(genes)
    d2 = pairwise_sq_dist(ds.points, genes.reshape(2, 2))
    np.testing.assert_allclose(mu, entropy_memberships(d2, 0.5))


@pytest.mark.parametrize("instance", range(50))
def test_objectives_conflict_on_membership_grid(instance):
    x, v = conflict_instance(1000 + instance)
    d2 = pairwise_sq_dist(x, v)
    min_f1, max_f2 = grid_extremes(d2)
    assert objective_f2(min_f1) == 0.0
    assert objective_f1(d2, min_f1) == pytest.approx(np.sum(d2.min(axis=1)), abs=1e-12)
    assert np.all(np.abs(max_f2 - 1 / v.shape[0]) <= GRID_STEP)
    assert objective_f1(d2, max_f2) > objective_f1(d2, min_f1)
