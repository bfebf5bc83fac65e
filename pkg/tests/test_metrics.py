import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from oracles import pair_counting_ari

from ecm.errors import EmptyFront, LengthMismatch, TooFewPoints
from ecm.metrics import (
    adjusted_rand_index, contingency_table, epsilon_indicator, max_ari_over_front,
    schott_spacing, shift_to_positive,
)

labels = st.lists(st.integers(0, 3), min_size=2, max_size=30)


def test_ari_examples():
    assert adjusted_rand_index([0, 0, 1, 1, 2], [5, 5, 9, 9, 7]) == 1.0
    assert adjusted_rand_index([0, 0, 1, 1], [0, 1, 0, 1]) == pytest.approx(-0.5)
    assert adjusted_rand_index([1, 1, 1, 1], [1, 1, 1, 1]) == 0.0


def test_ari_errors():
    with pytest.raises(LengthMismatch):
        adjusted_rand_index([0, 1], [0, 1, 1])
    with pytest.raises(LengthMismatch):
        adjusted_rand_index([0], [0])


def test_contingency_table():
    np.testing.assert_array_equal(contingency_table([0, 0, 1], ["a", "b", "b"]), [[1, 1], [0, 1]])


def test_ari_matches_pair_counting_oracle():
    rng = np.random.default_rng(99)
    for _ in range(200):
        n = int(rng.integers(2, 13))
        a = rng.integers(0, rng.integers(1, 5), n)
        b = rng.integers(0, rng.integers(1, 5), n)
        assert abs(adjusted_rand_index(a, b) - pair_counting_ari(a, b)) <= 1e-12


@settings(max_examples=100, deadline=None)
@given(labels, st.data())
def test_ari_symmetric_and_relabel_invariant(a, data):
    b = data.draw(st.lists(st.integers(0, 3), min_size=len(a), max_size=len(a)))
    perm = data.draw(st.permutations(range(4)))
    ab = adjusted_rand_index(a, b)
    assert ab == pytest.approx(adjusted_rand_index(b, a), abs=1e-12)
    assert ab == pytest.approx(adjusted_rand_index([perm[v] for v in a], b), abs=1e-12)
    assert ab <= 1.0 + 1e-12


@settings(max_examples=60, deadline=None)
@given(labels)
def test_ari_one_for_identical_partition(a):
    # all-singleton or single-cluster partitions hit the degenerate-denominator rule
    if 1 < len(set(a)) < len(a):
        assert adjusted_rand_index(a, a) == pytest.approx(1.0)


def test_max_ari_over_front_ties_take_first():
    truth = [0, 0, 1, 1]
    perfect = np.eye(2)[[0, 0, 1, 1]]
    worse = np.eye(2)[[0, 1, 1, 1]]
    assert max_ari_over_front([worse, perfect, perfect], truth) == (1.0, 1)
    ari, idx = max_ari_over_front([worse], truth)
    assert idx == 0 and ari == adjusted_rand_index([0, 1, 1, 1], truth)
    assert max_ari_over_front(lambda i: [worse, perfect][i], truth, size=2) == (1.0, 1)
    with pytest.raises(EmptyFront):
        max_ari_over_front([], truth)


def test_max_ari_hand_scored_front():
    truth = [0, 0, 0, 1, 1, 1]
    members = [[0, 1, 0, 1, 0, 1], [0, 0, 0, 1, 1, 0], [0, 0, 1, 1, 1, 1]]
    scores = [adjusted_rand_index(m, truth) for m in members]
    assert scores[1] == scores[2] > scores[0]
    mus = [np.eye(2)[m] for m in members]
    assert max_ari_over_front(mus, truth) == (scores[1], 1)


def test_spacing_examples():
    assert schott_spacing([(0, 3), (1, 2), (2, 1), (3, 0)]) == pytest.approx(0.0, abs=1e-15)
    assert schott_spacing([(0, 1), (5, -2)]) == 0.0
    assert schott_spacing([(0, 0), (1, 0), (3, 0)]) == pytest.approx(math.sqrt(1 / 3))
    assert schott_spacing([(0, 0), (1, 0), (3, 0)]) == pytest.approx(0.5774, abs=1e-4)
    with pytest.raises(TooFewPoints):
        schott_spacing([(1, 1)])


@settings(max_examples=50, deadline=None)
@given(arrays(float, (6, 2), elements=st.floats(-100, 100)), st.floats(-1e3, 1e3))
def test_spacing_translation_invariant(f, t):
    assert schott_spacing(f + t) == pytest.approx(schott_spacing(f), abs=1e-6)


def test_epsilon_examples():
    f = np.array([(1.0, 3.0), (2.0, 2.0), (3.0, 1.0)])
    assert epsilon_indicator(f, f) == 1.0
    assert epsilon_indicator(f * 0.5, f, shift=False) == 0.5
    assert epsilon_indicator([(1, 3), (3, 1)], [(2, 2)], shift=False) == 1.5


def test_shift_makes_coordinates_at_least_one():
    (a, b), offset = shift_to_positive([(0.5, -4.0)], [(2.0, -1.0), (3.0, -7.0)])
    assert min(a.min(), b.min()) == 1.0
    np.testing.assert_allclose(offset, [0.5, 8.0])
    with pytest.raises(EmptyFront):
        shift_to_positive([], [(1, 1)])


@settings(max_examples=60, deadline=None)
@given(arrays(float, (5, 2), elements=st.floats(-50, 50)),
       arrays(float, (5, 2), elements=st.floats(0, 10)))
def test_epsilon_at_most_one_when_candidate_weakly_dominates(control, slack):
    candidate = control - slack
    assert epsilon_indicator(candidate, control) <= 1.0 + 1e-12
