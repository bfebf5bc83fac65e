import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import pareto_fronts

from ecm.errors import EmptyFront, InvalidParams
from ecm.fuzzy import ECMProblem
from ecm.data import normalize_minmax
from ecm.datagen import builtin
from ecm.nsga2 import (
    Nsga2Params, binary_tournament, crowding_distance, dominates, non_dominated_sort,
    nsga2_run, polynomial_delta, polynomial_mutation, rank_population, sbx_beta, sbx_crossover,
)
from ecm.nsga2 import budget_bound
from ecm.pareto import ParetoFront


class Scripted:
    """Stand-in generator that replays fixed uniform draws."""

    def __init__(self, *draws):
        self.draws = [np.asarray(d, dtype=float) for d in draws]

    def random(self, size=None):
        return self.draws.pop(0)

    def choice(self, n, size, replace):
        return self.draws.pop(0).astype(int)


def test_dominates_examples():
    assert dominates((1, 1), (2, 2))
    assert not dominates((1, 3), (3, 1))
    assert not dominates((3, 1), (1, 3))
    assert not dominates((1, 1), (1, 1))
    assert dominates((1, 2), (1, 3))


def test_sort_examples():
    assert non_dominated_sort([(1, 1), (2, 2), (0, 3), (3, 0)]) == [[0, 2, 3], [1]]
    assert non_dominated_sort([(2, 2)] * 4) == [[0, 1, 2, 3]]
    assert non_dominated_sort([(1, 1), (2, 2), (3, 3)]) == [[0], [1], [2]]
    assert non_dominated_sort(np.empty((0, 2))) == []


def test_sort_matches_bruteforce_oracle():
    rng = np.random.default_rng(2024)
    for _ in range(200):
        n = int(rng.integers(1, 21))
        # small integer grid so ties and duplicates actually occur
        pts = rng.integers(0, 6, size=(n, 2)).tolist()
        assert non_dominated_sort(np.array(pts, dtype=float)) == pareto_fronts(pts)


def test_crowding_examples():
    assert np.all(np.isinf(crowding_distance([(0, 1), (1, 0)])))
    cd = crowding_distance([(0, 4), (1, 2), (4, 0)])
    assert np.isinf(cd[0]) and np.isinf(cd[2])
    assert cd[1] == pytest.approx(2.0)
    cd = crowding_distance([(0, 2), (1, 1), (2, 0)])
    assert cd[1] == pytest.approx(2.0)


def test_crowding_constant_objective_contributes_nothing():
    cd = crowding_distance([(0, 5), (1, 5), (3, 5)])
    assert cd[1] == pytest.approx((3 - 0) / 3)


def test_sbx_examples():
    assert sbx_beta(0.5, 20) == pytest.approx(1.0)
    beta = sbx_beta(0.3, 20)
    assert beta == pytest.approx(0.6 ** (1 / 21))
    # the rounded hand values are loose in the fifth decimal
    assert beta == pytest.approx(0.97595, abs=5e-5)
    c1, c2 = sbx_crossover([0.0], [1.0], 20, Scripted([0.0], [0.3]))
    assert c1[0] == pytest.approx((1 - beta) / 2) and c2[0] == pytest.approx((1 + beta) / 2)
    assert c1[0] == pytest.approx(0.01203, abs=5e-5)
    assert c2[0] == pytest.approx(0.98797, abs=5e-5)


def test_sbx_identity_cases():
    c1, c2 = sbx_crossover([0.2, 0.7], [0.9, 0.1], 20, Scripted([0.0, 0.0], [0.5, 0.5]))
    np.testing.assert_allclose(c1, [0.2, 0.7])
    np.testing.assert_allclose(c2, [0.9, 0.1])
    same = np.array([0.3, 0.4, 0.5])
    c1, c2 = sbx_crossover(same, same, 20, np.random.default_rng(5))
    np.testing.assert_array_equal(c1, same)
    np.testing.assert_array_equal(c2, same)


@settings(max_examples=100, deadline=None)
@given(st.lists(st.floats(-5, 5), min_size=1, max_size=6), st.integers(0, 2**32 - 1))
def test_sbx_children_within_bounds_and_mean_preserved(genes, seed):
    p1 = np.array(genes)
    p2 = p1[::-1].copy()
    c1, c2 = sbx_crossover(p1, p2, 20, np.random.default_rng(seed), -5.0, 5.0)
    assert np.all((c1 >= -5) & (c1 <= 5) & (c2 >= -5) & (c2 <= 5))
    c1u, c2u = sbx_crossover(p1, p2, 20, np.random.default_rng(seed))
    np.testing.assert_allclose(c1u + c2u, p1 + p2, atol=1e-9)


def test_polynomial_mutation_examples():
    assert polynomial_delta(0.5, 20) == 0.0
    assert polynomial_delta(0.0, 20) == -1.0
    assert polynomial_delta(0.75, 20) == pytest.approx(1 - 0.5 ** (1 / 21))
    out = polynomial_mutation([0.5], 20, 1.0, Scripted([0.0], [0.75]), 0.0, 1.0)
    assert out[0] == pytest.approx(0.53246, abs=1e-5)
    out = polynomial_mutation([0.4], 20, 1.0, Scripted([0.0], [0.0]), 0.0, 1.0)
    assert out[0] == 0.0


def test_zero_rate_leaves_chromosome_alone():
    ch = np.array([0.1, 0.2, 0.3])
    np.testing.assert_array_equal(polynomial_mutation(ch, 20, 0.0, np.random.default_rng(1), 0, 1), ch)


def test_tournament_rules():
    rank = np.array([1, 2, 1, 1])
    crowd = np.array([0.4, np.inf, np.inf, 0.4])
    assert binary_tournament(rank, crowd, 2, Scripted([1, 0])) == 0
    assert binary_tournament(rank, crowd, 2, Scripted([0, 2])) == 2
    assert binary_tournament(rank, crowd, 2, Scripted([3, 0])) == 3
    assert binary_tournament(rank, crowd, 2, Scripted([0, 3])) == 0


def test_rank_population_shapes():
    rank, crowd = rank_population([(1, 1), (2, 2), (0, 3), (3, 0)])
    assert rank.tolist() == [1, 2, 1, 1]
    assert np.isinf(crowd[1])


def test_params_validation_and_offspring_count():
    assert Nsga2Params().n_offspring == 26
    assert Nsga2Params(pop=10, pool=0.5).n_offspring == 6
    assert Nsga2Params(pop=4, pool=0.1).n_offspring == 2
    for bad in (dict(pop=7), dict(pool=0.0), dict(tour=1), dict(mu_sbx=0), dict(fe_budget=10)):
        with pytest.raises(InvalidParams):
            Nsga2Params(**bad)


def _segment(x):
    return (x[0], 1.0 - x[0])


def test_linear_toy_front_is_spread():
    front = nsga2_run(_segment, (np.zeros(1), np.ones(1)), Nsga2Params(pop=20, fe_budget=600, seed=3))
    g1 = front.objectives[:, 0]
    assert len(np.unique(g1)) >= 10
    assert g1.min() < 0.05 and g1.max() > 0.95


def test_budget_equal_to_pop_returns_initial_front():
    seen = []

    def ev(x):
        seen.append(x.copy())
        return (x[0], (1 - x[0]) ** 2 + x[1])

    front = nsga2_run(ev, (np.zeros(2), np.ones(2)), Nsga2Params(pop=10, fe_budget=10, seed=1))
    init = np.array([ev(x) for x in seen[:10]])
    ref = ParetoFront.from_population(np.array(seen[:10]), init)
    np.testing.assert_array_equal(front.objectives, ref.objectives)
    assert front.info["n_evals"] == 10


def test_front_is_mutually_nondominated_and_elitist():
    ds = normalize_minmax(builtin("proximity2", seed=0).dataset)
    problem = ECMProblem(ds, 4)
    best = []
    front = nsga2_run(problem, problem.bounds, Nsga2Params(fe_budget=1500, seed=9),
                      callback=lambda gen, X, F: best.append(F.min(axis=0)))
    best = np.array(best)
    assert np.all(np.diff(best[:, 0]) <= 0) and np.all(np.diff(best[:, 1]) <= 0)
    f = front.objectives
    assert not any(dominates(a, b) for a in f for b in f)
    assert len(np.unique(f, axis=0)) == len(f)
    assert np.all(np.diff(f[:, 0]) >= 0)


def test_deterministic_and_within_budget():
    ds = normalize_minmax(builtin("spread2", seed=1).dataset)
    runs = []
    for _ in range(2):
        problem = ECMProblem(ds, 4)
        p = Nsga2Params(fe_budget=777, seed=4)
        runs.append(nsga2_run(problem, problem.bounds, p))
        assert problem.n_evals == runs[-1].info["n_evals"] <= p.fe_budget + p.pop
        assert problem.n_evals <= budget_bound(p)
    np.testing.assert_array_equal(runs[0].genes, runs[1].genes)
    np.testing.assert_array_equal(runs[0].objectives, runs[1].objectives)


def test_genes_respect_bounds():
    lo, hi = np.array([-1.0, 0.0]), np.array([0.0, 2.0])
    front = nsga2_run(lambda x: (x[0] ** 2, (x[1] - 5) ** 2), (lo, hi),
                      Nsga2Params(pop=12, fe_budget=300, seed=2))
    assert np.all(front.genes >= lo) and np.all(front.genes <= hi)


def test_bad_bounds_rejected():
    with pytest.raises(InvalidParams):
        nsga2_run(_segment, (np.ones(1), np.zeros(1)), Nsga2Params(pop=4, fe_budget=8))


def test_empty_population_front():
    with pytest.raises(EmptyFront):
        ParetoFront.from_population(np.empty((0, 1)), np.empty((0, 2)))
