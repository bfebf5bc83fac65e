"""Two-objective NSGA-II on box-bounded real vectors."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from typing import Callable, Sequence

import numpy as np

from .errors import InvalidParams
from .pareto import ParetoFront, dominates, non_dominated_sort

__all__ = [
    "Nsga2Params", "dominates", "non_dominated_sort", "crowding_distance", "sbx_beta",
    "sbx_crossover", "polynomial_delta", "polynomial_mutation", "binary_tournament",
    "rank_population", "nsga2_run",
]

Evaluator = Callable[[np.ndarray], Sequence[float]]


@dataclass(frozen=True)
class Nsga2Params:
    pop: int = 50
    fe_budget: int = 5000
    pool: float = 0.5
    tour: int = 2
    mu_sbx: float = 20.0
    mum: float = 20.0
    seed: int = 0
    # per-gene probabilities; mutation_rate None means 1 / chromosome length
    crossover_gene_prob: float = 0.5
    mutation_rate: float | None = None

    def __post_init__(self):
        if self.pop < 2 or self.pop % 2:
            raise InvalidParams("pop must be a positive even integer")
        if not 0 < self.pool <= 1:
            raise InvalidParams("pool must lie in (0, 1]")
        if not 2 <= self.tour <= self.pop:
            raise InvalidParams("tour must satisfy 2 <= tour <= pop")
        if not (self.mu_sbx > 0 and self.mum > 0):
            raise InvalidParams("distribution indices must be > 0")
        if self.fe_budget < self.pop:
            raise InvalidParams("fe_budget must be >= pop")
        if self.mutation_rate is not None and not 0 <= self.mutation_rate <= 1:
            raise InvalidParams("mutation_rate must lie in [0, 1]")

    @property
    def n_offspring(self) -> int:
        n = max(2, round(self.pool * self.pop))
        return n + (n % 2)


def crowding_distance(front_objs) -> np.ndarray:
    """Crowding distance of each member of one front; boundary members get +inf."""
    f = np.asarray(front_objs, dtype=float).reshape(len(front_objs), -1)
    k, n_obj = f.shape
    dist = np.zeros(k)
    if k <= 2:
        dist[:] = np.inf
        return dist
    for m in range(n_obj):
        order = np.argsort(f[:, m], kind="stable")
        vals = f[order, m]
        dist[order[0]] = dist[order[-1]] = np.inf
        span = vals[-1] - vals[0]
        if span <= 0:
            continue
        dist[order[1:-1]] += (vals[2:] - vals[:-2]) / span
    return dist


def rank_population(objs) -> tuple[np.ndarray, np.ndarray]:
    """Front rank (1-based) and crowding distance for every member."""
    f = np.asarray(objs, dtype=float)
    rank = np.empty(len(f), dtype=int)
    crowd = np.empty(len(f))
    for r, idx in enumerate(non_dominated_sort(f), start=1):
        rank[idx] = r
        crowd[idx] = crowding_distance(f[idx])
    return rank, crowd


def sbx_beta(u, eta: float):
    """Simulated-binary spread factor for uniform draw(s) ``u``."""
    u = np.asarray(u, dtype=float)
    with np.errstate(divide="ignore"):
        return np.where(
            u <= 0.5,
            (2.0 * u) ** (1.0 / (eta + 1.0)),
            (1.0 / (2.0 * (1.0 - u))) ** (1.0 / (eta + 1.0)),
        )


def sbx_crossover(p1, p2, mu_sbx: float, rng: np.random.Generator, lo=None, hi=None,
                  gene_prob: float = 0.5) -> tuple[np.ndarray, np.ndarray]:
    """Simulated binary crossover of two parents; children are clamped to ``[lo, hi]``."""
    p1 = np.asarray(p1, dtype=float)
    p2 = np.asarray(p2, dtype=float)
    apply = rng.random(p1.size) < gene_prob
    beta = np.where(apply, sbx_beta(rng.random(p1.size), mu_sbx), 1.0)
    c1 = 0.5 * ((1 + beta) * p1 + (1 - beta) * p2)
    c2 = 0.5 * ((1 - beta) * p1 + (1 + beta) * p2)
    if lo is not None:
        c1, c2 = np.clip(c1, lo, hi), np.clip(c2, lo, hi)
    return c1, c2


def polynomial_delta(u, eta: float):
    """Normalized polynomial-mutation step in [-1, 1] for uniform draw(s) ``u``."""
    u = np.asarray(u, dtype=float)
    return np.where(
        u < 0.5,
        (2.0 * u) ** (1.0 / (eta + 1.0)) - 1.0,
        1.0 - (2.0 * (1.0 - u)) ** (1.0 / (eta + 1.0)),
    )


def polynomial_mutation(ch, mum: float, rate: float, rng: np.random.Generator,
                        lo, hi) -> np.ndarray:
    """Perturb each gene with probability ``rate`` by ``delta * (hi - lo)``, then clamp."""
    ch = np.asarray(ch, dtype=float)
    lo = np.broadcast_to(np.asarray(lo, dtype=float), ch.shape)
    hi = np.broadcast_to(np.asarray(hi, dtype=float), ch.shape)
    mask = rng.random(ch.size) < rate
    delta = polynomial_delta(rng.random(ch.size), mum)
    return np.clip(np.where(mask, ch + delta * (hi - lo), ch), lo, hi)


def binary_tournament(rank, crowding, tour: int, rng: np.random.Generator) -> int:
    """Index of the tournament winner among ``tour`` members sampled without replacement.

    Lower rank wins, then larger crowding distance, then earlier draw.
    """
    rank = np.asarray(rank)
    crowding = np.asarray(crowding)
    contestants = rng.choice(rank.size, size=tour, replace=False)
    best = contestants[0]
    for c in contestants[1:]:
        if rank[c] < rank[best] or (rank[c] == rank[best] and crowding[c] > crowding[best]):
            best = c
    return int(best)


def _environmental_selection(objs: np.ndarray, n: int) -> np.ndarray:
    chosen: list[int] = []
    for front in non_dominated_sort(objs):
        if len(chosen) + len(front) <= n:
            chosen.extend(front)
            if len(chosen) == n:
                break
            continue
        cd = crowding_distance(objs[front])
        order = np.argsort(-cd, kind="stable")
        chosen.extend(np.asarray(front)[order[: n - len(chosen)]].tolist())
        break
    return np.array(chosen, dtype=int)


def nsga2_run(evaluator: Evaluator, bounds, p: Nsga2Params,
              callback: Callable[[int, np.ndarray, np.ndarray], None] | None = None) -> ParetoFront:
    """Run NSGA-II until at least ``p.fe_budget`` evaluations have been spent.

    Each generation creates ``p.n_offspring`` children by tournament
    selection, SBX and polynomial mutation, then keeps the best ``p.pop`` of
    parents and children by (rank, crowding). The last generation may
    overshoot the budget by fewer than ``p.n_offspring`` evaluations.

    Args:
        evaluator: maps a chromosome to its two minimized objectives.
        bounds: (lo, hi) arrays of per-gene box bounds.
        p: engine parameters.
        callback: called as ``callback(generation, genes, objectives)`` after
            initialization (generation 0) and after every selection step.

    Returns:
        The de-duplicated first front of the final population, sorted by g1.
    """
    lo, hi = (np.asarray(b, dtype=float) for b in bounds)
    if lo.shape != hi.shape or lo.ndim != 1 or np.any(hi < lo):
        raise InvalidParams("bounds must be two equal-length vectors with lo <= hi")
    rng = np.random.default_rng(p.seed)
    n_genes = lo.size
    rate = 1.0 / n_genes if p.mutation_rate is None else p.mutation_rate

    X = lo + rng.random((p.pop, n_genes)) * (hi - lo)
    F = np.array([evaluator(x) for x in X], dtype=float)
    n_evals = p.pop
    gen = 0
    if callback:
        callback(gen, X, F)

    while n_evals < p.fe_budget:
        rank, crowd = rank_population(F)
        parents = [binary_tournament(rank, crowd, p.tour, rng) for _ in range(p.n_offspring)]
        kids = []
        for a, b in zip(parents[0::2], parents[1::2]):
            c1, c2 = sbx_crossover(X[a], X[b], p.mu_sbx, rng, lo, hi, p.crossover_gene_prob)
            kids.append(polynomial_mutation(c1, p.mum, rate, rng, lo, hi))
            kids.append(polynomial_mutation(c2, p.mum, rate, rng, lo, hi))
        Xo = np.array(kids)
        Fo = np.array([evaluator(x) for x in Xo], dtype=float)
        n_evals += len(Xo)

        Xa = np.vstack([X, Xo])
        Fa = np.vstack([F, Fo])
        keep = _environmental_selection(Fa, p.pop)
        X, F = Xa[keep], Fa[keep]
        gen += 1
        if callback:
            callback(gen, X, F)

    info = {"engine": "nsga2", "n_evals": n_evals, "generations": gen, "params": asdict(p)}
    return ParetoFront.from_population(X, F, info)


def budget_bound(p: Nsga2Params) -> int:
    """Upper bound on evaluator calls for a run with these parameters."""
    extra = max(0, math.ceil((p.fe_budget - p.pop) / p.n_offspring)) * p.n_offspring
    return p.pop + extra
