"""Two-objective MOEA/D with Tchebycheff decomposition and DE variation."""

from __future__ import annotations

from dataclasses import asdict, dataclass
from typing import Callable, Sequence

import numpy as np

from .errors import InvalidParams
from .nsga2 import polynomial_mutation
from .pareto import ParetoFront

WEIGHT_EPS = 1e-6

Evaluator = Callable[[np.ndarray], Sequence[float]]


@dataclass(frozen=True)
class MoeadParams:
    pop: int = 50
    T: int = 50
    fe_budget: int = 5000
    F: float = 0.5
    Cr: float = 0.5
    seed: int = 0
    # polynomial mutation after DE; mutation_rate None means 1 / chromosome length
    mum: float = 20.0
    mutation_rate: float | None = None
    # cap on replacements per trial vector; None replaces every improved neighbour
    max_replace: int | None = None
    # "per_weight": one archive member per weight vector; "archive": the whole archive
    output: str = "per_weight"

    def __post_init__(self):
        if self.pop < 2:
            raise InvalidParams("pop must be >= 2")
        if not 2 <= self.T <= self.pop:
            raise InvalidParams("T must satisfy 2 <= T <= pop")
        if not 0 < self.F <= 2:
            raise InvalidParams("F must lie in (0, 2]")
        if not 0 <= self.Cr <= 1:
            raise InvalidParams("Cr must lie in [0, 1]")
        if self.fe_budget < self.pop:
            raise InvalidParams("fe_budget must be >= pop")
        if self.output not in ("per_weight", "archive"):
            raise InvalidParams("output must be 'per_weight' or 'archive'")
        if self.max_replace is not None and self.max_replace < 1:
            raise InvalidParams("max_replace must be >= 1")


def uniform_weights(pop: int, eps: float = WEIGHT_EPS) -> np.ndarray:
    """``pop`` evenly spread weight vectors on the 2-simplex, clamped away from zero."""
    if pop < 2:
        raise InvalidParams("need at least two weight vectors")
    t = np.arange(pop) / (pop - 1)
    w = np.maximum(np.column_stack([t, 1.0 - t]), eps)
    return w / w.sum(axis=1, keepdims=True)


def neighborhoods(weights: np.ndarray, T: int) -> np.ndarray:
    """For every weight vector, the indices of its ``T`` nearest (itself included, ties by index)."""
    w = np.asarray(weights, dtype=float)
    if not 1 <= T <= len(w):
        raise InvalidParams("T must lie in [1, pop]")
    dist = np.linalg.norm(w[:, None, :] - w[None, :, :], axis=2)
    return np.argsort(dist, axis=1, kind="stable")[:, :T]


def tchebycheff(obj, w, z) -> float:
    """Weighted Chebyshev distance of ``obj`` from the ideal point ``z``."""
    return float(np.max(np.asarray(w) * np.abs(np.asarray(obj, dtype=float) - np.asarray(z))))


def de_variation(xi, xj, xl, F: float, Cr: float, rng: np.random.Generator,
                 lo=None, hi=None) -> np.ndarray:
    """DE/rand/1/bin style trial vector with ``xi`` as base; one gene is always mutated."""
    xi = np.asarray(xi, dtype=float)
    mutant = xi + F * (np.asarray(xj, dtype=float) - np.asarray(xl, dtype=float))
    take = rng.random(xi.size) < Cr
    take[rng.integers(xi.size)] = True
    y = np.where(take, mutant, xi)
    if lo is not None:
        y = np.clip(y, lo, hi)
    return y


class _External:
    """External population: mutually non-dominated, no duplicate objective pairs."""

    def __init__(self, n_genes: int):
        self.genes = np.empty((0, n_genes))
        self.objs = np.empty((0, 2))

    def offer(self, x: np.ndarray, f: np.ndarray) -> bool:
        g = self.objs
        le = np.all(g <= f, axis=1)
        if np.any(le & (np.any(g < f, axis=1) | np.all(g == f, axis=1))):
            return False
        keep = ~(np.all(f <= g, axis=1) & np.any(f < g, axis=1))
        self.genes = np.vstack([self.genes[keep], x])
        self.objs = np.vstack([g[keep], f])
        return True


def moead_run(evaluator: Evaluator, bounds, p: MoeadParams,
              callback: Callable[[str, dict], None] | None = None) -> ParetoFront:
    """Run MOEA/D until exactly ``p.fe_budget`` evaluations have been spent.

    Subproblems are visited in index order. For each, two distinct neighbours
    (excluding the subproblem itself) are drawn, a DE trial vector is
    evaluated, the ideal point is updated, every neighbour whose Tchebycheff
    value is strictly worse than the trial's is replaced, and the trial is
    offered to the external population.

    ``callback(event, state)`` is invoked with ``"init"``, ``"ideal"`` and
    ``"replace"`` events; it exists for instrumentation and tests.

    Returns:
        The external population as a ParetoFront sorted by g1.
    """
    lo, hi = (np.asarray(b, dtype=float) for b in bounds)
    if lo.shape != hi.shape or lo.ndim != 1 or np.any(hi < lo):
        raise InvalidParams("bounds must be two equal-length vectors with lo <= hi")
    rng = np.random.default_rng(p.seed)
    rate = 1.0 / lo.size if p.mutation_rate is None else p.mutation_rate
    W = uniform_weights(p.pop)
    B = neighborhoods(W, p.T)

    X = lo + rng.random((p.pop, lo.size)) * (hi - lo)
    FX = np.array([evaluator(x) for x in X], dtype=float)
    n_evals = p.pop
    z = FX.min(axis=0)
    ep = _External(lo.size)
    for x, f in zip(X, FX):
        ep.offer(x, f)
    if callback:
        callback("init", {"z": z.copy(), "X": X, "F": FX})

    gen = 0
    while n_evals < p.fe_budget:
        gen += 1
        for i in range(p.pop):
            if n_evals >= p.fe_budget:
                break
            pool = B[i][B[i] != i]
            if pool.size < 2:
                pool = B[i]
            j, l = rng.choice(pool, size=2, replace=False)
            y = de_variation(X[i], X[j], X[l], p.F, p.Cr, rng, lo, hi)
            if rate > 0:
                y = polynomial_mutation(y, p.mum, rate, rng, lo, hi)
            fy = np.asarray(evaluator(y), dtype=float)
            n_evals += 1

            z_new = np.minimum(z, fy)
            if callback and np.any(z_new < z):
                callback("ideal", {"old": z.copy(), "new": z_new.copy()})
            z = z_new

            nb = rng.permutation(B[i]) if p.max_replace else B[i]
            old = np.max(W[nb] * np.abs(FX[nb] - z), axis=1)
            new = np.max(W[nb] * np.abs(fy - z), axis=1)
            better = np.flatnonzero(new < old)[: p.max_replace]
            for k in better:
                if callback:
                    callback("replace", {"k": int(nb[k]), "old": float(old[k]),
                                         "new": float(new[k])})
            X[nb[better]] = y
            FX[nb[better]] = fy
            ep.offer(y, fy)

    info = {"engine": "moead", "n_evals": n_evals, "generations": gen, "params": asdict(p),
            "ideal_point": z.tolist(), "archive_genes": ep.genes, "archive_objectives": ep.objs,
            "population_genes": X.copy(), "population_objectives": FX.copy()}
    keep = np.arange(len(ep.objs))
    if p.output == "per_weight":
        keep = per_weight_representatives(ep.objs, W, z)
    return ParetoFront(ep.genes[keep], ep.objs[keep], info).sorted_by_g1()


def per_weight_representatives(objs: np.ndarray, weights: np.ndarray, z) -> np.ndarray:
    """Indices of the archive members that are Tchebycheff-best for at least one weight vector."""
    objs = np.asarray(objs, dtype=float)
    g = np.max(weights[:, None, :] * np.abs(objs[None, :, :] - np.asarray(z)), axis=2)
    return np.unique(np.argmin(g, axis=1))
