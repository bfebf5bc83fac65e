"""Dominance, non-dominated sorting and the ParetoFront container."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import EmptyFront


def dominates(a, b) -> bool:
    """True iff ``a`` is no worse than ``b`` everywhere and strictly better somewhere (minimization)."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    return bool(np.all(a <= b) and np.any(a < b))


def dominance_matrix(objs: np.ndarray) -> np.ndarray:
    """Boolean matrix ``D[i, j]`` = point i dominates point j."""
    f = np.asarray(objs, dtype=float)
    le = np.all(f[:, None, :] <= f[None, :, :], axis=2)
    lt = np.any(f[:, None, :] < f[None, :, :], axis=2)
    return le & lt


def non_dominated_sort(objs) -> list[list[int]]:
    """Partition point indices into successive non-dominated fronts.

    Indices within a front are in ascending order.
    """
    if len(objs) == 0:
        return []
    f = np.asarray(objs, dtype=float).reshape(len(objs), -1)
    n = f.shape[0]
    dom = dominance_matrix(f)
    n_dominators = dom.sum(axis=0)
    remaining = np.ones(n, dtype=bool)
    fronts = []
    while remaining.any():
        current = np.flatnonzero(remaining & (n_dominators == 0))
        fronts.append(current.tolist())
        remaining[current] = False
        n_dominators = n_dominators - dom[current].sum(axis=0)
    return fronts


def unique_nondominated(objs: np.ndarray) -> np.ndarray:
    """Indices of the non-dominated points, keeping the first of any duplicate objective pairs."""
    f = np.asarray(objs, dtype=float)
    if f.shape[0] == 0:
        return np.array([], dtype=int)
    first = non_dominated_sort(f)[0]
    seen = set()
    keep = []
    for i in first:
        key = tuple(f[i])
        if key not in seen:
            seen.add(key)
            keep.append(i)
    return np.array(keep, dtype=int)


@dataclass
class ParetoFront:
    """A set of mutually non-dominated solutions.

    Attributes:
        genes: K x L chromosomes.
        objectives: K x 2 objective pairs (minimized) used by the optimizer.
        info: run diagnostics (evaluation count, parameters, ...).
    """

    genes: np.ndarray
    objectives: np.ndarray
    info: dict = field(default_factory=dict)

    def __post_init__(self):
        self.genes = np.atleast_2d(np.asarray(self.genes, dtype=float))
        self.objectives = np.asarray(self.objectives, dtype=float).reshape(-1, 2)
        if self.genes.shape[0] != self.objectives.shape[0]:
            raise ValueError("genes and objectives must have the same number of rows")

    def __len__(self) -> int:
        return self.objectives.shape[0]

    def sorted_by_g1(self) -> "ParetoFront":
        order = np.lexsort((self.objectives[:, 1], self.objectives[:, 0]))
        return ParetoFront(self.genes[order], self.objectives[order], dict(self.info))

    @classmethod
    def from_population(cls, genes: np.ndarray, objectives: np.ndarray, info=None) -> "ParetoFront":
        """Non-dominated, de-duplicated subset of a population, sorted by g1."""
        keep = unique_nondominated(objectives)
        if keep.size == 0:
            raise EmptyFront("population is empty")
        return cls(np.asarray(genes)[keep], np.asarray(objectives)[keep], info or {}).sorted_by_g1()
