"""External validation (ARI) and Pareto-front quality metrics."""

from __future__ import annotations

from typing import Callable, Sequence

import numpy as np

from .data import hard_assign
from .errors import EmptyFront, LengthMismatch, TooFewPoints


def _comb2(n):
    n = np.asarray(n, dtype=float)
    return n * (n - 1) / 2.0


def contingency_table(a, b) -> np.ndarray:
    _, ai = np.unique(np.asarray(a), return_inverse=True)
    _, bi = np.unique(np.asarray(b), return_inverse=True)
    table = np.zeros((ai.max() + 1, bi.max() + 1), dtype=np.int64)
    np.add.at(table, (ai, bi), 1)
    return table


def adjusted_rand_index(a, b) -> float:
    """Hubert-Arabie adjusted Rand index; 0 when the chance-corrected denominator vanishes."""
    a = np.asarray(a).ravel()
    b = np.asarray(b).ravel()
    if a.size != b.size:
        raise LengthMismatch("label sequences differ in length")
    if a.size < 2:
        raise LengthMismatch("ARI needs at least two points")
    table = contingency_table(a, b)
    index = _comb2(table).sum()
    sum_a = _comb2(table.sum(axis=1)).sum()
    sum_b = _comb2(table.sum(axis=0)).sum()
    expected = sum_a * sum_b / _comb2(a.size)
    max_index = 0.5 * (sum_a + sum_b)
    if max_index - expected == 0:
        return 0.0
    return float((index - expected) / (max_index - expected))


def max_ari_over_front(memberships: Sequence[np.ndarray] | Callable[[int], np.ndarray],
                       truth, size: int | None = None) -> tuple[float, int]:
    """Best ARI against ``truth`` over the members of a front (first index on ties).

    ``memberships`` is either a sequence of membership matrices or a callable
    returning the matrix of member ``i`` (with ``size`` members).
    """
    if callable(memberships):
        if not size:
            raise EmptyFront("front is empty")
        get, k = memberships, size
    else:
        if len(memberships) == 0:
            raise EmptyFront("front is empty")
        get, k = memberships.__getitem__, len(memberships)
    best, best_i = -np.inf, -1
    for i in range(k):
        score = adjusted_rand_index(hard_assign(get(i)), truth)
        if score > best:
            best, best_i = score, i
    return float(best), best_i


def schott_spacing(front_objs) -> float:
    """Schott's spacing with L1 nearest-neighbour gaps and a 1/(K-1) variance."""
    f = np.asarray(front_objs, dtype=float)
    k = f.shape[0]
    if k < 2:
        raise TooFewPoints("spacing needs at least two points")
    dist = np.abs(f[:, None, :] - f[None, :, :]).sum(axis=2)
    np.fill_diagonal(dist, np.inf)
    d = dist.min(axis=1)
    return float(np.sqrt(np.sum((d.mean() - d) ** 2) / (k - 1)))


def shift_to_positive(*fronts) -> tuple[list[np.ndarray], np.ndarray]:
    """Translate fronts jointly so every coordinate is at least 1; also return the offset applied."""
    arrs = [np.asarray(f, dtype=float).reshape(-1, 2) for f in fronts]
    if any(a.shape[0] == 0 for a in arrs):
        raise EmptyFront("cannot shift an empty front")
    offset = 1.0 - np.vstack(arrs).min(axis=0)
    return [a + offset for a in arrs], offset


def epsilon_indicator(candidate, control, shift: bool = True) -> float:
    """Multiplicative epsilon indicator of ``candidate`` relative to ``control``.

    With ``shift`` (the default) both fronts are first translated jointly so
    that all coordinates are >= 1. Values below 1 mean the candidate
    dominates the control.
    """
    if shift:
        (cand, ctrl), _ = shift_to_positive(candidate, control)
    else:
        cand = np.asarray(candidate, dtype=float).reshape(-1, 2)
        ctrl = np.asarray(control, dtype=float).reshape(-1, 2)
        if cand.shape[0] == 0 or ctrl.shape[0] == 0:
            raise EmptyFront("fronts must be non-empty")
    ratios = np.max(cand[None, :, :] / ctrl[:, None, :], axis=2)
    return float(np.max(np.min(ratios, axis=1)))
