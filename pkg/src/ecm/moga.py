"""MOGA comparison formulation: minimize J2 and the Xie-Beni index over center chromosomes.

The original MOGA search internals are not reproduced; the NSGA-II engine
drives the search, so only the objective formulation differs from ECM.
"""

from __future__ import annotations

from typing import NamedTuple

import numpy as np

from .ao import fcm_membership_update
from .data import Dataset
from .fuzzy import genes_to_centers, chromosome_bounds, evaluate, pairwise_sq_dist, sigma_heuristic
from .nsga2 import Nsga2Params, nsga2_run
from .pareto import ParetoFront

DEGENERATE_SEPARATION = 1e-12


class XbObjectivePair(NamedTuple):
    j2: float
    xb: float


def fcm_objective_j2(d2: np.ndarray, mu: np.ndarray) -> float:
    return float(np.sum(np.asarray(mu) ** 2 * d2))


def min_center_separation(centers: np.ndarray) -> float:
    v = np.asarray(centers, dtype=float)
    diff = v[:, None, :] - v[None, :, :]
    sep = np.einsum("ijk,ijk->ij", diff, diff)
    np.fill_diagonal(sep, np.inf)
    return float(sep.min())


def xie_beni(d2: np.ndarray, mu: np.ndarray, centers: np.ndarray, n: int | None = None) -> float:
    """J2 / (N * min squared center separation); +inf when two centers (nearly) coincide."""
    if np.asarray(centers).shape[0] < 2:
        raise ValueError("Xie-Beni needs at least two centers")
    n = np.asarray(d2).shape[0] if n is None else n
    sep = min_center_separation(centers)
    if sep < DEGENERATE_SEPARATION:
        return float("inf")
    return fcm_objective_j2(d2, mu) / (n * sep)


class MOGAProblem:
    """Evaluator returning ``(J2, XB)`` with FCM (m=2) memberships."""

    def __init__(self, data: Dataset, c: int):
        self.data = data
        self.c = c
        self.n_evals = 0

    @property
    def bounds(self):
        return chromosome_bounds(self.data, self.c)

    def memberships(self, genes):
        v = genes_to_centers(genes, self.data.d)
        return fcm_membership_update(pairwise_sq_dist(self.data.points, v), 2.0)

    def __call__(self, genes) -> XbObjectivePair:
        self.n_evals += 1
        v = genes_to_centers(genes, self.data.d)
        d2 = pairwise_sq_dist(self.data.points, v)
        mu = fcm_membership_update(d2, 2.0)
        return XbObjectivePair(fcm_objective_j2(d2, mu), xie_beni(d2, mu, v, self.data.n))


def moga_run(data: Dataset, c: int, params: Nsga2Params, sigma: float | None = None,
             exponent_form: str = "d2_over_sigma") -> ParetoFront:
    """Optimize (J2, XB) with NSGA-II.

    The returned front is the (J2, XB) front; ``info["ecm_objectives"]`` holds
    each member re-scored as (f1, -f2) with entropy memberships at ``sigma``
    so it can be compared against ECM fronts.
    """
    problem = MOGAProblem(data, c)
    front = nsga2_run(problem, problem.bounds, params)
    sigma = sigma_heuristic(data) if sigma is None else sigma
    front.info["engine"] = "moga"
    front.info["ecm_objectives"] = np.array(
        [evaluate(g, data, sigma, exponent_form) for g in front.genes])
    front.info["sigma"] = sigma
    return front
