"""Alternating-optimization baselines: Fuzzy c-Means and Maximum Entropy Inference."""

from __future__ import annotations

from dataclasses import asdict, dataclass

import numpy as np

from .data import Clustering, Dataset, check_memberships
from .errors import InvalidParams
from .fuzzy import entropy_memberships, objective_f1, objective_f2, pairwise_sq_dist

DEGENERATE_WEIGHT = 1e-12


@dataclass(frozen=True)
class AOParams:
    c: int
    m: float = 2.0
    max_iter: int = 5000
    tol: float = 1e-16
    seed: int = 0

    def __post_init__(self):
        if self.c < 1:
            raise InvalidParams("c must be >= 1")
        if not self.m > 1:
            raise InvalidParams("fuzzifier m must be > 1")
        if not self.tol > 0:
            raise InvalidParams("tol must be > 0")
        if self.max_iter < 1:
            raise InvalidParams("max_iter must be >= 1")


def fcm_membership_update(d2: np.ndarray, m: float) -> np.ndarray:
    """FCM membership step.

    Rows containing zero distances become crisp, with the mass split evenly
    across the zero-distance centers.
    """
    d2 = np.asarray(d2, dtype=float)
    mu = np.empty_like(d2)
    zero = d2 <= 0.0
    singular = zero.any(axis=1)
    if singular.any():
        z = zero[singular].astype(float)
        mu[singular] = z / z.sum(axis=1, keepdims=True)
    reg = ~singular
    if reg.any():
        r = d2[reg]
        r = r / r.min(axis=1, keepdims=True)
        w = r ** (-1.0 / (m - 1.0))
        mu[reg] = w / w.sum(axis=1, keepdims=True)
    return check_memberships(mu)


def _weighted_centers(points, weights, rng, reseeded: list | None = None):
    denom = weights.sum(axis=0)
    centers = (weights.T @ points) / np.where(denom < DEGENERATE_WEIGHT, 1.0, denom)[:, None]
    empty = np.flatnonzero(denom < DEGENERATE_WEIGHT)
    for j in empty:
        centers[j] = points[rng.integers(points.shape[0])]
    if reseeded is not None:
        reseeded.append(empty.size > 0)
    return centers


def _iterate(step, v, max_iter: int, tol: float):
    """Run ``v <- step(v)`` until the largest center shift drops below ``tol``.

    Floating-point rounding often traps the iteration in an exact cycle,
    which would otherwise run to ``max_iter``. Once a state repeats bit for
    bit (with no empty-cluster reseed inside the cycle, so the map is
    deterministic), the state reached at ``max_iter`` is read off the cycle.
    Returns ``(v, n_iter, cycle_period)``.
    """
    seen = {v.tobytes(): 0}
    states, reseeds = [v], [False]
    for n_iter in range(1, max_iter + 1):
        flag = []
        v_new = step(v, flag)
        shift = float(np.max(np.abs(v_new - v)))
        v = v_new
        if shift < tol:
            return v, n_iter, 0
        states.append(v)
        reseeds.append(bool(flag and flag[0]))
        first = seen.setdefault(v.tobytes(), n_iter)
        if first != n_iter and not any(reseeds[first + 1:]):
            period = n_iter - first
            cycle = states[first + 1:]
            return cycle[(max_iter - n_iter) % period - 1], max_iter, period
    return v, max_iter, 0


def fcm_center_update(points: np.ndarray, mu: np.ndarray, m: float,
                      rng: np.random.Generator | None = None) -> np.ndarray:
    """Weighted mean of the points with weights ``mu ** m``.

    A center whose total weight is below 1e-12 is re-seeded to a random data
    point drawn from ``rng``.
    """
    rng = np.random.default_rng(0) if rng is None else rng
    return _weighted_centers(np.asarray(points, dtype=float), np.asarray(mu) ** m, rng)


def _fcm_step(x, m, rng, history):
    def step(v, reseeded):
        mu = fcm_membership_update(pairwise_sq_dist(x, v), m)
        v_new = _weighted_centers(x, mu ** m, rng, reseeded)
        history.append(fcm_cost(pairwise_sq_dist(x, v_new), mu, m))
        return v_new
    return step


def fcm_cost(d2: np.ndarray, mu: np.ndarray, m: float) -> float:
    return float(np.sum(mu ** m * d2))


def _init_centers(points: np.ndarray, c: int, rng: np.random.Generator) -> np.ndarray:
    lo, hi = points.min(axis=0), points.max(axis=0)
    return lo + rng.random((c, points.shape[1])) * (hi - lo)


def _check_c(c: int, n: int):
    if c < 1 or c > n:
        raise InvalidParams(f"need 1 <= c <= N, got c={c}, N={n}")


def fcm_fit(data: Dataset, p: AOParams) -> Clustering:
    """Fuzzy c-Means by alternating optimization from random centers.

    Stops when no center coordinate moves by ``p.tol`` or more, or after
    ``p.max_iter`` iterations (exact rounding cycles are short-circuited to
    the same end state). ``provenance["cost_history"]`` holds J_m after
    every center update actually computed.
    """
    x = data.points
    _check_c(p.c, x.shape[0])
    rng = np.random.default_rng(p.seed)
    history = []
    v, n_iter, period = _iterate(_fcm_step(x, p.m, rng, history), _init_centers(x, p.c, rng),
                                 p.max_iter, p.tol)
    d2 = pairwise_sq_dist(x, v)
    mu = fcm_membership_update(d2, p.m)
    return Clustering(
        centers=v,
        memberships=mu,
        objectives=(objective_f1(d2, mu), 0.0 - objective_f2(mu)),
        provenance={"method": "fcm", "params": asdict(p), "n_iter": n_iter,
                    "cycle_period": period, "cost_history": history},
    )


def mei_fit(data: Dataset, c: int, sigma: float, max_iter: int = 5000, tol: float = 1e-16,
            seed: int = 0, exponent_form: str = "d2_over_sigma") -> Clustering:
    """Maximum Entropy Inference: alternate entropy memberships and weighted means."""
    x = data.points
    _check_c(c, x.shape[0])
    if not sigma > 0:
        raise InvalidParams("sigma must be > 0")
    if not tol > 0 or max_iter < 1:
        raise InvalidParams("need tol > 0 and max_iter >= 1")
    rng = np.random.default_rng(seed)

    def step(v, reseeded):
        mu = entropy_memberships(pairwise_sq_dist(x, v), sigma, exponent_form)
        return _weighted_centers(x, mu, rng, reseeded)

    v, n_iter, period = _iterate(step, _init_centers(x, c, rng), max_iter, tol)
    d2 = pairwise_sq_dist(x, v)
    mu = entropy_memberships(d2, sigma, exponent_form)
    return Clustering(
        centers=v,
        memberships=mu,
        objectives=(objective_f1(d2, mu), 0.0 - objective_f2(mu)),
        provenance={"method": "mei", "params": {"c": c, "sigma": sigma, "max_iter": max_iter,
                                                "tol": tol, "seed": seed,
                                                "exponent_form": exponent_form},
                    "n_iter": n_iter, "cycle_period": period},
    )
