"""ECM objectives, entropy memberships and chromosome evaluation."""

from __future__ import annotations

from typing import NamedTuple

import numpy as np

from .data import Dataset, check_memberships
from .errors import DimensionMismatch

SIGMA_REL_FLOOR = 1e-12
EXPONENT_FORMS = ("d2_over_sigma", "d2_over_sigma_sq", "raw_d2")


class ObjectivePair(NamedTuple):
    """Both objectives in minimized form: ``g1 = f1``, ``g2 = -f2``."""

    g1: float
    g2: float


def pairwise_sq_dist(points: np.ndarray, centers: np.ndarray) -> np.ndarray:
    """N x c matrix of squared Euclidean distances."""
    x = np.asarray(points, dtype=float)
    v = np.asarray(centers, dtype=float)
    if x.ndim != 2 or v.ndim != 2 or x.shape[1] != v.shape[1]:
        raise DimensionMismatch(f"points {x.shape} and centers {v.shape} disagree on d")
    diff = x[:, None, :] - v[None, :, :]
    return np.einsum("ijk,ijk->ij", diff, diff)


def _scaled(d2: np.ndarray, sigma: float, exponent_form: str) -> np.ndarray:
    if exponent_form == "d2_over_sigma":
        return d2 / sigma
    if exponent_form == "d2_over_sigma_sq":
        return d2 / (sigma * sigma)
    if exponent_form == "raw_d2":
        return d2
    raise ValueError(f"unknown exponent_form {exponent_form!r}; expected one of {EXPONENT_FORMS}")


def entropy_memberships(
    d2: np.ndarray, sigma: float, exponent_form: str = "d2_over_sigma"
) -> np.ndarray:
    """Row-wise softmax of ``-d2 / sigma``.

    The row minimum is subtracted before exponentiation, so rows never
    overflow and the nearest center always has a factor of exactly 1.
    """
    if not sigma > 0:
        raise ValueError("sigma must be positive")
    a = _scaled(np.asarray(d2, dtype=float), sigma, exponent_form)
    e = np.exp(-(a - a.min(axis=1, keepdims=True)))
    return check_memberships(e / e.sum(axis=1, keepdims=True))


def objective_f1(d2: np.ndarray, mu: np.ndarray) -> float:
    """Membership-weighted sum of squared distances (compactness)."""
    return float(np.sum(mu * d2))


def objective_f2(mu: np.ndarray) -> float:
    """Entropy of the memberships in nats, with 0 log 0 = 0."""
    mu = np.asarray(mu, dtype=float)
    pos = mu > 0
    return float(-np.sum(mu[pos] * np.log(mu[pos])))


def sigma_heuristic(data: Dataset | np.ndarray) -> float:
    """Population std of squared distances from the points to their mean.

    Falls back to the mean squared distance when the std is 0 (or pure
    rounding noise, below 1e-12 of that mean), and to 1.0 when the mean is
    0 too.
    """
    x = data.points if hasattr(data, "points") else np.asarray(data, dtype=float)
    sq = np.sum((x - x.mean(axis=0)) ** 2, axis=1)
    mean = float(np.mean(sq))
    sigma = float(np.std(sq))
    if sigma > SIGMA_REL_FLOOR * mean:
        return sigma
    return mean if mean > 0 else 1.0


def genes_to_centers(genes: np.ndarray, d: int) -> np.ndarray:
    genes = np.asarray(genes, dtype=float)
    if genes.ndim != 1 or genes.size % d:
        raise DimensionMismatch(f"chromosome of length {genes.size} is not a multiple of d={d}")
    return genes.reshape(-1, d)


def chromosome_bounds(data: Dataset, c: int) -> tuple[np.ndarray, np.ndarray]:
    """Per-gene box bounds: the per-feature data range repeated for each center."""
    lo, hi = data.bounds()
    return np.tile(lo, c), np.tile(hi, c)


class ECMProblem:
    """Evaluates chromosomes (flattened centers) under the ECM objective pair.

    Calling the instance returns ``(g1, g2)`` and increments ``n_evals``.
    """

    def __init__(self, data: Dataset, c: int, sigma: float | None = None,
                 exponent_form: str = "d2_over_sigma"):
        if c < 1:
            raise ValueError("c must be >= 1")
        self.data = data
        self.c = c
        self.sigma = sigma_heuristic(data) if sigma is None else float(sigma)
        if exponent_form not in EXPONENT_FORMS:
            raise ValueError(f"unknown exponent_form {exponent_form!r}")
        self.exponent_form = exponent_form
        self.n_evals = 0

    @property
    def bounds(self) -> tuple[np.ndarray, np.ndarray]:
        return chromosome_bounds(self.data, self.c)

    def memberships(self, genes: np.ndarray) -> np.ndarray:
        v = genes_to_centers(genes, self.data.d)
        d2 = pairwise_sq_dist(self.data.points, v)
        return entropy_memberships(d2, self.sigma, self.exponent_form)

    def __call__(self, genes: np.ndarray) -> ObjectivePair:
        self.n_evals += 1
        return evaluate(genes, self.data, self.sigma, self.exponent_form)


def evaluate(genes: np.ndarray, data: Dataset, sigma: float,
             exponent_form: str = "d2_over_sigma") -> ObjectivePair:
    """ECM objective pair (f1, -f2) for a chromosome of concatenated centers."""
    v = genes_to_centers(genes, data.d)
    d2 = pairwise_sq_dist(data.points, v)
    mu = entropy_memberships(d2, sigma, exponent_form)
    return ObjectivePair(objective_f1(d2, mu), 0.0 - objective_f2(mu))
