"""Seeded Gaussian-mixture generation, including the proximity/spread benchmark sets.

Normal deviates come from an explicit Box-Muller transform of the uniform
stream of ``numpy.random.Generator(PCG64(seed))``: for each component, in
order, ``count * d`` deviates are produced in pairs from draws
``(u1, u2)`` as ``r cos(2 pi u2), r sin(2 pi u2)`` with
``r = sqrt(-2 ln(1 - u1))``, and laid out row-major (point by point).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .data import Dataset, LabeledDataset
from .errors import InvalidSpec, UnknownName


@dataclass(frozen=True)
class Component:
    mean: tuple[float, ...]
    stdev: tuple[float, ...]
    count: int


@dataclass(frozen=True)
class MixtureSpec:
    components: tuple[Component, ...]

    def __post_init__(self):
        if not self.components:
            raise InvalidSpec("mixture needs at least one component")
        d = len(self.components[0].mean)
        for comp in self.components:
            if len(comp.mean) != d or len(comp.stdev) != d or d == 0:
                raise InvalidSpec("all components must share one positive dimension")
            if any(not s > 0 for s in comp.stdev):
                raise InvalidSpec("standard deviations must be > 0")
            if comp.count < 1:
                raise InvalidSpec("component counts must be positive")

    @property
    def d(self) -> int:
        return len(self.components[0].mean)

    @classmethod
    def of(cls, *components: tuple[Sequence[float], Sequence[float], int]) -> "MixtureSpec":
        return cls(tuple(Component(tuple(map(float, m)), tuple(map(float, s)), int(n))
                         for m, s, n in components))


def box_muller(rng: np.random.Generator, n: int) -> np.ndarray:
    """``n`` standard normal deviates from the generator's uniform stream."""
    pairs = (n + 1) // 2
    u = rng.random((pairs, 2))
    r = np.sqrt(-2.0 * np.log1p(-u[:, 0]))
    theta = 2.0 * np.pi * u[:, 1]
    return np.column_stack([r * np.cos(theta), r * np.sin(theta)]).ravel()[:n]


def gaussian_mixture(spec: MixtureSpec, seed: int) -> LabeledDataset:
    """Sample every component of an axis-aligned Gaussian mixture; labels are component indices."""
    rng = np.random.Generator(np.random.PCG64(seed))
    blocks, labels = [], []
    for k, comp in enumerate(spec.components):
        z = box_muller(rng, comp.count * spec.d).reshape(comp.count, spec.d)
        blocks.append(np.asarray(comp.mean) + z * np.asarray(comp.stdev))
        labels.append(np.full(comp.count, k))
    return LabeledDataset(Dataset(np.vstack(blocks)), np.concatenate(labels))


def _grid4(lo: float, hi: float, first_sd: float = 1.0) -> MixtureSpec:
    return MixtureSpec.of(
        ((lo, lo), (first_sd, first_sd), 100),
        ((lo, hi), (1, 1), 100),
        ((hi, lo), (1, 1), 100),
        ((hi, hi), (1, 1), 100),
    )


BUILTIN_SPECS: dict[str, MixtureSpec] = {
    "proximity1": _grid4(4, 10),
    "proximity2": _grid4(4.5, 9.5),
    "proximity3": _grid4(5, 9),
    # also seen listed as a second "proximity3"
    "proximity4": _grid4(5.5, 8.5),
    "proximity5": _grid4(6, 8),
    "spread1": _grid4(0, 10, 1.0),
    "spread2": _grid4(0, 10, 1.5),
    "spread3": _grid4(0, 10, 2.0),
    "spread4": _grid4(0, 10, 2.5),
    "spread5": _grid4(0, 10, 3.0),
    # three-cluster sets for trade-off selection and parameter sweeps
    "three_separated": MixtureSpec.of(((0, 0), (1, 1), 100), ((10, 0), (1, 1), 100),
                                      ((5, 8.66), (1, 1), 100)),
    "three_slight": MixtureSpec.of(((0, 0), (1, 1), 100), ((4, 0), (1, 1), 100),
                                   ((2, 3.46), (1, 1), 100)),
    "three_high": MixtureSpec.of(((0, 0), (1, 1), 100), ((2.5, 0), (1, 1), 100),
                                 ((1.25, 2.17), (1, 1), 100)),
    "three_two_overlapped": MixtureSpec.of(((0, 0), (1, 1), 100), ((3.5, 0), (1, 1), 100),
                                           ((1.75, 12), (1, 1), 100)),
}

BENCHMARK_SETS = tuple(f"proximity{i}" for i in range(1, 6)) + tuple(f"spread{i}" for i in range(1, 6))


def builtin(name: str, seed: int = 0) -> LabeledDataset:
    """One of the named benchmark mixtures, sampled with ``seed``."""
    try:
        spec = BUILTIN_SPECS[name]
    except KeyError:
        raise UnknownName(f"unknown dataset {name!r}; known: {sorted(BUILTIN_SPECS)}") from None
    return gaussian_mixture(spec, seed)
