"""Data containers, CSV ingestion, normalization and hard assignment."""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Sequence

import numpy as np

from .errors import DimensionMismatch, LengthMismatch, ParseError

ROW_SUM_TOL = 1e-9

_check_memberships = False


def set_membership_checks(enabled: bool) -> bool:
    """Toggle the global row-sum assertion on produced membership matrices.

    Returns the previous setting so callers can restore it.
    """
    global _check_memberships
    previous = _check_memberships
    _check_memberships = bool(enabled)
    return previous


def check_memberships(mu: np.ndarray) -> np.ndarray:
    """Run the row-sum assertion if the global hook is enabled; return ``mu``."""
    if _check_memberships:
        sums = mu.sum(axis=1)
        if not np.all(np.abs(sums - 1.0) <= ROW_SUM_TOL):
            worst = int(np.argmax(np.abs(sums - 1.0)))
            raise AssertionError(f"membership row {worst} sums to {sums[worst]!r}")
        if np.any(mu < 0) or np.any(mu > 1 + ROW_SUM_TOL):
            raise AssertionError("membership entries outside [0, 1]")
    return mu


def _frozen(a: Any, ndim: int) -> np.ndarray:
    arr = np.array(a, dtype=float)
    if arr.ndim != ndim:
        raise DimensionMismatch(f"expected a {ndim}-d array, got shape {arr.shape}")
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class Dataset:
    """An N x d matrix of finite reals."""

    points: np.ndarray
    feature_names: tuple[str, ...] | None = None

    def __post_init__(self):
        pts = _frozen(self.points, 2)
        if pts.shape[0] < 1 or pts.shape[1] < 1:
            raise DimensionMismatch(f"dataset must have N >= 1 and d >= 1, got {pts.shape}")
        if not np.all(np.isfinite(pts)):
            raise ValueError("dataset contains non-finite entries")
        if self.feature_names is not None:
            names = tuple(str(n) for n in self.feature_names)
            if len(names) != pts.shape[1]:
                raise DimensionMismatch("feature_names length differs from d")
            object.__setattr__(self, "feature_names", names)
        object.__setattr__(self, "points", pts)

    @property
    def n(self) -> int:
        return self.points.shape[0]

    @property
    def d(self) -> int:
        return self.points.shape[1]

    def bounds(self) -> tuple[np.ndarray, np.ndarray]:
        """Per-feature (min, max) of the points."""
        return self.points.min(axis=0), self.points.max(axis=0)


@dataclass(frozen=True)
class LabeledDataset:
    dataset: Dataset
    labels: np.ndarray

    def __post_init__(self):
        labels = np.asarray(self.labels)
        if labels.ndim != 1 or labels.shape[0] != self.dataset.n:
            raise LengthMismatch("labels length must equal the number of points")
        labels = canonicalize_labels(labels)
        labels.setflags(write=False)
        object.__setattr__(self, "labels", labels)

    @property
    def points(self) -> np.ndarray:
        return self.dataset.points

    @property
    def n_clusters(self) -> int:
        return int(self.labels.max()) + 1


@dataclass(frozen=True)
class Clustering:
    """Result of one clustering run.

    ``objectives`` is the ECM pair (f1, -f2) evaluated on ``memberships``;
    ``provenance`` records method, seed, parameters and run diagnostics.
    """

    centers: np.ndarray
    memberships: np.ndarray
    objectives: tuple[float, float]
    provenance: dict = field(default_factory=dict)

    def labels(self) -> np.ndarray:
        return hard_assign(self.memberships)


def canonicalize_labels(labels: Sequence) -> np.ndarray:
    """Map arbitrary label values to 0..k-1 in order of first appearance."""
    mapping: dict = {}
    out = np.empty(len(labels), dtype=np.int64)
    for i, lab in enumerate(labels):
        key = lab.item() if isinstance(lab, np.generic) else lab
        if key not in mapping:
            mapping[key] = len(mapping)
        out[i] = mapping[key]
    return out


def load_dataset(
    path: str | Path,
    label_column: int | None = None,
    header: bool = False,
) -> Dataset | LabeledDataset:
    """Read a comma-separated file of points.

    Args:
        path: CSV file, one point per row.
        label_column: index of the column holding ground-truth labels
            (negative indices count from the end). Label cells may be any
            string; they are canonicalized to 0..k-1 by first appearance.
        header: skip the first row and use it as feature names.

    Raises:
        FileNotFoundError: if ``path`` does not exist.
        ParseError: on ragged rows or non-numeric / non-finite feature cells.
            ``row`` is the 1-based line number, ``col`` the 0-based column.
    """
    path = Path(path)
    with path.open(newline="") as fh:
        rows = [(lineno, r) for lineno, r in enumerate(csv.reader(fh), start=1) if r]
    names = None
    if header:
        if not rows:
            raise ParseError("empty file")
        names = [c.strip() for c in rows[0][1]]
        rows = rows[1:]
    if not rows:
        raise ParseError("no data rows")

    width = len(rows[0][1])
    if label_column is not None:
        lc = label_column + width if label_column < 0 else label_column
        if not 0 <= lc < width:
            raise ParseError(f"label column {label_column} out of range for {width} columns")
    else:
        lc = None

    feats, labels = [], []
    for lineno, row in rows:
        if len(row) != width:
            raise ParseError(f"expected {width} columns, found {len(row)}", row=lineno)
        vals = []
        for j, cell in enumerate(row):
            if j == lc:
                labels.append(cell.strip())
                continue
            try:
                v = float(cell)
            except ValueError:
                raise ParseError(f"non-numeric cell {cell!r}", row=lineno, col=j) from None
            if not math.isfinite(v):
                raise ParseError(f"non-finite cell {cell!r}", row=lineno, col=j)
            vals.append(v)
        feats.append(vals)

    if names is not None and lc is not None:
        names = [n for j, n in enumerate(names) if j != lc]
    ds = Dataset(np.array(feats, dtype=float), feature_names=names)
    if lc is None:
        return ds
    return LabeledDataset(ds, canonicalize_labels(labels))


def normalize_minmax(ds: Dataset) -> Dataset:
    """Scale every feature linearly onto [-1, 1]; constant features map to 0."""
    x = ds.points
    lo, hi = x.min(axis=0), x.max(axis=0)
    span = hi - lo
    out = np.zeros_like(x)
    ok = span > 0
    out[:, ok] = 2.0 * (x[:, ok] - lo[ok]) / span[ok] - 1.0
    return Dataset(out, feature_names=ds.feature_names)


def hard_assign(mu: np.ndarray) -> np.ndarray:
    """Index of the largest membership per row (first index on ties)."""
    return np.argmax(np.asarray(mu), axis=1)


def write_clustering_csv(path: str | Path, mu: np.ndarray) -> None:
    """Write ``point_index,label,mu_0..mu_{c-1}`` rows for a membership matrix."""
    mu = np.asarray(mu)
    labels = hard_assign(mu)
    with Path(path).open("w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["point_index", "label"] + [f"mu_{j}" for j in range(mu.shape[1])])
        for i, row in enumerate(mu):
            w.writerow([i, int(labels[i])] + [repr(float(v)) for v in row])


def write_dataset_csv(path: str | Path, data: Dataset | LabeledDataset) -> None:
    """Write points (and a trailing label column, if labeled) without header."""
    pts = data.points
    labels = data.labels if isinstance(data, LabeledDataset) else None
    with Path(path).open("w", newline="") as fh:
        w = csv.writer(fh)
        for i, row in enumerate(pts):
            cells = [repr(float(v)) for v in row]
            if labels is not None:
                cells.append(int(labels[i]))
            w.writerow(cells)
