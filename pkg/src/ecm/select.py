"""Knee-based selection of a trade-off clustering from an ECM Pareto front."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import EmptyFront

KNEE = "knee_below_chord"
MIN_F1 = "min_f1_front_above"
SMALL = "degenerate_small_front"


@dataclass
class SelectionReport:
    """Outcome of :func:`select_tradeoff`.

    ``signed_distances`` follow the input order; positive means above the
    chord joining the two extremes in normalized (g1, g2) space.
    """

    chosen_index: int
    reason: str
    signed_distances: list[float]
    normalization: dict
    traversed: list[int] = field(default_factory=list)
    deeper_knees: list[int] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "chosen_index": self.chosen_index,
            "reason": self.reason,
            "signed_distances": self.signed_distances,
            "normalization": self.normalization,
            "traversed": self.traversed,
            "deeper_knees": self.deeper_knees,
        }


def signed_chord_distances(norm_sorted: np.ndarray) -> np.ndarray:
    """Signed distance of each point from the chord through the first and last point."""
    p0, p1 = norm_sorted[0], norm_sorted[-1]
    chord = p1 - p0
    length = np.hypot(*chord)
    rel = norm_sorted - p0
    if length == 0:
        return np.zeros(len(norm_sorted))
    # cross(chord, rel) > 0 means rel lies counter-clockwise, i.e. above a descending chord
    return (chord[0] * rel[:, 1] - chord[1] * rel[:, 0]) / length


def select_tradeoff(front_objs) -> SelectionReport:
    """Pick a clustering from a front of (g1, g2) = (f1, -f2) pairs.

    Points are sorted by g1 and min-max normalized. If any of the three
    points following the min-g1 extreme is not above the chord, the front is
    walked from there while it stays strictly below the chord, and the walked
    point furthest from the chord is chosen. Otherwise, or if nothing is
    strictly below, the min-g1 point is chosen. Fronts with fewer than four
    points always give the min-g1 point.
    """
    f = np.asarray(front_objs, dtype=float).reshape(-1, 2)
    k = f.shape[0]
    if k == 0:
        raise EmptyFront("cannot select from an empty front")
    order = np.lexsort((f[:, 1], f[:, 0]))
    fs = f[order]
    lo, hi = fs.min(axis=0), fs.max(axis=0)
    span = np.where(hi > lo, hi - lo, 1.0)
    norm = (fs - lo) / span
    s_sorted = signed_chord_distances(norm)
    s = np.empty(k)
    s[order] = s_sorted
    record = {"g1_min": float(lo[0]), "g1_max": float(hi[0]),
              "g2_min": float(lo[1]), "g2_max": float(hi[1]), "space": "minmax_per_objective"}
    signed = [float(v) for v in s]

    if k < 4:
        return SelectionReport(int(order[0]), SMALL, signed, record)

    head = s_sorted[1:4]
    if np.all(head > 0):
        return SelectionReport(int(order[0]), MIN_F1, signed, record)

    start = 1 + int(np.argmax(head < 0)) if np.any(head < 0) else None
    if start is None:
        return SelectionReport(int(order[0]), MIN_F1, signed, record)
    walked = []
    i = start
    while i < k - 1 and s_sorted[i] < 0:
        walked.append(i)
        i += 1
    best = walked[int(np.argmax(np.abs(s_sorted[walked])))]
    later = [int(order[j]) for j in range(i + 1, k - 1) if s_sorted[j] < 0]
    return SelectionReport(int(order[best]), KNEE, signed, record,
                           traversed=[int(order[j]) for j in walked], deeper_knees=later)
