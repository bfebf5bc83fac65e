"""Entropy c-Means: fuzzy clustering as a two-objective evolutionary search."""

from .data import Clustering, Dataset, LabeledDataset, load_dataset, normalize_minmax
from .fuzzy import ECMProblem, entropy_memberships, evaluate, sigma_heuristic

__all__ = [
    "Clustering",
    "Dataset",
    "ECMProblem",
    "LabeledDataset",
    "entropy_memberships",
    "evaluate",
    "load_dataset",
    "normalize_minmax",
    "sigma_heuristic",
]
