"""Run ECM-NSGA-II on one builtin set and show where the knee rule lands on the front.

Usage: python scripts/selection_demo.py [dataset] [--seed K] [--data-seed S]
"""

import argparse

import numpy as np

from ecm.data import normalize_minmax
from ecm.datagen import builtin
from ecm.fuzzy import ECMProblem
from ecm.harness import member_labels
from ecm.metrics import adjusted_rand_index
from ecm.nsga2 import Nsga2Params, nsga2_run
from ecm.select import select_tradeoff


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("dataset", nargs="?", default="three_two_overlapped")
    ap.add_argument("--seed", type=int, default=1)
    ap.add_argument("--data-seed", type=int, default=2)
    args = ap.parse_args()

    ld = builtin(args.dataset, args.data_seed)
    ds = normalize_minmax(ld.dataset)
    problem = ECMProblem(ds, ld.n_clusters)
    front = nsga2_run(problem, problem.bounds, Nsga2Params(seed=args.seed))
    rep = select_tradeoff(front.objectives)
    s = np.array(rep.signed_distances)
    print(f"{args.dataset}: {len(front)} front members, reason {rep.reason}")
    print(f"{'i':>3s} {'g1':>10s} {'g2':>10s} {'s':>8s} {'ARI':>7s}")
    for i, (g, obj) in enumerate(zip(front.genes, front.objectives)):
        ari = adjusted_rand_index(member_labels(ds.points, g), ld.labels)
        mark = " <- chosen" if i == rep.chosen_index else ""
        print(f"{i:3d} {obj[0]:10.3f} {obj[1]:10.3f} {s[i]:8.4f} {ari:7.4f}{mark}")


if __name__ == "__main__":
    main()
