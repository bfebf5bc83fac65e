"""Print max-ARI, median-SSM and median-EI tables plus average ranks from report.json files.

Usage: python scripts/summarize.py runs/benchmark/report.json [more reports...]
"""

import argparse
import json

from ecm.harness import RunReport, rank_table


def load(path: str) -> RunReport:
    doc = json.loads(open(path).read())
    return RunReport(doc["config"], doc["datasets"], doc["results"], doc["epsilon"])


def table(title, rows, cols, fmt):
    print(f"\n{title}")
    w = max([12] + [len(c) + 2 for c in cols])
    print(f"{'dataset':22s}" + "".join(f"{c:>{w}s}" for c in cols))
    for name, vals in rows:
        print(f"{name:22s}" + "".join(f"{fmt(vals.get(c)):>{w}s}" for c in cols))


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("reports", nargs="+")
    args = ap.parse_args()
    reports = [load(p) for p in args.reports]
    cell = lambda v: f"{v:.4f}" if v is not None else "-"
    methods = sorted({m for r in reports for per in r.results.values() for m in per})

    ari, ssm, eps = [], [], []
    for r in reports:
        for d, per in r.results.items():
            ari.append((d, {m: s["max_ari"] for m, s in per.items()}))
            ssm.append((d, {m: s["ssm_median"] for m, s in per.items() if "ssm_median" in s}))
            e = r.epsilon.get(d, {})
            eps.append((d, {f"{a}|{b}": cellv["median"] for a, row in e.items()
                            for b, cellv in row.items()}))
    table("max ARI (best over seeds)", ari, methods, cell)
    moo = [m for m in methods if m not in ("fcm", "mei")]
    table("median Schott spacing", ssm, moo, cell)
    pairs = sorted({k for _, row in eps for k in row})
    table("median epsilon indicator (candidate|control)", eps, pairs, cell)
    try:
        ranks = rank_table(reports)
        print("\naverage rank: " + ", ".join(f"{m} {v:.2f}" for m, v in sorted(ranks.items())))
    except Exception as exc:  # mismatched method sets across reports
        print(f"\naverage rank unavailable: {exc}")


if __name__ == "__main__":
    main()
