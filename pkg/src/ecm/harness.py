"""Experiment driver: configs, method dispatch, metrics, artifacts, rank tables and sweeps.

Artifacts for a run land under ``cfg.outdir``::

    report.json                          deterministic summary (no timings)
    timings.json                         wall-clock seconds per job
    errors.json                          only when some job failed
    <dataset>/pareto_overlay.csv         method,seed,g1,g2 rows for plotting
    <dataset>/<method>/seed<k>/front.csv g1,g2 (+ extra objective columns) + genes
    <dataset>/<method>/seed<k>/selection.json   MOO methods only

Every ARI in the report can be recomputed from ``front.csv``: each member's
genes are its centers, and its hard partition is nearest-center assignment
for both entropy and FCM memberships.
"""

from __future__ import annotations

import csv
import json
import logging
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, fields, replace
from pathlib import Path
from typing import Any, Sequence

import numpy as np
import yaml
from scipy.stats import rankdata

from .ao import AOParams, fcm_fit, mei_fit
from .data import Dataset, LabeledDataset, load_dataset, normalize_minmax
from .datagen import builtin
from .errors import ECMError, InvalidConfig, MethodSetMismatch, UnknownParam
from .fuzzy import ECMProblem, genes_to_centers, pairwise_sq_dist, sigma_heuristic
from .metrics import adjusted_rand_index, epsilon_indicator, schott_spacing, shift_to_positive
from .moead import MoeadParams, moead_run
from .moga import moga_run
from .nsga2 import Nsga2Params, nsga2_run
from .select import select_tradeoff

log = logging.getLogger(__name__)

AO_METHODS = ("fcm", "mei")
MOO_METHODS = ("ecm-nsga2", "ecm-moead", "moga")
METHODS = AO_METHODS + MOO_METHODS

_PARAM_TYPES = {"ecm-nsga2": Nsga2Params, "moga": Nsga2Params, "ecm-moead": MoeadParams}
_AO_KEYS = {"fcm": ("m", "max_iter", "tol"), "mei": ("max_iter", "tol")}


@dataclass(frozen=True)
class DatasetSource:
    """A builtin mixture (``name``) or a CSV file (``path`` plus ``label_column``)."""

    name: str
    path: str | None = None
    label_column: int | None = -1
    header: bool = False
    data_seed: int = 0
    c: int | None = None

    def load(self) -> LabeledDataset:
        if self.path is None:
            return builtin(self.name, self.data_seed)
        ds = load_dataset(self.path, label_column=self.label_column, header=self.header)
        if not isinstance(ds, LabeledDataset):
            raise InvalidConfig(f"dataset {self.name!r} needs a label column for ARI")
        return ds


@dataclass(frozen=True)
class ExperimentConfig:
    """Declarative description of one experiment.

    ``method_params`` maps a method name to overrides of its parameter
    dataclass (``Nsga2Params``, ``MoeadParams``) or, for AO methods, to
    ``m`` / ``max_iter`` / ``tol``. ``c`` defaults to the number of true
    classes of each dataset.
    """

    datasets: tuple[DatasetSource, ...]
    methods: tuple[str, ...]
    method_params: dict[str, dict] = field(default_factory=dict)
    seeds: tuple[int, ...] = (1, 2, 3, 4, 5)
    restarts: int = 50
    c: int | None = None
    sigma: float | None = None
    exponent_form: str = "d2_over_sigma"
    normalize: bool = True
    outdir: str = "runs/experiment"

    def __post_init__(self):
        if not self.datasets:
            raise InvalidConfig("no datasets given")
        if not self.methods:
            raise InvalidConfig("no methods given")
        unknown = [m for m in self.methods if m not in METHODS]
        if unknown:
            raise InvalidConfig(f"unknown methods {unknown}; known: {list(METHODS)}")
        if len(set(self.methods)) != len(self.methods):
            raise InvalidConfig("duplicate methods")
        if not self.seeds:
            raise InvalidConfig("seeds list is empty")
        if self.restarts < 1:
            raise InvalidConfig("restarts must be >= 1")
        for m, over in self.method_params.items():
            if m not in METHODS:
                raise InvalidConfig(f"parameters given for unknown method {m!r}")
            allowed = _allowed_params(m)
            bad = sorted(set(over) - set(allowed))
            if bad:
                raise InvalidConfig(f"unknown parameters {bad} for {m}; allowed: {sorted(allowed)}")
        for src in self.datasets:
            c = src.c or self.c
            if c is not None and c < 2 and any(m in MOO_METHODS for m in self.methods):
                raise InvalidConfig("c must be >= 2 for multi-objective methods")

    @classmethod
    def from_dict(cls, doc: dict) -> "ExperimentConfig":
        doc = dict(doc)
        known = {f.name for f in fields(cls)}
        extra = sorted(set(doc) - known)
        if extra:
            raise InvalidConfig(f"unknown config keys {extra}")
        raw = doc.get("datasets") or []
        if isinstance(raw, (str, dict)):
            raw = [raw]
        srcs = []
        for item in raw:
            if isinstance(item, str):
                srcs.append(DatasetSource(name=item))
            elif isinstance(item, dict):
                try:
                    srcs.append(DatasetSource(**item))
                except TypeError as exc:
                    raise InvalidConfig(f"bad dataset entry {item!r}: {exc}") from None
            else:
                raise InvalidConfig(f"bad dataset entry {item!r}")
        doc["datasets"] = tuple(srcs)
        doc["methods"] = tuple(doc.get("methods") or ())
        if "seeds" in doc:
            doc["seeds"] = tuple(int(s) for s in doc["seeds"] or ())
        doc["method_params"] = {k: dict(v or {}) for k, v in (doc.get("method_params") or {}).items()}
        return cls(**doc)

    @classmethod
    def from_yaml(cls, path: str | Path) -> "ExperimentConfig":
        with Path(path).open() as fh:
            doc = yaml.safe_load(fh)
        if not isinstance(doc, dict):
            raise InvalidConfig(f"{path}: expected a mapping at the top level")
        return cls.from_dict(doc)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["datasets"] = [asdict(s) for s in self.datasets]
        d["methods"] = list(self.methods)
        d["seeds"] = list(self.seeds)
        return d


def _allowed_params(method: str) -> tuple[str, ...]:
    if method in _AO_KEYS:
        return _AO_KEYS[method]
    return tuple(f.name for f in fields(_PARAM_TYPES[method]) if f.name != "seed")


def ao_restart_seed(seed: int, restart: int) -> int:
    """Independent integer seed for restart ``restart`` of AO seed ``seed``."""
    return int(np.random.SeedSequence([seed, restart]).generate_state(1)[0])


@dataclass
class Prepared:
    name: str
    data: Dataset
    labels: np.ndarray
    c: int
    sigma: float


def prepare(src: DatasetSource, cfg: ExperimentConfig) -> Prepared:
    ld = src.load()
    data = normalize_minmax(ld.dataset) if cfg.normalize else ld.dataset
    c = src.c or cfg.c or ld.n_clusters
    sigma = cfg.sigma if cfg.sigma is not None else sigma_heuristic(data)
    return Prepared(src.name, data, ld.labels, int(c), float(sigma))


@dataclass
class JobResult:
    """One (dataset, method, seed) run: member genes and objectives, plus extras."""

    dataset: str
    method: str
    seed: int
    genes: np.ndarray
    objectives: np.ndarray
    extra: dict[str, np.ndarray] = field(default_factory=dict)
    n_evals: int | None = None
    seconds: float = 0.0


def run_job(prep: Prepared, method: str, seed: int, cfg: ExperimentConfig) -> JobResult:
    """Execute one method once (MOO) or ``cfg.restarts`` times (AO) under ``seed``."""
    t0 = time.perf_counter()
    over = cfg.method_params.get(method, {})
    extra: dict[str, np.ndarray] = {}
    n_evals = None
    if method in AO_METHODS:
        runs = []
        for r in range(cfg.restarts):
            s = ao_restart_seed(seed, r)
            if method == "fcm":
                runs.append(fcm_fit(prep.data, AOParams(c=prep.c, seed=s, **over)))
            else:
                runs.append(mei_fit(prep.data, prep.c, prep.sigma, seed=s,
                                    exponent_form=cfg.exponent_form, **over))
        genes = np.array([r.centers.ravel() for r in runs])
        objs = np.array([r.objectives for r in runs], dtype=float)
    elif method == "moga":
        front = moga_run(prep.data, prep.c, Nsga2Params(seed=seed, **over), prep.sigma,
                         cfg.exponent_form)
        genes, objs = front.genes, front.info["ecm_objectives"]
        extra = {"j2": front.objectives[:, 0], "xb": front.objectives[:, 1]}
        n_evals = front.info["n_evals"]
    else:
        problem = ECMProblem(prep.data, prep.c, prep.sigma, cfg.exponent_form)
        if method == "ecm-nsga2":
            front = nsga2_run(problem, problem.bounds, Nsga2Params(seed=seed, **over))
        else:
            front = moead_run(problem, problem.bounds, MoeadParams(seed=seed, **over))
        genes, objs = front.genes, front.objectives
        n_evals = problem.n_evals
    return JobResult(prep.name, method, seed, np.asarray(genes), np.asarray(objs, dtype=float),
                     extra, n_evals, time.perf_counter() - t0)


def member_labels(points: np.ndarray, genes: np.ndarray) -> np.ndarray:
    """Nearest-center partition encoded by a chromosome (first center on ties)."""
    v = genes_to_centers(genes, points.shape[1])
    return np.argmin(pairwise_sq_dist(points, v), axis=1)


def _front_aris(points, genes, truth) -> list[float]:
    return [adjusted_rand_index(member_labels(points, g), truth) for g in genes]


def _ssm_or_zero(objs: np.ndarray) -> float:
    # single-point fronts have no spacing; reported as 0 for table parity
    return schott_spacing(objs) if len(objs) >= 2 else 0.0


@dataclass
class RunReport:
    """Deterministic summary of an experiment (timings are kept separately)."""

    config: dict
    datasets: dict[str, dict]
    results: dict[str, dict[str, dict]]
    epsilon: dict[str, dict[str, dict[str, dict]]]
    timings: dict[str, float] = field(default_factory=dict)
    errors: list[dict] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {"config": self.config, "datasets": self.datasets, "results": self.results,
                "epsilon": self.epsilon, "errors": self.errors}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    def max_ari(self) -> dict[str, dict[str, float]]:
        """dataset -> method -> best max-ARI over seeds."""
        return {d: {m: r["max_ari"] for m, r in per.items()} for d, per in self.results.items()}


def _summarize(prep: Prepared, jr: JobResult) -> tuple[dict, dict | None]:
    aris = _front_aris(prep.data.points, jr.genes, prep.labels)
    best = int(np.argmax(aris))
    row: dict[str, Any] = {"seed": jr.seed, "size": int(len(jr.objectives)),
                           "max_ari": float(aris[best]), "max_ari_index": best}
    if jr.n_evals is not None:
        row["n_evals"] = int(jr.n_evals)
    selection = None
    if jr.method in MOO_METHODS:
        rep = select_tradeoff(jr.objectives)
        selection = rep.to_dict()
        row["ssm"] = _ssm_or_zero(jr.objectives)
        row["chosen_index"] = rep.chosen_index
        row["chosen_reason"] = rep.reason
        row["chosen_ari"] = float(aris[rep.chosen_index])
    return row, selection


def _write_front(path: Path, jr: JobResult) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    extra = sorted(jr.extra)
    with path.open("w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["g1", "g2"] + extra + [f"gene_{j}" for j in range(jr.genes.shape[1])])
        for i in range(len(jr.objectives)):
            w.writerow([repr(float(v)) for v in jr.objectives[i]]
                       + [repr(float(jr.extra[k][i])) for k in extra]
                       + [repr(float(v)) for v in jr.genes[i]])


def read_front(path: str | Path) -> tuple[np.ndarray, np.ndarray]:
    """Read ``(objectives, genes)`` from a front CSV; a bare two-column file gives empty genes."""
    with Path(path).open(newline="") as fh:
        rows = [r for r in csv.reader(fh) if r]
    header, body = rows[0], rows[1:]
    try:
        float(header[0])
        body, header = rows, ["g1", "g2"]
    except ValueError:
        pass
    arr = np.array([[float(v) for v in r] for r in body], dtype=float).reshape(len(body), -1)
    gcols = [j for j, h in enumerate(header) if h.startswith("gene_")]
    return arr[:, :2], arr[:, gcols]


def _pool_size() -> int:
    try:
        return max(1, int(os.environ.get("ECM_THREADS", "1")))
    except ValueError:
        return 1


def _job(args):
    prep, method, seed, cfg = args
    try:
        jr = run_job(prep, method, seed, cfg)
        log.info("%s/%s/seed%d done in %.2fs", prep.name, method, seed, jr.seconds)
        return jr
    except ECMError as exc:
        return {"dataset": prep.name, "method": method, "seed": seed,
                "error": type(exc).__name__, "message": str(exc)}


def run_experiment(cfg: ExperimentConfig, write: bool = True) -> RunReport:
    """Run every method on every dataset under every seed and write the artifacts.

    Jobs run in a process pool capped by ``ECM_THREADS`` (default 1, serial).
    If any job fails the partial report and ``errors.json`` are still written
    and the first error is raised as :class:`ECMError`.
    """
    preps = [prepare(src, cfg) for src in cfg.datasets]
    names = [p.name for p in preps]
    if len(set(names)) != len(names):
        raise InvalidConfig("dataset names must be unique")
    jobs = [(p, m, s, cfg) for p in preps for m in cfg.methods for s in cfg.seeds]
    workers = min(_pool_size(), len(jobs))
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            outs = list(pool.map(_job, jobs))
    else:
        outs = [_job(j) for j in jobs]

    out = Path(cfg.outdir)
    by_name = {p.name: p for p in preps}
    results: dict[str, dict[str, dict]] = {}
    fronts: dict[tuple[str, str, int], np.ndarray] = {}
    timings: dict[str, float] = {}
    errors = [o for o in outs if isinstance(o, dict)]
    for jr in (o for o in outs if isinstance(o, JobResult)):
        prep = by_name[jr.dataset]
        row, selection = _summarize(prep, jr)
        slot = results.setdefault(jr.dataset, {}).setdefault(jr.method, {"per_seed": []})
        slot["per_seed"].append(row)
        fronts[(jr.dataset, jr.method, jr.seed)] = jr.objectives
        timings[f"{jr.dataset}/{jr.method}/seed{jr.seed}"] = jr.seconds
        if write:
            base = out / jr.dataset / jr.method / f"seed{jr.seed}"
            _write_front(base / "front.csv", jr)
            if selection is not None:
                (base / "selection.json").write_text(json.dumps(selection, indent=2, sort_keys=True))

    for per in results.values():
        for slot in per.values():
            rows = slot["per_seed"]
            best = max(rows, key=lambda r: (r["max_ari"], -r["seed"]))
            slot["max_ari"] = best["max_ari"]
            slot["best_seed"] = best["seed"]
            if "ssm" in rows[0]:
                slot["ssm_median"] = float(np.median([r["ssm"] for r in rows]))

    epsilon = _epsilon_matrix(fronts, cfg)
    report = RunReport(
        config=cfg.to_dict(),
        datasets={p.name: {"n": p.data.n, "d": p.data.d, "c": p.c, "sigma": p.sigma}
                  for p in preps},
        results=results, epsilon=epsilon, timings=timings, errors=errors)
    if write:
        out.mkdir(parents=True, exist_ok=True)
        (out / "report.json").write_text(report.to_json())
        (out / "timings.json").write_text(json.dumps(timings, indent=2, sort_keys=True))
        for name in names:
            _write_overlay(out / name / "pareto_overlay.csv", name, fronts)
        if errors:
            (out / "errors.json").write_text(json.dumps(errors, indent=2, sort_keys=True))
    if errors:
        first = errors[0]
        raise ECMError(f"{len(errors)} job(s) failed; first: {first['dataset']}/{first['method']}"
                       f"/seed{first['seed']}: {first['error']}: {first['message']}")
    return report


def _epsilon_matrix(fronts, cfg: ExperimentConfig) -> dict:
    """dataset -> candidate -> control -> {"per_seed", "shift", "median"} over MOO methods.

    ``shift`` holds, per seed, the joint translation applied to both fronts
    before the ratios are taken.
    """
    moo = [m for m in cfg.methods if m in MOO_METHODS]
    table: dict = {}
    datasets = sorted({k[0] for k in fronts})
    for d in datasets:
        for a in moo:
            for b in moo:
                if a == b:
                    continue
                vals, shifts = {}, {}
                for s in cfg.seeds:
                    if (d, a, s) in fronts and (d, b, s) in fronts:
                        (fa, fb), off = shift_to_positive(fronts[(d, a, s)], fronts[(d, b, s)])
                        vals[str(s)] = epsilon_indicator(fa, fb, shift=False)
                        shifts[str(s)] = [float(v) for v in off]
                if vals:
                    table.setdefault(d, {}).setdefault(a, {})[b] = {
                        "per_seed": vals, "shift": shifts,
                        "median": float(np.median(list(vals.values())))}
    return table


def _write_overlay(path: Path, dataset: str, fronts) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["method", "seed", "g1", "g2"])
        for (d, m, s), objs in sorted(fronts.items()):
            if d != dataset or m in AO_METHODS:
                continue
            for g1, g2 in objs:
                w.writerow([m, s, repr(float(g1)), repr(float(g2))])


def rank_table(reports: Sequence[RunReport]) -> dict[str, float]:
    """Average rank of each method by max ARI over all datasets (1 = best, ties share mid-ranks)."""
    if not reports:
        raise MethodSetMismatch("no reports given")
    rows: list[dict[str, float]] = []
    for rep in reports:
        rows.extend(rep.max_ari().values())
    methods = sorted(rows[0])
    for row in rows[1:]:
        if sorted(row) != methods:
            raise MethodSetMismatch(f"method sets differ: {methods} vs {sorted(row)}")
    ranks = np.array([rankdata([-row[m] for m in methods], method="average") for row in rows])
    return {m: float(v) for m, v in zip(methods, ranks.mean(axis=0))}


SWEEP_EXTRA = ("restarts", "sigma", "c")


def sweepable_params() -> set[str]:
    names = set(SWEEP_EXTRA)
    for m in METHODS:
        names.update(_allowed_params(m))
    return names


def sweep(param: str, values: Sequence, base: ExperimentConfig, write: bool = True) -> list[dict]:
    """Rerun ``base`` once per value of ``param`` with everything else fixed.

    Engine parameters are applied to every configured method that has them.
    Returns rows ``{"value": v, "<dataset>/<method>": max ARI, ...}`` and,
    with ``write``, stores them as ``sweep_<param>.csv`` under ``base.outdir``.
    """
    if param not in sweepable_params():
        raise UnknownParam(f"unknown parameter {param!r}; known: {sorted(sweepable_params())}")
    if not values:
        raise InvalidConfig("no sweep values given")
    rows = []
    for v in values:
        outdir = str(Path(base.outdir) / f"{param}={v}")
        if param in SWEEP_EXTRA:
            cfg = replace(base, outdir=outdir, **{param: v})
        else:
            mp = {m: dict(base.method_params.get(m, {})) for m in base.methods}
            for m in base.methods:
                if param in _allowed_params(m):
                    mp[m][param] = v
            cfg = replace(base, outdir=outdir, method_params=mp)
        rep = run_experiment(cfg, write=write)
        row: dict[str, Any] = {"value": v}
        for d, per in rep.max_ari().items():
            for m, ari in per.items():
                row[f"{d}/{m}"] = ari
        rows.append(row)
    if write:
        path = Path(base.outdir) / f"sweep_{param}.csv"
        path.parent.mkdir(parents=True, exist_ok=True)
        cols = list(rows[0])
        with path.open("w", newline="") as fh:
            w = csv.DictWriter(fh, fieldnames=cols)
            w.writeheader()
            w.writerows(rows)
    return rows
