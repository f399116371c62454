"""
Seeded repeat experiments, (alpha, k) grid search and the filtration ablation.

Every function returns a plain ``dict`` (a result record) that serialises to
JSON with :func:`write_record`. Repeat ``r`` always uses seed
``base_seed + r``, whatever the method, grid cell or worker count, so results
do not depend on evaluation order or ``jobs``.
"""

import csv
import io
import json
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, replace
from datetime import datetime, timezone

import numpy as np

from . import __version__
from .baselines import FCMConfig, fcm_run, kmeans_run
from .core import FILTRATION_MODES, HypeFCMConfig, run
from .data import Dataset, load_dataset
from .embedding import EmbeddingConfig, embed
from .exceptions import UsageError
from .metrics import ari, nmi

__all__ = [
    "DEFAULT_ALPHAS",
    "DEFAULT_KS",
    "SCHEMA",
    "ExperimentSpec",
    "aggregate",
    "cmd_ablation",
    "cmd_grid",
    "cmd_run",
    "record_to_csv",
    "run_once",
    "write_record",
]

SCHEMA = "hypefcm.result/1"
METHODS = ("hypefcm", "fcm", "kmeans")
MAX_REPEATS = 1000
TIMING_KEYS = ("wall_ms", "created_at")

#: 0.1..1.0 in steps of 0.1, then 100..1000 in steps of 100.
DEFAULT_ALPHAS = tuple(round(0.1 * i, 1) for i in range(1, 11)) + tuple(
    float(a) for a in range(100, 1001, 100)
)
DEFAULT_KS = tuple(range(1, 16))


@dataclass(frozen=True)
class ExperimentSpec:
    """Everything needed to reproduce an experiment.

    ``clusters=None`` means "use the dataset's ground-truth class count".
    """

    dataset: str
    method: str = "hypefcm"
    clusters: int | None = None
    alpha: float = 1.0
    k: int = 10
    filtration: str = "per_centroid"
    m: float = 2.0
    max_iter: int = 300
    tol: float = 1e-5
    seed: int = 0
    repeats: int = 15
    margin: float = 0.9
    zscore: bool = False
    fit_to_ball: bool = False
    jobs: int = 1
    timing: bool = True
    delimiter: str = ","
    header: bool = False
    label_column: int | None = None

    def __post_init__(self):
        if self.method not in METHODS:
            raise UsageError(f"method must be one of {METHODS}, got {self.method!r}")
        if self.filtration not in FILTRATION_MODES:
            raise UsageError(f"filtration mode must be one of {FILTRATION_MODES}")
        if not 1 <= self.repeats <= MAX_REPEATS:
            raise UsageError(f"repeats must lie in [1, {MAX_REPEATS}], got {self.repeats}")
        if self.jobs < 1:
            raise UsageError(f"jobs must be >= 1, got {self.jobs}")
        if self.clusters is not None and self.clusters < 1:
            raise UsageError(f"clusters must be >= 1, got {self.clusters}")

    def load(self):
        d = load_dataset(self.dataset, delimiter=self.delimiter, header=self.header,
                         label_column=self.label_column)
        if d.labels is None:
            raise UsageError(f"{self.dataset}: ground-truth labels are required (use --label-column)")
        return d.standardized() if self.zscore else d

    def resolve(self, dataset):
        """Materialise defaults that depend on the data and validate against it."""
        c = self.clusters if self.clusters is not None else dataset.c_true
        spec = replace(self, clusters=int(c))
        if spec.clusters > dataset.n:
            raise UsageError(f"clusters={spec.clusters} exceeds n={dataset.n}")
        if spec.method == "hypefcm":
            spec.hypefcm_config(0).check_against(dataset.n)
        else:
            FCMConfig(c=spec.clusters, m=spec.m, max_iter=spec.max_iter, tol=spec.tol)
        return spec

    def hypefcm_config(self, seed):
        return HypeFCMConfig(c=self.clusters, m=self.m, k=self.k, max_iter=self.max_iter,
                             tol=self.tol, seed=seed, filtration=self.filtration,
                             alpha=self.alpha)


def run_once(dataset: Dataset, spec: ExperimentSpec, seed: int) -> dict:
    """One seeded clustering scored against the dataset's labels."""
    start = time.perf_counter()
    if spec.method == "hypefcm":
        emb = EmbeddingConfig(alpha=spec.alpha, margin=spec.margin, fit_to_ball=spec.fit_to_ball)
        res = run(embed(dataset.X, emb), spec.hypefcm_config(seed))
    elif spec.method == "fcm":
        res = fcm_run(dataset.X, FCMConfig(c=spec.clusters, m=spec.m, max_iter=spec.max_iter,
                                           tol=spec.tol, seed=seed))
    else:
        res = kmeans_run(dataset.X, spec.clusters, spec.max_iter, seed)
    wall_ms = (time.perf_counter() - start) * 1e3
    row = {
        "seed": int(seed),
        "ari": ari(dataset.labels, res.labels),
        "nmi": nmi(dataset.labels, res.labels),
        "iterations": int(res.n_iter),
        "converged": bool(res.converged),
        "J_final": res.J_final,
    }
    if spec.timing:
        row["wall_ms"] = round(wall_ms, 3)
    return row


def _task(args):
    dataset, spec, seed = args
    return run_once(dataset, spec, seed)


def _execute(dataset, specs, jobs):
    """Run every (spec, repeat) pair; output order follows input order."""
    tasks = [(dataset, s, s.seed + r) for s in specs for r in range(s.repeats)]
    if jobs == 1 or len(tasks) == 1:
        rows = [_task(t) for t in tasks]
    else:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            rows = list(pool.map(_task, tasks, chunksize=max(1, len(tasks) // (4 * jobs))))
    out, i = [], 0
    for s in specs:
        out.append(rows[i:i + s.repeats])
        i += s.repeats
    return out


def aggregate(rows):
    """Mean and population standard deviation of ARI and NMI over repeats."""
    out = {}
    for key in ("ari", "nmi"):
        vals = np.array([r[key] for r in rows], dtype=float)
        out[f"{key}_mean"] = float(vals.mean())
        out[f"{key}_std"] = float(vals.std())
    return out


def _dataset_info(d):
    return {"name": d.name, "n": d.n, "p": d.p, "c_true": d.c_true,
            "zscore": bool(d.meta.get("zscore", False))}


def _record(command, spec, dataset, **body):
    config = asdict(spec)
    # worker count never changes results, so it stays out of the record
    del config["jobs"]
    rec = {
        "schema": SCHEMA,
        "version": __version__,
        "command": command,
        "config": config,
        "dataset": _dataset_info(dataset),
        "metadata": {
            "nmi_normalization": "arithmetic",
            "std": "population",
            "seeds": f"base_seed + r for r in range({spec.repeats})",
        },
    }
    rec.update(body)
    if spec.timing:
        rec["created_at"] = datetime.now(timezone.utc).isoformat(timespec="seconds")
    return rec


def cmd_run(spec: ExperimentSpec, dataset: Dataset | None = None) -> dict:
    """Repeat one configuration ``spec.repeats`` times."""
    dataset = spec.load() if dataset is None else dataset
    spec = spec.resolve(dataset)
    (rows,) = _execute(dataset, [spec], spec.jobs)
    return _record("run", spec, dataset, repeats=rows, aggregate=aggregate(rows))


def cmd_grid(spec: ExperimentSpec, alphas=None, ks=None, dataset: Dataset | None = None) -> dict:
    """Evaluate every (alpha, k) pair with the repeat protocol.

    Omitting ``alphas`` or ``ks`` uses :data:`DEFAULT_ALPHAS` / :data:`DEFAULT_KS`.
    """
    if spec.method != "hypefcm":
        raise UsageError("grid search applies to method=hypefcm only")
    dataset = spec.load() if dataset is None else dataset
    default_alphas = alphas is None
    alphas = list(DEFAULT_ALPHAS if alphas is None else alphas)
    ks = list(DEFAULT_KS if ks is None else ks)
    if not alphas or not ks:
        raise UsageError("alpha and k lists must be non-empty")
    if any(not a > 0 for a in alphas):
        raise UsageError("grid alpha values must be positive")
    cells = [replace(spec, alpha=float(a), k=int(k)).resolve(dataset) for a in alphas for k in ks]
    base = cells[0]
    results = _execute(dataset, cells, spec.jobs)
    rows = [{"alpha": c.alpha, "k": c.k, **aggregate(r), "repeats": r} for c, r in zip(cells, results)]
    rec = _record("grid", base, dataset, alphas=[float(a) for a in alphas], ks=[int(k) for k in ks],
                  cells=rows)
    if default_alphas:
        rec["metadata"]["alpha_grid_note"] = (
            "sweep starts at 0.1 instead of 0: distances are undefined at alpha = 0"
        )
    return rec


def cmd_ablation(spec: ExperimentSpec, ks=None, dataset: Dataset | None = None) -> dict:
    """Paired runs with and without filtration for each ``k``, identical seeds.

    The filtered arm uses ``spec.filtration`` (``per_centroid`` if that is
    ``off``); the unfiltered arm ignores ``k``.
    """
    if spec.method != "hypefcm":
        raise UsageError("the ablation applies to method=hypefcm only")
    dataset = spec.load() if dataset is None else dataset
    ks = list(DEFAULT_KS if ks is None else ks)
    if not ks:
        raise UsageError("k list must be non-empty")
    mode = spec.filtration if spec.filtration != "off" else "per_centroid"
    arms = []
    for k in ks:
        arms.append(("filtration", replace(spec, k=int(k), filtration=mode).resolve(dataset)))
        arms.append(("off", replace(spec, k=int(k), filtration="off").resolve(dataset)))
    results = _execute(dataset, [s for _, s in arms], spec.jobs)
    rows = [{"k": s.k, "arm": name, "filtration": s.filtration, **aggregate(r), "repeats": r}
            for (name, s), r in zip(arms, results)]
    base = replace(spec, filtration=mode).resolve(dataset)
    return _record("ablation", base, dataset, ks=[int(k) for k in ks], rows=rows)


def strip_timing(obj):
    """Copy of a record without wall-clock fields."""
    if isinstance(obj, dict):
        return {k: strip_timing(v) for k, v in obj.items() if k not in TIMING_KEYS}
    if isinstance(obj, list):
        return [strip_timing(v) for v in obj]
    return obj


def record_to_csv(record) -> str:
    """Flatten a record into a table: per-repeat rows, grid cells or ablation rows."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    agg_cols = ["ari_mean", "ari_std", "nmi_mean", "nmi_std"]
    if record["command"] == "run":
        cols = ["seed", "ari", "nmi", "iterations", "converged", "J_final"]
        if record["repeats"] and "wall_ms" in record["repeats"][0]:
            cols.append("wall_ms")
        w.writerow(cols)
        for r in record["repeats"]:
            w.writerow([repr(r[c]) if isinstance(r[c], float) else r[c] for c in cols])
    elif record["command"] == "grid":
        w.writerow(["alpha", "k"] + agg_cols)
        for r in record["cells"]:
            w.writerow([repr(r["alpha"]), r["k"]] + [repr(r[c]) for c in agg_cols])
    else:
        w.writerow(["k", "arm", "filtration"] + agg_cols)
        for r in record["rows"]:
            w.writerow([r["k"], r["arm"], r["filtration"]] + [repr(r[c]) for c in agg_cols])
    return buf.getvalue()


def write_record(record, path, fmt="json"):
    if fmt == "json":
        text = json.dumps(record, indent=2, sort_keys=True) + "\n"
    elif fmt == "csv":
        text = record_to_csv(record)
    else:
        raise UsageError(f"unknown output format {fmt!r}")
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)
