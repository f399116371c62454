"""Dataset container, CSV ingestion and synthetic generators."""

import csv
import io
from dataclasses import dataclass, field, replace
from importlib import resources
from pathlib import Path

import numpy as np

from .embedding import zscore
from .exceptions import DataError, UsageError

__all__ = [
    "BUILTIN",
    "Dataset",
    "gen_blobs",
    "gen_rings",
    "gen_smile_like",
    "load_builtin",
    "load_csv",
    "load_dataset",
    "load_iris",
    "save_csv",
]


@dataclass(frozen=True, eq=False)
class Dataset:
    name: str
    X: np.ndarray
    labels: np.ndarray | None = None
    c_true: int | None = None
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        X = np.asarray(self.X, dtype=float)
        if X.ndim != 2:
            raise DataError(f"{self.name}: X must be 2-D, got shape {X.shape}")
        if not np.all(np.isfinite(X)):
            raise DataError(f"{self.name}: X contains NaN or Inf")
        object.__setattr__(self, "X", X)
        if self.labels is not None:
            labels = np.asarray(self.labels, dtype=np.int64)
            if labels.shape != (X.shape[0],):
                raise DataError(f"{self.name}: {labels.size} labels for {X.shape[0]} rows")
            object.__setattr__(self, "labels", labels)
            if self.c_true is None:
                object.__setattr__(self, "c_true", int(np.unique(labels).size))

    @property
    def n(self):
        return self.X.shape[0]

    @property
    def p(self):
        return self.X.shape[1]

    def standardized(self):
        return replace(self, X=zscore(self.X), meta={**self.meta, "zscore": True})


def _encode(raw):
    _, codes = np.unique(np.asarray(raw), return_inverse=True)
    return codes.astype(np.int64)


def _parse(lines, source, delimiter, header, label_column):
    rows = list(csv.reader(lines, delimiter=delimiter))
    rows = [r for r in rows if r and any(cell.strip() for cell in r)]
    first = 1 if header else 0
    if len(rows) <= first:
        raise DataError(f"{source}: no data rows")
    width = len(rows[first])
    if label_column is not None and not -width <= label_column < width:
        raise UsageError(f"{source}: label column {label_column} out of range for {width} columns")
    lab_idx = None if label_column is None else label_column % width
    feats, raw_labels = [], []
    for r, row in enumerate(rows[first:], start=first + 1):
        if len(row) != width:
            raise DataError(f"{source}: row {r} has {len(row)} fields, expected {width}")
        vals = []
        for c, cell in enumerate(row):
            if c == lab_idx:
                raw_labels.append(cell.strip())
                continue
            try:
                vals.append(float(cell))
            except ValueError:
                raise DataError(f"{source}: non-numeric value {cell!r} at row {r}, column {c + 1}") from None
        feats.append(vals)
    X = np.array(feats, dtype=float)
    if X.shape[1] == 0:
        raise DataError(f"{source}: no feature columns")
    if not np.all(np.isfinite(X)):
        bad = np.argwhere(~np.isfinite(X))[0]
        raise DataError(f"{source}: non-finite value at data row {bad[0] + 1}")
    labels = _encode(raw_labels) if lab_idx is not None else None
    return X, labels


def load_csv(path, delimiter=",", header=False, label_column=None, name=None):
    """Read a numeric CSV file, optionally splitting off a label column.

    Labels (any strings) are re-encoded to ``0..c-1`` in sorted order.
    Raises :class:`DataError` naming the offending row/column on ragged rows,
    non-numeric cells or an empty file.
    """
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise DataError(f"{path}: {exc.strerror or exc}") from None
    X, labels = _parse(io.StringIO(text), str(path), delimiter, header, label_column)
    return Dataset(name or path.stem, X, labels, meta={"source": str(path)})


def save_csv(dataset, path, delimiter=",", header=None):
    """Write features (and labels as the last column, if any).

    Floats use ``repr``, the shortest string that round-trips exactly.
    """
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, delimiter=delimiter, lineterminator="\n")
        if header is not None:
            w.writerow(header)
        for i, row in enumerate(dataset.X):
            cells = [repr(float(v)) for v in row]
            if dataset.labels is not None:
                cells.append(str(int(dataset.labels[i])))
            w.writerow(cells)


def load_iris():
    """Fisher's Iris data (150 x 4, 3 species), bundled with the package."""
    text = resources.files("hypefcm").joinpath("data/iris.csv").read_text(encoding="utf-8")
    X, labels = _parse(io.StringIO(text), "iris.csv", ",", True, -1)
    return Dataset("iris", X, labels, meta={"source": "builtin:iris"})


def _split_sizes(n, c):
    return [n // c + (1 if j < n % c else 0) for j in range(c)]


def gen_blobs(n=300, c=3, p=2, separation=10.0, seed=0, sigma=1.0):
    """Isotropic Gaussian clusters whose centres are >= ``separation * sigma`` apart.

    Centres are drawn uniformly in a cube and rejected until the separation
    holds; cluster sizes differ by at most one.
    """
    if n < c or c < 1:
        raise UsageError(f"need n >= c >= 1, got n={n}, c={c}")
    rng = np.random.default_rng(seed)
    min_gap = separation * sigma
    side = max(min_gap, 1e-12) * (c ** (1.0 / p)) * 2.0
    centres = []
    while len(centres) < c:
        cand = rng.uniform(0.0, side, size=p)
        if all(np.linalg.norm(cand - q) >= min_gap for q in centres):
            centres.append(cand)
        else:
            side *= 1.01
    centres = np.array(centres)
    sizes = _split_sizes(n, c)
    labels = np.repeat(np.arange(c), sizes)
    X = centres[labels] + sigma * rng.normal(size=(n, p))
    return Dataset(
        f"blobs-n{n}-c{c}-p{p}-s{seed}", X, labels, c,
        meta={"generator": "blobs", "separation": separation, "seed": seed},
    )


def _ring(rng, m, radius, width):
    theta = rng.uniform(0.0, 2 * np.pi, m)
    r = radius + rng.uniform(-width, width, m)
    return np.column_stack([r * np.cos(theta), r * np.sin(theta)])


def gen_smile_like(n=1000, seed=0, noise=0.05):
    """Face outline ring, two eye blobs and a mouth arc (4 components).

    Every point lies within ``noise`` (uniform, per-axis bounded) of its
    component's template: ring radius 1, eyes of radius 0.1 centred at
    ``(+-0.35, 0.3)``, mouth on the arc of radius 0.5 about the origin spanning
    angles ``[-5pi/6, -pi/6]``.
    """
    if n < 8:
        raise UsageError("gen_smile_like needs n >= 8")
    rng = np.random.default_rng(seed)
    sizes = _split_sizes(n, 4)
    parts = []
    for j, (cx, cy) in enumerate([(-0.35, 0.3), (0.35, 0.3)]):
        ang = rng.uniform(0, 2 * np.pi, sizes[j])
        rad = 0.1 * np.sqrt(rng.uniform(0, 1, sizes[j]))
        parts.append(np.column_stack([cx + rad * np.cos(ang), cy + rad * np.sin(ang)]))
    theta = rng.uniform(-5 * np.pi / 6, -np.pi / 6, sizes[2])
    r = 0.5 + rng.uniform(-noise, noise, sizes[2])
    parts.append(np.column_stack([r * np.cos(theta), r * np.sin(theta)]))
    parts.append(_ring(rng, sizes[3], 1.0, noise))
    X = np.vstack(parts)
    labels = np.repeat(np.arange(4), sizes)
    return Dataset(f"smile-n{n}-s{seed}", X, labels, 4,
                   meta={"generator": "smile", "noise": noise, "seed": seed})


def gen_rings(n=1000, seed=0, n_rings=2, noise=0.1):
    """Concentric annuli of radii ``1..n_rings`` and half-width ``noise``."""
    if n < 8 or n < n_rings:
        raise UsageError("gen_rings needs n >= max(8, n_rings)")
    rng = np.random.default_rng(seed)
    sizes = _split_sizes(n, n_rings)
    X = np.vstack([_ring(rng, m, j + 1.0, noise) for j, m in enumerate(sizes)])
    labels = np.repeat(np.arange(n_rings), sizes)
    return Dataset(f"rings-n{n}-s{seed}", X, labels, n_rings,
                   meta={"generator": "rings", "noise": noise, "seed": seed})


BUILTIN = {
    "iris": load_iris,
    "blobs": lambda: gen_blobs(300, 3, 2, 10.0, seed=0),
    "smile": lambda: gen_smile_like(1000, seed=0),
    "rings": lambda: gen_rings(1000, seed=0),
}


def load_builtin(name):
    try:
        factory = BUILTIN[name]
    except KeyError:
        raise UsageError(f"unknown builtin dataset {name!r}; choose from {sorted(BUILTIN)}") from None
    return factory()


def load_dataset(ref, **csv_options):
    """Resolve ``builtin:NAME`` or a CSV path."""
    if ref.startswith("builtin:"):
        return load_builtin(ref.split(":", 1)[1])
    return load_csv(ref, **csv_options)
