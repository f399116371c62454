"""
Filtration-based hyperbolic fuzzy c-means.

One iteration of :func:`run` is

1. move every centroid one Riemannian step towards the ``w^m``-weighted mean
   of the data in its tangent space (log map, average, exp map),
2. compute squared geodesic distances ``U`` from every point to every centroid,
3. keep only the ``k`` nearest entries (per centroid by default) of ``U``,
4. recompute memberships from the surviving entries by inverse-distance
   normalisation.

The loop stops once the Frobenius norm of the membership change drops to
``tol`` or after ``max_iter`` iterations; labels are the row-wise argmax.
"""

from dataclasses import dataclass, field

import numpy as np

from . import geometry
from .embedding import EmbeddingConfig, embed
from .exceptions import DataError, UsageError

__all__ = [
    "FILTRATION_MODES",
    "ClusteringRun",
    "DistanceMatrix",
    "HypeFCMConfig",
    "apply_filtration",
    "cluster",
    "compute_distances",
    "defuzzify",
    "init_weights",
    "objective",
    "run",
    "update_centroids",
    "update_weights",
]

FILTRATION_MODES = ("per_centroid", "per_point", "off")


@dataclass(frozen=True)
class HypeFCMConfig:
    """Parameters of a HypeFCM run.

    ``k`` is the number of points kept per centroid (``per_centroid``) or
    centroids kept per point (``per_point``); it is ignored when the
    filtration is ``off``.
    """

    c: int = 3
    m: float = 2.0
    k: int = 10
    max_iter: int = 300
    tol: float = 1e-5
    seed: int = 0
    filtration: str = "per_centroid"
    alpha: float = 1.0

    def __post_init__(self):
        if int(self.c) != self.c or self.c < 1:
            raise UsageError(f"c must be a positive integer, got {self.c}")
        if not self.m > 1:
            raise UsageError(f"fuzziness m must exceed 1, got {self.m}")
        if int(self.k) != self.k or self.k < 1:
            raise UsageError(f"k must be a positive integer, got {self.k}")
        if int(self.max_iter) != self.max_iter or self.max_iter < 1:
            raise UsageError(f"max_iter must be >= 1, got {self.max_iter}")
        if not self.tol > 0:
            raise UsageError(f"tol must be positive, got {self.tol}")
        if self.filtration not in FILTRATION_MODES:
            raise UsageError(f"filtration must be one of {FILTRATION_MODES}, got {self.filtration!r}")
        if not (self.alpha > 0 and np.isfinite(self.alpha)):
            raise UsageError(f"alpha must be positive, got {self.alpha}")

    def check_against(self, n):
        if self.c > n:
            raise UsageError(f"c={self.c} exceeds the number of points n={n}")
        if self.filtration == "per_centroid" and self.k > n:
            raise UsageError(f"k={self.k} exceeds n={n} for per_centroid filtration")
        if self.filtration == "per_point" and self.k > self.c:
            raise UsageError(f"k={self.k} exceeds c={self.c} for per_point filtration")


@dataclass(frozen=True, eq=False)
class DistanceMatrix:
    """Squared distances ``U`` and the mask of entries surviving filtration."""

    U: np.ndarray
    mask: np.ndarray

    @property
    def filtered(self):
        return np.where(self.mask, self.U, 0.0)

    @property
    def fallback_rows(self):
        """Rows with no surviving entry; their weights use the unfiltered row."""
        return ~self.mask.any(axis=1)


@dataclass(eq=False)
class ClusteringRun:
    """Outcome of one clustering run (HypeFCM or a baseline).

    ``objective[t]`` and ``delta[t]`` are recorded after the membership update
    of iteration ``t``; ``delta`` is the Frobenius norm of the change in ``W``.
    """

    labels: np.ndarray
    W: np.ndarray
    V: np.ndarray
    objective: np.ndarray
    delta: np.ndarray
    n_iter: int
    converged: bool
    method: str = "hypefcm"
    alpha: float | None = None
    fallback_rows: list = field(default_factory=list)
    empty_clusters: np.ndarray | None = None

    @property
    def J_final(self):
        return float(self.objective[-1]) if len(self.objective) else float("nan")


def init_weights(n, c, seed=0):
    """Rows drawn i.i.d. from the symmetric Dirichlet(1/c, ..., 1/c).

    ``seed`` may be an int or a ``numpy.random.Generator`` (which is advanced).
    """
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    if c == 1:
        return np.ones((n, 1))
    W = rng.dirichlet(np.full(c, 1.0 / c), size=n)
    return W / W.sum(axis=1, keepdims=True)


def update_centroids(X, W, V_prev, m=2.0, alpha=1.0):
    """One log/average/exp step per centroid.

    Returns ``(V, empty)``; centroids whose column of ``W**m`` sums to zero
    are left where they were and flagged in ``empty``.
    """
    Wm = W**m
    mass = Wm.sum(axis=0)
    empty = mass <= 0
    logs = geometry.log_map(V_prev[None, :, :], X[:, None, :], alpha)
    mean = np.einsum("ic,icp->cp", Wm, logs) / np.where(empty, 1.0, mass)[:, None]
    V = geometry.exp_map(V_prev, mean, alpha)
    V[empty] = V_prev[empty]
    return V, empty


def compute_distances(X, V, alpha=1.0):
    """Squared geodesic distances, shape ``(n, c)``, with a full mask."""
    U = geometry.distance(X[:, None, :], V[None, :, :], alpha) ** 2
    return DistanceMatrix(U, np.ones(U.shape, dtype=bool))


def apply_filtration(U, k, mode="per_centroid"):
    """Keep the ``k`` smallest entries per column (or per row); ties go to the lower index."""
    if isinstance(U, DistanceMatrix):
        U = U.U
    U = np.asarray(U, dtype=float)
    if mode == "off":
        return DistanceMatrix(U, np.ones(U.shape, dtype=bool))
    mask = np.zeros(U.shape, dtype=bool)
    if mode == "per_centroid":
        if not 1 <= k <= U.shape[0]:
            raise UsageError(f"k={k} outside [1, n={U.shape[0]}]")
        keep = np.argsort(U, axis=0, kind="stable")[:k]
        np.put_along_axis(mask, keep, True, axis=0)
    elif mode == "per_point":
        if not 1 <= k <= U.shape[1]:
            raise UsageError(f"k={k} outside [1, c={U.shape[1]}]")
        keep = np.argsort(U, axis=1, kind="stable")[:, :k]
        np.put_along_axis(mask, keep, True, axis=1)
    else:
        raise UsageError(f"unknown filtration mode {mode!r}")
    return DistanceMatrix(U, mask)


def update_weights(D, m=2.0):
    """Inverse-distance memberships over the surviving entries of each row.

    ``w_ij = u_ij^(-1/(m-1)) / sum_l u_il^(-1/(m-1))`` over surviving ``l``;
    filtered-out entries get 0. A row with no survivors uses its unfiltered
    distances. A row whose survivors include exact zeros splits its
    membership equally among those zeros.
    """
    if not isinstance(D, DistanceMatrix):
        D = DistanceMatrix(np.asarray(D, dtype=float), np.ones(np.shape(D), dtype=bool))
    U = D.U
    mask = D.mask.copy()
    mask[D.fallback_rows] = True
    zero = mask & (U == 0)
    has_zero = zero.any(axis=1)
    with np.errstate(divide="ignore"):
        expo = np.where(mask & (U > 0), -np.log(np.where(U > 0, U, 1.0)) / (m - 1.0), -np.inf)
    top = expo.max(axis=1, keepdims=True)
    top = np.where(np.isfinite(top), top, 0.0)
    W = np.exp(expo - top)
    W /= np.where(has_zero[:, None], 1.0, W.sum(axis=1, keepdims=True))
    W[has_zero] = zero[has_zero] / zero[has_zero].sum(axis=1, keepdims=True)
    return W


def objective(X, W, V, m=2.0, alpha=1.0):
    """``sum_ij w_ij^m d(x_i, v_j)^2``."""
    return float(np.sum(W**m * compute_distances(X, V, alpha).U))


def defuzzify(W):
    """Row-wise argmax; the first maximal column wins ties."""
    return np.argmax(np.asarray(W), axis=1)


def _check_ball(X, alpha):
    X = np.asarray(X, dtype=float)
    if X.ndim != 2 or X.shape[0] == 0:
        raise DataError(f"expected a non-empty (n, p) array, got shape {X.shape}")
    if not np.all(np.isfinite(X)):
        raise DataError("data contain NaN or Inf")
    if np.any(alpha * np.sum(X * X, axis=1) >= 1.0):
        raise DataError("data must lie strictly inside the ball; embed them first")
    return X


def run(X, cfg, callback=None):
    """Cluster points that already lie in the ball of curvature ``cfg.alpha``.

    Initial memberships are Dirichlet rows; initial centroids are ``c``
    distinct data points, both drawn from a generator seeded with
    ``cfg.seed`` (memberships first). ``callback(t, W, V)``, if given, is
    called after every iteration.
    """
    X = _check_ball(X, cfg.alpha)
    n = X.shape[0]
    cfg.check_against(n)
    rng = np.random.default_rng(cfg.seed)
    W = init_weights(n, cfg.c, rng)
    V = X[rng.choice(n, size=cfg.c, replace=False)].copy()

    objective_trace, delta_trace, fallbacks = [], [], []
    empty = np.zeros(cfg.c, dtype=bool)
    converged = False
    t = 0
    for t in range(1, cfg.max_iter + 1):
        V, empty = update_centroids(X, W, V, cfg.m, cfg.alpha)
        D = apply_filtration(compute_distances(X, V, cfg.alpha), cfg.k, cfg.filtration)
        W_new = update_weights(D, cfg.m)
        objective_trace.append(float(np.sum(W_new**cfg.m * D.U)))
        delta = float(np.linalg.norm(W_new - W))
        delta_trace.append(delta)
        fallbacks.append(int(D.fallback_rows.sum()))
        W = W_new
        if callback is not None:
            callback(t, W, V)
        if delta <= cfg.tol:
            converged = True
            break

    return ClusteringRun(
        labels=defuzzify(W),
        W=W,
        V=V,
        objective=np.array(objective_trace),
        delta=np.array(delta_trace),
        n_iter=t,
        converged=converged,
        method="hypefcm",
        alpha=cfg.alpha,
        fallback_rows=fallbacks,
        empty_clusters=empty,
    )


def cluster(X, cfg=None, embedding=None, callback=None):
    """Embed raw data into the ball and run HypeFCM on it."""
    cfg = HypeFCMConfig() if cfg is None else cfg
    if embedding is None:
        embedding = EmbeddingConfig(alpha=cfg.alpha)
    elif embedding.alpha != cfg.alpha:
        raise UsageError(f"embedding alpha {embedding.alpha} differs from run alpha {cfg.alpha}")
    return run(embed(X, embedding), cfg, callback)
