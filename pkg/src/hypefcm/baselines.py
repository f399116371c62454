"""Euclidean fuzzy c-means and Lloyd k-means, for comparison and limit checks."""

from dataclasses import dataclass

import numpy as np

from .core import ClusteringRun, DistanceMatrix, defuzzify, init_weights, update_weights
from .exceptions import DataError, UsageError

__all__ = ["FCMConfig", "fcm_objective", "fcm_run", "kmeans_run"]


@dataclass(frozen=True)
class FCMConfig:
    c: int = 3
    m: float = 2.0
    max_iter: int = 300
    tol: float = 1e-5
    seed: int = 0

    def __post_init__(self):
        if int(self.c) != self.c or self.c < 1:
            raise UsageError(f"c must be a positive integer, got {self.c}")
        if not self.m > 1:
            raise UsageError(f"fuzziness m must exceed 1, got {self.m}")
        if int(self.max_iter) != self.max_iter or self.max_iter < 1:
            raise UsageError(f"max_iter must be >= 1, got {self.max_iter}")
        if not self.tol > 0:
            raise UsageError(f"tol must be positive, got {self.tol}")


def _check(X, c):
    X = np.asarray(X, dtype=float)
    if X.ndim != 2 or X.shape[0] == 0:
        raise DataError(f"expected a non-empty (n, p) array, got shape {X.shape}")
    if not np.all(np.isfinite(X)):
        raise DataError("data contain NaN or Inf")
    if c > X.shape[0]:
        raise UsageError(f"c={c} exceeds the number of points n={X.shape[0]}")
    return X


def _sqdist(X, V):
    return np.sum((X[:, None, :] - V[None, :, :]) ** 2, axis=-1)


def fcm_objective(X, W, V, m=2.0):
    """``sum_ij w_ij^m |x_i - v_j|^2``."""
    return float(np.sum(W**m * _sqdist(X, V)))


def fcm_run(X, cfg=None, callback=None):
    """Alternating minimisation of the fuzzy c-means criterion.

    Initialisation consumes the generator exactly as :func:`hypefcm.core.run`
    does, so both start from the same membership matrix for a given seed.
    """
    cfg = FCMConfig() if cfg is None else cfg
    X = _check(X, cfg.c)
    n = X.shape[0]
    rng = np.random.default_rng(cfg.seed)
    W = init_weights(n, cfg.c, rng)
    V = X[rng.choice(n, size=cfg.c, replace=False)].copy()

    objective, deltas = [], []
    empty = np.zeros(cfg.c, dtype=bool)
    converged = False
    t = 0
    for t in range(1, cfg.max_iter + 1):
        Wm = W**cfg.m
        mass = Wm.sum(axis=0)
        empty = mass <= 0
        V = np.where(empty[:, None], V, (Wm.T @ X) / np.where(empty, 1.0, mass)[:, None])
        U = _sqdist(X, V)
        W_new = update_weights(DistanceMatrix(U, np.ones(U.shape, dtype=bool)), cfg.m)
        objective.append(float(np.sum(W_new**cfg.m * U)))
        delta = float(np.linalg.norm(W_new - W))
        deltas.append(delta)
        W = W_new
        if callback is not None:
            callback(t, W, V)
        if delta <= cfg.tol:
            converged = True
            break
    return ClusteringRun(defuzzify(W), W, V, np.array(objective), np.array(deltas), t,
                         converged, method="fcm", empty_clusters=empty)


def kmeans_run(X, c, max_iter=300, seed=0):
    """Lloyd's algorithm from ``c`` distinct seeded data points.

    An empty cluster is re-seeded at the point farthest from its current
    centroid (unless every point already sits on its centroid). Stops when
    assignments no longer change.
    """
    X = _check(X, c)
    n = X.shape[0]
    rng = np.random.default_rng(seed)
    V = X[rng.choice(n, size=c, replace=False)].copy()
    labels = None
    inertia, changes = [], []
    converged = False
    t = 0
    for t in range(1, max_iter + 1):
        D = _sqdist(X, V)
        new = np.argmin(D, axis=1)
        inertia.append(float(D[np.arange(n), new].sum()))
        changes.append(float(n if labels is None else np.count_nonzero(new != labels)))
        if labels is not None and np.array_equal(new, labels):
            converged = True
            break
        labels = new
        for j in range(c):
            members = labels == j
            if members.any():
                V[j] = X[members].mean(axis=0)
            else:
                resid = D[np.arange(n), labels]
                far = int(np.argmax(resid))
                if resid[far] > 0:
                    V[j] = X[far]
                    labels[far] = j
    W = np.zeros((n, c))
    W[np.arange(n), labels] = 1.0
    return ClusteringRun(labels, W, V, np.array(inertia), np.array(changes), t, converged,
                         method="kmeans")
