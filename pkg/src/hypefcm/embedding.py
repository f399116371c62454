"""Placing a Euclidean dataset inside the Poincare ball."""

from dataclasses import dataclass

import numpy as np

from .exceptions import DataError, UsageError

__all__ = ["EmbeddingConfig", "embed", "embedding_scale", "zscore"]


@dataclass(frozen=True)
class EmbeddingConfig:
    """How raw data is mapped into the ball of curvature ``alpha``.

    Attributes
    ----------
    alpha : float
        Curvature parameter; the ball has radius ``1 / sqrt(alpha)``.
    margin : float
        Largest embedded norm as a fraction of the reference radius, in (0, 1).
    centering : bool
        Subtract the per-feature mean before scaling.
    standardize : bool
        Z-score each feature before centering/scaling.
    fit_to_ball : bool
        If True the farthest point always lands at ``margin / sqrt(alpha)``,
        so the embedded geometry is the same for every ``alpha`` up to scale.
        If False (default) data is scaled to radius ``margin`` in absolute
        units and only shrunk further when the ball is smaller than that
        (``alpha > 1``); small ``alpha`` then approaches Euclidean geometry.
    """

    alpha: float = 1.0
    margin: float = 0.9
    centering: bool = True
    standardize: bool = False
    fit_to_ball: bool = False

    def __post_init__(self):
        if not (self.alpha > 0 and np.isfinite(self.alpha)):
            raise UsageError(f"alpha must be positive, got {self.alpha}")
        if not 0 < self.margin < 1:
            raise UsageError(f"margin must lie in (0, 1), got {self.margin}")


def zscore(X):
    """Standardize columns; constant columns are only centered."""
    X = np.asarray(X, dtype=float)
    std = X.std(axis=0)
    return (X - X.mean(axis=0)) / np.where(std > 0, std, 1.0)


def embedding_scale(radius, cfg):
    """Uniform factor mapping data of max norm ``radius`` into the ball."""
    if radius == 0:
        return 0.0
    root = np.sqrt(cfg.alpha)
    denom = root if cfg.fit_to_ball else max(root, 1.0)
    return cfg.margin / (denom * radius)


def embed(X, cfg=None):
    """Similarity transform of the rows of ``X`` into the ball.

    Returns an ``(n, p)`` array with ``alpha * |x'|^2 <= margin^2 < 1`` for
    every row. Distance ratios between rows are preserved.
    """
    cfg = EmbeddingConfig() if cfg is None else cfg
    X = np.asarray(X, dtype=float)
    if X.ndim != 2 or X.shape[0] < 1 or X.shape[1] < 1:
        raise DataError(f"expected a non-empty 2-D array, got shape {X.shape}")
    if not np.all(np.isfinite(X)):
        bad = np.argwhere(~np.isfinite(X))[0]
        raise DataError(f"non-finite value at row {bad[0]}, column {bad[1]}")
    if cfg.standardize:
        X = zscore(X)
    if cfg.centering:
        X = X - X.mean(axis=0)
    radius = float(np.max(np.linalg.norm(X, axis=1)))
    return X * embedding_scale(radius, cfg)
