"""
Gyrovector arithmetic and Riemannian maps on the Poincare ball.

The ball of curvature parameter ``alpha`` is the open set
``{x in R^p : alpha * |x|^2 < 1}``, i.e. radius ``1 / sqrt(alpha)``.

All kernels operate on numpy arrays along the last axis and broadcast over
leading axes, so ``mobius_add(-V[None], X[:, None], alpha)`` gives an
``(n, c, p)`` array of gyro-differences. ``alpha = 0`` is accepted wherever the
Euclidean limit is defined (addition, scalar multiplication, distance,
log/exp) and reduces to ordinary vector arithmetic.

The :class:`BallPoint` / :class:`TangentVector` value types wrap single points
and check dimension and curvature agreement before delegating to the kernels.
"""

from dataclasses import dataclass, field

import numpy as np

from .exceptions import UsageError

#: Points with ``alpha * |x|^2`` at or above ``1 - BOUNDARY_EPS`` are pulled back
#: radially onto that level set.
BOUNDARY_EPS = 1e-10
#: Upper clamp for the ``artanh`` argument.
ARTANH_MAX = 1.0 - 1e-15

__all__ = [
    "BOUNDARY_EPS",
    "BallPoint",
    "LimitDeviation",
    "TangentVector",
    "conformal_factor",
    "distance",
    "euclidean_limit_check",
    "exp_map",
    "hyperboloid_distance",
    "log_map",
    "minkowski_dot",
    "mobius_add",
    "mobius_scalar",
    "poincare_distance",
    "project",
    "to_hyperboloid",
]


def _check_alpha(alpha):
    alpha = float(alpha)
    if not np.isfinite(alpha) or alpha < 0:
        raise UsageError(f"curvature alpha must be finite and >= 0, got {alpha}")
    return alpha


def _sqnorm(x):
    return np.sum(x * x, axis=-1, keepdims=True)


def _gyro_norm(x, y, alpha):
    """``|-x (+) y|`` via ``|x - y| / sqrt(1 - 2a<x,y> + a^2 |x|^2 |y|^2)``.

    Exactly zero when ``x == y``, unlike norming the Mobius sum.
    """
    xy = np.sum(x * y, axis=-1, keepdims=True)
    den = 1.0 - 2.0 * alpha * xy + alpha**2 * _sqnorm(x) * _sqnorm(y)
    return np.sqrt(_sqnorm(x - y) / den)


def _artanh(z):
    return np.arctanh(np.clip(z, 0.0, ARTANH_MAX))


def project(x, alpha=1.0, eps=BOUNDARY_EPS):
    """Radially rescale points so that ``alpha * |x|^2 <= 1 - eps``.

    Points already strictly inside that bound are returned unchanged.
    """
    x = np.asarray(x, dtype=float)
    alpha = _check_alpha(alpha)
    if alpha == 0.0:
        return x
    sq = alpha * _sqnorm(x)
    limit = 1.0 - eps
    outside = sq >= limit
    if not np.any(outside):
        return x
    factor = np.where(outside, np.sqrt(limit / np.where(outside, sq, 1.0)), 1.0)
    return x * factor


def conformal_factor(x, alpha=1.0):
    """``lambda_x = 2 / (1 - alpha |x|^2)``, keeping the reduced axis."""
    x = np.asarray(x, dtype=float)
    return 2.0 / (1.0 - _check_alpha(alpha) * _sqnorm(x))


def mobius_add(x, y, alpha=1.0):
    """Mobius addition ``x (+)_alpha y``.

    Parameters
    ----------
    x, y : array_like
        Points in the ball; shapes must broadcast along all but the last axis.
    alpha : float
        Curvature parameter. ``alpha = 0`` gives ``x + y``.

    Returns
    -------
    numpy.ndarray
        The gyro-sum, projected strictly inside the ball.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    alpha = _check_alpha(alpha)
    if x.shape[-1] != y.shape[-1]:
        raise UsageError(f"dimension mismatch: {x.shape[-1]} vs {y.shape[-1]}")
    if alpha == 0.0:
        return x + y
    xy = np.sum(x * y, axis=-1, keepdims=True)
    x2 = _sqnorm(x)
    y2 = _sqnorm(y)
    num = (1.0 + 2.0 * alpha * xy + alpha * y2) * x + (1.0 - alpha * x2) * y
    den = 1.0 + 2.0 * alpha * xy + alpha**2 * x2 * y2
    return project(num / den, alpha)


def mobius_scalar(r, x, alpha=1.0):
    """Mobius scalar multiplication ``r (x)_alpha x``; maps the origin to itself."""
    x = np.asarray(x, dtype=float)
    alpha = _check_alpha(alpha)
    if alpha == 0.0:
        return r * x
    norm = np.sqrt(_sqnorm(x))
    sa = np.sqrt(alpha)
    safe = np.where(norm > 0, norm, 1.0)
    scale = np.tanh(r * _artanh(sa * norm)) / (sa * safe)
    return project(np.where(norm > 0, scale * x, 0.0), alpha)


def distance(x, y, alpha=1.0):
    """Geodesic distance ``(2/sqrt(alpha)) artanh(sqrt(alpha) |-x (+) y|)``.

    As ``alpha -> 0`` this tends to ``2 |x - y|`` (the conformal factor at the
    origin is 2), which is what ``alpha = 0`` returns.
    """
    alpha = _check_alpha(alpha)
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if alpha == 0.0:
        return 2.0 * np.linalg.norm(y - x, axis=-1)
    x = project(x, alpha)
    y = project(y, alpha)
    sa = np.sqrt(alpha)
    return 2.0 / sa * _artanh(sa * _gyro_norm(x, y, alpha))[..., 0]


def poincare_distance(x, y, alpha=1.0):
    """Distance from the closed ``arccosh`` form of the ball metric.

    Algebraically identical to :func:`distance`; kept as an independent
    cross-check. ``arccosh(1 + d)`` is evaluated as
    ``log1p(d + sqrt(d (d + 2)))`` to keep precision for nearby points.
    """
    alpha = _check_alpha(alpha)
    if alpha == 0.0:
        raise UsageError("poincare_distance needs alpha > 0")
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    diff2 = np.sum((x - y) ** 2, axis=-1)
    den = (1.0 - alpha * np.sum(x * x, axis=-1)) * (1.0 - alpha * np.sum(y * y, axis=-1))
    d = 2.0 * alpha * diff2 / den
    return np.log1p(d + np.sqrt(d * (d + 2.0))) / np.sqrt(alpha)


def log_map(x, y, alpha=1.0):
    """Riemannian logarithm of ``y`` at base point ``x``.

    ``log_x(y) = 2 / (sqrt(alpha) lambda_x) * artanh(sqrt(alpha) |u|) * u / |u|``
    with ``u = -x (+) y``. Returns the zero vector where ``x == y``.
    The Riemannian norm satisfies ``lambda_x * |log_x(y)| = distance(x, y)``.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    alpha = _check_alpha(alpha)
    if alpha == 0.0:
        return y - x
    u = mobius_add(-x, y, alpha)
    norm = _gyro_norm(x, y, alpha)
    sa = np.sqrt(alpha)
    lam = conformal_factor(x, alpha)
    safe = np.where(norm > 0, norm, 1.0)
    coef = 2.0 / (sa * lam) * _artanh(sa * norm) / safe
    return np.where(norm > 0, coef * u, 0.0)


def exp_map(x, v, alpha=1.0):
    """Riemannian exponential of tangent vector ``v`` at base point ``x``.

    ``exp_x(v) = x (+) tanh(sqrt(alpha) lambda_x |v| / 2) v / (sqrt(alpha) |v|)``.
    """
    x = np.asarray(x, dtype=float)
    v = np.asarray(v, dtype=float)
    alpha = _check_alpha(alpha)
    if alpha == 0.0:
        return x + v
    norm = np.sqrt(_sqnorm(v))
    sa = np.sqrt(alpha)
    lam = conformal_factor(x, alpha)
    safe = np.where(norm > 0, norm, 1.0)
    step = np.where(norm > 0, np.tanh(sa * lam * norm / 2.0) / (sa * safe) * v, 0.0)
    return mobius_add(x, step, alpha)


def to_hyperboloid(x, alpha=1.0):
    """Isometry from the unit ball onto the forward sheet of the hyperboloid.

    ``x -> ((1 + |x|^2) / (1 - |x|^2), 2 x / (1 - |x|^2))``. Only defined for
    ``alpha == 1``.
    """
    if float(alpha) != 1.0:
        raise UsageError(f"to_hyperboloid is defined for alpha = 1 only, got {alpha}")
    x = np.asarray(x, dtype=float)
    sq = _sqnorm(x)
    den = 1.0 - sq
    return np.concatenate([(1.0 + sq) / den, 2.0 * x / den], axis=-1)


def minkowski_dot(a, b):
    """Lorentzian product ``-a0 b0 + sum_i ai bi``."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    return -a[..., 0] * b[..., 0] + np.sum(a[..., 1:] * b[..., 1:], axis=-1)


def hyperboloid_distance(a, b):
    """``arccosh(-<a, b>_M)`` with the argument clamped to ``>= 1``."""
    arg = np.maximum(-minkowski_dot(a, b), 1.0)
    return np.arccosh(arg)


@dataclass(frozen=True)
class LimitDeviation:
    alpha: float
    exp_deviation: float
    log_deviation: float


def euclidean_limit_check(x, y, alphas, v=None):
    """Measure how far exp/log are from ``x + v`` and ``y - x`` for each alpha.

    ``v`` defaults to ``y - x``. Returns one :class:`LimitDeviation` per alpha
    holding max-abs deviations.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    v = y - x if v is None else np.asarray(v, dtype=float)
    out = []
    for a in alphas:
        e = np.max(np.abs(exp_map(x, v, a) - (x + v)))
        g = np.max(np.abs(log_map(x, y, a) - (y - x)))
        out.append(LimitDeviation(float(a), float(e), float(g)))
    return out


@dataclass(frozen=True, eq=False)
class BallPoint:
    """A single point of the Poincare ball of curvature ``alpha``.

    Coordinates that reach the boundary band are clamped on construction,
    so ``alpha * |coords|^2 < 1`` always holds.
    """

    coords: np.ndarray
    alpha: float = 1.0

    def __post_init__(self):
        alpha = _check_alpha(self.alpha)
        c = np.array(self.coords, dtype=float).reshape(-1)
        if c.size == 0 or not np.all(np.isfinite(c)):
            raise UsageError("BallPoint coordinates must be a non-empty finite vector")
        c = project(c, alpha)
        c.setflags(write=False)
        object.__setattr__(self, "coords", c)
        object.__setattr__(self, "alpha", alpha)

    @property
    def dim(self):
        return self.coords.shape[0]

    def __eq__(self, other):
        if not isinstance(other, BallPoint):
            return NotImplemented
        return self.alpha == other.alpha and np.array_equal(self.coords, other.coords)

    def __hash__(self):
        return hash((self.alpha, self.coords.tobytes()))

    def __neg__(self):
        return BallPoint(-self.coords, self.alpha)

    def _compatible(self, other):
        if self.dim != other.dim:
            raise UsageError(f"dimension mismatch: {self.dim} vs {other.dim}")
        if self.alpha != other.alpha:
            raise UsageError(f"curvature mismatch: {self.alpha} vs {other.alpha}")

    def mobius_add(self, other: "BallPoint") -> "BallPoint":
        self._compatible(other)
        return BallPoint(mobius_add(self.coords, other.coords, self.alpha), self.alpha)

    def scale(self, r: float) -> "BallPoint":
        return BallPoint(mobius_scalar(r, self.coords, self.alpha), self.alpha)

    def distance(self, other: "BallPoint") -> float:
        self._compatible(other)
        return float(distance(self.coords, other.coords, self.alpha))

    def log(self, other: "BallPoint") -> "TangentVector":
        self._compatible(other)
        return TangentVector(log_map(self.coords, other.coords, self.alpha), self)

    def exp(self, v: "TangentVector") -> "BallPoint":
        if v.base != self:
            raise UsageError("tangent vector is not based at this point")
        return BallPoint(exp_map(self.coords, v.coords, self.alpha), self.alpha)

    def to_hyperboloid(self) -> np.ndarray:
        return to_hyperboloid(self.coords, self.alpha)


@dataclass(frozen=True, eq=False)
class TangentVector:
    """A vector in the tangent space at ``base``."""

    coords: np.ndarray
    base: BallPoint = field(repr=False)

    def __post_init__(self):
        c = np.array(self.coords, dtype=float).reshape(-1)
        if not np.all(np.isfinite(c)):
            raise UsageError("tangent coordinates must be finite")
        if c.shape[0] != self.base.dim:
            raise UsageError(f"dimension mismatch: {c.shape[0]} vs base {self.base.dim}")
        c.setflags(write=False)
        object.__setattr__(self, "coords", c)
