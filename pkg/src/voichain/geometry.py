"""Action sets and the intrinsic pseudometric ``rho(a, b) = ||a - b||_W``."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, NamedTuple, Optional

import numpy as np
from scipy.special import gammaln

from voichain import _rng, kernels
from voichain.errors import DimensionMismatch, UnsupportedSet
from voichain.gaussian_env import PosteriorOperator

L1, L2, LINF, FINITE, CUSTOM = "l1", "l2", "linf", "finite", "custom"
KINDS = (L1, L2, LINF, FINITE, CUSTOM)


@dataclass(frozen=True, eq=False)
class ActionSet:
    """Decision space ``A``.

    Balls are unit balls centred at the origin.  A custom set is given by its
    support function together with ``lipschitz = sup_{a in A} ||a||_2`` and,
    optionally, a sample of its points for diameter estimates.
    """

    kind: str
    dim: int
    points: Optional[np.ndarray] = None
    support_fn: Optional[Callable[[np.ndarray], float]] = None
    lipschitz: Optional[float] = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown action set kind {self.kind!r}")
        if self.dim < 1:
            raise ValueError("dim must be >= 1")
        if self.kind == FINITE:
            pts = np.atleast_2d(np.asarray(self.points, dtype=float))
            if pts.shape[1] != self.dim or pts.shape[0] < 1:
                raise DimensionMismatch(f"points of shape {pts.shape} for dim {self.dim}")
            if np.unique(pts, axis=0).shape[0] != pts.shape[0]:
                raise ValueError("finite action set has repeated rows")
            pts.setflags(write=False)
            object.__setattr__(self, "points", pts)
        if self.kind == CUSTOM:
            self._check_custom()

    def _check_custom(self):
        if self.support_fn is None or self.lipschitz is None:
            raise ValueError("custom action set needs support_fn and lipschitz")
        if abs(self.support_fn(np.zeros(self.dim))) > 1e-12:
            raise ValueError("support function must vanish at 0")
        rng = _rng.stream(0, 0)
        for _ in range(8):
            m = rng.standard_normal(self.dim)
            c = rng.uniform(0.1, 10.0)
            h, hc = self.support_fn(m), self.support_fn(c * m)
            if not math.isclose(hc, c * h, rel_tol=1e-9, abs_tol=1e-12):
                raise ValueError("support function is not positively homogeneous")
        if self.points is not None:
            pts = np.atleast_2d(np.asarray(self.points, dtype=float))
            if pts.shape[1] != self.dim:
                raise DimensionMismatch("custom point sample has wrong dimension")
            object.__setattr__(self, "points", pts)

    @classmethod
    def l1_ball(cls, d):
        return cls(L1, d)

    @classmethod
    def l2_ball(cls, d):
        return cls(L2, d)

    @classmethod
    def linf_ball(cls, d):
        return cls(LINF, d)

    @classmethod
    def finite(cls, points):
        points = np.atleast_2d(np.asarray(points, dtype=float))
        return cls(FINITE, points.shape[1], points=points)

    @classmethod
    def custom(cls, d, support_fn, lipschitz, points=None):
        return cls(CUSTOM, d, points=points, support_fn=support_fn, lipschitz=lipschitz)

    @property
    def centrally_symmetric(self) -> bool:
        return self.kind in (L1, L2, LINF)

    def contains(self, x: np.ndarray, tol: float = 1e-12) -> np.ndarray:
        """Row-wise membership for the ball kinds."""
        x = np.atleast_2d(x)
        if self.kind == L2:
            return kernels.l2_rows(x) <= 1 + tol
        if self.kind == LINF:
            return kernels.linf_rows(x) <= 1 + tol
        if self.kind == L1:
            return kernels.l1_rows(x) <= 1 + tol
        raise UnsupportedSet(f"membership not available for {self.kind}")


def _check_dim(A_dim, m):
    if m.shape[-1] != A_dim:
        raise DimensionMismatch(f"vector of length {m.shape[-1]} for dimension {A_dim}")


def support_values(A: ActionSet, z: np.ndarray) -> np.ndarray:
    """``sup_{a in A} <a, z_i>`` for every row of ``z``."""
    z = np.ascontiguousarray(np.atleast_2d(np.asarray(z, dtype=float)))
    _check_dim(A.dim, z)
    if A.kind == LINF:
        return kernels.l1_rows(z)
    if A.kind == L2:
        return kernels.l2_rows(z)
    if A.kind == L1:
        return kernels.linf_rows(z)
    if A.kind == FINITE:
        return kernels.max_dot_rows(z, np.ascontiguousarray(A.points))
    return np.array([A.support_fn(row) for row in z], dtype=float)


def support_function(A: ActionSet, m) -> float:
    m = np.asarray(m, dtype=float)
    if not np.all(np.isfinite(m)):
        raise ValueError("direction must be finite")
    return float(support_values(A, m.reshape(1, -1))[0])


@dataclass(frozen=True, eq=False)
class IntrinsicMetric:
    operator: PosteriorOperator

    @property
    def dim(self) -> int:
        return self.operator.dim

    def whiten(self, x: np.ndarray) -> np.ndarray:
        """Map points so that ``rho`` becomes the Euclidean distance."""
        x = np.atleast_2d(np.asarray(x, dtype=float))
        _check_dim(self.dim, x)
        return np.ascontiguousarray(x @ self.operator.sqrt_factor)


def distance(metric: IntrinsicMetric, a, b) -> float:
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    _check_dim(metric.dim, a)
    _check_dim(metric.dim, b)
    if not (np.all(np.isfinite(a)) and np.all(np.isfinite(b))):
        raise ValueError("points must be finite")
    diff = a - b
    return float(math.sqrt(max(float(diff @ metric.operator.w @ diff), 0.0)))


def diameter(A: ActionSet, metric: IntrinsicMetric, budget: int = 4096,
             seed: int = 0) -> tuple[float, float]:
    """Certified interval ``(lower, upper)`` for ``sup rho(a, a')`` over ``A``.

    Exact for the l1 and l2 balls, and for finite sets or low-dimensional
    cubes when ``budget`` allows full enumeration.
    """
    op = metric.operator
    d = metric.dim
    if A.dim != d:
        raise DimensionMismatch("action set and metric dimensions differ")
    top = 2.0 * math.sqrt(op.lambda_max)
    if A.kind == L2:
        return top, top
    if A.kind == L1:
        # extreme points are +-e_i
        v = 2.0 * math.sqrt(float(np.diag(op.w).max()))
        return v, v
    if A.kind == LINF:
        # rho-diameter of the cube is 2 max over vertices of ||v||_W
        if d < 63 and (1 << d) <= budget:
            codes = np.arange(1 << d, dtype=np.int64)
            verts = np.where((codes[:, None] >> np.arange(d)) & 1, 1.0, -1.0)
            v = 2.0 * float(kernels.l2_rows(metric.whiten(verts)).max())
            return v, v
        rng = _rng.stream(seed, _rng.DIAMETER)
        verts = rng.choice([-1.0, 1.0], size=(budget, d))
        lower = 2.0 * float(kernels.l2_rows(metric.whiten(verts)).max())
        return lower, top * math.sqrt(d)
    pts = A.points
    if pts is None:
        raise UnsupportedSet("custom action set without a point sample")
    y = metric.whiten(pts)
    n = y.shape[0]
    radius = float(kernels.l2_rows(y).max())
    if A.kind == FINITE and n * n <= budget:
        v = float(kernels.max_pairwise(y))
        return v, v
    rng = _rng.stream(seed, _rng.DIAMETER)
    i = rng.integers(0, n, size=budget)
    j = rng.integers(0, n, size=budget)
    lower = float(kernels.l2_rows(y[i] - y[j]).max())
    if A.kind == CUSTOM:
        # the sample may miss extreme points; only the declared radius is certified
        return lower, max(lower, top * A.lipschitz)
    return lower, 2.0 * radius


def log_unit_ball_volume(d: int) -> float:
    """Log Lebesgue volume of the Euclidean unit ball in ``R^d``."""
    return 0.5 * d * math.log(math.pi) - float(gammaln(0.5 * d + 1.0))


def log_volume(A: ActionSet) -> float:
    if A.kind == L2:
        return log_unit_ball_volume(A.dim)
    if A.kind == LINF:
        return A.dim * math.log(2.0)
    if A.kind == L1:
        return A.dim * math.log(2.0) - float(gammaln(A.dim + 1.0))
    raise UnsupportedSet(f"no closed-form volume for {A.kind}")


class Volume(NamedTuple):
    log: float
    value: Optional[float]


def ellipsoid_unit_ball_volume(op: PosteriorOperator) -> Volume:
    """Volume of ``{a : a^T W a <= 1}``, carried in log space."""
    lv = log_unit_ball_volume(op.dim) - 0.5 * op.log_det
    value = math.exp(lv) if lv < 700.0 else None
    return Volume(lv, value)
