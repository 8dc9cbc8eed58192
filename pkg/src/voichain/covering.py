"""Covering and packing numbers under the intrinsic metric.

Two routes are offered:

* on a finite proxy cloud of ``A``: greedy farthest-point packing, which
  gives a maximal eps-separated set (hence an eps-cover), and the resulting
  packing/covering sandwich ``M(2 eps) <= N(eps) <= M(eps)``;
* on the continuous balls: volume-ratio bounds, carried as log-counts.

Exhaustive packing/covering on clouds of at most ``EXACT_MAX_POINTS`` points is
available for verification.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import asdict, dataclass
from typing import Optional

import numpy as np
from scipy.special import ndtri
from scipy.stats import qmc

from voichain import _rng, kernels
from voichain.errors import UnsupportedSet
from voichain.gaussian_env import PosteriorOperator
from voichain.geometry import FINITE, L2, LINF, ActionSet, IntrinsicMetric, log_unit_ball_volume, log_volume

PROVENANCES = ("grid", "sobol", "uniform", "vertices")
EXACT_MAX_POINTS = 20
# counts whose log exceeds this are carried as logs only
_INT_LOG_LIMIT = 40.0
# guards ceil() against exp(log(k)) landing a hair above the integer k
_CEIL_RTOL = 1e-9


@dataclass(frozen=True, eq=False)
class PointCloud:
    points: np.ndarray
    provenance: str

    def __post_init__(self):
        pts = np.ascontiguousarray(np.atleast_2d(np.asarray(self.points, dtype=float)))
        if pts.shape[0] < 1:
            raise ValueError("empty point cloud")
        if self.provenance not in PROVENANCES:
            raise ValueError(f"unknown provenance {self.provenance!r}")
        object.__setattr__(self, "points", pts)

    def __len__(self):
        return self.points.shape[0]


@dataclass(frozen=True)
class CoveringEstimate:
    epsilon: float
    log_n_lower: float
    log_n_upper: Optional[float]
    method: str
    n_lower: Optional[int] = None
    n_upper: Optional[int] = None

    def __post_init__(self):
        if self.log_n_upper is not None and self.log_n_lower > self.log_n_upper + 1e-12:
            raise ValueError("covering estimate with lower > upper")

    def to_json(self) -> dict:
        out = asdict(self)
        del out["n_lower"], out["n_upper"]
        return out


def _count(log_ratio: float) -> tuple[Optional[int], float]:
    """``ceil`` of ``exp(log_ratio)`` clamped to >= 1, plus its log."""
    if log_ratio <= 0.0:
        return 1, 0.0
    if log_ratio > _INT_LOG_LIMIT:
        return None, log_ratio
    n = max(1, math.ceil(math.exp(log_ratio) * (1.0 - _CEIL_RTOL)))
    return n, math.log(n)


# ---------------------------------------------------------------------------
# clouds


def _ball_from_unit(u: np.ndarray, kind: str) -> np.ndarray:
    """Map points of the unit cube ``[0,1)^(d+1)`` into the unit ball."""
    if kind == LINF:
        return 2.0 * u[:, :-1] - 1.0
    d = u.shape[1] - 1
    g = ndtri(np.clip(u[:, :-1], 1e-12, 1 - 1e-12))
    g /= np.linalg.norm(g, axis=1, keepdims=True)
    return g * u[:, -1:] ** (1.0 / d)


def make_cloud(A: ActionSet, n: int, provenance: str, seed: int = 0) -> PointCloud:
    """Finite proxy of ``A`` (an l2 or linf ball) with roughly ``n`` points."""
    if A.kind == FINITE:
        return PointCloud(A.points, "vertices")
    if A.kind not in (L2, LINF):
        raise UnsupportedSet(f"no point clouds for {A.kind}")
    d = A.dim
    rng = _rng.stream(seed, _rng.CLOUD, d)
    if provenance == "grid":
        m = max(2, int(round(n ** (1.0 / d))))
        axes = np.linspace(-1.0, 1.0, m)
        pts = np.stack(np.meshgrid(*([axes] * d), indexing="ij"), -1).reshape(-1, d)
        pts = pts[A.contains(pts)]
    elif provenance == "sobol":
        sampler = qmc.Sobol(d + 1, scramble=True, seed=rng)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            u = sampler.random_base2(max(0, math.ceil(math.log2(n))))[:n]
        pts = _ball_from_unit(u, A.kind)
    elif provenance == "uniform":
        pts = _ball_from_unit(rng.random((n, d + 1)), A.kind)
    elif provenance == "vertices":
        if A.kind != LINF:
            raise UnsupportedSet("vertex clouds exist only for the cube")
        if d < 63 and (1 << d) <= n:
            codes = np.arange(1 << d, dtype=np.int64)
            pts = np.where((codes[:, None] >> np.arange(d)) & 1, 1.0, -1.0)
        else:
            pts = np.unique(rng.choice([-1.0, 1.0], size=(n, d)), axis=0)
    else:
        raise ValueError(f"unknown provenance {provenance!r}")
    return PointCloud(pts, provenance)


def default_cloud(A: ActionSet, seed: int = 0) -> PointCloud:
    if A.dim <= 16:
        return make_cloud(A, 4096, "sobol", seed)
    return make_cloud(A, 65536, "uniform", seed)


# ---------------------------------------------------------------------------
# packing on clouds


def greedy_packing(cloud: PointCloud, metric: IntrinsicMetric, epsilon: float) -> list[int]:
    """Maximal eps-separated subset by farthest-point traversal from index 0.

    Pairwise distances in the result exceed ``epsilon`` and every cloud point
    lies within ``epsilon`` of the result.  Ties go to the lowest index.
    """
    if epsilon <= 0:
        raise ValueError("epsilon must be positive")
    y = metric.whiten(cloud.points)
    return [int(i) for i in kernels.greedy_packing(y, float(epsilon))]


def packing_covering_sandwich(cloud: PointCloud, metric: IntrinsicMetric,
                              epsilon: float) -> CoveringEstimate:
    lo = len(greedy_packing(cloud, metric, 2.0 * epsilon))
    hi = len(greedy_packing(cloud, metric, epsilon))
    if lo > hi:  # cannot happen for maximal packings; keep the invariant explicit
        raise AssertionError("greedy packing sizes out of order")
    return CoveringEstimate(float(epsilon), math.log(lo), math.log(hi), "greedy-packing", lo, hi)


def _near_masks(points: np.ndarray, metric: IntrinsicMetric, epsilon: float) -> np.ndarray:
    n = points.shape[0]
    if n > EXACT_MAX_POINTS:
        raise ValueError(f"exhaustive search limited to {EXACT_MAX_POINTS} points")
    y = metric.whiten(points)
    diff = y[:, None, :] - y[None, :, :]
    close = np.sqrt(np.einsum("ijk,ijk->ij", diff, diff)) <= epsilon
    np.fill_diagonal(close, True)
    return (close.astype(np.int64) << np.arange(n, dtype=np.int64)).sum(axis=1)


def exact_packing_number(points, metric: IntrinsicMetric, epsilon: float) -> int:
    """Largest subset with all pairwise distances ``> epsilon`` (exhaustive)."""
    return int(kernels.max_separated(_near_masks(np.atleast_2d(points), metric, epsilon)))


def exact_covering_number(points, metric: IntrinsicMetric, epsilon: float) -> int:
    """Fewest closed eps-balls centred at cloud points covering the cloud."""
    return int(kernels.min_cover(_near_masks(np.atleast_2d(points), metric, epsilon)))


# ---------------------------------------------------------------------------
# volume bounds on the balls


def log_volume_lower(A: ActionSet, op: PosteriorOperator, epsilon: float) -> float:
    """``log Vol(A) - log Vol(eps B_rho)``, unclamped."""
    d = A.dim
    return (log_volume(A) - d * math.log(epsilon) - log_unit_ball_volume(d)
            + 0.5 * op.log_det)


def log_volume_upper(op: PosteriorOperator, epsilon: float) -> float:
    """Log of ``(2/eps + lambda_min^{-1/2})^d sqrt(det W)`` for the l2 ball."""
    d = op.dim
    return d * math.log(2.0 / epsilon + 1.0 / math.sqrt(op.lambda_min)) + 0.5 * op.log_det


def volume_bounds(A: ActionSet, op: PosteriorOperator, epsilon: float) -> CoveringEstimate:
    if epsilon <= 0:
        raise ValueError("epsilon must be positive")
    if A.kind not in (L2, LINF):
        raise UnsupportedSet(f"volume bounds need an l2 or linf ball, got {A.kind}")
    op.require_invertible()
    n_lo, log_lo = _count(log_volume_lower(A, op, epsilon))
    if A.kind == LINF:
        return CoveringEstimate(float(epsilon), log_lo, None, "volume", n_lo, None)
    n_hi, log_hi = _count(log_volume_upper(op, epsilon))
    return CoveringEstimate(float(epsilon), log_lo, log_hi, "volume", n_lo, n_hi)
