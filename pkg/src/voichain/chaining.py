"""Entropy bounds on the generic-chaining functional gamma_2(A, rho).

Lower: ``eps * sqrt(log N(A, rho, eps))`` for any eps > 0, with ``log N``
bounded below by the volume ratio.  Upper (l2 ball only): Dudley's entropy
integral with the Minkowski-sum covering bound.  Both hold up to universal
constants, which are not estimated.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple, Optional

import numpy as np
from scipy.special import gammaln

from voichain.covering import log_volume_lower
from voichain.errors import UnsupportedSet
from voichain.gaussian_env import PosteriorOperator
from voichain.geometry import L2, LINF, ActionSet

GRID_POINTS = 64
GRID_SPAN = 1e4
# the t = -log(eps / diam) range; the integrand decays like exp(-t)
T_MAX = 40.0
_GL_ORDER = 8

# Sudakov value on the cube is at least LINF_LOWER_CONSTANT * sqrt(lambda_min) * d.
# At eps* the entropy bound is >= d/2, and Gamma(x + 1) >= (x / e)^x gives
# eps* >= (2 / (pi sqrt e)) sqrt(lambda_min) sqrt(d / (2e)).
LINF_LOWER_CONSTANT = 1.0 / (math.pi * math.e)


class SudakovBound(NamedTuple):
    value: float
    epsilon_star: float
    closed_form_epsilon: float
    closed_form_value: float


@dataclass
class GammaBounds:
    lower: float
    upper: float
    epsilon_star: float
    d: int
    lambda_min: float
    lambda_max: float
    nodes: int
    detail: dict = field(default_factory=dict, repr=False)

    def to_json(self) -> dict:
        return {
            "lower": self.lower,
            "upper": self.upper,
            "epsilon_star": self.epsilon_star,
            "d": self.d,
            "lambda_min": self.lambda_min,
            "lambda_max": self.lambda_max,
            "nodes": self.nodes,
        }


def _entropy_lower(A: ActionSet, op: PosteriorOperator, eps: float) -> float:
    return eps * math.sqrt(max(0.0, log_volume_lower(A, op, eps)))


def closed_form_epsilon(A: ActionSet, op: PosteriorOperator) -> float:
    """The explicit eps making the volume entropy bound of order d."""
    d = A.dim
    if A.kind == L2:
        return math.exp(-0.5 + op.log_det / (2 * d))
    if A.kind == LINF:
        return 2.0 / (math.pi * math.sqrt(math.e)) * math.exp(
            (0.5 * op.log_det + float(gammaln(0.5 * d + 1.0))) / d)
    raise UnsupportedSet(f"no entropy lower bound for {A.kind}")


def _diameter_bound(A: ActionSet, op: PosteriorOperator) -> float:
    top = 2.0 * math.sqrt(op.lambda_max)
    return top if A.kind == L2 else top * math.sqrt(A.dim)


def sudakov_lower(A: ActionSet, op: PosteriorOperator,
                  grid_points: int = GRID_POINTS) -> SudakovBound:
    """Best ``eps sqrt(log N)`` over the closed-form eps and a log grid.

    The grid has ``grid_points`` values on ``[diam / 1e4, diam]``.
    """
    if A.kind not in (L2, LINF):
        raise UnsupportedSet(f"sudakov_lower needs an l2 or linf ball, got {A.kind}")
    op.require_invertible()
    eps0 = closed_form_epsilon(A, op)
    v0 = _entropy_lower(A, op, eps0)
    diam = _diameter_bound(A, op)
    best, best_eps = v0, eps0
    for eps in np.geomspace(diam / GRID_SPAN, diam, grid_points):
        v = _entropy_lower(A, op, float(eps))
        if v > best:
            best, best_eps = v, float(eps)
    return SudakovBound(best, best_eps, eps0, v0)


def _gl_rule(nodes: int, t_max: float) -> tuple[np.ndarray, np.ndarray]:
    x, w = np.polynomial.legendre.leggauss(_GL_ORDER)
    panels = max(1, nodes // _GL_ORDER)
    edges = np.linspace(0.0, t_max, panels + 1)
    half = 0.5 * np.diff(edges)
    mid = 0.5 * (edges[:-1] + edges[1:])
    t = (mid[:, None] + half[:, None] * x[None, :]).ravel()
    wt = (half[:, None] * w[None, :]).ravel()
    return t, wt


def log_covering_upper(op: PosteriorOperator, eps: np.ndarray) -> np.ndarray:
    """``d log(2/eps + lambda_min^{-1/2}) + log sqrt(det W)`` for the l2 ball."""
    d = op.dim
    return d * np.log(2.0 / eps + 1.0 / math.sqrt(op.lambda_min)) + 0.5 * op.log_det


def dudley_integral(op: PosteriorOperator, quadrature_nodes: int = 512) -> tuple[float, dict]:
    """Integral of ``sqrt(max(0, log N_upper(eps)))`` over ``(0, 2 sqrt(lambda_max)]``.

    Integrated in ``t`` with ``eps = diam * exp(-t)``, composite Gauss-Legendre.
    """
    if quadrature_nodes < 16:
        raise ValueError("quadrature_nodes must be >= 16")
    op.require_invertible()
    diam = 2.0 * math.sqrt(op.lambda_max)
    t, wt = _gl_rule(quadrature_nodes, T_MAX)
    eps = diam * np.exp(-t)
    integrand = np.sqrt(np.maximum(0.0, log_covering_upper(op, eps)))
    value = float(np.dot(wt, integrand * eps))
    return value, {"eps": eps, "integrand": integrand, "weights": wt * eps}


def dudley_upper(A: ActionSet, op: PosteriorOperator, quadrature_nodes: int = 512) -> float:
    if A.kind != L2:
        raise UnsupportedSet("Dudley bound implemented for the l2 ball only")
    return dudley_integral(op, quadrature_nodes)[0]


def perfect_info_benchmark(d: int) -> float:
    """``E ||theta||_1`` for standard normal theta: ``d sqrt(2/pi)``."""
    if d < 1:
        raise ValueError("d must be >= 1")
    return d * math.sqrt(2.0 / math.pi)


def gamma_bounds(A: ActionSet, op: PosteriorOperator, quadrature_nodes: int = 512,
                 upper: Optional[float] = None) -> GammaBounds:
    """Sudakov lower and Dudley upper bounds in one record.

    For the cube no entropy upper bound is available; pass ``upper``
    (e.g. the perfect-information value) to fill the slot.
    """
    low = sudakov_lower(A, op)
    detail = {"sudakov": low}
    if A.kind == L2:
        upper, trace = dudley_integral(op, quadrature_nodes)
        detail.update(trace)
    elif upper is None:
        raise UnsupportedSet("supply an upper bound for the cube")
    return GammaBounds(low.value, float(upper), low.epsilon_star, op.dim,
                       op.lambda_min, op.lambda_max, quadrature_nodes, detail)
