"""Monte Carlo value of information for the linear-utility decision maker.

With ``u(a, theta) = <a, theta>`` and a centred prior every action has the
same prior value, so the value of information is ``E[h_A(Z)]`` where
``Z = E[theta | S] ~ N(0, W)`` and ``h_A`` is the support function of ``A``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.special import gammaln

from voichain.chaining import dudley_upper, perfect_info_benchmark, sudakov_lower
from voichain.errors import DimensionMismatch, UnsupportedSet
from voichain.gaussian_env import PosteriorOperator, iter_blocks
from voichain.geometry import L2, LINF, ActionSet, support_values

MIN_SAMPLES = 100


@dataclass(frozen=True)
class VoiEstimate:
    mean: float
    std_error: float
    n_samples: int
    seed: int
    closed_form: Optional[float] = None
    antithetic: bool = False

    def to_json(self) -> dict:
        return {
            "mean": self.mean,
            "std_error": self.std_error,
            "n_samples": self.n_samples,
            "seed": self.seed,
            "closed_form": self.closed_form,
            "antithetic": self.antithetic,
        }


@dataclass(frozen=True)
class BoundReport:
    d: int
    set_kind: str
    lower: float
    mc: float
    stderr: float
    upper: float
    n: int
    seed: int
    lambda_min: float
    lambda_max: float

    def to_json(self) -> dict:
        return {k: getattr(self, k) for k in (
            "d", "set_kind", "lower", "mc", "stderr", "upper", "n", "seed",
            "lambda_min", "lambda_max")}


def chi_mean(d: int) -> float:
    """``E ||g||_2`` for ``g ~ N(0, I_d)``."""
    return math.sqrt(2.0) * math.exp(float(gammaln((d + 1) / 2.0) - gammaln(d / 2.0)))


def closed_form_voi(op: PosteriorOperator, A: ActionSet) -> Optional[float]:
    """Exact ``E h_A(Z)`` where elementary: the cube, and the l2 ball with isotropic W."""
    w = op.w
    if A.kind == LINF:
        return math.sqrt(2.0 / math.pi) * float(np.sqrt(np.diag(w)).sum())
    if A.kind == L2:
        c = float(w[0, 0])
        if np.array_equal(w, c * np.eye(op.dim)):
            return math.sqrt(c) * chi_mean(op.dim)
    return None


def l2_jensen_bound(op: PosteriorOperator) -> float:
    """``E ||Z||_2 <= sqrt(tr W)``."""
    return math.sqrt(float(np.trace(op.w)))


def perfect_info_upper(op: PosteriorOperator) -> float:
    """Perfect-information value on the cube for a prior with variances ``max_i W_ii``.

    Any prior compatible with ``W`` has ``Var(theta_i) >= W_ii``; at ``W = I``
    this is ``d sqrt(2/pi)``.
    """
    return math.sqrt(float(np.diag(op.w).max())) * perfect_info_benchmark(op.dim)


def estimate_voi(op: PosteriorOperator, A: ActionSet, n: int, seed: int,
                 antithetic: Optional[bool] = None, threads: Optional[int] = 1) -> VoiEstimate:
    """Average of ``h_A`` over ``n`` posterior-mean draws.

    ``antithetic=None`` pairs ``Z`` with ``-Z`` only when ``A`` is not
    centrally symmetric; for symmetric sets ``h_A(-Z) == h_A(Z)`` and the
    pairing would halve the effective sample size.  Block partial sums are
    merged in block order with exact summation, so the result does not depend
    on ``threads``.
    """
    if n < MIN_SAMPLES:
        raise ValueError(f"n must be >= {MIN_SAMPLES}")
    if A.dim != op.dim:
        raise DimensionMismatch(f"action set dim {A.dim} vs operator dim {op.dim}")
    if antithetic is None:
        antithetic = not A.centrally_symmetric
    base = n // 2 if antithetic else n

    counts, sums, means, m2s = [], [], [], []
    for z in iter_blocks(op, base, seed, threads=threads, antithetic=antithetic):
        y = support_values(A, z)
        if antithetic:
            half = y.shape[0] // 2
            y = 0.5 * (y[:half] + y[half:])
        mu = float(y.mean())
        counts.append(y.shape[0])
        sums.append(math.fsum(y))
        means.append(mu)
        m2s.append(float(np.square(y - mu).sum()))
    total = sum(counts)
    mean = math.fsum(sums) / total
    m2 = math.fsum(m2 + c * (mu - mean) ** 2 for c, mu, m2 in zip(counts, means, m2s))
    std = math.sqrt(m2 / (total - 1))
    return VoiEstimate(
        mean=mean,
        std_error=std / math.sqrt(total),
        n_samples=2 * base if antithetic else base,
        seed=seed,
        closed_form=closed_form_voi(op, A),
        antithetic=antithetic,
    )


def voi_sandwich(op: PosteriorOperator, A: ActionSet, n: int, seed: int,
                 quadrature_nodes: int = 512, threads: Optional[int] = 1) -> BoundReport:
    """Entropy lower bound, MC estimate and upper bound on one scale."""
    if A.kind not in (L2, LINF):
        raise UnsupportedSet(f"bounds need an l2 or linf ball, got {A.kind}")
    lower = sudakov_lower(A, op).value
    est = estimate_voi(op, A, n, seed, threads=threads)
    if est.mean < 0:
        raise AssertionError("negative value of information on a symmetric set")
    upper = dudley_upper(A, op, quadrature_nodes) if A.kind == L2 else perfect_info_upper(op)
    return BoundReport(op.dim, A.kind, lower, est.mean, est.std_error, upper,
                       est.n_samples, seed, op.lambda_min, op.lambda_max)
