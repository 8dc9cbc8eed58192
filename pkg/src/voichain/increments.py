"""Empirical check of sub-Gaussian increments.

For actions ``a, a'`` the increment ``<a - a', Z>`` of the value process is
compared against ``P(|D| >= t) <= 2 exp(-t^2 / (2 rho^2))`` on a grid of
thresholds proportional to ``rho = ||a - a'||_W``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from voichain import _rng, kernels
from voichain.gaussian_env import PosteriorOperator, sample_posterior_means

# thresholds in units of rho; past 3 rho there are too few exceedances to count
T_MULTIPLES = (0.0, 0.5, 1.0, 1.5, 2.0, 2.5, 3.0)
SLACK_SIGMAS = 3.0
MIN_SAMPLES = 10_000


@dataclass
class TailReport:
    pair: tuple
    rho: float
    t_grid: list
    empirical_tail: list
    bound: list
    violations: int
    degenerate: bool = False

    def to_json(self) -> dict:
        return {
            "pair": [list(map(float, self.pair[0])), list(map(float, self.pair[1]))],
            "rho": self.rho,
            "t_grid": self.t_grid,
            "empirical_tail": self.empirical_tail,
            "bound": self.bound,
            "violations": self.violations,
            "degenerate": self.degenerate,
        }


def subgaussian_bound(t, rho: float):
    return 2.0 * np.exp(-np.square(t) / (2.0 * rho * rho))


def tail_report(pair, rho: float, diffs: np.ndarray) -> TailReport:
    n = diffs.shape[0]
    t = rho * np.asarray(T_MULTIPLES)
    counts = kernels.tail_counts(np.abs(diffs), t)
    emp = counts / n
    bound = subgaussian_bound(t, rho)
    slack = SLACK_SIGMAS * np.sqrt(bound * (1.0 - bound / 2.0) / n)
    violations = int(np.count_nonzero(emp > bound + slack))
    return TailReport(pair, rho, t.tolist(), emp.tolist(), bound.tolist(), violations)


def check_increments(op: PosteriorOperator, pairs: Sequence, n: int, seed: int,
                     threads: Optional[int] = 1) -> list[TailReport]:
    """One :class:`TailReport` per pair; every pair sees the same draws of ``Z``."""
    if n < MIN_SAMPLES:
        raise ValueError(f"n must be >= {MIN_SAMPLES}")
    z = sample_posterior_means(op, n, seed, threads=threads)
    reports = []
    for a, b in pairs:
        a = np.asarray(a, dtype=float)
        b = np.asarray(b, dtype=float)
        diff = a - b
        rho = math.sqrt(max(float(diff @ op.w @ diff), 0.0))
        if rho == 0.0:
            reports.append(TailReport((a, b), 0.0, [], [], [], 0, degenerate=True))
            continue
        reports.append(tail_report((a, b), rho, z @ diff))
    return reports


def random_pairs(d: int, count: int, seed: int) -> list[tuple[np.ndarray, np.ndarray]]:
    """``count`` action pairs drawn uniformly from the cube ``[-1, 1]^d``."""
    rng = _rng.stream(seed, _rng.PAIRS, d)
    pts = rng.uniform(-1.0, 1.0, size=(count, 2, d))
    return [(p[0], p[1]) for p in pts]
