"""Joint Gaussian law of (theta, S) and the posterior operator it induces.

The posterior mean ``E[theta | S]`` of a centred jointly Gaussian pair is
``Sigma_ts Sigma_s^{-1} S``; its covariance

    W = Sigma_ts Sigma_s^{-1} Sigma_st

is the only object the value-of-information machinery needs.  This module
builds ``W`` from covariance blocks, generates ``W`` with a prescribed
eigenvalue band for experiments, and samples posterior means.
"""
from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Iterator, Optional

import numpy as np

from voichain import _rng
from voichain.errors import DimensionMismatch, NotPSD, SingularOperator, SingularSignalCovariance

PSD_RTOL = 1e-10
SINGULAR_EIG = 1e-12
MAX_SIGNAL_COND = 1e12

# rows per random block = max(1024, BLOCK_ELEMS // d); a function of d only,
# so block contents never depend on n or on thread count
BLOCK_ELEMS = 1 << 20


def block_rows(d: int) -> int:
    return max(1024, BLOCK_ELEMS // max(d, 1))


@dataclass(frozen=True)
class SpectralBand:
    lambda_lo: float
    lambda_hi: float

    def __post_init__(self):
        if not (self.lambda_lo > 0 and self.lambda_hi >= self.lambda_lo):
            raise ValueError(f"need 0 < lambda_lo <= lambda_hi, got {self.lambda_lo}, {self.lambda_hi}")

    @classmethod
    def parse(cls, text: str) -> "SpectralBand":
        lo, hi = (float(v) for v in text.split(","))
        return cls(lo, hi)


def _check_symmetric(m: np.ndarray, name: str) -> np.ndarray:
    scale = max(1.0, float(np.abs(m).max(initial=0.0)))
    if not np.allclose(m, m.T, rtol=0.0, atol=1e-10 * scale):
        raise NotPSD(f"{name} is not symmetric")
    return 0.5 * (m + m.T)


@dataclass(frozen=True)
class JointGaussian:
    """Covariance blocks of the centred Gaussian vector (theta, S).

    ``normalize_diag`` enforces unit prior variances ``diag(sigma_theta) == 1``;
    turn it off when only the spectral band of ``W`` matters.
    """

    sigma_theta: np.ndarray
    sigma_theta_s: np.ndarray
    sigma_s: np.ndarray
    normalize_diag: bool = True

    def __post_init__(self):
        st = np.atleast_2d(np.asarray(self.sigma_theta, dtype=float))
        sts = np.atleast_2d(np.asarray(self.sigma_theta_s, dtype=float))
        ss = np.atleast_2d(np.asarray(self.sigma_s, dtype=float))
        d, k = sts.shape
        if st.shape != (d, d) or ss.shape != (k, k):
            raise DimensionMismatch(
                f"block shapes {st.shape}, {sts.shape}, {ss.shape} are inconsistent"
            )
        st = _check_symmetric(st, "sigma_theta")
        ss = _check_symmetric(ss, "sigma_s")
        if self.normalize_diag and not np.allclose(np.diag(st), 1.0, rtol=0.0, atol=1e-12):
            raise ValueError("diagonal of sigma_theta must be 1 (pass normalize_diag=False to skip)")
        full = np.block([[st, sts], [sts.T, ss]])
        eig = np.linalg.eigvalsh(full)
        if eig[0] < -PSD_RTOL * max(eig[-1], 0.0):
            raise NotPSD(f"joint covariance has eigenvalue {eig[0]:.3g}")
        object.__setattr__(self, "sigma_theta", st)
        object.__setattr__(self, "sigma_theta_s", sts)
        object.__setattr__(self, "sigma_s", ss)

    @property
    def dim_theta(self) -> int:
        return self.sigma_theta.shape[0]

    @property
    def dim_signal(self) -> int:
        return self.sigma_s.shape[0]


@dataclass(frozen=True, eq=False)
class PosteriorOperator:
    """Covariance ``W`` of the posterior mean, with its eigendecomposition.

    Build with :meth:`from_matrix`; instances are immutable and thread-safe.
    ``sqrt_factor`` is the symmetric square root, so ``R.T @ R == W``.
    """

    w: np.ndarray
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    sqrt_factor: np.ndarray
    band: Optional[SpectralBand] = field(default=None)

    @classmethod
    def from_matrix(cls, w, band: Optional[SpectralBand] = None) -> "PosteriorOperator":
        w = np.atleast_2d(np.asarray(w, dtype=float))
        if w.ndim != 2 or w.shape[0] != w.shape[1]:
            raise DimensionMismatch(f"W must be square, got shape {w.shape}")
        if not np.all(np.isfinite(w)):
            raise ValueError("W has non-finite entries")
        w = _check_symmetric(w, "W")
        lam, vec = np.linalg.eigh(w)
        top = max(float(lam[-1]), 0.0)
        if lam[0] < -PSD_RTOL * top and lam[0] < -1e-300:
            raise NotPSD(f"W has eigenvalue {lam[0]:.3g}")
        lam = np.clip(lam, 0.0, None)
        recon = (vec * lam) @ vec.T
        if np.abs(recon - w).max(initial=0.0) > 1e-8 * max(1.0, top):
            raise NotPSD("eigendecomposition of W does not reconstruct W")
        if band is not None and top > band.lambda_hi * (1 + 1e-10):
            raise ValueError(f"largest eigenvalue {top} exceeds declared band {band}")
        sqrt_factor = (vec * np.sqrt(lam)) @ vec.T
        for arr in (w, lam, vec, sqrt_factor):
            arr.setflags(write=False)
        return cls(w, lam, vec, sqrt_factor, band)

    @property
    def dim(self) -> int:
        return self.w.shape[0]

    @property
    def lambda_min(self) -> float:
        return float(self.eigenvalues[0])

    @property
    def lambda_max(self) -> float:
        return float(self.eigenvalues[-1])

    def require_invertible(self) -> None:
        if self.lambda_min <= SINGULAR_EIG:
            raise SingularOperator(f"smallest eigenvalue {self.lambda_min:.3g} <= {SINGULAR_EIG}")

    @property
    def log_det(self) -> float:
        self.require_invertible()
        return float(np.log(self.eigenvalues).sum())

    def scaled(self, c: float) -> "PosteriorOperator":
        return PosteriorOperator.from_matrix(c * self.w)


def compute_posterior_operator(joint: JointGaussian) -> PosteriorOperator:
    """``W = Sigma_ts Sigma_s^{-1} Sigma_st`` for a valid joint law."""
    ss = joint.sigma_s
    if np.linalg.cond(ss) >= MAX_SIGNAL_COND:
        raise SingularSignalCovariance("sigma_s is numerically singular")
    sts = joint.sigma_theta_s
    w = sts @ np.linalg.solve(ss, sts.T)
    w = 0.5 * (w + w.T)
    gap = np.linalg.eigvalsh(w - joint.sigma_theta)[-1]
    if gap > 1e-8 * max(1.0, float(np.abs(joint.sigma_theta).max())):
        raise NotPSD(f"W exceeds sigma_theta by {gap:.3g} in Loewner order")
    return PosteriorOperator.from_matrix(w)


def haar_orthogonal(d: int, rng: np.random.Generator) -> np.ndarray:
    q, r = np.linalg.qr(rng.standard_normal((d, d)))
    return q * np.where(np.diag(r) < 0, -1.0, 1.0)


def random_bounded_operator(d: int, band: SpectralBand, seed: int) -> PosteriorOperator:
    """``W = Q diag(lam) Q^T`` with Haar ``Q`` and ``lam`` uniform on the band."""
    if d < 1:
        raise ValueError("d must be >= 1")
    if band.lambda_lo == band.lambda_hi:
        return PosteriorOperator.from_matrix(band.lambda_lo * np.eye(d), band)
    rng = _rng.stream(seed, _rng.OPERATOR, d)
    q = haar_orthogonal(d, rng)
    lam = rng.uniform(band.lambda_lo, band.lambda_hi, size=d)
    w = (q * lam) @ q.T
    return PosteriorOperator.from_matrix(0.5 * (w + w.T), band)


def _block(op: PosteriorOperator, seed: int, b: int, rows: int, antithetic: bool) -> np.ndarray:
    g = _rng.stream(seed, _rng.SAMPLE, b).standard_normal((rows, op.dim))
    z = g @ op.sqrt_factor
    if antithetic:
        z = np.concatenate([z, -z])
    return z


def iter_blocks(op: PosteriorOperator, n: int, seed: int, threads: Optional[int] = 1,
                antithetic: bool = False) -> Iterator[np.ndarray]:
    """Yield posterior-mean draws block by block, in block order.

    With ``antithetic`` each block holds its base rows followed by their
    negatives, and ``n`` counts base rows.
    """
    per = block_rows(op.dim)
    sizes = [min(per, n - s) for s in range(0, n, per)]
    if threads is None or threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            window = 2 * pool._max_workers
            for start in range(0, len(sizes), window):
                futs = [pool.submit(_block, op, seed, b, sizes[b], antithetic)
                        for b in range(start, min(start + window, len(sizes)))]
                for f in futs:
                    yield f.result()
    else:
        for b, m in enumerate(sizes):
            yield _block(op, seed, b, m, antithetic)


def sample_posterior_means(op: PosteriorOperator, n: int, seed: int,
                           threads: Optional[int] = 1) -> np.ndarray:
    """``n`` i.i.d. rows from ``N(0, W)``; deterministic in ``(op, n, seed)``."""
    if n < 1:
        raise ValueError("n must be >= 1")
    return np.concatenate(list(iter_blocks(op, n, seed, threads)))
