"""Dimension sweeps and log-log slope fits."""
from __future__ import annotations

import csv
import io
import logging
import math
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

import numpy as np
from scipy import stats

from voichain import _rng
from voichain.errors import InsufficientData, VoiError
from voichain.gaussian_env import SpectralBand, random_bounded_operator
from voichain.geometry import L2, LINF, ActionSet
from voichain.voi import voi_sandwich

log = logging.getLogger(__name__)

CSV_HEADER = ("d", "replicate", "seed", "mc", "stderr", "lower", "upper", "lambda_min", "lambda_max")
FIELDS = ("mc", "lower", "upper")


@dataclass(frozen=True)
class SweepConfig:
    dims: Sequence[int]
    band: SpectralBand
    set_kind: str
    n_mc: int
    seed: int = 0
    replicates: int = 1
    quadrature_nodes: int = 512
    threads: Optional[int] = 1

    def __post_init__(self):
        dims = tuple(int(d) for d in self.dims)
        if not dims or any(d < 1 for d in dims) or list(dims) != sorted(set(dims)):
            raise ValueError(f"dims must be strictly ascending positive integers, got {dims}")
        if self.replicates < 1:
            raise ValueError("replicates must be >= 1")
        if self.set_kind not in (L2, LINF):
            raise ValueError(f"sweeps support l2 and linf balls, got {self.set_kind!r}")
        object.__setattr__(self, "dims", dims)


@dataclass(frozen=True)
class SweepRecord:
    d: int
    replicate: int
    seed: int
    mc: float
    stderr: float
    lower: float
    upper: float
    lambda_min_realized: float
    lambda_max_realized: float
    failed: bool = False
    error: str = field(default="", compare=False)

    def csv_row(self) -> list:
        return [self.d, self.replicate, self.seed, repr(self.mc), repr(self.stderr),
                repr(self.lower), repr(self.upper), repr(self.lambda_min_realized),
                repr(self.lambda_max_realized)]


def cell_seed(base: int, d: int, replicate: int) -> int:
    return _rng.derive_seed(base, _rng.SWEEP, d, replicate)


def run_cell(cfg: SweepConfig, d: int, replicate: int) -> SweepRecord:
    seed = cell_seed(cfg.seed, d, replicate)
    try:
        op = random_bounded_operator(d, cfg.band, seed)
        A = ActionSet(cfg.set_kind, d)
        rep = voi_sandwich(op, A, cfg.n_mc, seed, cfg.quadrature_nodes, threads=cfg.threads)
    except (VoiError, np.linalg.LinAlgError) as exc:
        log.warning("sweep cell d=%d replicate=%d failed: %s", d, replicate, exc)
        nan = math.nan
        return SweepRecord(d, replicate, seed, nan, nan, nan, nan, nan, nan, True, str(exc))
    return SweepRecord(d, replicate, seed, rep.mc, rep.stderr, rep.lower, rep.upper,
                       rep.lambda_min, rep.lambda_max)


def run_sweep(cfg: SweepConfig) -> list[SweepRecord]:
    """One record per (d, replicate); deterministic in ``cfg``.

    Cells that hit a numerical error are kept with ``failed=True``.
    """
    records = []
    for d in cfg.dims:
        for r in range(cfg.replicates):
            records.append(run_cell(cfg, d, r))
            log.info("d=%d replicate=%d done", d, r)
    return records


def fit_loglog_slope(records: Iterable[SweepRecord], field: str = "mc") -> tuple[float, float]:
    """OLS of ``log(mean field per d)`` on ``log d``; returns ``(slope, r2)``."""
    if field not in FIELDS:
        raise ValueError(f"field must be one of {FIELDS}")
    by_d: dict[int, list[float]] = {}
    for rec in records:
        if not rec.failed:
            by_d.setdefault(rec.d, []).append(getattr(rec, field))
    if len(by_d) < 4:
        raise InsufficientData(f"need >= 4 distinct d values, got {len(by_d)}")
    ds = sorted(by_d)
    x = np.log(ds)
    y = np.log([np.mean(by_d[d]) for d in ds])
    fit = stats.linregress(x, y)
    return float(fit.slope), float(fit.rvalue ** 2)


def records_to_csv(records: Iterable[SweepRecord]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for rec in records:
        if not rec.failed:
            w.writerow(rec.csv_row())
    return buf.getvalue()


def sweep_summary(cfg: SweepConfig, records: Sequence[SweepRecord]) -> dict:
    slopes = {}
    for f in FIELDS:
        try:
            slope, r2 = fit_loglog_slope(records, f)
            slopes[f] = {"slope": slope, "r2": r2}
        except InsufficientData:
            slopes[f] = None
    return {
        "dims": list(cfg.dims),
        "band": [cfg.band.lambda_lo, cfg.band.lambda_hi],
        "set_kind": cfg.set_kind,
        "n_mc": cfg.n_mc,
        "seed": cfg.seed,
        "replicates": cfg.replicates,
        "n_records": sum(not r.failed for r in records),
        "failures": [{"d": r.d, "replicate": r.replicate, "error": r.error}
                     for r in records if r.failed],
        "slopes": slopes,
    }
