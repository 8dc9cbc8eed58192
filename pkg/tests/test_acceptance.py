"""Exit criteria for the package, one test per criterion.

Each test appends a PASS/FAIL line that is printed in the terminal summary.
Run alone with ``pytest tests/test_acceptance.py -v``.
"""
import json
import math
import time

import numpy as np
import pytest

from conftest import ACCEPTANCE_LINES
from oracles import chi_mean, grid_covering_number
from voichain.cli import main as cli_main
from voichain.covering import exact_covering_number, exact_packing_number, volume_bounds
from voichain.experiments import SweepConfig, fit_loglog_slope, records_to_csv, run_sweep
from voichain.gaussian_env import PosteriorOperator, SpectralBand, random_bounded_operator
from voichain.geometry import ActionSet, IntrinsicMetric
from voichain.voi import estimate_voi

SWEEP_DIMS = (8, 16, 32, 64, 128, 256, 512)
BAND = SpectralBand(0.5, 2.0)


def report(label, ok, detail):
    ACCEPTANCE_LINES.append(f"{'PASS' if ok else 'FAIL'}  {label}: {detail}")
    print(ACCEPTANCE_LINES[-1])
    assert ok, detail


# -- shared sweep (criteria 3, 4, 8) -------------------------------------------

@pytest.fixture(scope="module")
def sweeps():
    out = {}
    t0 = time.perf_counter()
    for kind in ("l2", "linf"):
        cfg = SweepConfig(SWEEP_DIMS, BAND, kind, n_mc=100_000, seed=20240601, replicates=3)
        out[kind] = (cfg, run_sweep(cfg))
    out["seconds"] = time.perf_counter() - t0
    return out


# -- criterion 1 ----------------------------------------------------------------

def _cube_case(d):
    op = PosteriorOperator.from_matrix(np.eye(d))
    t0 = time.perf_counter()
    est = estimate_voi(op, ActionSet.linf_ball(d), 10**6, seed=100 + d)
    return est, time.perf_counter() - t0


def test_c1_perfect_information_benchmark():
    details, ok = [], True
    for d in (1, 5, 50):
        est, secs = _cube_case(d)
        target = d * math.sqrt(2 / math.pi)
        z = (est.mean - target) / est.std_error
        good = abs(z) <= 3 and secs < 10
        ok &= good
        details.append(f"d={d} z={z:+.2f} t={secs:.1f}s")
    report("C1 perfect-information benchmark d*sqrt(2/pi)", ok, "; ".join(details))


# -- criterion 2 ----------------------------------------------------------------

def test_c2_chi_mean_l2():
    details, ok = [], True
    for d in (3, 16):
        op = PosteriorOperator.from_matrix(np.eye(d))
        est = estimate_voi(op, ActionSet.l2_ball(d), 10**6, seed=200 + d)
        target = chi_mean(d)
        z = (est.mean - target) / est.std_error
        ok &= abs(z) <= 3
        details.append(f"d={d} z={z:+.2f}")
    report("C2 l2 ball matches chi mean", ok, "; ".join(details))


# -- criterion 3 ----------------------------------------------------------------

def test_c3_dimension_scaling(sweeps):
    windows = {"l2": (0.45, 0.55), "linf": (0.95, 1.05)}
    details, ok = [], True
    for kind, (lo, hi) in windows.items():
        slope, r2 = fit_loglog_slope(sweeps[kind][1], "mc")
        good = lo <= slope <= hi and r2 >= 0.99
        ok &= good
        details.append(f"{kind} slope={slope:.4f} r2={r2:.5f}")
    ok &= sweeps["seconds"] < 600
    details.append(f"t={sweeps['seconds']:.0f}s")
    report("C3 log-log slopes 1/2 (l2) and 1 (linf)", ok, "; ".join(details))


# -- criterion 4 ----------------------------------------------------------------

def test_c4_bound_sandwich(sweeps):
    bad = []
    for kind in ("l2", "linf"):
        for r in sweeps[kind][1]:
            if r.failed or not (r.lower <= 10 * r.mc and r.mc <= 10 * r.upper):
                bad.append((kind, r.d, r.replicate))
    big = [r for r in sweeps["l2"][1] if r.d >= 32]
    lo_ratio = [r.lower / math.sqrt(r.d) for r in big]
    up_ratio = [r.upper / math.sqrt(r.d) for r in big]
    spread_lo = max(lo_ratio) / min(lo_ratio)
    spread_up = max(up_ratio) / min(up_ratio)
    ok = not bad and spread_lo <= 2 and spread_up <= 2
    report("C4 lower <= 10 mc and mc <= 10 upper, bounded sqrt(d) ratios", ok,
           f"violations={bad}; lower/sqrt(d) spread={spread_lo:.3f}; "
           f"upper/sqrt(d) spread={spread_up:.3f}")


# -- criterion 5 ----------------------------------------------------------------

def _packing_run(seed):
    rng = np.random.default_rng(seed)
    violations = 0
    checks = 0
    for space in range(200):
        n = int(rng.integers(2, 13))
        d = int(rng.integers(1, 4))
        op = random_bounded_operator(d, BAND, seed=seed * 1000 + space)
        m = IntrinsicMetric(op)
        pts = rng.uniform(-1, 1, size=(n, d))
        y = m.whiten(pts)
        dist = np.linalg.norm(y[:, None] - y[None], axis=-1)
        scale = dist.max()
        for eps in rng.uniform(0.02, 0.8, size=5) * scale:
            m2 = exact_packing_number(pts, m, 2 * eps)
            cov = exact_covering_number(pts, m, eps)
            m1 = exact_packing_number(pts, m, eps)
            checks += 1
            violations += not (m2 <= cov <= m1)
    return violations, checks


def test_c5_packing_covering_sandwich_exhaustive():
    t0 = time.perf_counter()
    violations, checks = _packing_run(seed=5)
    secs = time.perf_counter() - t0
    report("C5 exhaustive M(2eps) <= N(eps) <= M(eps)", violations == 0 and secs < 60,
           f"{checks} checks, {violations} violations, t={secs:.1f}s")


# -- criterion 6 ----------------------------------------------------------------

VOLUME_CASES = [(w, eps) for w in ((1.0, 1.0), (4.0, 1.0)) for eps in (0.25, 0.5, 1.0)]


def _volume_run():
    rows = []
    for diag, eps in VOLUME_CASES:
        op = PosteriorOperator.from_matrix(np.diag(diag))
        est = volume_bounds(ActionSet.l2_ball(2), op, eps)
        lo, hi = grid_covering_number(op.w, eps, spacing=0.4 * eps)
        rows.append((diag, eps, est.n_lower, lo, hi, est.n_upper))
    return rows


def test_c6_volume_bounds_vs_grid_covering():
    rows = _volume_run()
    bad = [r for r in rows if not (r[2] <= r[3] and r[4] <= r[5])]
    detail = "; ".join(f"W=diag{d} eps={e}: {a} <= [{lo},{hi}] <= {b}" for d, e, a, lo, hi, b in rows)
    report("C6 volume bounds bracket grid covering number (d=2)", not bad, detail)


# -- criterion 7 ----------------------------------------------------------------

VERIFY_RUNS = [["--identity"]] + [["--band", "0.5,2", "--seed", str(s)] for s in range(1, 6)]


def _verify_run(capsys, extra):
    code = cli_main(["verify", "--d", "4", *extra, "--pairs", "random:16", "--n", "100000",
                     "--deterministic"])
    out = capsys.readouterr().out
    return code, out


def test_c7_increment_condition(capsys):
    total, codes = 0, []
    for extra in VERIFY_RUNS:
        code, out = _verify_run(capsys, extra)
        codes.append(code)
        total += json.loads(out)["violations"]
    report("C7 sub-Gaussian increments via verify", total == 0 and set(codes) == {0},
           f"{len(VERIFY_RUNS)} operators x 16 pairs, violations={total}, exit codes={codes}")


# -- criterion 8 ----------------------------------------------------------------

def test_c8_determinism(sweeps, capsys, tmp_path):
    same = {}
    # C1/C2: estimator under different thread counts
    op = PosteriorOperator.from_matrix(np.eye(50))
    a = estimate_voi(op, ActionSet.linf_ball(50), 10**6, seed=150, threads=1)
    b = estimate_voi(op, ActionSet.linf_ball(50), 10**6, seed=150, threads=4)
    same["estimate"] = a == b == _cube_case(50)[0]
    # C3/C4: full sweep re-run with a different thread count, byte-level CSV
    for kind in ("l2", "linf"):
        cfg, recs = sweeps[kind]
        cfg2 = SweepConfig(cfg.dims, cfg.band, cfg.set_kind, cfg.n_mc, cfg.seed,
                           cfg.replicates, threads=2)
        same[f"sweep-{kind}"] = records_to_csv(recs) == records_to_csv(run_sweep(cfg2))
    # CLI byte-level outputs under --deterministic
    outs = []
    for threads in ("1", "3"):
        path = tmp_path / f"s{threads}.csv"
        cli_main(["sweep", "--dims", "8,16,32,64", "--band", "0.5,2", "--set", "l2",
                  "--n", "20000", "--seed", "1", "--out", str(path), "--deterministic",
                  "--threads", threads])
        outs.append(path.read_bytes() + (tmp_path / f"s{threads}.json").read_bytes())
    same["cli-sweep"] = outs[0] == outs[1]
    # C5/C6/C7 re-runs
    same["packing"] = _packing_run(seed=5) == _packing_run(seed=5)
    same["volume"] = _volume_run() == _volume_run()
    v1 = [_verify_run(capsys, extra) for extra in VERIFY_RUNS[:2]]
    v2 = [_verify_run(capsys, extra + ["--threads", "2"]) for extra in VERIFY_RUNS[:2]]
    same["verify"] = v1 == v2
    report("C8 determinism across runs and thread counts", all(same.values()),
           ", ".join(f"{k}={'same' if v else 'DIFF'}" for k, v in same.items()))
