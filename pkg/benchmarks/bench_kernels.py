"""Compare the numba and numpy flavours of each hot kernel.

Usage::

    python benchmarks/bench_kernels.py [--repeat 5] [--rows 200000] [--d 64]

Each kernel is called once untimed (numba compiles on first call), then the
best of ``--repeat`` runs is reported.  An end-to-end ``estimate_voi`` timing
under the active backend closes the table.
"""
import argparse
import time

import numpy as np

from voichain import _accel, kernels
from voichain.gaussian_env import PosteriorOperator
from voichain.geometry import ActionSet
from voichain.voi import estimate_voi


def best_of(fn, args, repeat):
    fn(*args)
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn(*args)
        times.append(time.perf_counter() - t0)
    return min(times)


def cases(rows, d, rng):
    z = rng.standard_normal((rows, d))
    pts = rng.standard_normal((256, d))
    cloud = rng.standard_normal((2000, 2))
    near = np.zeros(20, dtype=np.int64)
    y = rng.standard_normal((20, 2))
    close = np.linalg.norm(y[:, None] - y[None], axis=-1) <= 1.0
    for i in range(20):
        near[i] = int(sum(1 << j for j in np.flatnonzero(close[i])))
    absd = np.abs(z[:, 0])
    return {
        "l1_rows": (z,),
        "l2_rows": (z,),
        "linf_rows": (z,),
        "max_dot_rows": (z[: rows // 10], pts),
        "greedy_packing": (cloud, 0.1),
        "max_separated": (near,),
        "min_cover": (near,),
        "tail_counts": (absd, np.linspace(0.0, 3.0, 7)),
        "max_pairwise": (cloud,),
    }


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--repeat", type=int, default=5)
    p.add_argument("--rows", type=int, default=200_000)
    p.add_argument("--d", type=int, default=64)
    args = p.parse_args(argv)
    rng = np.random.default_rng(0)

    print(f"{'kernel':16s} {'numba [ms]':>12s} {'numpy [ms]':>12s} {'speedup':>9s}")
    for name, call_args in cases(args.rows, args.d, rng).items():
        jit, ref = kernels.implementations(name)
        if not _accel.HAVE_NUMBA:
            t_jit = float("nan")
        else:
            t_jit = best_of(jit, call_args, args.repeat)
        t_np = best_of(ref, call_args, args.repeat)
        print(f"{name:16s} {1e3 * t_jit:12.2f} {1e3 * t_np:12.2f} {t_np / t_jit:8.1f}x")

    op = PosteriorOperator.from_matrix(np.eye(args.d))
    t0 = time.perf_counter()
    estimate_voi(op, ActionSet.linf_ball(args.d), 10**6, seed=0)
    print(f"\nestimate_voi linf d={args.d} n=1e6 [{_accel.backend()}]: "
          f"{time.perf_counter() - t0:.2f} s")


if __name__ == "__main__":
    main()
