"""Independent reference computations used by the test-suite.

None of these call into the code paths they check.
"""
import itertools
import math

import numpy as np
from scipy import integrate, optimize, sparse, special


def pairwise(points, w):
    diff = points[:, None, :] - points[None, :, :]
    return np.sqrt(np.maximum(np.einsum("ijk,kl,ijl->ij", diff, w, diff), 0.0))


def brute_packing(points, w, eps):
    """Max subset with all pairwise distances > eps, by itertools search."""
    dist = pairwise(np.asarray(points, float), np.asarray(w, float))
    n = len(points)
    for size in range(n, 0, -1):
        for sub in itertools.combinations(range(n), size):
            if all(dist[i, j] > eps for i, j in itertools.combinations(sub, 2)):
                return size
    return 0


def brute_covering(points, w, eps):
    """Fewest closed eps-balls centred at cloud points covering the cloud."""
    dist = pairwise(np.asarray(points, float), np.asarray(w, float))
    n = len(points)
    for size in range(1, n + 1):
        for sub in itertools.combinations(range(n), size):
            if np.all(dist[list(sub)].min(axis=0) <= eps):
                return size
    return n


def grid_covering_number(w, eps, spacing, time_limit=60.0):
    """Minimal set cover of a grid discretisation of the unit disk.

    Grid points inside the disk serve both as the set to cover and as the
    candidate centres.  Returns ``(lower, upper)`` from the integer program's
    dual bound and incumbent; they coincide when it is solved to optimality,
    and the exact grid covering number always lies between them.
    """
    w = np.asarray(w, float)
    axis = np.arange(-1.0, 1.0 + 1e-12, spacing)
    xx, yy = np.meshgrid(axis, axis, indexing="ij")
    pts = np.column_stack([xx.ravel(), yy.ravel()])
    pts = pts[np.einsum("ij,ij->i", pts, pts) <= 1.0 + 1e-12]
    cover = sparse.csr_matrix(pairwise(pts, w) <= eps + 1e-12)
    n = pts.shape[0]
    res = optimize.milp(
        c=np.ones(n),
        constraints=optimize.LinearConstraint(cover, lb=np.ones(n), ub=np.inf),
        integrality=np.ones(n),
        bounds=optimize.Bounds(0, 1),
        options={"time_limit": time_limit},
    )
    assert res.x is not None, res.message
    upper = int(round(res.fun))
    lower = math.ceil(res.mip_dual_bound - 1e-6)
    return lower, upper


def chi_mean(d):
    """Mean of the chi distribution with d degrees of freedom (scipy.stats)."""
    from scipy import stats
    return float(stats.chi(d).mean())


def dudley_quad(d, lam_min, lam_max, logdet):
    """Adaptive quadrature of the l2-ball entropy integral."""
    def f(e):
        v = d * math.log(2.0 / e + 1.0 / math.sqrt(lam_min)) + 0.5 * logdet
        return math.sqrt(max(v, 0.0))
    val, _ = integrate.quad(f, 0.0, 2.0 * math.sqrt(lam_max), limit=500)
    return val


def normal_two_sided_tail(x):
    return 2.0 * special.ndtr(-x)
