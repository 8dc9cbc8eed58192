"""Hot inner loops, each in a numba and a vectorized numpy flavour.

The public names at the bottom of the module are bound to one flavour
according to :data:`voichain._accel.USE_NUMBA`.  Both flavours are always
importable as ``jit_*`` / ``np_*`` so they can be compared side by side.

Tie-breaking and iteration order are identical between flavours; results
agree bitwise for the integer kernels and to rounding for the float ones.
"""
import numpy as np

from voichain._accel import USE_NUMBA, optional_njit

# ---------------------------------------------------------------------------
# row-wise support functions of the unit balls (dual norms)


@optional_njit(cache=True)
def jit_l1_rows(z):
    n, d = z.shape
    out = np.empty(n)
    for i in range(n):
        s = 0.0
        for j in range(d):
            s += abs(z[i, j])
        out[i] = s
    return out


@optional_njit(cache=True)
def jit_l2_rows(z):
    n, d = z.shape
    out = np.empty(n)
    for i in range(n):
        s = 0.0
        for j in range(d):
            s += z[i, j] * z[i, j]
        out[i] = np.sqrt(s)
    return out


@optional_njit(cache=True)
def jit_linf_rows(z):
    n, d = z.shape
    out = np.empty(n)
    for i in range(n):
        m = 0.0
        for j in range(d):
            v = abs(z[i, j])
            if v > m:
                m = v
        out[i] = m
    return out


@optional_njit(cache=True)
def jit_max_dot_rows(z, points):
    # BLAS product in row chunks keeps the n x k intermediate small
    n = z.shape[0]
    k = points.shape[0]
    pt = np.ascontiguousarray(points.T)
    out = np.empty(n)
    step = 4096
    for start in range(0, n, step):
        stop = min(start + step, n)
        prod = np.dot(np.ascontiguousarray(z[start:stop]), pt)
        for i in range(stop - start):
            best = -np.inf
            for r in range(k):
                if prod[i, r] > best:
                    best = prod[i, r]
            out[start + i] = best
    return out


def np_l1_rows(z):
    return np.abs(z).sum(axis=1)


def np_l2_rows(z):
    return np.sqrt(np.einsum("ij,ij->i", z, z))


def np_linf_rows(z):
    if z.shape[1] == 0:
        return np.zeros(z.shape[0])
    return np.abs(z).max(axis=1)


def np_max_dot_rows(z, points):
    return (z @ points.T).max(axis=1)


# ---------------------------------------------------------------------------
# greedy farthest-point packing in whitened (Euclidean) coordinates


@optional_njit(cache=True)
def jit_greedy_packing(y, eps):
    n, d = y.shape
    mind = np.full(n, np.inf)
    chosen = np.empty(n, dtype=np.int64)
    count = 0
    nxt = 0
    eps2 = eps * eps
    while True:
        chosen[count] = nxt
        count += 1
        best = -1.0
        best_i = -1
        for i in range(n):
            s = 0.0
            for j in range(d):
                t = y[i, j] - y[nxt, j]
                s += t * t
            if s < mind[i]:
                mind[i] = s
            if mind[i] > best:
                best = mind[i]
                best_i = i
        if best <= eps2:
            break
        nxt = best_i
    return chosen[:count]


def np_greedy_packing(y, eps):
    n = y.shape[0]
    mind = np.full(n, np.inf)
    chosen = []
    nxt = 0
    eps2 = eps * eps
    while True:
        chosen.append(nxt)
        diff = y - y[nxt]
        np.minimum(mind, np.einsum("ij,ij->i", diff, diff), out=mind)
        best_i = int(np.argmax(mind))  # first maximal index
        if mind[best_i] <= eps2:
            break
        nxt = best_i
    return np.asarray(chosen, dtype=np.int64)


# ---------------------------------------------------------------------------
# exhaustive packing / covering on tiny clouds (bitmask enumeration)
#
# ``near[i]`` is the bitmask of points j with dist(i, j) <= eps.


@optional_njit(cache=True)
def _popcount(x):
    c = 0
    while x:
        x &= x - 1
        c += 1
    return c


@optional_njit(cache=True)
def jit_max_separated(near):
    n = near.shape[0]
    best = 0
    for mask in range(1, 1 << n):
        ok = True
        for i in range(n):
            if (mask >> i) & 1:
                if (near[i] & mask) != (1 << i):
                    ok = False
                    break
        if ok:
            c = _popcount(mask)
            if c > best:
                best = c
    return best


@optional_njit(cache=True)
def jit_min_cover(near):
    n = near.shape[0]
    full = (1 << n) - 1
    best = n
    for mask in range(1, 1 << n):
        c = _popcount(mask)
        if c >= best:
            continue
        cov = 0
        for i in range(n):
            if (mask >> i) & 1:
                cov |= near[i]
        if cov == full:
            best = c
    return best


def _mask_bits(n):
    masks = np.arange(1, 1 << n, dtype=np.int64)
    bits = ((masks[:, None] >> np.arange(n)) & 1).astype(bool)
    return masks, bits


def np_max_separated(near):
    n = near.shape[0]
    masks, bits = _mask_bits(n)
    # separated iff, for every member i, near[i] & mask == {i}
    hits = (near[None, :] & masks[:, None]) == (np.int64(1) << np.arange(n))
    ok = np.all(hits | ~bits, axis=1)
    return int(bits[ok].sum(axis=1).max())


def np_min_cover(near):
    n = near.shape[0]
    full = (1 << n) - 1
    masks, bits = _mask_bits(n)
    cov = np.bitwise_or.reduce(np.where(bits, near[None, :], 0), axis=1)
    return int(bits[cov == full].sum(axis=1).min())


# ---------------------------------------------------------------------------
# tail frequencies P(|D| >= t) on a grid of thresholds


@optional_njit(cache=True)
def jit_tail_counts(absd, thresholds):
    out = np.zeros(thresholds.shape[0], dtype=np.int64)
    for i in range(absd.shape[0]):
        v = absd[i]
        for k in range(thresholds.shape[0]):
            if v >= thresholds[k]:
                out[k] += 1
    return out


def np_tail_counts(absd, thresholds):
    s = np.sort(absd)
    return (s.shape[0] - np.searchsorted(s, thresholds, side="left")).astype(np.int64)


# ---------------------------------------------------------------------------
# max pairwise Euclidean distance (finite-set diameter)


@optional_njit(cache=True)
def jit_max_pairwise(y):
    n, d = y.shape
    best = 0.0
    for a in range(n):
        for b in range(a + 1, n):
            s = 0.0
            for j in range(d):
                t = y[a, j] - y[b, j]
                s += t * t
            if s > best:
                best = s
    return np.sqrt(best)


def np_max_pairwise(y):
    best = 0.0
    for a in range(y.shape[0] - 1):
        diff = y[a + 1:] - y[a]
        best = max(best, float(np.einsum("ij,ij->i", diff, diff).max()))
    return np.sqrt(best)


_IMPLS = {
    "l1_rows": (jit_l1_rows, np_l1_rows),
    "l2_rows": (jit_l2_rows, np_l2_rows),
    "linf_rows": (jit_linf_rows, np_linf_rows),
    "max_dot_rows": (jit_max_dot_rows, np_max_dot_rows),
    "greedy_packing": (jit_greedy_packing, np_greedy_packing),
    "max_separated": (jit_max_separated, np_max_separated),
    "min_cover": (jit_min_cover, np_min_cover),
    "tail_counts": (jit_tail_counts, np_tail_counts),
    "max_pairwise": (jit_max_pairwise, np_max_pairwise),
}


def implementations(name):
    """Return ``(numba_flavour, numpy_flavour)`` for kernel ``name``."""
    return _IMPLS[name]


_pick = 0 if USE_NUMBA else 1
l1_rows = _IMPLS["l1_rows"][_pick]
l2_rows = _IMPLS["l2_rows"][_pick]
linf_rows = _IMPLS["linf_rows"][_pick]
max_dot_rows = _IMPLS["max_dot_rows"][_pick]
greedy_packing = _IMPLS["greedy_packing"][_pick]
max_separated = _IMPLS["max_separated"][_pick]
min_cover = _IMPLS["min_cover"][_pick]
tail_counts = _IMPLS["tail_counts"][_pick]
max_pairwise = _IMPLS["max_pairwise"][_pick]
