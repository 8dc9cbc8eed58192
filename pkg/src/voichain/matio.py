"""Plain-text matrix files.

Joint covariance file::

    d k
    <d rows of Sigma_theta, d columns>
    <d rows of Sigma_theta_s, k columns>
    <k rows of Sigma_s, k columns>

Single matrix file (point sets, posterior operators)::

    n d
    <n rows, d columns>

Entries are whitespace separated.  Writers emit 17 significant digits so a
round trip is exact.
"""
from pathlib import Path

import numpy as np

from voichain.errors import MatrixFormatError
from voichain.gaussian_env import JointGaussian


def _rows(path):
    lines = [ln.split() for ln in Path(path).read_text().splitlines()]
    return [ln for ln in lines if ln]


def _header(rows, path):
    if not rows or len(rows[0]) != 2:
        raise MatrixFormatError(f"{path}: first line must hold two integers")
    try:
        a, b = int(rows[0][0]), int(rows[0][1])
    except ValueError as exc:
        raise MatrixFormatError(f"{path}: bad header {rows[0]}") from exc
    if a < 1 or b < 1:
        raise MatrixFormatError(f"{path}: dimensions must be positive")
    return a, b


def _take(rows, start, count, width, path):
    block = rows[start:start + count]
    if len(block) != count or any(len(r) != width for r in block):
        raise MatrixFormatError(f"{path}: expected {count} rows of {width} values at data row {start}")
    try:
        return np.array(block, dtype=float)
    except ValueError as exc:
        raise MatrixFormatError(f"{path}: non-numeric entry") from exc


def read_matrix(path) -> np.ndarray:
    rows = _rows(path)
    n, d = _header(rows, path)
    body = rows[1:]
    if len(body) != n:
        raise MatrixFormatError(f"{path}: expected {n} rows, found {len(body)}")
    return _take(body, 0, n, d, path)


def read_joint(path, normalize_diag: bool = True) -> JointGaussian:
    rows = _rows(path)
    d, k = _header(rows, path)
    body = rows[1:]
    if len(body) != 2 * d + k:
        raise MatrixFormatError(f"{path}: expected {2 * d + k} rows, found {len(body)}")
    st = _take(body, 0, d, d, path)
    sts = _take(body, d, d, k, path)
    ss = _take(body, 2 * d, k, k, path)
    return JointGaussian(st, sts, ss, normalize_diag=normalize_diag)


def _fmt(row):
    return " ".join(f"{v:.17g}" for v in row)


def write_matrix(path, m) -> None:
    m = np.atleast_2d(np.asarray(m, dtype=float))
    lines = [f"{m.shape[0]} {m.shape[1]}"] + [_fmt(r) for r in m]
    Path(path).write_text("\n".join(lines) + "\n")


def write_joint(path, joint: JointGaussian) -> None:
    lines = [f"{joint.dim_theta} {joint.dim_signal}"]
    for block in (joint.sigma_theta, joint.sigma_theta_s, joint.sigma_s):
        lines += [_fmt(r) for r in block]
    Path(path).write_text("\n".join(lines) + "\n")
