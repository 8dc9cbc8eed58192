import numpy as np
import pytest

from oracles import normal_two_sided_tail
from voichain.gaussian_env import PosteriorOperator
from voichain.increments import (
    T_MULTIPLES, check_increments, random_pairs, subgaussian_bound, tail_report)


def test_zero_threshold_never_violates(identity_op):
    (rep,) = check_increments(identity_op(3), [([1, 0, 0], [0, 1, 0])], 10_000, seed=0)
    assert rep.t_grid[0] == 0.0 and rep.bound[0] == 2.0 and rep.empirical_tail[0] == 1.0


def test_gaussian_tail_below_bound_at_two_rho():
    assert normal_two_sided_tail(2.0) == pytest.approx(0.0455, abs=1e-4)
    assert subgaussian_bound(2.0, 1.0) == pytest.approx(2 * np.exp(-2), rel=1e-12)
    assert normal_two_sided_tail(2.0) <= subgaussian_bound(2.0, 1.0)


def test_unit_increment_full_grid(identity_op):
    (rep,) = check_increments(identity_op(2), [([1, 0], [0, 0])], 100_000, seed=1)
    assert rep.rho == 1.0 and rep.violations == 0
    exact = normal_two_sided_tail(np.asarray(T_MULTIPLES))
    assert np.abs(np.array(rep.empirical_tail) - exact).max() < 0.01


@pytest.mark.parametrize("seed", range(4))
def test_random_operators_no_violations(bounded_op, seed):
    op = bounded_op(5, seed=seed)
    reports = check_increments(op, random_pairs(5, 8, seed), 20_000, seed=seed)
    assert sum(r.violations for r in reports) == 0
    for r in reports:
        assert np.all(np.diff(r.empirical_tail) <= 0)
        assert all(0 < b <= 2 for b in r.bound)


def test_swap_symmetry_bitwise(bounded_op):
    op = bounded_op(4, seed=1)
    a, b = random_pairs(4, 1, seed=3)[0]
    r1, r2 = check_increments(op, [(a, b), (b, a)], 10_000, seed=2)
    assert r1.empirical_tail == r2.empirical_tail and r1.rho == r2.rho


def test_degenerate_pair_skipped():
    op = PosteriorOperator.from_matrix(np.diag([1.0, 0.0]))
    (rep,) = check_increments(op, [([0, 1], [0, -1])], 10_000, seed=0)
    assert rep.degenerate and rep.violations == 0


def test_detects_heavy_tails():
    # unit-variance scale mixture: 10% N(0, 8), 90% N(0, 2/9); P(|D| >= 3) ~ 0.029 > 2 e^{-4.5}
    rng = np.random.default_rng(0)
    wide = rng.random(100_000) < 0.1
    d = rng.standard_normal(100_000) * np.where(wide, np.sqrt(8.0), np.sqrt(2 / 9))
    rep = tail_report((np.zeros(1), np.ones(1)), 1.0, d)
    assert rep.violations > 0


def test_min_samples(identity_op):
    with pytest.raises(ValueError):
        check_increments(identity_op(2), [], 100, seed=0)
