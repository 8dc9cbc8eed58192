import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from voichain.errors import DimensionMismatch, SingularOperator, UnsupportedSet
from voichain.gaussian_env import PosteriorOperator
from voichain.geometry import (
    ActionSet, IntrinsicMetric, diameter, distance, ellipsoid_unit_ball_volume, log_volume,
    support_function, support_values)

vec3 = st.lists(st.floats(-10, 10, allow_nan=False), min_size=3, max_size=3).map(np.array)


def metric(w):
    return IntrinsicMetric(PosteriorOperator.from_matrix(w))


class TestDistance:
    def test_identical_points(self):
        assert distance(metric(np.diag([2.0, 3.0])), [1, 2], [1, 2]) == 0.0

    def test_euclidean(self):
        assert distance(metric(np.eye(2)), [1, 0], [0, 1]) == pytest.approx(math.sqrt(2))

    def test_quadratic_form(self):
        assert distance(metric(np.diag([4.0, 1.0])), [1, 0], [0, 0]) == pytest.approx(2.0)

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatch):
            distance(metric(np.eye(2)), [1, 0, 0], [0, 0])

    @given(a=vec3, b=vec3, c=vec3, seed=st.integers(0, 1000))
    @settings(max_examples=60, deadline=None)
    def test_pseudometric_axioms(self, a, b, c, seed):
        from voichain.gaussian_env import SpectralBand, random_bounded_operator
        op = random_bounded_operator(3, SpectralBand(0.5, 2.0), seed)
        m = IntrinsicMetric(op)
        ab, bc, ac = distance(m, a, b), distance(m, b, c), distance(m, a, c)
        assert ab == pytest.approx(distance(m, b, a), abs=1e-12)
        assert ac <= ab + bc + 1e-9
        e = np.linalg.norm(a - b)
        assert math.sqrt(op.lambda_min) * e - 1e-9 <= ab <= math.sqrt(op.lambda_max) * e + 1e-9


class TestSupportFunction:
    def test_cube_is_l1(self):
        assert support_function(ActionSet.linf_ball(3), [1, -2, 3]) == 6

    def test_l2_self_dual(self):
        assert support_function(ActionSet.l2_ball(2), [3, 4]) == pytest.approx(5)

    def test_l1_ball_is_linf(self):
        assert support_function(ActionSet.l1_ball(3), [1, -7, 3]) == 7

    def test_finite_set(self):
        A = ActionSet.finite([[1, 0], [0, 1], [-1, -1]])
        # brute force: <(1,0),(2,1)>=2, <(0,1),(2,1)>=1, <(-1,-1),(2,1)>=-3
        assert support_function(A, [2, 1]) == 2

    def test_custom_delegates(self):
        A = ActionSet.custom(2, lambda m: float(np.abs(m).sum()), lipschitz=math.sqrt(2))
        assert support_function(A, [1, -2]) == 3

    def test_custom_validation(self):
        with pytest.raises(ValueError):
            ActionSet.custom(2, lambda m: float(np.abs(m).sum()) + 1.0, lipschitz=1.0)
        with pytest.raises(ValueError):
            ActionSet.custom(2, lambda m: float(np.square(m).sum()), lipschitz=1.0)

    def test_dimension_and_finiteness(self):
        with pytest.raises(DimensionMismatch):
            support_function(ActionSet.l2_ball(2), [1, 2, 3])
        with pytest.raises(ValueError):
            support_function(ActionSet.l2_ball(2), [np.nan, 1])

    def test_finite_rows_distinct(self):
        with pytest.raises(ValueError):
            ActionSet.finite([[1, 0], [1, 0]])

    @pytest.mark.parametrize("kind", ["l1", "l2", "linf"])
    @given(m=vec3, m2=vec3, c=st.floats(0.01, 100))
    @settings(max_examples=40, deadline=None)
    def test_homogeneous_and_subadditive(self, kind, m, m2, c):
        A = ActionSet(kind, 3)
        h = support_function(A, m)
        assert support_function(A, c * m) == pytest.approx(c * h, rel=1e-12, abs=1e-12)
        assert support_function(A, m + m2) <= h + support_function(A, m2) + 1e-9

    def test_vectorised_matches_scalar(self):
        z = np.random.default_rng(0).normal(size=(7, 3))
        pts = np.random.default_rng(1).normal(size=(4, 3))
        for A in (ActionSet.linf_ball(3), ActionSet.l2_ball(3), ActionSet.finite(pts)):
            np.testing.assert_allclose(support_values(A, z), [support_function(A, r) for r in z])


class TestDiameter:
    def test_l2_identity(self):
        assert diameter(ActionSet.l2_ball(3), metric(np.eye(3)), 16) == (2.0, 2.0)

    def test_l2_top_eigenvalue(self):
        lo, hi = diameter(ActionSet.l2_ball(2), metric(np.diag([4.0, 1.0])), 16)
        assert lo == hi == pytest.approx(4.0)

    def test_cube_vertex_enumeration(self):
        lo, hi = diameter(ActionSet.linf_ball(2), metric(np.eye(2)), budget=4)
        assert lo == hi == pytest.approx(2 * math.sqrt(2))

    def test_cube_sandwich_high_dim(self, bounded_op):
        op = bounded_op(30, seed=4)
        lo, hi = diameter(ActionSet.linf_ball(30), IntrinsicMetric(op), budget=256)
        assert 0 < lo <= hi
        assert hi == pytest.approx(2 * math.sqrt(op.lambda_max * 30))

    def test_finite_exact_and_sampled(self, bounded_op):
        op = bounded_op(3, seed=1)
        pts = np.random.default_rng(0).normal(size=(30, 3))
        m = IntrinsicMetric(op)
        exact = diameter(ActionSet.finite(pts), m, budget=900)
        brute = max(distance(m, a, b) for a in pts for b in pts)
        assert exact[0] == exact[1] == pytest.approx(brute)
        lo, hi = diameter(ActionSet.finite(pts), m, budget=50)
        assert lo <= brute + 1e-12 and hi >= brute

    def test_custom_needs_points(self):
        A = ActionSet.custom(2, lambda m: float(np.linalg.norm(m)), lipschitz=1.0)
        with pytest.raises(UnsupportedSet):
            diameter(A, metric(np.eye(2)))


class TestVolume:
    def test_disk(self):
        assert ellipsoid_unit_ball_volume(PosteriorOperator.from_matrix(np.eye(2))).value == pytest.approx(math.pi)

    def test_sphere(self):
        v = ellipsoid_unit_ball_volume(PosteriorOperator.from_matrix(np.eye(3))).value
        assert v == pytest.approx(4 * math.pi / 3)

    def test_ellipse(self):
        # semi-axes 1/2 and 1
        v = ellipsoid_unit_ball_volume(PosteriorOperator.from_matrix(np.diag([4.0, 1.0]))).value
        assert v == pytest.approx(math.pi / 2)

    def test_log_space_high_dim(self):
        vol = ellipsoid_unit_ball_volume(PosteriorOperator.from_matrix(1e-6 * np.eye(500)))
        assert vol.value is None and math.isfinite(vol.log)

    def test_singular(self):
        with pytest.raises(SingularOperator):
            ellipsoid_unit_ball_volume(PosteriorOperator.from_matrix(np.diag([1.0, 0.0])))

    def test_ball_volumes(self):
        assert log_volume(ActionSet.linf_ball(4)) == pytest.approx(4 * math.log(2))
        assert math.exp(log_volume(ActionSet.l1_ball(2))) == pytest.approx(2.0)
