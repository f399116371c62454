import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from hypefcm import geometry as g
from hypefcm.exceptions import UsageError

LN3 = math.log(3.0)


def random_ball(rng, n, p, alpha=1.0, rmax=0.99):
    """Uniform directions with radii in [0, rmax / sqrt(alpha))."""
    d = rng.normal(size=(n, p))
    d /= np.linalg.norm(d, axis=1, keepdims=True)
    r = rmax * rng.uniform(size=(n, 1)) ** (1.0 / p)
    return d * r / math.sqrt(alpha)


coord = st.floats(-0.68, 0.68, allow_nan=False)
ball2 = arrays(float, 2, elements=coord)
alphas = st.sampled_from([0.3, 1.0, 1.7])


class TestMobiusAdd:
    def test_right_identity(self):
        np.testing.assert_array_equal(g.mobius_add([0.3, 0.0], [0.0, 0.0]), [0.3, 0.0])

    def test_inverse(self):
        np.testing.assert_allclose(g.mobius_add([0.3, 0.0], [-0.3, 0.0]), [0.0, 0.0], atol=1e-15)

    def test_collinear(self):
        a, b = 0.3, 0.4
        expected = (a + b) / (1 + a * b)
        assert expected == pytest.approx(0.625)
        np.testing.assert_allclose(g.mobius_add([a, 0.0], [b, 0.0]), [expected, 0.0], rtol=1e-14)

    def test_dimension_mismatch(self):
        with pytest.raises(UsageError):
            g.mobius_add([0.1, 0.2], [0.1, 0.2, 0.3])

    def test_alpha_zero_is_vector_sum(self):
        np.testing.assert_array_equal(g.mobius_add([0.1, 2.0], [3.0, -1.0], 0.0), [3.1, 1.0])

    @given(ball2, alphas)
    def test_identities(self, v, alpha):
        v = v * 0.99 / math.sqrt(alpha) / (0.68 * math.sqrt(2))
        zero = np.zeros(2)
        np.testing.assert_allclose(g.mobius_add(v, zero, alpha), v, atol=1e-12)
        np.testing.assert_allclose(g.mobius_add(zero, v, alpha), v, atol=1e-12)
        np.testing.assert_allclose(g.mobius_add(-v, v, alpha), zero, atol=1e-9)

    @given(ball2, ball2)
    def test_left_cancellation(self, v, w):
        got = g.mobius_add(-v, g.mobius_add(v, w))
        np.testing.assert_allclose(got, w, atol=1e-9)


class TestMobiusScalar:
    @pytest.mark.parametrize("r, expected", [(1.0, 0.5), (0.0, 0.0), (2.0, 0.8)])
    def test_values(self, r, expected):
        np.testing.assert_allclose(g.mobius_scalar(r, [0.5, 0.0]), [expected, 0.0], atol=1e-15)

    def test_double_angle(self):
        t = 0.5
        assert 2 * t / (1 + t * t) == pytest.approx(0.8)

    def test_origin(self):
        np.testing.assert_array_equal(g.mobius_scalar(3.0, [0.0, 0.0]), [0.0, 0.0])

    def test_scales_distance_from_origin(self):
        x = np.array([0.2, -0.5])
        o = np.zeros(2)
        d = g.distance(o, x)
        assert g.distance(o, g.mobius_scalar(0.5, x)) == pytest.approx(0.5 * d, rel=1e-12)


class TestDistance:
    def test_self(self):
        assert g.distance([0.2, 0.1], [0.2, 0.1]) == 0.0

    def test_from_origin(self):
        assert g.distance([0.0, 0.0], [0.5, 0.0]) == pytest.approx(LN3, abs=1e-12)
        assert 2 * math.atanh(0.5) == pytest.approx(LN3, abs=1e-15)

    def test_matches_arccosh_form(self):
        rng = np.random.default_rng(3)
        x, y = random_ball(rng, 500, 3), random_ball(rng, 500, 3)
        np.testing.assert_allclose(g.distance(x, y), g.poincare_distance(x, y), atol=1e-9)

    def test_matches_arccosh_form_general_alpha(self):
        rng = np.random.default_rng(4)
        for alpha in (0.01, 0.5, 7.0):
            x, y = random_ball(rng, 200, 2, alpha), random_ball(rng, 200, 2, alpha)
            np.testing.assert_allclose(
                g.distance(x, y, alpha), g.poincare_distance(x, y, alpha), rtol=1e-9, atol=1e-9
            )

    def test_symmetric_and_triangle(self):
        rng = np.random.default_rng(5)
        u, v, w = (random_ball(rng, 2000, 2) for _ in range(3))
        np.testing.assert_allclose(g.distance(u, v), g.distance(v, u), atol=1e-12)
        assert np.all(g.distance(u, w) <= g.distance(u, v) + g.distance(v, w) + 1e-9)

    def test_finite_near_boundary(self):
        d = g.distance([0.0, 0.0], [1.0, 0.0])
        assert np.isfinite(d) and d > 0

    @given(ball2, ball2)
    def test_zero_iff_equal(self, v, w):
        d = g.distance(v, w)
        assert d >= 0
        if np.array_equal(v, w):
            assert d == 0
        elif np.linalg.norm(v - w) > 1e-6:
            assert d > 0


class TestLogExp:
    def test_log_self_is_zero(self):
        np.testing.assert_array_equal(g.log_map([0.3, 0.0], [0.3, 0.0]), [0.0, 0.0])

    def test_log_at_origin(self):
        np.testing.assert_allclose(g.log_map([0.0, 0.0], [0.5, 0.0]), [math.atanh(0.5), 0.0], atol=1e-15)
        assert math.atanh(0.5) == pytest.approx(0.5493, abs=1e-4)

    def test_exp_zero_tangent(self):
        np.testing.assert_allclose(g.exp_map([0.3, 0.2], [0.0, 0.0]), [0.3, 0.2], atol=1e-15)

    def test_exp_at_origin(self):
        np.testing.assert_allclose(g.exp_map([0.0, 0.0], [math.atanh(0.5), 0.0]), [0.5, 0.0], atol=1e-15)
        np.testing.assert_allclose(g.exp_map([0.0, 0.0], [0.5493, 0.0]), [0.5, 0.0], atol=1e-4)

    @pytest.mark.parametrize("alpha", [1e-3, 0.2, 1.0, 5.0])
    def test_inversion(self, alpha):
        rng = np.random.default_rng(11)
        x, y = random_ball(rng, 1000, 3, alpha), random_ball(rng, 1000, 3, alpha)
        np.testing.assert_allclose(g.exp_map(x, g.log_map(x, y, alpha), alpha), y, atol=1e-9)
        v = g.log_map(x, y, alpha)
        np.testing.assert_allclose(g.log_map(x, g.exp_map(x, v, alpha), alpha), v, atol=1e-9)

    def test_norm_identity(self):
        # Riemannian length of log_x(y) equals the geodesic distance:
        # lambda_x * |log_x(y)| = d(x, y), so |log_0(y)| = d(0, y) / 2.
        rng = np.random.default_rng(12)
        for alpha in (0.1, 1.0, 3.0):
            x, y = random_ball(rng, 500, 2, alpha), random_ball(rng, 500, 2, alpha)
            v = g.log_map(x, y, alpha)
            lam = g.conformal_factor(x, alpha)[:, 0]
            np.testing.assert_allclose(
                lam * np.linalg.norm(v, axis=1), g.distance(x, y, alpha), rtol=1e-10
            )
            u = g.mobius_add(-x, y, alpha)
            defn = 2 / lam * np.arctanh(math.sqrt(alpha) * np.linalg.norm(u, axis=1)) / math.sqrt(alpha)
            np.testing.assert_allclose(np.linalg.norm(v, axis=1), defn, rtol=1e-12)

    def test_euclidean_limit(self):
        x, v, y = np.array([0.1, 0.0]), np.array([0.2, 0.0]), np.array([0.4, 0.0])
        np.testing.assert_allclose(g.exp_map(x, v, 1e-10), [0.3, 0.0], atol=1e-6)
        np.testing.assert_allclose(g.log_map(x, y, 1e-10), [0.3, 0.0], atol=1e-6)

    def test_euclidean_limit_check_monotone(self):
        rng = np.random.default_rng(2)
        x, y = rng.uniform(-0.4, 0.4, size=(2, 50, 3))
        devs = g.euclidean_limit_check(x, y, [1e-2, 1e-4, 1e-6, 1e-8])
        e = [d.exp_deviation for d in devs]
        lg = [d.log_deviation for d in devs]
        assert e == sorted(e, reverse=True) and lg == sorted(lg, reverse=True)
        assert e[-1] <= 1e-6 and lg[-1] <= 1e-6

    def test_alpha_zero_limits(self):
        x, y = np.array([1.0, 2.0]), np.array([3.0, -1.0])
        np.testing.assert_array_equal(g.exp_map(x, y, 0.0), x + y)
        np.testing.assert_array_equal(g.log_map(x, y, 0.0), y - x)


class TestHyperboloid:
    def test_apex(self):
        np.testing.assert_array_equal(g.to_hyperboloid([0.0, 0.0]), [1.0, 0.0, 0.0])

    def test_value(self):
        np.testing.assert_allclose(g.to_hyperboloid([0.5, 0.0]), [5 / 3, 4 / 3, 0.0], rtol=1e-15)

    def test_alpha_guard(self):
        with pytest.raises(UsageError):
            g.to_hyperboloid([0.1, 0.1], alpha=0.5)

    def test_on_sheet(self):
        rng = np.random.default_rng(0)
        h = g.to_hyperboloid(random_ball(rng, 1000, 4, rmax=0.9))
        np.testing.assert_allclose(g.minkowski_dot(h, h), -1.0, atol=1e-12)
        assert np.all(h[:, 0] > 0)

    def test_distance(self):
        assert g.hyperboloid_distance([1.0, 0, 0], [1.0, 0, 0]) == 0.0
        a, b = g.to_hyperboloid([0.0, 0.0]), g.to_hyperboloid([0.5, 0.0])
        assert g.hyperboloid_distance(a, b) == pytest.approx(LN3, abs=1e-12)

    def test_isometry(self):
        rng = np.random.default_rng(9)
        x, y = random_ball(rng, 1000, 2), random_ball(rng, 1000, 2)
        dh = g.hyperboloid_distance(g.to_hyperboloid(x), g.to_hyperboloid(y))
        np.testing.assert_allclose(dh, g.distance(x, y), atol=1e-9)


class TestBallPoint:
    def test_clamped(self):
        p = g.BallPoint([2.0, 0.0], alpha=1.0)
        assert p.alpha * p.coords @ p.coords == pytest.approx(1 - g.BOUNDARY_EPS)
        q = g.BallPoint([0.0, 1.0], alpha=4.0)
        assert 4.0 * q.coords @ q.coords < 1

    def test_interior_untouched(self):
        np.testing.assert_array_equal(g.BallPoint([0.3, 0.4]).coords, [0.3, 0.4])

    def test_immutable(self):
        p = g.BallPoint([0.1, 0.2])
        with pytest.raises(ValueError):
            p.coords[0] = 0.5

    def test_non_finite(self):
        with pytest.raises(UsageError):
            g.BallPoint([np.nan, 0.0])

    def test_mismatches(self):
        a = g.BallPoint([0.1, 0.2])
        with pytest.raises(UsageError):
            a.mobius_add(g.BallPoint([0.1, 0.2, 0.3]))
        with pytest.raises(UsageError):
            a.distance(g.BallPoint([0.1, 0.2], alpha=0.5))
        with pytest.raises(UsageError):
            a.exp(g.TangentVector([0.1, 0.0], g.BallPoint([0.0, 0.0])))

    def test_round_trip(self):
        x, y = g.BallPoint([0.3, -0.2]), g.BallPoint([-0.5, 0.6])
        back = x.exp(x.log(y))
        np.testing.assert_allclose(back.coords, y.coords, atol=1e-12)
        assert x.distance(y) == pytest.approx(y.distance(x), abs=1e-12)
        np.testing.assert_allclose(x.mobius_add(-x).coords, 0.0, atol=1e-15)
        assert x.scale(1.0).coords == pytest.approx(x.coords)

    def test_to_hyperboloid(self):
        np.testing.assert_allclose(g.BallPoint([0.5, 0.0]).to_hyperboloid(), [5 / 3, 4 / 3, 0.0])


@settings(max_examples=50)
@given(ball2, ball2, alphas)
def test_inverse_pair_property(x, y, alpha):
    s = 0.99 / math.sqrt(alpha) / 0.68 / math.sqrt(2)
    x, y = x * s, y * s
    v = g.log_map(x, y, alpha)
    np.testing.assert_allclose(g.exp_map(x, v, alpha), y, atol=1e-9)
