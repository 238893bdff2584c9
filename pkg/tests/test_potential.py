import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.integrate import quad

from slspec.potential import (PI, PotentialSpec, constant_q, cosine_projection, delta_q,
                              differentiate, dumps, endpoints, eval_sigma, exp_integral,
                              loads, sample_ball, sine_transform, sobolev_norm)

coef = st.floats(-2, 2, allow_nan=False)


def _quad(f, pts=()):
    return quad(f, 0, PI, points=pts or None, limit=400, epsabs=1e-13, epsrel=1e-13)[0]


class TestConstruction:
    def test_fourier_eval(self):
        p = PotentialSpec.fourier(0.5, [1.0], [0.0, 2.0])
        x = np.linspace(0, PI, 7)
        assert np.allclose(p(x), 0.5 + np.cos(x) + 2 * np.sin(2 * x))

    def test_piecewise_jump_takes_right_limit(self):
        p = delta_q(2.0)
        assert p(PI / 2 - 1e-9) == 0.0
        assert p(PI / 2) == 2.0
        assert p.has_jumps()

    @pytest.mark.parametrize("x, y", [
        ([0.0, 1.0], [0.0, 1.0]),                 # does not reach pi
        ([0.0, 2.0, 1.0, PI], [0, 0, 0, 0]),      # decreasing knots
        ([0.0, 0.0, PI], [0, 1, 1]),              # jump at an endpoint
        ([0.0, 1.0, 1.0, 1.0, PI], [0, 0, 1, 2, 2]),
    ])
    def test_piecewise_rejects_bad_knots(self, x, y):
        with pytest.raises(ValueError):
            PotentialSpec.piecewise_linear(x, y)

    def test_eval_range_check(self):
        with pytest.raises(ValueError):
            eval_sigma(constant_q(1.0), 4.0)

    def test_constant_q_normalization(self):
        s0, spi = endpoints(constant_q(2.0))
        assert spi == 0.0 and s0 == pytest.approx(-2 * PI)

    def test_mixed_sum_rejected(self):
        with pytest.raises(TypeError):
            constant_q(1.0) + PotentialSpec.fourier(0.0, [1.0])


class TestNorms:
    def test_l2_linear(self):
        assert constant_q(1.0).l2_norm() == pytest.approx(np.sqrt(PI ** 3 / 3), rel=1e-14)

    @settings(max_examples=25, deadline=None)
    @given(st.lists(coef, min_size=1, max_size=5), st.lists(coef, max_size=5), coef)
    def test_l2_fourier_matches_quadrature(self, c, s, c0):
        p = PotentialSpec.fourier(c0, c, s)
        assert p.l2_norm() ** 2 == pytest.approx(_quad(lambda x: p(x) ** 2), abs=1e-10)

    def test_l2_piecewise_with_jump(self):
        p = PotentialSpec.piecewise_linear([0, 1, 1, PI], [0.5, -1.0, 2.0, 0.0])
        assert p.l2_norm() ** 2 == pytest.approx(_quad(lambda x: p(x) ** 2, (1.0,)), rel=1e-11)

    def test_sobolev_theta_zero_counts_every_mode(self):
        p = PotentialSpec.fourier(1.0, [3.0], [4.0])
        assert sobolev_norm(p, 0.0) == pytest.approx(np.sqrt(1 + 2 * 9 + 2 * 16))

    def test_sobolev_needs_fourier(self):
        with pytest.raises(ValueError):
            sobolev_norm(constant_q(1.0), 0.5)

    @settings(max_examples=30, deadline=None)
    @given(st.sampled_from([0.0, 0.25, 0.3, 0.5, 1.0, 2.0]), st.floats(0.01, 5.0),
           st.integers(0, 10 ** 6))
    def test_sample_ball_inside_ball(self, theta, R, seed):
        p = sample_ball(theta, R, seed=seed)
        assert sobolev_norm(p, theta) <= R
        assert sobolev_norm(p, theta) >= 0.4 * R

    def test_sample_ball_deterministic(self):
        a, b = sample_ball(1.0, 2.0, seed=11), sample_ball(1.0, 2.0, seed=11)
        assert np.array_equal(a.cos_coeffs, b.cos_coeffs)


class TestTransforms:
    @pytest.mark.parametrize("z", [0.0, 0.3, 2.0, 7.5 + 0.4j, -3.0 - 1.0j, 1e-9])
    @pytest.mark.parametrize("spec", [
        PotentialSpec.fourier(0.2, [1.0, -0.5], [0.3]),
        PotentialSpec.piecewise_linear([0, 1, 1, 2.5, PI], [0.5, -1.0, 2.0, 0.1, 0.0]),
    ], ids=["fourier", "piecewise"])
    def test_exp_integral_matches_quadrature(self, spec, z):
        brk = tuple(spec.breakpoints()[1:-1])
        re = _quad(lambda x: (spec(x) * np.exp(1j * z * x)).real, brk)
        im = _quad(lambda x: (spec(x) * np.exp(1j * z * x)).imag, brk)
        assert complex(exp_integral(spec, z)) == pytest.approx(re + 1j * im, abs=1e-11)

    def test_partial_upper_limit(self):
        p = constant_q(1.0)
        ups = np.array([0.0, 0.7, 2.0])
        got = exp_integral(p, 3.0, ups)
        for u, g in zip(ups, got):
            want = quad(lambda x: (x - PI) * np.cos(3 * x), 0, u)[0] + \
                1j * quad(lambda x: (x - PI) * np.sin(3 * x), 0, u)[0]
            assert g == pytest.approx(want, abs=1e-12)

    def test_sine_coefficients_of_linear_sigma(self):
        b = (2 / PI) * sine_transform(constant_q(1.0), np.arange(1, 5)).real
        assert np.allclose(b, [-2, -1, -2 / 3, -1 / 2], atol=1e-14)

    def test_differentiate(self):
        d = differentiate(PotentialSpec.fourier(0.0, [1.0], [0.0, 1.0]))
        x = np.linspace(0, PI, 9)
        assert np.allclose(d(x), -np.sin(x) + 2 * np.cos(2 * x))

    def test_cosine_projection_reproduces_cosine_series(self):
        p = PotentialSpec.fourier(0.4, [1.0, 0.0, -0.25])
        proj = cosine_projection(p, 6)
        assert np.allclose(proj.cos_coeffs[:3], [1.0, 0.0, -0.25], atol=1e-13)
        assert proj.c0 == pytest.approx(0.4)


@settings(max_examples=20, deadline=None)
@given(st.lists(coef, max_size=4), st.lists(coef, max_size=4), coef)
def test_json_roundtrip_fourier(c, s, c0):
    p = PotentialSpec.fourier(c0, c, s)
    x = np.linspace(0, PI, 11)
    assert np.array_equal(loads(dumps(p))(x), p(x))


def test_json_roundtrip_complex_piecewise():
    p = PotentialSpec.piecewise_linear([0, 1, 1, PI], [0, 1j, 2.0, 0])
    q = loads(dumps(p))
    assert q.complex_valued and np.array_equal(q.knots_y, p.knots_y)
