import json

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.integrate import quad

from slspec.asymptotics import (ExpPoly, S_quadrature, S_table, cosine_coeffs_q,
                                f_recurrence, linear_parts, loglog_fit, nu, order_estimate,
                                phi_hat_norm, phi_of_sigma, pm, rate_fit, remainders,
                                report_dumps, s_bound, thm41_alphas, thm51_check,
                                window_increment)
from slspec.potential import PI, PotentialSpec, constant_q, delta_q
from slspec.prufer import (SpectralProblem, Spectrum, eigenvalues, principal_sqrt,
                           quasi_derivative_solve)

small = st.floats(-1, 1, allow_nan=False)


def _spectra(sig, n, tol=1e-12):
    return (eigenvalues(SpectralProblem(sig, "d", tol, tol), n),
            eigenvalues(SpectralProblem(sig, "dn", tol, tol), n))


def _exact(lam, bc):
    lam = np.asarray(lam, dtype=float)
    n = np.arange(1, lam.size + 1)
    return Spectrum(n, principal_sqrt(lam), lam, "exact", np.zeros(lam.size), bc)


class TestRemainders:
    def test_interleaving(self):
        d = _exact([1.0, 4.0], "dirichlet")
        dn = _exact([0.25 + 0.1, 2.25], "dirichlet_neumann")
        r = remainders(d, dn)
        assert np.allclose(r.s_values, [np.sqrt(0.35) - 0.5, 0, 0, 0])
        assert np.array_equal(r.even, [0.0, 0.0])

    def test_negative_eigenvalue_gives_imaginary_remainder(self):
        d = _exact([-1.0, 4.0], "dirichlet")
        r = remainders(d, _exact([0.25, 2.25], "dirichlet_neumann"))
        assert r.s_values[1] == pytest.approx(1j - 1)

    def test_length_mismatch(self):
        with pytest.raises(ValueError):
            remainders(_exact([1.0], "dirichlet"), _exact([0.25, 2.25], "dirichlet_neumann"))

    def test_phi_vanishes_to_second_order(self):
        norms = []
        for eps in (0.1, 0.05):
            sig = PotentialSpec.fourier(0.0, [], [0.0, eps])
            r = remainders(*_spectra(sig, 20))
            norms.append(np.linalg.norm(phi_of_sigma(sig, r)))
        assert norms[0] / norms[1] == pytest.approx(4.0, rel=0.05)

    def test_phi_hat_norm_reports_decomposition(self):
        sig = PotentialSpec.fourier(0.0, [], [0.0, 0.1])
        r = remainders(*_spectra(sig, 40))
        val, h = phi_hat_norm(sig, r, 0.0)
        assert val == pytest.approx(np.linalg.norm(phi_of_sigma(sig, r)))
        assert h.alphas.size == 0


class TestFirstOrder:
    def test_constant_q_closed_form(self):
        n = 40
        k = np.arange(1, n + 1, dtype=float)
        alpha = thm41_alphas(constant_q(1.0), *_spectra(constant_q(1.0), n))
        want = k ** 2 * (np.sqrt(k ** 2 + 1) - k - 1 / (2 * k))
        assert np.allclose(alpha[1::2], want, atol=1e-8)

    def test_cosine_coefficients_with_point_mass(self):
        # q = c delta_{pi/2}: a_p = (2c/pi) cos(p pi/2)
        c = 1.3
        p = np.arange(1, 9)
        assert np.allclose(cosine_coeffs_q(delta_q(c), p), 2 * c / PI * np.cos(p * PI / 2),
                           atol=1e-13)

    @settings(max_examples=10, deadline=None)
    @given(st.integers(1, 6), small)
    def test_cosine_coefficients_match_quadrature(self, p, c):
        sig = PotentialSpec.fourier(0.2, [c], [0.5, -c])
        q = lambda x: -c * np.sin(x) + 0.5 * np.cos(x) - 2 * c * np.cos(2 * x)
        want = 2 / PI * quad(lambda x: q(x) * np.cos(p * x), 0, PI)[0]
        assert cosine_coeffs_q(sig, [p])[0] == pytest.approx(want, abs=1e-12)

    def test_rejects_jumps(self):
        d = _exact([1.0], "dirichlet")
        with pytest.raises(ValueError):
            thm41_alphas(delta_q(1.0), d, d)


class TestFits:
    @pytest.mark.parametrize("power", [-1.0, -2.5, 0.5])
    def test_rate_fit_pure_power(self, power):
        k = np.arange(1, 101, dtype=float)
        slope, icpt = rate_fit(3.0 * k ** power, 10, 100)
        assert slope == pytest.approx(power) and icpt == pytest.approx(np.log(3.0))

    def test_rate_fit_window_checks(self):
        with pytest.raises(ValueError):
            rate_fit(np.ones(30), 5, 10)
        with pytest.raises(ValueError):
            rate_fit(np.ones(30), 5, 40)

    def test_loglog_skips_zeros(self):
        assert loglog_fit([1, 2, 3, 4], [1.0, 0.0, 1 / 9, 1 / 16])[0] == pytest.approx(-2.0)

    def test_window_increment(self):
        x = np.ones(10)
        assert window_increment(x, 1.0, 2, 4) == pytest.approx(3 + 4)


class TestExpPoly:
    x = np.linspace(0, PI, 13)

    def test_from_fourier(self):
        sig = PotentialSpec.fourier(0.3, [1.0], [0.0, -2.0])
        assert np.allclose(ExpPoly.from_spec(sig)(self.x), sig(self.x))

    def test_from_linear_and_rejects_knots(self):
        assert np.allclose(ExpPoly.from_spec(constant_q(2.0))(self.x), 2 * (self.x - PI))
        with pytest.raises(ValueError):
            ExpPoly.from_spec(delta_q(1.0))

    @settings(max_examples=25, deadline=None)
    @given(st.lists(small, min_size=3, max_size=3), st.lists(small, min_size=3, max_size=3))
    def test_algebra(self, a, b):
        P = ExpPoly(np.array([a, b]), 1)
        Q = ExpPoly(np.array([b]), 1)
        x = self.x
        assert np.allclose((P * Q)(x), P(x) * Q(x))
        assert np.allclose((P - Q)(x), P(x) - Q(x))
        h = 1e-6
        assert np.allclose(P.deriv()(x[1:-1]), (P(x[1:-1] + h) - P(x[1:-1] - h)) / (2 * h),
                           atol=1e-6)
        I = P.integ0()
        assert abs(I(0.0)) < 1e-14
        assert np.allclose(I.deriv()(x), P(x))

    def test_integ0_matches_quadrature(self):
        P = ExpPoly([[0, 0, 1], [0, 0, 0], [0, 0, 1]], 1)  # (1 + x^2) e^{ix}
        got = P.integ0()(2.0)
        want = quad(lambda t: (1 + t * t) * np.cos(t), 0, 2)[0] + \
            1j * quad(lambda t: (1 + t * t) * np.sin(t), 0, 2)[0]
        assert got == pytest.approx(want, abs=1e-13)

    def test_width_check(self):
        with pytest.raises(ValueError):
            ExpPoly([[1.0, 2.0]], 1)


class TestS:
    def test_zero_sigma(self):
        grid, S, dS = S_table(PotentialSpec.zero(), 7.0, 3)
        assert np.allclose(S[0], np.sin(7 * grid.x))
        assert np.allclose(S[2], 0.0)

    @pytest.mark.parametrize("rho", [5.0, 10.0, 20.0])
    @pytest.mark.parametrize("n", [1, 2, 3, 4])
    def test_bound(self, rho, n):
        sig = PotentialSpec.fourier(0.0, [0.5], [0.3])
        qn = np.sqrt(quad(lambda x: (-0.5 * np.sin(x) + 0.3 * np.cos(x)) ** 2, 0, PI)[0])
        assert abs(S_quadrature(sig, rho, n)) <= s_bound(qn, PI, rho, n)

    def test_S_sum_reproduces_solution(self):
        # sum_n S_n / rho is the Dirichlet solution for q = sigma'
        sig = PotentialSpec.fourier(0.0, [0.4])
        rho = 6.0
        total = sum(S_quadrature(sig, rho, n) for n in range(7)) / rho
        u, _ = quasi_derivative_solve(sig, rho ** 2)
        assert total == pytest.approx(u, abs=1e-7)

    def test_n_limit(self):
        with pytest.raises(ValueError):
            S_quadrature(PotentialSpec.zero(), 5.0, 7)

    def test_sign_pattern(self):
        assert [pm(j) for j in range(8)] == [-1, -1, 1, 1, -1, -1, 1, 1]
        assert nu(0, PI / 2, 1.0) == pytest.approx(1.0)

    def test_f_first_row(self):
        sig = PotentialSpec.fourier(0.0, [1.0])
        tab = f_recurrence(sig, 2)
        x = tab.grid_x
        assert np.allclose(tab.values[1, 1], -(np.cos(x) - 1))
        assert np.allclose(tab.values[1, 2], -np.sin(x))

    def test_f_linear_sigma(self):
        tab = f_recurrence(constant_q(1.0), 1)
        assert np.allclose(tab.values[1, 1], -tab.grid_x)
        zero = f_recurrence(PotentialSpec.zero(), 2)
        assert all(np.allclose(v, 0.0) for v in zero.values.values())

    @pytest.mark.parametrize("m", [1, 2, 3])
    def test_expansion_order(self, m):
        sig = PotentialSpec.fourier(0.0, [0.3, 0.2], [0.1])
        assert order_estimate(sig, m)["order"] >= m + 1.5


class TestHigherOrder:
    def test_linear_parts(self):
        h, g = linear_parts(constant_q(1.0), 2)
        assert h.tolist() == pytest.approx([1.0, 0.0]) and g.tolist() == pytest.approx([1.0, 0.0])

    def test_q_one_fit(self):
        rep = thm51_check(constant_q(1.0), *_spectra(constant_q(1.0), 60), 2)
        assert rep["fitted_coeffs"]["h"][0] == pytest.approx(1.0, abs=1e-3)
        json.loads(report_dumps(rep))

    @pytest.mark.parametrize("m", [1, 2, 3])
    def test_fit_tracks_linear_part_for_small_sigma(self, m):
        sig = PotentialSpec.fourier(0.0, [0.02, 0.01])
        rep = thm51_check(sig, *_spectra(sig, 60), m)
        h0, g0 = linear_parts(sig, m)
        assert rep["fitted_coeffs"]["h"][0] == pytest.approx(h0[0], abs=2e-3)
        assert rep["fitted_coeffs"]["g"][0] == pytest.approx(g0[0], abs=2e-3)
