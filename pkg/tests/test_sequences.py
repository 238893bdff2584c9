import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from slspec.potential import PotentialSpec, constant_q
from slspec.sequences import (WeightedSeq, apply_T, basis_sequence, hat_decompose,
                              hat_dumps, hat_norm, m_of_theta, sequence_from_csv,
                              sequence_to_csv, sine_synthesis, tau_of_theta, weighted_norm)


@pytest.mark.parametrize("theta, m", [(0.0, 0), (0.3, 0), (0.49, 0), (0.5, 1), (1.0, 1),
                                      (2.49, 1), (2.5, 2), (4.5, 3)])
def test_m_of_theta(theta, m):
    assert m_of_theta(theta) == m


@given(st.floats(0, 40, allow_nan=False))
def test_m_of_theta_window(theta):
    m = m_of_theta(theta)
    assert 2 * m - 1.5 <= theta < 2 * m + 0.5


@pytest.mark.parametrize("theta, tau", [(0.0, 0.0), (0.3, 0.6), (1.0, 2.0), (2.5, 3.5)])
def test_tau(theta, tau):
    assert tau_of_theta(theta) == pytest.approx(tau)


def test_basis_sequences():
    k = np.arange(1, 6)
    assert np.allclose(basis_sequence(1, 5), 1 / k)
    assert np.allclose(basis_sequence(2, 5), (-1.0) ** k / k)
    assert np.allclose(basis_sequence(3, 5), k ** -3.0)
    assert np.allclose(basis_sequence(4, 5), (-1.0) ** k * k ** -3.0)


def test_weighted_norm():
    assert weighted_norm(WeightedSeq([1.0, 1.0], 1.0)) == pytest.approx(np.sqrt(5))


def test_apply_T_linear_sigma():
    b = apply_T(constant_q(1.0), 4).values
    assert np.allclose(b, [-2, -1, -2 / 3, -0.5], atol=1e-14)


def test_apply_T_inverts_sine_synthesis():
    sig = PotentialSpec.fourier(0.0, [], [0.3, -1.0, 0.0, 0.25])
    b = apply_T(sig, 8).values
    assert np.allclose(b, [0.3, -1.0, 0.0, 0.25, 0, 0, 0, 0], atol=1e-14)
    x = np.linspace(0, np.pi, 5)
    assert np.allclose(sine_synthesis(b, x), sig(x))


def test_hat_decompose_recovers_harmonic():
    k = np.arange(1, 201)
    h = hat_decompose(1.0 / k, 1.0)
    assert h.m == 1
    assert h.alphas == pytest.approx([1.0, 0.0], abs=1e-12)
    assert hat_norm(h) == pytest.approx(1.0, abs=1e-10)


@settings(max_examples=40, deadline=None)
@given(st.lists(st.floats(-3, 3), min_size=4, max_size=4))
def test_hat_decompose_exact_on_synthetic(alphas):
    # m = 2 at theta = 2.6, and a pure combination of basis sequences is fit exactly
    s = sum(a * basis_sequence(j + 1, 300) for j, a in enumerate(alphas))
    h = hat_decompose(s, 2.6)
    assert np.allclose(h.alphas, alphas, atol=1e-8)
    assert np.max(np.abs(h.l2_part.values)) < 1e-8


def test_hat_decompose_no_extension_below_half():
    s = np.ones(20)
    h = hat_decompose(s, 0.3)
    assert h.alphas.size == 0 and np.array_equal(h.l2_part.values, s)


def test_hat_decompose_degenerate_window():
    with pytest.raises(ValueError):
        hat_decompose(np.ones(30), 2.6, fit_lo=20, fit_hi=22)


def test_csv_roundtrip_exact():
    v = np.array([1 / 3, -2e-17, np.pi, 1e300])
    assert np.array_equal(sequence_from_csv(sequence_to_csv(v)), v)


def test_hat_json():
    h = hat_decompose(1.0 / np.arange(1, 50), 1.0)
    assert '"alphas"' in hat_dumps(h)
