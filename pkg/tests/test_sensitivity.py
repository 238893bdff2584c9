import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from slspec.errors import SolverError
from slspec.potential import PI, PotentialSpec, constant_q, sample_ball
from slspec.prufer import SpectralProblem
from slspec.sensitivity import asymptotic_gap, eigenfunction, eigenvalue_derivative, fd_check

ZERO = PotentialSpec.zero()


def _fourier_sin(k, c=1.0):
    s = np.zeros(k)
    s[-1] = c
    return PotentialSpec.fourier(0.0, [], s)


@pytest.mark.parametrize("k", [1, 2, 3, 5])
def test_zero_sigma_sin_direction(k):
    # y_k y_k' = (k/2) sin 2kx, so h = sin 2kx gives d lambda = -k and d s = -1/2
    d, ds = eigenvalue_derivative(ZERO, _fourier_sin(2 * k), k)
    assert d == pytest.approx(-k, abs=1e-8)
    assert ds == pytest.approx(-0.5, abs=1e-8)


def test_zero_sigma_cos_direction():
    # h = cos x is not orthogonal to sin 2x: -(2/pi)(4/3) = -8/(3 pi)
    d, _ = eigenvalue_derivative(ZERO, PotentialSpec.fourier(0.0, [1.0]), 1)
    assert d == pytest.approx(-8 / (3 * PI), abs=1e-9)


def test_constant_direction_moves_every_eigenvalue_by_one():
    # h = x - pi has h' = 1
    for bc in ("d", "dn"):
        d, _ = eigenvalue_derivative(constant_q(0.7), constant_q(1.0), 3, bc)
        assert d == pytest.approx(1.0, abs=1e-8)


@settings(max_examples=3, deadline=None)
@given(st.integers(0, 10 ** 6), st.integers(1, 4), st.sampled_from(["d", "dn"]))
def test_fd_agreement(seed, k, bc):
    sig = sample_ball(1.0, 1.0, K=16, seed=seed)
    h = sample_ball(0.5, 1.0, K=8, seed=seed + 1)
    assert fd_check(sig, h, k, bc=bc) < 1e-5


def test_fd_step_must_be_positive():
    with pytest.raises(ValueError):
        fd_check(ZERO, _fourier_sin(2), 1, t=0.0)


def test_piecewise_direction_with_jump():
    h = PotentialSpec.piecewise_linear([0, 1, 1, PI], [0.0, 0.0, 1.0, 1.0])
    sig = PotentialSpec.piecewise_linear([0, 2, PI], [0.3, -0.2, 0.0])
    assert fd_check(sig, h, 2) < 1e-5


class TestEigenfunction:
    def test_zero_sigma_is_sine(self):
        ef = eigenfunction(SpectralProblem(ZERO, "d"), 3)
        assert np.allclose(ef.y, np.sin(3 * ef.grid_x), atol=1e-9)
        assert ef.residual < 1e-9

    def test_shooting_normalization(self):
        ef = eigenfunction(SpectralProblem(ZERO, "dn"), 2, normalization="shooting")
        assert np.allclose(ef.y, np.sin(1.5 * ef.grid_x) / 1.5, atol=1e-9)

    def test_bad_normalization(self):
        with pytest.raises(ValueError):
            eigenfunction(SpectralProblem(ZERO, "d"), 1, normalization="max")

    def test_gap_for_zero_sigma(self):
        out = asymptotic_gap(SpectralProblem(ZERO, "d"), 0.3, [2, 4, 8])
        assert max(out["gap"]) < 1e-8


def test_degenerate_denominator_raises(monkeypatch):
    import slspec.sensitivity as sens

    real = sens._integrate

    def fake(*a, **kw):
        end, vals, dense = real(*a, **kw)
        end = end.copy()
        end[3] = 1e-12
        return end, vals, dense

    monkeypatch.setattr(sens, "_integrate", fake)
    with pytest.raises(SolverError):
        eigenvalue_derivative(ZERO, _fourier_sin(2), 1, lam=1.0)
