"""Remainder sequences, the nonlinear part Phi, and eigenvalue expansions.

The successive approximations

    S_0(x, rho) = sin rho x,
    S_n(x, rho) = int_0^x sin rho(x - t) / rho  q(t) S_{n-1}(t, rho) dt

are evaluated after one integration by parts against sigma, so q is never
sampled pointwise.  Their asymptotic expansions in

    nu_{2s}(x) = (2 rho)^{-2s} sin rho x,   nu_{2s+1}(x) = (2 rho)^{-2s-1} cos rho x

have coefficients ``f_{p,j}`` built by a recurrence on exponential
polynomials, which is exact for trigonometric sigma and for linear sigma.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np
from scipy.signal import convolve2d

from ._panels import PanelGrid
from .potential import PI, PotentialSpec, cosine_transform, differentiate, endpoints
from .prufer import Spectrum, principal_sqrt
from .sequences import (WeightedSeq, apply_T, hat_decompose, hat_norm, hat_to_dict,
                        tau_of_theta)


# -- remainder sequences -----------------------------------------------------


@dataclass(frozen=True, eq=False)
class RemainderSeq:
    s_values: np.ndarray
    theta: float = 0.0

    def __len__(self):
        return len(self.s_values)

    @property
    def even(self) -> np.ndarray:
        """s_{2k}, k = 1, 2, ... (Dirichlet)."""
        return self.s_values[1::2]

    @property
    def odd(self) -> np.ndarray:
        """s_{2k-1}, k = 1, 2, ... (Dirichlet-Neumann)."""
        return self.s_values[0::2]


def _rho_of(spec: Spectrum) -> np.ndarray:
    return principal_sqrt(np.asarray(spec.lam))


def remainders(spec_d: Spectrum, spec_dn: Spectrum, theta: float = 0.0) -> RemainderSeq:
    """Interleave ``s_{2j} = sqrt(lambda_j) - j`` and ``s_{2j-1} = sqrt(mu_j) - j + 1/2``."""
    if len(spec_d) != len(spec_dn):
        raise ValueError("Dirichlet and Dirichlet-Neumann spectra differ in length")
    n = len(spec_d)
    j = np.arange(1, n + 1)
    s = np.empty(2 * n, dtype=complex)
    s[1::2] = _rho_of(spec_d) - j
    s[0::2] = _rho_of(spec_dn) - (j - 0.5)
    if np.all(s.imag == 0):
        s = s.real
    return RemainderSeq(s, theta)


def phi_of_sigma(sigma: PotentialSpec, r: RemainderSeq) -> np.ndarray:
    """``Phi_k = s_k + b_k / 2`` where ``b = T sigma``."""
    b = apply_T(sigma, len(r)).values
    return r.s_values + 0.5 * b


def phi_hat_norm(sigma: PotentialSpec, r: RemainderSeq, theta: float,
                 fit_lo: int | None = None, fit_hi: int | None = None):
    """Norm of Phi in the extended space of index ``tau(theta)``.

    Returns ``(norm, decomposition)`` so the fit window can be reported.
    """
    tau = tau_of_theta(theta)
    h = hat_decompose(phi_of_sigma(sigma, r), tau, fit_lo, fit_hi)
    return hat_norm(h), h


def cosine_coeffs_q(sigma: PotentialSpec, p) -> np.ndarray:
    """``a_p = (2/pi) int_0^pi q cos pt dt`` for ``q = sigma'``.

    Integration by parts gives
    ``a_p = (2/pi)[(-1)^p sigma(pi) - sigma(0)] + p b_p``, which stays
    meaningful when q has point masses.
    """
    p = np.asarray(p, dtype=float)
    s0, spi = endpoints(sigma)
    sgn = np.where(np.mod(p, 2) == 0, 1.0, -1.0)
    b = apply_T(sigma, int(p.max())).values[p.astype(int) - 1]
    return (2 / PI) * (sgn * spi - s0) + p * b


def thm41_alphas(sigma: PotentialSpec, spec_d: Spectrum, spec_dn: Spectrum) -> np.ndarray:
    """Interleaved ``alpha_l`` of the first-order expansion.

    ``alpha_{2k} = k^2 (s_{2k} - h_1/(2k) + a_{2k}/(4k))`` with
    ``h_1 = (sigma(pi) - sigma(0))/pi``, and ``alpha_{2k-1}`` likewise with
    ``g_1 = -(sigma(0) + sigma(pi))/pi`` and ``a_{2k-1}``.
    """
    if not sigma.is_fourier and sigma.has_jumps():
        raise ValueError("sigma must lie in W_2^1 (no jumps)")
    r = remainders(spec_d, spec_dn)
    n = len(spec_d)
    k = np.arange(1, n + 1, dtype=float)
    s0, spi = endpoints(sigma)
    h1 = (spi - s0) / PI
    g1 = -(s0 + spi) / PI
    a = cosine_coeffs_q(sigma, np.arange(1, 2 * n + 1))
    out = np.empty(2 * n, dtype=r.s_values.dtype)
    out[1::2] = k ** 2 * (r.even - h1 / (2 * k) + a[1::2] / (4 * k))
    out[0::2] = k ** 2 * (r.odd - g1 / (2 * k - 1) + a[0::2] / (2 * (2 * k - 1)))
    return out


# -- regression --------------------------------------------------------------


def rate_fit(seq, k_lo: int, k_hi: int) -> tuple[float, float]:
    """Least-squares slope and intercept of ``log|x_k|`` against ``log k``.

    ``k_lo``, ``k_hi`` are 1-based and inclusive; zero entries are skipped.
    """
    seq = np.asarray(seq)
    if k_hi - k_lo < 10:
        raise ValueError("need k_hi - k_lo >= 10")
    if k_lo < 1 or k_hi > seq.size:
        raise ValueError("window outside the sequence")
    k = np.arange(k_lo, k_hi + 1, dtype=float)
    return loglog_fit(k, seq[k_lo - 1:k_hi])


def loglog_fit(x, values) -> tuple[float, float]:
    """Slope and intercept of ``log|values|`` against ``log x``, zeros skipped."""
    x = np.asarray(x, dtype=float)
    v = np.abs(np.asarray(values))
    keep = v > 0
    if np.count_nonzero(keep) < 3:
        raise ValueError("too few nonzero entries to fit")
    slope, intercept = np.polyfit(np.log(x[keep]), np.log(v[keep]), 1)
    return float(slope), float(intercept)


def window_increment(seq, weight_power: float, lo: int, hi: int) -> float:
    """``sum_{lo < k <= hi} k^w |x_k|^2``."""
    seq = np.asarray(seq)
    k = np.arange(lo + 1, hi + 1, dtype=float)
    return float(np.sum(k ** weight_power * np.abs(seq[lo:hi]) ** 2))


# -- exponential polynomials -----------------------------------------------


class ExpPoly:
    """``sum_{p, k} c[p, k] x^p exp(i k x)`` with integer frequencies.

    ``coeffs[p, k + N]`` holds the coefficient of ``x^p e^{ikx}``.
    """

    def __init__(self, coeffs, N: int):
        c = np.atleast_2d(np.asarray(coeffs, dtype=complex))
        if c.shape[1] != 2 * N + 1:
            raise ValueError("coefficient width must be 2N + 1")
        self.c = c
        self.N = N

    @classmethod
    def constant(cls, v) -> "ExpPoly":
        return cls([[v]], 0)

    @classmethod
    def zero(cls) -> "ExpPoly":
        return cls.constant(0.0)

    @classmethod
    def from_spec(cls, sigma: PotentialSpec) -> "ExpPoly":
        """Exact representation of a trigonometric or globally linear sigma."""
        if sigma.is_fourier:
            K = max(sigma.cos_coeffs.size, sigma.sin_coeffs.size)
            c = np.zeros((1, 2 * K + 1), dtype=complex)
            c[0, K] = sigma.c0
            for k, a in enumerate(sigma.cos_coeffs, start=1):
                c[0, K + k] += a / 2
                c[0, K - k] += a / 2
            for k, b in enumerate(sigma.sin_coeffs, start=1):
                c[0, K + k] += b / 2j
                c[0, K - k] -= b / 2j
            return cls(c, K)
        if len(sigma.segments()) != 1:
            raise ValueError("insufficient smoothness: sigma has interior knots")
        a, b, f = sigma.segments()[0]
        y0, y1 = complex(f(np.array(a))), complex(f(np.array(b)))
        slope = (y1 - y0) / (b - a)
        return cls([[y0 - slope * a], [slope]], 0)

    def _pad(self, N):
        if N == self.N:
            return self.c
        out = np.zeros((self.c.shape[0], 2 * N + 1), dtype=complex)
        out[:, N - self.N:N + self.N + 1] = self.c
        return out

    def __add__(self, other):
        if not isinstance(other, ExpPoly):
            other = ExpPoly.constant(other)
        N = max(self.N, other.N)
        a, b = self._pad(N), other._pad(N)
        P = max(a.shape[0], b.shape[0])
        out = np.zeros((P, 2 * N + 1), dtype=complex)
        out[:a.shape[0]] += a
        out[:b.shape[0]] += b
        return ExpPoly(out, N)

    __radd__ = __add__

    def __neg__(self):
        return ExpPoly(-self.c, self.N)

    def __sub__(self, other):
        return self + (-other if isinstance(other, ExpPoly) else -other)

    def __mul__(self, other):
        if isinstance(other, ExpPoly):
            return ExpPoly(convolve2d(self.c, other.c), self.N + other.N).trim()
        return ExpPoly(self.c * other, self.N)

    __rmul__ = __mul__

    def trim(self, tol: float = 0.0) -> "ExpPoly":
        mag = np.abs(self.c)
        cols = np.flatnonzero(mag.max(axis=0) > tol)
        rows = np.flatnonzero(mag.max(axis=1) > tol)
        if cols.size == 0:
            return ExpPoly.zero()
        N = int(max(abs(cols[0] - self.N), abs(cols[-1] - self.N)))
        c = self.c[:rows[-1] + 1, self.N - N:self.N + N + 1]
        return ExpPoly(c, N)

    @property
    def freqs(self) -> np.ndarray:
        return np.arange(-self.N, self.N + 1)

    def deriv(self, n: int = 1) -> "ExpPoly":
        out = self
        for _ in range(n):
            c = out.c
            ik = 1j * out.freqs
            d = c * ik[None, :]
            d[:-1] += c[1:] * np.arange(1, c.shape[0])[:, None]
            out = ExpPoly(d, out.N)
        return out

    def integ0(self) -> "ExpPoly":
        """Antiderivative vanishing at 0."""
        c = self.c
        P = c.shape[0]
        out = np.zeros((P + 1, c.shape[1]), dtype=complex)
        k = self.freqs
        nz = k != 0
        ik = 1j * k[nz]
        zero_col = self.N
        for p in range(P):
            # k = 0: x^p -> x^{p+1}/(p+1)
            out[p + 1, zero_col] += c[p, zero_col] / (p + 1)
            # k != 0: int_0^x t^p e^{ikt} = sum_r (-1)^{p-r} p!/r! x^r e^{ikx}/(ik)^{p-r+1}
            #                               - (-1)^p p!/(ik)^{p+1}
            cp = c[p, nz]
            fact = 1.0
            for r in range(p, -1, -1):
                out[r, nz] += cp * (-1) ** (p - r) * fact / ik ** (p - r + 1)
                fact *= r if r > 0 else 1
            pf = float(np.prod(np.arange(1, p + 1)))
            out[0, zero_col] -= np.sum(cp * (-1) ** p * pf / ik ** (p + 1))
        return ExpPoly(out, self.N)

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        e = np.exp(1j * np.multiply.outer(x, self.freqs))
        powers = np.stack([x ** p for p in range(self.c.shape[0])], axis=-1)
        return np.einsum("...p,...k,pk->...", powers, e, self.c)


# -- S_n by quadrature -----------------------------------------------------


def _sigma_on(sigma: PotentialSpec, grid: PanelGrid) -> np.ndarray:
    segs = sigma.segments()
    out = np.empty(grid.x.size, dtype=complex)
    x = grid.x.reshape(grid.npanels, grid.order)
    o = out.reshape(grid.npanels, grid.order)
    for p in range(grid.npanels):
        o[p] = segs[grid.segment[p]][2](x[p])
    return out


def S_table(sigma: PotentialSpec, rho, n: int, panels: int | None = None):
    """``S_0..S_n`` and their x-derivatives on a panel grid.

    Uses ``S_n = cos(rho x) A + sin(rho x) B`` with

        A' = sigma (cos rho x S_{n-1} + sin rho x S'_{n-1} / rho),
        B' = sigma (sin rho x S_{n-1} - cos rho x S'_{n-1} / rho),

    and ``S'_n = rho (cos rho x B - sin rho x A) + sigma S_{n-1}``.
    """
    if panels is None:
        panels = int(3 * abs(rho)) + 64
    grid = PanelGrid(sigma.breakpoints(), panels=panels, order=16)
    x = grid.x
    sig = _sigma_on(sigma, grid)
    c, s = np.cos(rho * x), np.sin(rho * x)
    S, dS = [s.astype(complex)], [(rho * c).astype(complex)]
    for _ in range(n):
        prev, dprev = S[-1], dS[-1]
        AB = grid.cumint(np.stack([sig * (c * prev + s * dprev / rho),
                                   sig * (s * prev - c * dprev / rho)], axis=1))
        A, B = AB[:, 0], AB[:, 1]
        S.append(c * A + s * B)
        dS.append(rho * (c * B - s * A) + sig * prev)
    return grid, S, dS


def S_quadrature(sigma: PotentialSpec, rho, n: int, check: bool = True):
    """``S_n(pi, rho)``; with ``check`` the panel count is doubled and compared."""
    if n > 6:
        raise ValueError("n must be <= 6")
    _, S, _ = S_table(sigma, rho, n)
    val = S[n][-1]
    if check:
        _, S2, _ = S_table(sigma, rho, n, panels=2 * (int(3 * abs(rho)) + 64))
        val2 = S2[n][-1]
        if abs(val2 - val) > 1e-11 * max(1.0, abs(val2)):
            raise RuntimeError(f"S_{n} quadrature not converged: {abs(val2 - val):.2e}")
        val = val2
    if np.isrealobj(rho) and not sigma.complex_valued:
        return float(np.real(val))
    return complex(val)


def s_bound(q_norm: float, x: float, rho, n: int) -> float:
    """``||q||^n x^{n/2} / (sqrt(n!) |rho|^n)``."""
    from math import factorial
    return q_norm ** n * x ** (n / 2) / (np.sqrt(factorial(n)) * abs(rho) ** n)


# -- expansion coefficients f_{p,j} -------------------------------------------


def pm(j: int) -> int:
    """-1 for j = 0, 1 (mod 4), +1 for j = 2, 3 (mod 4)."""
    return -1 if j % 4 in (0, 1) else 1


def nu(j: int, x, rho):
    x = np.asarray(x, dtype=float)
    if j % 2 == 0:
        return (2 * rho) ** (-j) * np.sin(rho * x)
    return (2 * rho) ** (-j) * np.cos(rho * x)


@dataclass(frozen=True, eq=False)
class FTable:
    m: int
    grid_x: np.ndarray
    values: dict
    polys: dict = field(repr=False, default_factory=dict)
    tails: dict = field(repr=False, default_factory=dict)
    q_top: ExpPoly | None = field(repr=False, default=None)


def f_recurrence(sigma: PotentialSpec, m: int, grid_points: int = 257) -> FTable:
    """Coefficient functions of the nu-expansion of S_1 .. S_{m+1}.

    ``f_{1,j} = (+-)_j (sigma^{(j-1)}(x) - (-1)^{j-1} sigma^{(j-1)}(0))`` for
    ``j <= m`` and, for ``p >= 2`` and ``2 <= j <= m + 1``,

        f_{p,j} = (-1)^j int_0^x q f_{p-1,j-1}
                  - sum_{s=1}^{j-2} (+-)_s (+-)_j ([q f_{p-1,s}]^{(j-s-2)}(x)
                                              - (-1)^{j-1} [q f_{p-1,s}]^{(j-s-2)}(0)),

    with ``f_{p,1} = 0``.  Every derivative order is nonnegative.  The
    functions multiplying ``nu_{m+1}(x - 2t)`` in the remaining integral
    terms are kept in ``tails``.
    """
    if m < 1:
        raise ValueError("m must be >= 1")
    sig = ExpPoly.from_spec(sigma)
    q = sig.deriv()
    zero = ExpPoly.zero()
    f = {}
    for j in range(1, m + 1):
        d = sig.deriv(j - 1)
        f[1, j] = (d - (-1) ** (j - 1) * complex(d(0.0))) * pm(j)
    f[1, m + 1] = zero
    tails = {}
    for p in range(2, m + 2):
        f[p, 1] = zero
        for j in range(2, m + 2):
            term = (q * f[p - 1, j - 1]).integ0() * (-1) ** j
            for s in range(1, j - 1):
                F = (q * f[p - 1, s]).deriv(j - s - 2)
                term = term - (F - (-1) ** (j - 1) * complex(F(0.0))) * (pm(s) * pm(j))
            f[p, j] = term
        tails[p] = [((q * f[p - 1, s]).deriv(m - s), -pm(s) * pm(m + 2))
                    for s in range(1, m + 1)]
    xs = np.linspace(0.0, PI, grid_points)
    real = not sigma.complex_valued
    values = {}
    for key, poly in f.items():
        v = poly(xs)
        values[key] = v.real if real else v
    return FTable(m, xs, values, f, tails, sig.deriv(m))


def _nu_tail(poly: ExpPoly, j: int, rho, x: float = PI) -> complex:
    """``int_0^x nu_j(x - 2t) G(t) dt`` by panel quadrature."""
    grid = PanelGrid([0.0, x], panels=int(3 * abs(rho) + 3 * poly.N) + 64, order=16)
    t = grid.x
    return complex(grid.integral(nu(j, x - 2 * t, rho) * poly(t)))


def S_expansion(sigma: PotentialSpec, rho, m: int, table: FTable | None = None) -> float:
    """``sum_{p=1}^{m+1} S_p(pi, rho)`` from the nu-expansion.

    Terms of order ``rho^{-m-2}`` are dropped: ``nu_j`` with ``j >= m+2``
    and the repeated integrals of earlier tails.
    """
    table = f_recurrence(sigma, m) if table is None else table
    total = 0.0 + 0.0j
    for p in range(1, m + 2):
        for j in range(1, m + 2):
            total += complex(nu(j, PI, rho)) * complex(table.polys[p, j](PI))
    total += pm(m + 1) * _nu_tail(table.q_top, m, rho)
    for p in range(2, m + 2):
        for G, coef in table.tails[p]:
            total += coef * _nu_tail(G, m + 1, rho)
    if np.isrealobj(rho) and not sigma.complex_valued:
        return float(total.real)
    return total


def order_estimate(sigma: PotentialSpec, m: int, rhos=(40.0, 80.0)) -> dict:
    """Two-point decay order of ``S_expansion - sum_{n<=m+1} S_quadrature``."""
    table = f_recurrence(sigma, m)
    mism = []
    for rho in rhos:
        _, S, _ = S_table(sigma, rho, m + 1)
        direct = sum(S[n][-1] for n in range(1, m + 2))
        mism.append(abs(S_expansion(sigma, rho, m, table) - direct))
    r0, r1 = rhos
    if mism[1] == 0 or mism[0] == 0:
        order = np.inf
    else:
        order = float(np.log(mism[0] / mism[1]) / np.log(r1 / r0))
    return {"rho": list(rhos), "mismatch": [float(v) for v in mism], "order": order}


# -- higher-order expansions --------------------------------------------------


def _derivative_spec(sigma: PotentialSpec, m: int) -> PotentialSpec:
    if sigma.is_fourier:
        return differentiate(sigma, m)
    if len(sigma.segments()) != 1:
        raise ValueError("insufficient smoothness: sigma has interior knots")
    a, b, f = sigma.segments()[0]
    slope = (f(np.array(b)) - f(np.array(a))) / (b - a)
    return PotentialSpec.fourier(complex(slope) if sigma.complex_valued else float(slope)) \
        if m == 1 else PotentialSpec.zero()


def trig_coeffs(sigma: PotentialSpec, m: int, L: int):
    """``a_l, b_l`` of ``q^{(m-1)} = sigma^{(m)}``, l = 1..L."""
    d = _derivative_spec(sigma, m)
    l = np.arange(1, L + 1, dtype=float)
    a = (2 / PI) * cosine_transform(d, l)
    b = apply_T(d, L).values
    if not sigma.complex_valued:
        a = np.real(a)
    return a, b


def linear_parts(sigma: PotentialSpec, m: int):
    """Linear parts ``h_j^0``, ``g_j^0`` of the expansion functionals.

    ``h_j^0 = (-1)^j [sigma^{(2j)}(pi) - sigma^{(2j)}(0)] / pi`` and
    ``g_j^0 = (-1)^{j+1} [sigma^{(2j)}(pi) + sigma^{(2j)}(0)] / pi``;
    the top one vanishes for even ``m``.
    """
    s = m // 2
    h, g = np.zeros(s + 1), np.zeros(s + 1)
    for j in range(s + 1):
        if m % 2 == 0 and j == s:
            continue
        d = sigma if j == 0 else _derivative_spec(sigma, 2 * j)
        d0, dpi = endpoints(d)
        h[j] = np.real((-1) ** j * (dpi - d0) / PI)
        g[j] = np.real((-1) ** (j + 1) * (dpi + d0) / PI)
    return h, g


def _fit_branch(y, base, m, s, k_lo, k_hi):
    n = y.size
    k = np.arange(1, n + 1, dtype=float)
    cols = np.column_stack([base ** -(2 * j + 1) for j in range(s + 1)])
    rows = slice(k_lo - 1, k_hi)
    w = k[rows] ** (m + 1)
    A = cols[rows] * w[:, None]
    scale = np.linalg.norm(A, axis=0)
    if np.any(scale == 0) or np.linalg.matrix_rank(A / scale) < s + 1:
        raise ValueError("rank-deficient fit")
    coef, *_ = np.linalg.lstsq(A / scale, y[rows] * w, rcond=None)
    coef = coef / scale
    alpha = k ** (m + 1) * (y - cols @ coef)
    return coef, alpha


def thm51_check(sigma: PotentialSpec, spec_d: Spectrum, spec_dn: Spectrum, m: int,
                k_lo: int | None = None, k_hi: int | None = None) -> dict:
    """Fit the order-``m`` expansion of both square-rooted spectra.

    ``s_{2k}`` minus the explicit trigonometric term is regressed on
    ``(2k)^{-(2j+1)}``, ``j = 0..s``, with weights ``k^{m+1}`` (and the
    same for ``s_{2k-1}`` with ``2k - 1``).  The rescaled residuals play
    the role of the l2 sequence ``alpha``.
    """
    if m < 1:
        raise ValueError("m must be >= 1")
    r = remainders(spec_d, spec_dn)
    n = len(spec_d)
    k_lo = max(4, n // 8) if k_lo is None else k_lo
    k_hi = n if k_hi is None else k_hi
    s = m // 2 if m % 2 == 0 else (m - 1) // 2
    a, b = trig_coeffs(sigma, m, 2 * n)
    k = np.arange(1, n + 1, dtype=float)
    sign = (-1) ** s
    if m % 2:
        yd = r.even + sign * a[1::2] / (2 * (2 * k) ** (2 * s + 1))
        ydn = r.odd + sign * a[0::2] / (2 * (2 * k - 1) ** (2 * s + 1))
    else:
        yd = r.even + sign * b[1::2] / (2 * (2 * k) ** (2 * s))
        ydn = r.odd + sign * b[0::2] / (2 * (2 * k - 1) ** (2 * s))
    h, alpha_d = _fit_branch(np.real(yd), 2 * k, m, s, k_lo, k_hi)
    g, alpha_dn = _fit_branch(np.real(ydn), 2 * k - 1, m, s, k_lo, k_hi)
    h0, g0 = linear_parts(sigma, m)
    alpha = np.empty(2 * n)
    alpha[1::2], alpha[0::2] = alpha_d, alpha_dn
    q1, q2 = max(1, n // 4), max(2, n // 2)
    inc_lo = window_increment(alpha, 0.0, 2 * q1, 2 * q2)
    inc_hi = window_increment(alpha, 0.0, 2 * q2, 2 * n)
    return {
        "theorem": "thm51",
        "inputs": {"m": m, "n": n, "fit_window": [k_lo, k_hi]},
        "fitted_coeffs": {"h": h.tolist(), "g": g.tolist()},
        "linear_parts": {"h": h0.tolist(), "g": g0.tolist()},
        "residual_norms": {"alpha_l2": float(np.linalg.norm(alpha)),
                           "increment_lower": inc_lo, "increment_upper": inc_hi},
        "alpha": alpha,
        "pass_flags": {"alpha_tail_nonincreasing": bool(inc_hi <= inc_lo)},
    }


def report_dumps(report: dict) -> str:
    """JSON text of a report, arrays written as lists."""
    def default(o):
        if isinstance(o, np.ndarray):
            return [float(v) for v in np.real(o)]
        if isinstance(o, (np.floating, np.integer)):
            return o.item()
        if isinstance(o, np.bool_):
            return bool(o)
        if isinstance(o, WeightedSeq):
            return default(o.values)
        raise TypeError(type(o))
    return json.dumps(report, sort_keys=True, default=default)


__all__ = [
    "ExpPoly", "FTable", "RemainderSeq", "S_expansion", "S_quadrature", "S_table",
    "cosine_coeffs_q", "f_recurrence", "hat_to_dict", "linear_parts", "loglog_fit", "nu",
    "order_estimate", "phi_hat_norm", "phi_of_sigma", "pm", "rate_fit", "remainders",
    "s_bound", "thm41_alphas", "thm51_check", "trig_coeffs", "window_increment",
]
