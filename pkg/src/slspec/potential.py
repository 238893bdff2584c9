"""Potentials given through their antiderivative sigma (q = sigma').

A potential is stored as sigma, never as q, because q may be a
distribution (for example a delta interaction when sigma jumps).  Two
representations are supported:

* ``fourier``: ``sigma(x) = c0 + sum c_k cos kx + sum s_k sin kx``;
* ``piecewise_linear``: linear interpolation of knots on ``[0, pi]``.
  A repeated abscissa encodes a jump of sigma, i.e. a delta in q.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

PI = np.pi

_FOURIER = "fourier"
_PIECEWISE = "piecewise_linear"


def _frozen(a, dtype=None) -> np.ndarray:
    arr = np.array(a, dtype=dtype)
    if arr.ndim == 0:
        arr = arr.reshape(1)
    arr.setflags(write=False)
    return arr


def _as_scalar_array(values) -> np.ndarray:
    arr = np.asarray(values)
    if np.iscomplexobj(arr):
        if np.all(arr.imag == 0):
            return arr.real.astype(float)
        return arr.astype(complex)
    return arr.astype(float)


@dataclass(frozen=True, eq=False)
class PotentialSpec:
    """Immutable description of sigma on ``[0, pi]``.

    Use :meth:`fourier` or :meth:`piecewise_linear` to build one.
    """

    kind: str
    c0: complex | float = 0.0
    cos_coeffs: np.ndarray = field(default_factory=lambda: _frozen([], float))
    sin_coeffs: np.ndarray = field(default_factory=lambda: _frozen([], float))
    knots_x: np.ndarray = field(default_factory=lambda: _frozen([], float))
    knots_y: np.ndarray = field(default_factory=lambda: _frozen([], float))
    complex_valued: bool = False

    # -- construction -------------------------------------------------

    @classmethod
    def fourier(cls, c0=0.0, cos=(), sin=()) -> "PotentialSpec":
        c = _as_scalar_array(np.asarray(cos).reshape(-1) if np.size(cos) else [])
        s = _as_scalar_array(np.asarray(sin).reshape(-1) if np.size(sin) else [])
        c0 = complex(c0) if np.iscomplexobj(c0) and np.imag(c0) != 0 else float(np.real(c0))
        cplx = bool(np.iscomplexobj(c) or np.iscomplexobj(s) or isinstance(c0, complex))
        dtype = complex if cplx else float
        return cls(
            kind=_FOURIER,
            c0=c0,
            cos_coeffs=_frozen(c, dtype),
            sin_coeffs=_frozen(s, dtype),
            complex_valued=cplx,
        )

    @classmethod
    def piecewise_linear(cls, x, y) -> "PotentialSpec":
        x = np.asarray(x, dtype=float).reshape(-1)
        y = _as_scalar_array(np.asarray(y).reshape(-1))
        if x.size != y.size or x.size < 2:
            raise ValueError("knots_x and knots_y must have equal length >= 2")
        if abs(x[0]) > 1e-12 or abs(x[-1] - PI) > 1e-12:
            raise ValueError("first knot must be 0 and last knot pi")
        x = x.copy()
        x[0], x[-1] = 0.0, PI
        dx = np.diff(x)
        if np.any(dx < 0):
            raise ValueError("knots_x must be nondecreasing")
        dup = dx == 0
        if np.any(dup[:-1] & dup[1:]):
            raise ValueError("at most two equal consecutive knots (one jump) allowed")
        if dup[0] or dup[-1]:
            raise ValueError("jumps are not allowed at the endpoints")
        cplx = bool(np.iscomplexobj(y))
        return cls(
            kind=_PIECEWISE,
            knots_x=_frozen(x, float),
            knots_y=_frozen(y, complex if cplx else float),
            complex_valued=cplx,
        )

    @classmethod
    def zero(cls) -> "PotentialSpec":
        return cls.fourier()

    # -- evaluation ---------------------------------------------------

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        if self.kind == _FOURIER:
            return _fourier_eval(self.c0, self.cos_coeffs, self.sin_coeffs, x)
        return _piecewise_eval(self.knots_x, self.knots_y, x)

    @property
    def is_fourier(self) -> bool:
        return self.kind == _FOURIER

    def has_jumps(self) -> bool:
        """True if sigma is discontinuous somewhere (q has a point mass)."""
        if self.kind == _FOURIER:
            return False
        xs = self.knots_x
        return bool(np.any(np.diff(xs) == 0))

    @property
    def dtype(self):
        return complex if self.complex_valued else float

    def breakpoints(self) -> np.ndarray:
        """Increasing abscissae where sigma may fail to be smooth."""
        if self.kind == _FOURIER:
            return np.array([0.0, PI])
        return np.unique(self.knots_x)

    def segments(self) -> list[tuple[float, float, Callable]]:
        """Smooth pieces ``(a, b, f)`` covering ``[0, pi]``.

        Each ``f`` evaluates sigma on its own piece, including the one-sided
        limits at ``a`` and ``b``.
        """
        if self.kind == _FOURIER:
            return [(0.0, PI, self.__call__)]
        out = []
        xs, ys = self.knots_x, self.knots_y
        for i in range(len(xs) - 1):
            a, b = xs[i], xs[i + 1]
            if b <= a:
                continue
            ya, slope = ys[i], (ys[i + 1] - ys[i]) / (b - a)
            out.append((float(a), float(b), _linear(ya, slope, a)))
        return out

    def sup_bound(self) -> float:
        """An upper bound for ``max |sigma|`` on ``[0, pi]``."""
        if self.kind == _FOURIER:
            return float(abs(self.c0) + np.abs(self.cos_coeffs).sum()
                         + np.abs(self.sin_coeffs).sum())
        return float(np.abs(self.knots_y).max())

    def l2_norm(self) -> float:
        """``(int_0^pi |sigma|^2)^(1/2)``, exact."""
        if self.kind == _FOURIER:
            c, s = self.cos_coeffs, self.sin_coeffs
            total = PI * abs(self.c0) ** 2 + 0.5 * PI * (np.sum(np.abs(c) ** 2)
                                                        + np.sum(np.abs(s) ** 2))
            # cross terms c0*cos (vanish), c0*sin and cos*sin (do not)
            if s.size:
                k = np.arange(1, s.size + 1)
                odd = (k % 2 == 1)
                total += 2 * np.real(np.conj(self.c0) * np.sum(s[odd] * 2.0 / k[odd]))
                if c.size:
                    K = max(c.size, s.size)
                    cc = np.zeros(K, dtype=complex)
                    ss = np.zeros(K, dtype=complex)
                    cc[: c.size] = c
                    ss[: s.size] = s
                    j = np.arange(1, K + 1)
                    J, L = np.meshgrid(j, j, indexing="ij")
                    # int_0^pi cos(jx) sin(lx) dx
                    with np.errstate(divide="ignore", invalid="ignore"):
                        m = np.where(
                            (J + L) % 2 == 1,
                            L * (1 - (-1.0) ** (J + L)) / (L ** 2 - J ** 2),
                            0.0,
                        )
                    total += 2 * np.real(np.conj(cc) @ m @ ss)
            return float(np.sqrt(max(total, 0.0)))
        tot = 0.0
        for a, b, _ in self.segments():
            i = np.searchsorted(self.knots_x, a, side="right") - 1
            ya, yb = self.knots_y[i], self.knots_y[i + 1]
            L = b - a
            tot += L * (abs(ya) ** 2 + np.real(ya * np.conj(yb)) + abs(yb) ** 2) / 3.0
        return float(np.sqrt(tot))

    # -- arithmetic ---------------------------------------------------

    def scaled(self, t) -> "PotentialSpec":
        if self.kind == _FOURIER:
            return PotentialSpec.fourier(t * self.c0, t * self.cos_coeffs, t * self.sin_coeffs)
        return PotentialSpec.piecewise_linear(self.knots_x, t * self.knots_y)

    def __mul__(self, t):
        return self.scaled(t)

    __rmul__ = __mul__

    def __neg__(self):
        return self.scaled(-1.0)

    def __add__(self, other: "PotentialSpec") -> "PotentialSpec":
        if not isinstance(other, PotentialSpec):
            return NotImplemented
        if self.kind == _FOURIER and other.kind == _FOURIER:
            return PotentialSpec.fourier(
                self.c0 + other.c0,
                _padd(self.cos_coeffs, other.cos_coeffs),
                _padd(self.sin_coeffs, other.sin_coeffs),
            )
        if self.kind == _PIECEWISE and other.kind == _PIECEWISE:
            return _piecewise_sum(self, other)
        raise TypeError("cannot add fourier and piecewise_linear potentials")

    def __sub__(self, other):
        return self + (-other)

    def __repr__(self) -> str:
        if self.kind == _FOURIER:
            return (f"PotentialSpec.fourier(c0={self.c0!r}, cos={list(self.cos_coeffs)!r}, "
                    f"sin={list(self.sin_coeffs)!r})")
        return (f"PotentialSpec.piecewise_linear(x={list(self.knots_x)!r}, "
                f"y={list(self.knots_y)!r})")


def _linear(ya, slope, a):
    def f(x):
        return ya + slope * (np.asarray(x, dtype=float) - a)
    return f


def _padd(a, b):
    n = max(len(a), len(b))
    dtype = np.result_type(a, b, float)
    out = np.zeros(n, dtype=dtype)
    out[: len(a)] += a
    out[: len(b)] += b
    return out


def _fourier_eval(c0, c, s, x):
    out = np.full(x.shape, c0, dtype=np.result_type(c, s, c0, float))
    if c.size:
        k = np.arange(1, c.size + 1)
        out = out + np.cos(np.multiply.outer(x, k)) @ c
    if s.size:
        k = np.arange(1, s.size + 1)
        out = out + np.sin(np.multiply.outer(x, k)) @ s
    return out


def _piecewise_eval(xs, ys, x):
    idx = np.searchsorted(xs, x, side="right") - 1
    idx = np.clip(idx, 0, len(xs) - 2)
    x0, x1 = xs[idx], xs[idx + 1]
    y0, y1 = ys[idx], ys[idx + 1]
    with np.errstate(divide="ignore", invalid="ignore"):
        w = np.where(x1 > x0, (x - x0) / np.where(x1 > x0, x1 - x0, 1.0), 0.0)
    return y0 + w * (y1 - y0)


def _piecewise_sum(p: PotentialSpec, r: PotentialSpec) -> PotentialSpec:
    xs = np.unique(np.concatenate([p.knots_x, r.knots_x]))
    right = p(xs) + r(xs)
    left = _left_limits(p, xs) + _left_limits(r, xs)
    kx, ky = [], []
    for x, lv, rv in zip(xs, left, right):
        if 0 < x < PI and lv != rv:
            kx += [x, x]
            ky += [lv, rv]
        else:
            kx.append(x)
            ky.append(lv if x >= PI else rv)
    return PotentialSpec.piecewise_linear(kx, ky)


def _left_limits(spec, xs):
    out = []
    for x in xs:
        if x <= 0:
            out.append(spec(0.0))
            continue
        for a, b, f in spec.segments():
            if a < x <= b:
                out.append(f(x))
                break
    return np.array(out)


def constant_q(c) -> PotentialSpec:
    """sigma = c (x - pi), the antiderivative of q = c with sigma(pi) = 0."""
    return PotentialSpec.piecewise_linear([0.0, PI], [-c * PI, 0.0])


def delta_q(c, x0: float = PI / 2) -> PotentialSpec:
    """sigma = c H(x - x0), i.e. q = c delta(x - x0)."""
    return PotentialSpec.piecewise_linear([0.0, x0, x0, PI], [0.0, 0.0, c, c])


# -- spec operations -------------------------------------------------------


def eval_sigma(p: PotentialSpec, x):
    """Value of sigma at ``x`` in ``[0, pi]``."""
    xa = np.asarray(x, dtype=float)
    if np.any(xa < 0) or np.any(xa > PI):
        raise ValueError("x must lie in [0, pi]")
    out = p(xa)
    return out if np.ndim(out) else out[()]


def endpoints(p: PotentialSpec):
    return p(0.0)[()], p(PI)[()]


def sobolev_norm(p: PotentialSpec, theta: float) -> float:
    """``sqrt(|c0|^2 + sum (1 + k^(2 theta)) (|c_k|^2 + |s_k|^2))``.

    Only defined for the fourier kind; project piecewise potentials with
    :func:`cosine_projection` first.
    """
    if theta < 0:
        raise ValueError("theta must be >= 0")
    if p.kind != _FOURIER:
        raise ValueError("sobolev_norm needs a fourier potential; use cosine_projection")
    total = abs(p.c0) ** 2
    for coeffs in (p.cos_coeffs, p.sin_coeffs):
        if coeffs.size:
            k = np.arange(1, coeffs.size + 1, dtype=float)
            total += np.sum((1 + k ** (2 * theta)) * np.abs(coeffs) ** 2)
    return float(np.sqrt(total))


def differentiate(p: PotentialSpec, n: int = 1) -> PotentialSpec:
    """n-th derivative of a fourier sigma, term by term."""
    if p.kind != _FOURIER:
        raise ValueError("spectral differentiation needs a fourier potential")
    if n < 1:
        raise ValueError("n must be >= 1")
    c, s = p.cos_coeffs, p.sin_coeffs
    K = max(c.size, s.size)
    c, s = _padd(c, np.zeros(K)), _padd(s, np.zeros(K))
    k = np.arange(1, K + 1, dtype=float)
    for _ in range(n):
        c, s = k * s, -k * c
    return PotentialSpec.fourier(0.0, c, s)


def cosine_projection(p: PotentialSpec, K: int) -> PotentialSpec:
    """Best L2 approximation of sigma by ``c0 + sum_{k<=K} c_k cos kx``."""
    k = np.arange(0, K + 1, dtype=float)
    cc = 0.5 * (exp_integral(p, k) + exp_integral(p, -k))
    coeffs = cc * (2.0 / PI)
    coeffs = coeffs if p.complex_valued else coeffs.real
    return PotentialSpec.fourier(coeffs[0] / 2.0, coeffs[1:])


def sample_ball(theta: float, R: float, decay_margin: float = 0.05, K: int = 64,
                seed: int = 0) -> PotentialSpec:
    """Pseudo-random real sigma with ``sobolev_norm(sigma, theta) <= R``.

    Coefficients are ``g_k k^(-theta - 1/2 - decay_margin)`` with ``g_k``
    uniform in ``[-1, 1]``, rescaled to norm ``R u`` with ``u`` uniform in
    ``(1/2, 1]``.
    """
    if K < 1:
        raise ValueError("K must be >= 1")
    if R < 0 or decay_margin <= 0:
        raise ValueError("need R >= 0 and decay_margin > 0")
    if R == 0:
        return PotentialSpec.zero()
    rng = np.random.default_rng(seed)
    g = rng.uniform(-1.0, 1.0, K)
    u = 1.0 - 0.5 * rng.random()
    k = np.arange(1, K + 1, dtype=float)
    c = g * k ** (-theta - 0.5 - decay_margin)
    spec = PotentialSpec.fourier(0.0, c)
    c = c * (R * u / sobolev_norm(spec, theta))
    spec = PotentialSpec.fourier(0.0, c)
    while sobolev_norm(spec, theta) > R:
        c = c * (1 - 1e-15)
        spec = PotentialSpec.fourier(0.0, c)
    return spec


# -- oscillatory integrals -------------------------------------------------


def _E(w):
    """expm1(w)/w with the removable singularity filled in."""
    w = np.asarray(w, dtype=complex)
    out = np.ones_like(w)
    nz = w != 0
    out[nz] = np.expm1(w[nz]) / w[nz]
    return out


def _I0_I1(w):
    """int_0^1 e^{iwt} dt and int_0^1 t e^{iwt} dt."""
    w = np.asarray(w, dtype=complex)
    small = np.abs(w) < 0.5
    I0 = np.empty_like(w)
    I1 = np.empty_like(w)
    if np.any(small):
        ws = 1j * w[small]
        term = np.ones_like(ws)
        s0 = np.zeros_like(ws)
        s1 = np.zeros_like(ws)
        for n in range(30):
            if n:
                term = term * ws / n
            s0 = s0 + term / (n + 1)
            s1 = s1 + term / (n + 2)
        I0[small], I1[small] = s0, s1
    big = ~small
    if np.any(big):
        wb = w[big]
        e = np.exp(1j * wb)
        I0[big] = (e - 1) / (1j * wb)
        I1[big] = e / (1j * wb) + (e - 1) / wb ** 2
    return I0, I1


def exp_integral(p: PotentialSpec, z, upper=PI):
    """``int_0^upper sigma(t) exp(i z t) dt`` in closed form.

    ``z`` may be complex and array valued; ``upper`` may be an array
    (broadcast against ``z``) with entries in ``[0, pi]``.
    """
    z = np.asarray(z, dtype=complex)
    U = np.asarray(upper, dtype=float)
    z, U = np.broadcast_arrays(z, U)
    if p.kind == _FOURIER:
        out = p.c0 * U * _E(1j * z * U)
        c, s = p.cos_coeffs, p.sin_coeffs
        K = max(c.size, s.size)
        if K:
            k = np.arange(1, K + 1)
            cc = _padd(c, np.zeros(K)).astype(complex)
            ss = _padd(s, np.zeros(K)).astype(complex)
            Uk = U[..., None]
            plus = Uk * _E(1j * (z[..., None] + k) * Uk)
            minus = Uk * _E(1j * (z[..., None] - k) * Uk)
            out = out + (plus + minus) @ cc / 2 + (plus - minus) @ ss / (2j)
        return out
    xs, ys = p.knots_x, p.knots_y
    out = np.zeros(z.shape, dtype=complex)
    for i in range(len(xs) - 1):
        a, b = xs[i], xs[i + 1]
        if b <= a:
            continue
        ya, yb = ys[i], ys[i + 1]
        top = np.clip(U, a, b)
        L = top - a
        if not np.any(L > 0):
            continue
        slope = (yb - ya) / (b - a)
        I0, I1 = _I0_I1(z * L)
        out = out + np.where(L > 0, L * np.exp(1j * z * a) * (ya * I0 + slope * L * I1), 0)
    return out


def sine_transform(p: PotentialSpec, omega, upper=PI):
    """``int_0^upper sigma(t) sin(omega t) dt``."""
    return (exp_integral(p, omega, upper) - exp_integral(p, -np.asarray(omega), upper)) / 2j


def cosine_transform(p: PotentialSpec, omega, upper=PI):
    """``int_0^upper sigma(t) cos(omega t) dt``."""
    return (exp_integral(p, omega, upper) + exp_integral(p, -np.asarray(omega), upper)) / 2


def _maybe_real(p: PotentialSpec, values, omega):
    if not p.complex_valued and np.isrealobj(omega):
        return np.real(values)
    return values


# -- serialization -----------------------------------------------------------


def _enc(v):
    v = complex(v)
    return [v.real, v.imag] if v.imag != 0 else v.real


def _dec(v):
    if isinstance(v, (list, tuple)):
        return complex(v[0], v[1])
    return float(v)


def to_dict(p: PotentialSpec) -> dict:
    if p.kind == _FOURIER:
        return {
            "kind": _FOURIER,
            "c0": _enc(p.c0),
            "cos": [_enc(v) for v in p.cos_coeffs],
            "sin": [_enc(v) for v in p.sin_coeffs],
        }
    return {
        "kind": _PIECEWISE,
        "x": [float(v) for v in p.knots_x],
        "y": [_enc(v) for v in p.knots_y],
    }


def from_dict(d: dict) -> PotentialSpec:
    kind = d.get("kind")
    if kind == _FOURIER:
        c = [_dec(v) for v in d.get("cos", [])]
        s = [_dec(v) for v in d.get("sin", [])]
        return PotentialSpec.fourier(_dec(d.get("c0", 0.0)), c, s)
    if kind == _PIECEWISE:
        return PotentialSpec.piecewise_linear(d["x"], [_dec(v) for v in d["y"]])
    raise ValueError(f"unknown potential kind {kind!r}")


def dumps(p: PotentialSpec) -> str:
    return json.dumps(to_dict(p))


def loads(text: str) -> PotentialSpec:
    return from_dict(json.loads(text))
