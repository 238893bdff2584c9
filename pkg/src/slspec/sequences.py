"""Weighted sequence spaces l2^theta and their finite extensions.

The extended space adds the slowly decaying sequences

    e^{2s-1}_k = k^{-(2s-1)},   e^{2s}_k = (-1)^k k^{-(2s-1)},

for ``s = 1..m`` where ``m = m_of_theta(theta)``.  All sequences here are
finite prefixes indexed from ``k = 1``.
"""
from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass

import numpy as np

from .potential import PI, PotentialSpec, sine_transform


@dataclass(frozen=True, eq=False)
class WeightedSeq:
    values: np.ndarray
    theta: float = 0.0

    def __post_init__(self):
        v = np.asarray(self.values)
        v = v.astype(complex if np.iscomplexobj(v) else float)
        object.__setattr__(self, "values", v)

    def __len__(self):
        return len(self.values)

    @property
    def k(self) -> np.ndarray:
        return np.arange(1, len(self.values) + 1)


@dataclass(frozen=True, eq=False)
class HatElement:
    l2_part: WeightedSeq
    alphas: np.ndarray
    theta: float
    m: int
    fit_lo: int = 0
    fit_hi: int = 0


def m_of_theta(theta: float) -> int:
    """Number of extension pairs: the m with 2m - 3/2 <= theta < 2m + 1/2."""
    if theta < 0:
        raise ValueError("theta must be >= 0")
    return int(np.floor((theta + 1.5) / 2.0))


def tau_of_theta(theta: float) -> float:
    """Smoothness index gained by the nonlinear remainder."""
    if theta < 0:
        raise ValueError("theta must be >= 0")
    return 2.0 * theta if theta <= 1 else theta + 1.0


def basis_sequence(j: int, K: int) -> np.ndarray:
    """First ``K`` entries of e^j."""
    if j < 1:
        raise ValueError("basis index starts at 1")
    k = np.arange(1, K + 1, dtype=float)
    p = 2 * ((j + 1) // 2) - 1
    e = k ** (-p)
    if j % 2 == 0:
        e = e * (-1.0) ** k
    return e


def weighted_norm(s: WeightedSeq) -> float:
    k = s.k.astype(float)
    return float(np.sqrt(np.sum(k ** (2 * s.theta) * np.abs(s.values) ** 2)))


def apply_T(sigma: PotentialSpec, K: int, theta: float = 0.0) -> WeightedSeq:
    """Sine coefficients ``b_k = (2/pi) int sigma sin kx``, k = 1..K."""
    if K < 1:
        raise ValueError("K must be >= 1")
    k = np.arange(1, K + 1, dtype=float)
    b = (2.0 / PI) * sine_transform(sigma, k)
    if not sigma.complex_valued:
        b = b.real
    return WeightedSeq(b, theta)


def sine_synthesis(b, x) -> np.ndarray:
    """``sum_k b_k sin kx`` evaluated at ``x``."""
    b = np.asarray(b)
    k = np.arange(1, b.size + 1)
    return np.sin(np.multiply.outer(np.asarray(x, dtype=float), k)) @ b


def default_window(K: int) -> tuple[int, int]:
    """Fit rows ``[max(10, K/4), K]``, moved down to ``K/2`` for short sequences."""
    return max(1, min(max(10, K // 4), K // 2)), K


def hat_decompose(s, theta: float, fit_lo: int | None = None,
                  fit_hi: int | None = None) -> HatElement:
    """Split ``s`` into an l2^theta part plus ``sum alpha_j e^j``.

    The coefficients are a least-squares fit with weights ``k^(2 theta)``
    over ``fit_lo <= k <= fit_hi`` (1-based, inclusive).
    """
    s = np.asarray(s)
    K = s.size
    lo_d, hi_d = default_window(K)
    fit_lo = lo_d if fit_lo is None else fit_lo
    fit_hi = hi_d if fit_hi is None else fit_hi
    m = m_of_theta(theta)
    if m == 0:
        return HatElement(WeightedSeq(s, theta), np.zeros(0), theta, 0, fit_lo, fit_hi)
    if not (1 <= fit_lo < fit_hi <= K):
        raise ValueError("need 1 <= fit_lo < fit_hi <= len(s)")
    npts = fit_hi - fit_lo + 1
    if npts < 2 * m:
        raise ValueError(f"fit window has {npts} points for {2 * m} unknowns")
    E = np.column_stack([basis_sequence(j, K) for j in range(1, 2 * m + 1)])
    rows = slice(fit_lo - 1, fit_hi)
    k = np.arange(fit_lo, fit_hi + 1, dtype=float)
    w = k ** theta
    A = E[rows] * w[:, None]
    rhs = s[rows] * w
    # column scaling keeps the normal equations well conditioned
    scale = np.linalg.norm(A, axis=0)
    scale[scale == 0] = 1.0
    coef, *_ = np.linalg.lstsq(A / scale, rhs, rcond=None)
    alphas = coef / scale
    l2 = s - E @ alphas
    return HatElement(WeightedSeq(l2, theta), alphas, theta, m, fit_lo, fit_hi)


def hat_norm(h: HatElement) -> float:
    return float(np.sqrt(weighted_norm(h.l2_part) ** 2 + np.sum(np.abs(h.alphas) ** 2)))


# -- serialization -----------------------------------------------------------


def sequence_to_csv(values) -> str:
    """CSV with columns k, re, im (17 significant digits)."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["k", "re", "im"])
    for k, v in enumerate(np.asarray(values), start=1):
        v = complex(v)
        w.writerow([k, f"{v.real:.17g}", f"{v.imag:.17g}"])
    return buf.getvalue()


def sequence_from_csv(text: str) -> np.ndarray:
    rows = list(csv.DictReader(io.StringIO(text)))
    vals = np.array([complex(float(r["re"]), float(r["im"])) for r in rows])
    return vals.real if np.all(vals.imag == 0) else vals


def _json_scalar(v):
    v = complex(v)
    return [v.real, v.imag] if v.imag != 0 else v.real


def sequence_to_json(values) -> list:
    return [_json_scalar(v) for v in np.asarray(values)]


def hat_to_dict(h: HatElement) -> dict:
    return {
        "theta": h.theta,
        "m": h.m,
        "fit_window": [h.fit_lo, h.fit_hi],
        "alphas": [_json_scalar(a) for a in h.alphas],
        "l2_part": sequence_to_json(h.l2_part.values),
        "l2_norm": weighted_norm(h.l2_part),
        "hat_norm": hat_norm(h),
    }


def hat_dumps(h: HatElement) -> str:
    return json.dumps(hat_to_dict(h))
