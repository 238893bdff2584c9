"""Eigenfunctions and first-order sensitivity of eigenvalues to sigma.

Directions ``h`` are perturbations of sigma itself (not of q = sigma'),
and the derivative is

    d lambda_k [h] = -2 int y_k' y_k h dx / int y_k^2 dx,

the same expression for both boundary conditions.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .asymptotics import loglog_fit
from .errors import SolverError
from .potential import PI, PotentialSpec
from .prufer import (DIRICHLET, SpectralProblem, _integrate, _quasi_rhs, eigenvalues,
                     normalize_bc, principal_sqrt)

FD_TOL = 1e-13


@dataclass(frozen=True, eq=False)
class Eigenfunction:
    index: int
    grid_x: np.ndarray
    y: np.ndarray
    y_quasi: np.ndarray
    normalization: str
    lam: float
    residual: float


def _grid_for(lam: float, points: int | None) -> np.ndarray:
    if points is None:
        points = int(400 + 40 * np.sqrt(max(abs(lam), 1.0)))
    return np.linspace(0.0, PI, points)


def eigenfunction(p: SpectralProblem, k: int, normalization: str = "unit_l2",
                  lam: float | None = None, grid=None) -> Eigenfunction:
    """Solution of the quasi-derivative system at ``lambda_k``.

    ``shooting`` keeps ``y(0) = 0, y^[1](0) = 1``; ``unit_l2`` rescales to
    ``int y^2 = pi / 2`` with a positive slope at 0.
    """
    if normalization not in ("shooting", "unit_l2"):
        raise ValueError("normalization must be 'shooting' or 'unit_l2'")
    if p.sigma.complex_valued:
        raise ValueError("eigenfunctions are computed for real sigma only")
    if lam is None:
        lam = float(np.real(eigenvalues(p, k).lam[k - 1]))
    x = _grid_for(lam, None) if grid is None else np.asarray(grid, dtype=float)
    lam_a = np.array([lam])
    base = _quasi_rhs(lam_a)

    def rhs(t, y, sv):
        return np.concatenate([base(t, y[:2], sv), [y[0] ** 2]])

    end, vals, _ = _integrate(rhs, np.array([0.0, 1.0, 0.0]), p.sigma,
                              p.rel_tol, p.abs_tol, t_eval=x)
    y, yq = vals[0], vals[1]
    norm2 = end[2]
    bc_val = end[0] if p.bc == DIRICHLET else end[1]
    scale = 1.0
    if normalization == "unit_l2":
        scale = np.sqrt((PI / 2) / norm2)
    return Eigenfunction(k, x, y * scale, yq * scale, normalization, lam,
                         float(abs(bc_val) * scale))


def eigenvalue_derivative(sigma: PotentialSpec, h: PotentialSpec, k: int,
                          bc: str = DIRICHLET, lam: float | None = None,
                          tol: float = FD_TOL):
    """``(d lambda_k[h], d s[h])`` with ``d s = d lambda / (2 sqrt(lambda_k))``.

    ``d s`` is the derivative of ``s_{2k}`` (Dirichlet) or ``s_{2k-1}``
    (Dirichlet-Neumann).
    """
    p = SpectralProblem(sigma, bc, tol, tol)
    if lam is None:
        lam = float(np.real(eigenvalues(p, k).lam[k - 1]))
    lam_a = np.array([lam])
    base = _quasi_rhs(lam_a)

    def rhs(t, y, sv):
        s, hv = sv
        u, v = y[0], y[1]
        du_dv = base(t, y[:2], [s])
        # y' = u^[1] + sigma u
        return np.concatenate([du_dv, [2 * u * (v + s * u) * hv, u * u]])

    end, _, _ = _integrate(rhs, np.array([0.0, 1.0, 0.0, 0.0]), sigma, tol, tol,
                           extra_breaks=(h,))
    num, den = end[2], end[3]
    if abs(den) * max(1.0, abs(lam)) < 1e-8:
        raise SolverError("int y_k^2 is too close to zero (near degeneracy)")
    dlam = -num / den
    ds = 0.5 * dlam / principal_sqrt(lam)
    ds = float(ds.real) if np.isreal(ds) else complex(ds)
    return float(dlam), ds


def _lam_k(sigma: PotentialSpec, k: int, bc: str, tol: float) -> float:
    return float(np.real(eigenvalues(SpectralProblem(sigma, bc, tol, tol), k).lam[k - 1]))


def fd_check(sigma: PotentialSpec, h: PotentialSpec, k: int, t: float = 1e-4,
             bc: str = DIRICHLET, tol: float = FD_TOL) -> float:
    """Relative gap between the analytic derivative and a central difference."""
    if t <= 0:
        raise ValueError("t must be positive")
    bc = normalize_bc(bc)
    d, _ = eigenvalue_derivative(sigma, h, k, bc, tol=tol)
    plus = _lam_k(sigma + h * t, k, bc, tol)
    minus = _lam_k(sigma - h * t, k, bc, tol)
    fd = (plus - minus) / (2 * t)
    return abs(d - fd) / max(1.0, abs(d))


def asymptotic_gap(p: SpectralProblem, theta: float, k_list) -> dict:
    """``max_x |y_k - sin(w_k x)|`` for unit-L2 eigenfunctions.

    ``w_k = k`` for Dirichlet and ``k - 1/2`` for Dirichlet-Neumann.  The
    log-log slope over ``k_list`` is returned alongside the target
    ``-theta``.
    """
    ks = np.asarray(sorted(set(int(k) for k in k_list)))
    spec = eigenvalues(p, int(ks.max()))
    shift = 0.0 if p.bc == DIRICHLET else 0.5
    gaps = []
    for k in ks:
        ef = eigenfunction(p, int(k), "unit_l2", lam=float(np.real(spec.lam[k - 1])))
        gaps.append(float(np.max(np.abs(ef.y - np.sin((k - shift) * ef.grid_x)))))
    gaps = np.array(gaps)
    slope = loglog_fit(ks, gaps)[0] if ks.size >= 3 and np.any(gaps > 0) else float("nan")
    return {"k": ks.tolist(), "gap": gaps.tolist(), "slope": slope, "theta": theta}
