"""Sine-basis Galerkin truncation of the quadratic form.

The form ``t[y] = int y'^2 - int sigma (y^2)'`` needs only sigma, never
``q = sigma'``.  For the Dirichlet problem the basis is
``sqrt(2/pi) sin kx``.  For Dirichlet-Neumann the boundary condition at pi
is natural for the form, and the eigenfunctions satisfy
``y'(pi) = sigma(pi) y(pi)`` while every ``sin((k - 1/2) x)`` has zero slope
there; one extra function ``x^3 / (3 pi^2)`` carries that slope so the
truncation converges at a useful rate.  The resulting pencil is solved as a
generalized eigenproblem.
"""
from __future__ import annotations

import csv
import io
from dataclasses import dataclass

import numpy as np
import scipy.linalg as sla

from ._panels import PanelGrid
from .errors import SolverError
from .potential import PI, PotentialSpec, sine_transform
from .prufer import (DIRICHLET, DIRICHLET_NEUMANN, SpectralProblem, Spectrum,
                     _realify, principal_sqrt)

N_CAP = 4096


@dataclass(frozen=True, eq=False)
class GalerkinMatrix:
    N: int
    entries: np.ndarray
    bc: str
    mass: np.ndarray | None = None

    @property
    def is_real(self) -> bool:
        return not np.iscomplexobj(self.entries)

    def to_csv(self) -> str:
        """Row-major dump, one matrix row per line (complex as a+bj)."""
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        for row in self.entries:
            w.writerow([f"{v:.17g}" if np.isrealobj(row) else f"{complex(v)!r}" for v in row])
        return buf.getvalue()


def frequencies(bc: str, N: int) -> np.ndarray:
    k = np.arange(1, N + 1, dtype=float)
    return k if bc == DIRICHLET else k - 0.5


def _sine_table(sigma: PotentialSpec, top: int) -> np.ndarray:
    """``int_0^pi sigma sin(m x) dx`` for integer m = 0..top."""
    m = np.arange(top + 1, dtype=float)
    out = sine_transform(sigma, m)
    return out if sigma.complex_valued else np.real(out)


def _corrector_entries(sigma: PotentialSpec, w: np.ndarray):
    """Form and mass entries coupling psi = x^3 / (3 pi^2) to the DN basis."""
    N = w.size
    grid = PanelGrid(sigma.breakpoints(), panels=int(1.6 * w[-1]) + 64, order=16)
    x = grid.x
    segs = sigma.segments()
    sig = np.empty(x.size, dtype=sigma.dtype)
    xs = x.reshape(grid.npanels, grid.order)
    for p in range(grid.npanels):
        sig.reshape(grid.npanels, grid.order)[p] = segs[grid.segment[p]][2](xs[p])
    c = np.sqrt(2.0 / PI)
    psi = x ** 3 / (3 * PI ** 2)
    dpsi = x ** 2 / PI ** 2
    form = np.empty(N, dtype=sig.dtype)
    mass = np.empty(N)
    # blocks of basis functions keep the node-by-basis arrays small
    for lo in range(0, N, 128):
        wb = w[lo:lo + 128]
        phi = c * np.sin(np.outer(x, wb))
        dphi = c * wb * np.cos(np.outer(x, wb))
        # (phi psi)' = phi' psi + phi psi'
        form[lo:lo + 128] = (grid.integral(dphi * dpsi[:, None])
                             - grid.integral(sig[:, None] * (dphi * psi[:, None]
                                                             + phi * dpsi[:, None])))
        mass[lo:lo + 128] = grid.integral(phi * psi[:, None])
    corner_form = grid.integral(dpsi ** 2) - grid.integral(sig * 2 * psi * dpsi)
    corner_mass = grid.integral(psi ** 2)
    return form, mass, corner_form, corner_mass


def assemble(p: SpectralProblem, N: int) -> GalerkinMatrix:
    """Matrix of the form on the first ``N`` basis functions.

    ``A_jk = w_j^2 delta_jk - int sigma (phi_j phi_k)'``, evaluated from the
    sine moments of sigma at integer frequencies.
    """
    if N < 4:
        raise ValueError("N must be >= 4")
    sigma, bc = p.sigma, p.bc
    w = frequencies(bc, N)
    S = _sine_table(sigma, 2 * N)
    j = np.arange(N)
    J, K = np.meshgrid(j, j, indexing="ij")
    d = np.abs(J - K)
    s = J + K + (2 if bc == DIRICHLET else 1)
    wd = np.abs(w[J] - w[K])
    ws = w[J] + w[K]
    # (phi_j phi_k)' = (1/pi)[-(w_j - w_k) sin((w_j - w_k)x) + (w_j + w_k) sin((w_j + w_k)x)]
    A = np.diag(w ** 2).astype(S.dtype) - (ws * S[s] - wd * S[d]) / PI
    if bc == DIRICHLET_NEUMANN:
        form, mass, cf, cm = _corrector_entries(sigma, w)
        A = np.block([[A, form[:, None]], [form[None, :], np.array([[cf]])]])
        M = np.eye(N + 1)
        M[:N, N] = M[N, :N] = mass
        M[N, N] = cm
        return GalerkinMatrix(N, A, bc, M)
    return GalerkinMatrix(N, A, bc, None)


def eigen_solve(m: GalerkinMatrix, n_keep: int) -> Spectrum:
    """Lowest ``n_keep`` eigenvalues ordered by real part."""
    if n_keep > m.N // 2:
        raise ValueError("n_keep must not exceed N/2")
    try:
        if m.is_real and (m.mass is None or np.isrealobj(m.mass)):
            lam = sla.eigh(m.entries, m.mass, eigvals_only=True)
        else:
            lam = sla.eig(m.entries, m.mass, right=False)
    except (np.linalg.LinAlgError, sla.LinAlgError) as exc:
        raise SolverError(f"eigensolver failed: {exc}") from exc
    lam = lam[np.lexsort((np.imag(lam), np.real(lam)))][:n_keep]
    lam = _realify(lam)
    n = np.arange(1, n_keep + 1)
    return Spectrum(n, _realify(principal_sqrt(lam)), lam, "galerkin",
                    np.zeros(n_keep), m.bc, {"N": int(m.N)})


def oracle_spectrum(p: SpectralProblem, n_max: int, tol: float = 1e-10,
                    n_cap: int = N_CAP) -> Spectrum:
    """Galerkin spectrum converged under doubling of N.

    Doubling starts from ``max(64, 4 n_max)`` and stops once every one of
    the first ``n_max`` eigenvalues moves by less than
    ``tol * max(1, |lambda_k|)``, or by less than the rounding floor
    ``32 eps w_N^2`` of the dense solve, whichever is larger.  The floor
    actually used is stored in ``meta["floor"]``.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    N = max(64, 4 * n_max)
    prev = eigen_solve(assemble(p, N), n_max)
    history = []
    while True:
        N *= 2
        if N > n_cap:
            raise SolverError(f"no convergence to {tol:g} with N <= {n_cap}")
        cur = eigen_solve(assemble(p, N), n_max)
        change = np.abs(np.asarray(cur.lam) - np.asarray(prev.lam))
        history.append(float(np.max(change)))
        floor = 32 * np.finfo(float).eps * frequencies(p.bc, N)[-1] ** 2
        if np.all(change < np.maximum(tol * np.maximum(1.0, np.abs(cur.lam)), floor)):
            meta = {"N": N, "tol": tol, "floor": float(floor), "changes": history}
            return Spectrum(cur.indices, cur.rho, cur.lam, "galerkin", change, p.bc, meta)
        prev = cur
