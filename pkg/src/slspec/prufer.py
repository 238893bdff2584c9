"""Eigenvalues of L_D and L_DN by shooting.

Two independent shooting routes are provided:

* the modified Pruefer angle ``theta(x, rho)`` solving

      theta' = rho + sigma sin 2theta + sigma^2 (1 - cos 2theta) / (2 rho),

  integrated as ``f = theta - rho x`` so that the large linear part is
  exact; eigenvalues are where ``theta(pi, rho)`` equals ``pi n``
  (Dirichlet) or ``pi (n - 1/2)`` (Dirichlet-Neumann);
* the first-order quasi-derivative system ``u' = sigma u + v``,
  ``v' = -(lambda + sigma^2) u - sigma v`` whose endpoint values are the
  characteristic functions.

The literal fixed-point iteration for the Pruefer angle is kept as a
separate cross-check together with the admissibility functional Upsilon.
"""
from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import solve_ivp
from scipy.optimize import minimize_scalar

from ._panels import PanelGrid
from .errors import AdmissibilityError, BracketError, SolverError
from .potential import PI, PotentialSpec, exp_integral
from .sequences import apply_T

DIRICHLET = "dirichlet"
DIRICHLET_NEUMANN = "dirichlet_neumann"
_BC_ALIASES = {
    "d": DIRICHLET, "dirichlet": DIRICHLET,
    "dn": DIRICHLET_NEUMANN, "dirichlet_neumann": DIRICHLET_NEUMANN,
    "dirichlet-neumann": DIRICHLET_NEUMANN,
}

RESIDUAL_TOL = 1e-10
EPSILON_ADMISSIBLE = 2.0 ** -7


def normalize_bc(bc: str) -> str:
    try:
        return _BC_ALIASES[bc.lower()]
    except KeyError:
        raise ValueError(f"unknown boundary condition {bc!r}") from None


@dataclass(frozen=True)
class SpectralProblem:
    sigma: PotentialSpec
    bc: str = DIRICHLET
    abs_tol: float = 1e-11
    rel_tol: float = 1e-11

    def __post_init__(self):
        object.__setattr__(self, "bc", normalize_bc(self.bc))
        if self.abs_tol <= 0 or self.rel_tol <= 0:
            raise ValueError("tolerances must be positive")

    def with_sigma(self, sigma: PotentialSpec) -> "SpectralProblem":
        return SpectralProblem(sigma, self.bc, self.abs_tol, self.rel_tol)


@dataclass(frozen=True, eq=False)
class Spectrum:
    indices: np.ndarray
    rho: np.ndarray
    lam: np.ndarray
    method: str
    residuals: np.ndarray
    bc: str = DIRICHLET
    meta: dict = field(default_factory=dict)

    def __len__(self):
        return len(self.indices)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["n", "re_rho", "im_rho", "re_lambda", "im_lambda", "residual"])
        for n, r, l, res in zip(self.indices, self.rho, self.lam, self.residuals):
            r, l = complex(r), complex(l)
            w.writerow([int(n), f"{r.real:.17g}", f"{r.imag:.17g}",
                        f"{l.real:.17g}", f"{l.imag:.17g}", f"{float(res):.17g}"])
        return buf.getvalue()

    def to_dict(self) -> dict:
        def pair(v):
            v = complex(v)
            return [v.real, v.imag]
        return {
            "bc": self.bc,
            "method": self.method,
            "meta": self.meta,
            "n": [int(n) for n in self.indices],
            "rho": [pair(r) for r in self.rho],
            "lambda": [pair(l) for l in self.lam],
            "residual": [float(r) for r in self.residuals],
        }

    def dumps(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_csv(cls, text: str, bc: str = DIRICHLET, method: str = "csv") -> "Spectrum":
        rows = list(csv.DictReader(io.StringIO(text)))
        n = np.array([int(r["n"]) for r in rows])
        rho = np.array([complex(float(r["re_rho"]), float(r["im_rho"])) for r in rows])
        lam = np.array([complex(float(r["re_lambda"]), float(r["im_lambda"])) for r in rows])
        res = np.array([float(r["residual"]) for r in rows])
        return cls(n, _realify(rho), _realify(lam), method, res, normalize_bc(bc))


def _realify(a):
    a = np.asarray(a)
    if np.iscomplexobj(a) and np.all(a.imag == 0):
        return a.real.copy()
    return a


def principal_sqrt(lam):
    """Square root with argument in (-pi/2, pi/2]."""
    lam = np.asarray(lam, dtype=complex)
    r = np.sqrt(lam)
    # numpy's branch gives arg in (-pi/2, pi/2] except on the negative axis
    # where -0j imaginary parts flip the sign
    flip = (r.real == 0) & (r.imag < 0)
    r = np.where(flip, -r, r)
    return r


@dataclass(frozen=True, eq=False)
class PruferAngle:
    rho: complex | float
    grid_x: np.ndarray
    theta_values: np.ndarray
    log_r_values: np.ndarray
    iterations: int = 0


# -- integration plumbing ---------------------------------------------------


def _integrate(rhs, y0, sigma: PotentialSpec, rtol, atol, t_eval=None, dense=False,
               extra_breaks=()):
    """Integrate ``y' = rhs(x, y, sigma(x))`` over [0, pi] piece by piece.

    Pieces follow the breakpoints of sigma (and ``extra_breaks``) so jumps
    in sigma never fall inside a step.  Returns the final state and, if
    requested, values at ``t_eval`` (columns) or a list of dense
    interpolants with their intervals.
    """
    pieces = _pieces(sigma, extra_breaks)
    y = np.asarray(y0)
    out = None
    inverse = None
    if t_eval is not None:
        # repeated abscissae (panel endpoints) are integrated once
        t_eval, inverse = np.unique(np.asarray(t_eval, dtype=float), return_inverse=True)
        out = np.empty((y.size, t_eval.size), dtype=complex if np.iscomplexobj(y) else float)
    dense_parts = []
    filled = np.zeros(0 if t_eval is None else t_eval.size, dtype=bool)
    for a, b, fns in pieces:
        def fun(x, yy, fns=fns):
            return rhs(x, yy, [f(x) for f in fns])

        te = None
        if t_eval is not None:
            sel = (t_eval >= a) & (t_eval <= b) & ~filled
            filled |= sel
            # the piece endpoint is always evaluated so the carried state is y(b)
            te = t_eval[sel]
            m = te.size
            if m == 0 or te[-1] < b:
                te = np.append(te, b)
        sol = solve_ivp(fun, (a, b), y, method="DOP853", rtol=rtol, atol=atol,
                        t_eval=te, dense_output=dense)
        if sol.status != 0:
            raise SolverError(f"integrator failed on [{a:.6g}, {b:.6g}]: {sol.message}")
        if t_eval is not None and m:
            out[:, sel] = sol.y[:, :m]
        if dense:
            dense_parts.append((a, b, sol.sol))
        y = sol.y[:, -1]
    if out is not None:
        out = out[:, inverse]
    return y, out, dense_parts


def _pieces(sigma: PotentialSpec, extra_breaks=()):
    """Common refinement of the segment lists of several potentials."""
    specs = [sigma] + [s for s in extra_breaks if isinstance(s, PotentialSpec)]
    pts = np.unique(np.concatenate([s.breakpoints() for s in specs]))
    out = []
    for a, b in zip(pts[:-1], pts[1:]):
        mid = 0.5 * (a + b)
        fns = []
        for s in specs:
            for sa, sb, f in s.segments():
                if sa <= mid <= sb:
                    fns.append(f)
                    break
        out.append((float(a), float(b), fns))
    return out


# -- modified Pruefer angle -------------------------------------------------


def _prufer_rhs(rho, with_logr):
    rho = np.asarray(rho)
    n = rho.size

    def rhs(x, y, sv):
        s = sv[0]
        f = y[:n]
        th2 = 2.0 * (rho * x + f)
        s2 = s * s / (2.0 * rho)
        df = s * np.sin(th2) + s2 * (1.0 - np.cos(th2))
        if not with_logr:
            return df
        dl = -s * np.cos(th2) - s2 * np.sin(th2)
        return np.concatenate([df, dl])

    return rhs


def prufer_deviation(sigma: PotentialSpec, rho, rtol=1e-11, atol=1e-11) -> np.ndarray:
    """``f(pi, rho) = theta(pi, rho) - rho pi`` for an array of rho."""
    rho = np.atleast_1d(np.asarray(rho))
    if np.any(rho == 0):
        raise ValueError("rho must be nonzero")
    cplx = np.iscomplexobj(rho) or sigma.complex_valued
    y0 = np.zeros(rho.size, dtype=complex if cplx else float)
    y, _, _ = _integrate(_prufer_rhs(rho, False), y0, sigma, rtol, atol)
    return y


def prufer_integrate(sigma: PotentialSpec, rho, grid=None, rtol=1e-11,
                     atol=1e-11) -> PruferAngle:
    """Pruefer angle and log-amplitude on ``grid`` (default 257 points)."""
    if rho == 0:
        raise ValueError("rho must be nonzero")
    grid = np.linspace(0.0, PI, 257) if grid is None else np.asarray(grid, dtype=float)
    cplx = np.iscomplexobj(rho) or sigma.complex_valued
    r = np.array([rho])
    y0 = np.zeros(2, dtype=complex if cplx else float)
    _, vals, _ = _integrate(_prufer_rhs(r, True), y0, sigma, rtol, atol, t_eval=grid)
    theta = rho * grid + vals[0]
    return PruferAngle(rho, grid, theta, vals[1])


# -- fixed point iteration --------------------------------------------------


def _fp_grid(sigma: PotentialSpec, rho, panels=None) -> PanelGrid:
    if panels is None:
        K = max(sigma.cos_coeffs.size, sigma.sin_coeffs.size) if sigma.is_fourier else 0
        panels = int(np.ceil(3 * (abs(rho) + K / 2))) + 32
    return PanelGrid(sigma.breakpoints(), panels=panels, order=16)


def _sample(sigma: PotentialSpec, grid: PanelGrid):
    segs = sigma.segments()
    out = np.empty(grid.x.size, dtype=sigma.dtype)
    x = grid.x.reshape(grid.npanels, grid.order)
    o = out.reshape(grid.npanels, grid.order)
    for p in range(grid.npanels):
        o[p] = segs[grid.segment[p]][2](x[p])
    return out


def contraction_map(f, sig, x, rho, grid: PanelGrid):
    """The four pieces Phi_0..Phi_3 of the fixed-point map on the grid."""
    s2r, c2r = np.sin(2 * rho * x), np.cos(2 * rho * x)
    sig2 = sig * sig / (2 * rho)
    integrands = np.stack([
        sig * s2r + sig2 * (1 - c2r),
        2 * f * sig * c2r,
        sig * c2r * (np.sin(2 * f) - 2 * f) - sig * s2r * (1 - np.cos(2 * f)),
        sig2 * ((1 - np.cos(2 * f)) * c2r + np.sin(2 * f) * s2r),
    ], axis=1)
    parts = grid.cumint(integrands)
    return parts[:, 0], parts[:, 1], parts[:, 2], parts[:, 3]


def upsilon(sigma: PotentialSpec, rho, nu: float = 0.0, R: float | None = None,
            n0: int = 512) -> float:
    """Admissibility functional of the contraction argument.

    ``max_x (|int_0^x sigma sin 2rho t| + |int_0^x sigma cos 2rho t|)
    + R^2 (1 + kappa + R kappa^2) / (2 |rho|)`` with ``kappa = cosh 2 pi nu``.
    The maximum is taken on a grid of ``n0`` points, doubled until the
    locally refined maximum is stable to 1e-8.
    """
    if abs(np.imag(rho)) > nu + 1e-15:
        raise ValueError("|Im rho| must not exceed nu")
    R = sigma.l2_norm() if R is None else R
    kappa = np.cosh(2 * PI * nu)
    tail = R ** 2 * (1 + kappa + R * kappa ** 2) / (2 * abs(rho))

    def g(x):
        ep = exp_integral(sigma, 2 * rho, x)
        em = exp_integral(sigma, -2 * rho, x)
        return np.abs((ep - em) / 2j) + np.abs((ep + em) / 2)

    prev = None
    n = n0
    while True:
        xs = np.linspace(0.0, PI, n)
        vals = g(xs)
        i = int(np.argmax(vals))
        lo, hi = xs[max(i - 1, 0)], xs[min(i + 1, n - 1)]
        best = vals[i]
        if hi > lo:
            res = minimize_scalar(lambda t: -g(np.array([t]))[0], bounds=(lo, hi),
                                  method="bounded", options={"xatol": 1e-12})
            best = max(best, -res.fun)
        if prev is not None and abs(best - prev) <= 1e-8:
            break
        if n > 2 ** 18:
            break
        prev, n = best, 2 * n
    return float(best + tail)


def admissibility_bound(R: float, nu: float = 0.0) -> float:
    kappa = np.cosh(2 * PI * nu)
    return EPSILON_ADMISSIBLE * (1 + 64 * R ** 2 * kappa ** 2) ** -2


def fixed_point_theta(sigma: PotentialSpec, rho, nu: float = 0.0, R: float | None = None,
                      strict: bool = True, tol: float = 1e-12, max_iter: int = 200,
                      panels: int | None = None) -> PruferAngle:
    """Pruefer angle from the iteration ``f_k = Phi(f_{k-1})``, ``f_0 = 0``.

    With ``strict`` the admissibility inequality ``Upsilon(rho) <
    2^-7 (1 + 64 R^2 kappa^2)^-2`` is enforced before iterating.  Values
    are returned on the Chebyshev panel nodes.
    """
    if rho == 0:
        raise ValueError("rho must be nonzero")
    if abs(np.imag(rho)) > nu + 1e-15:
        raise ValueError("|Im rho| must not exceed nu")
    l2 = sigma.l2_norm()
    R = l2 if R is None else R
    if l2 > R * (1 + 1e-12):
        raise ValueError(f"||sigma||_L2 = {l2:.6g} exceeds R = {R:.6g}")
    if strict:
        ups = upsilon(sigma, rho, nu, R)
        bound = admissibility_bound(R, nu)
        if not ups < bound:
            raise AdmissibilityError(
                f"Upsilon(rho) = {ups:.3e} >= {bound:.3e}; rho too small for this R, nu")
    grid = _fp_grid(sigma, rho, panels)
    x = grid.x
    sig = _sample(sigma, grid)
    cplx = np.iscomplexobj(rho) or sigma.complex_valued
    f = np.zeros(x.size, dtype=complex if cplx else float)
    for it in range(1, max_iter + 1):
        new = sum(contraction_map(f, sig, x, rho, grid))
        change = np.max(np.abs(new - f))
        f = new
        if change < tol:
            break
    else:
        raise SolverError(f"fixed-point iteration did not converge in {max_iter} steps")
    th2 = 2 * (rho * x + f)
    logr = -grid.cumint(sig * np.cos(th2) + sig * sig / (2 * rho) * np.sin(th2))
    return PruferAngle(rho, x, rho * x + f, logr, iterations=it)


# -- quasi-derivative system -----------------------------------------------


def _quasi_rhs(lam):
    lam = np.asarray(lam)
    n = lam.size

    def rhs(x, y, sv):
        s = sv[0]
        u, v = y[:n], y[n:]
        return np.concatenate([s * u + v, -(lam + s * s) * u - s * v])

    return rhs


def quasi_derivative_solve(sigma: PotentialSpec, lam, rtol=1e-11, atol=1e-13):
    """``(u(pi), v(pi))`` for ``u(0) = 0``, ``v(0) = u^[1](0) = 1``.

    ``lam`` may be an array; the outputs then have its shape.
    """
    lam_arr = np.atleast_1d(np.asarray(lam))
    cplx = np.iscomplexobj(lam_arr) or sigma.complex_valued
    n = lam_arr.size
    y0 = np.concatenate([np.zeros(n), np.ones(n)]).astype(complex if cplx else float)
    y, _, _ = _integrate(_quasi_rhs(lam_arr.ravel()), y0, sigma, rtol, atol)
    u, v = y[:n].reshape(lam_arr.shape), y[n:].reshape(lam_arr.shape)
    if np.ndim(lam) == 0:
        return u[0], v[0]
    return u, v


def _angle_rhs(lam):
    def rhs(x, y, sv):
        s = sv[0]
        return (np.cos(y) ** 2 + (lam + s * s) * np.sin(y) ** 2 + s * np.sin(2 * y))
    return rhs


def classical_angle(sigma: PotentialSpec, lam: float, rtol=1e-11, atol=1e-12) -> float:
    """Unwrapped angle of ``(u, v)`` at pi, ``tan phi = u / v``, phi(0) = 0."""
    y, _, _ = _integrate(_angle_rhs(float(lam)), np.zeros(1), sigma, rtol, atol)
    return float(y[0])


def _targets(bc: str, n: np.ndarray) -> np.ndarray:
    return n.astype(float) if bc == DIRICHLET else n - 0.5


def count_below(sigma: PotentialSpec, bc: str, lam: float) -> int:
    """Number of eigenvalues ``<= lam`` (Sturm oscillation via the angle)."""
    phi = classical_angle(sigma, lam)
    off = 0.0 if normalize_bc(bc) == DIRICHLET else 0.5
    return max(0, int(np.floor(phi / PI + off + 1e-12)))


def _zero_count(sigma: PotentialSpec, bc: str, lam: float, rtol, atol) -> int:
    """Eigenvalues below ``lam`` by counting sign changes of u(., lam)."""
    y0 = np.array([0.0, 1.0], dtype=sigma.dtype)
    npts = int(200 + 40 * np.sqrt(abs(lam)) * PI)
    xs = np.linspace(0.0, PI, npts)
    yend, vals, _ = _integrate(_quasi_rhs(np.array([lam])), y0, sigma, rtol, atol,
                               t_eval=xs)
    u = np.real(vals[0, 1:-1])
    z = int(np.count_nonzero(np.sign(u[1:]) * np.sign(u[:-1]) < 0))
    if bc == DIRICHLET:
        return z
    return z + int(np.real(yend[0]) * np.real(yend[1]) < 0)


# -- vectorized bracketing root search --------------------------------------


def _illinois(G, a, b, ga, gb, tol_g, tol_x, max_iter=100):
    """Vectorized Illinois iteration on brackets with ``ga * gb < 0``.

    Returns the best iterate, its value and the final bracket width.
    """
    a, b, ga, gb = (np.array(v, dtype=float) for v in (a, b, ga, gb))
    x = np.where(np.abs(ga) < np.abs(gb), a, b)
    gx = np.where(np.abs(ga) < np.abs(gb), ga, gb)
    active = (np.abs(gx) > tol_g) & (np.abs(b - a) > tol_x(x))
    side = np.zeros(a.size, dtype=int)
    for _ in range(max_iter):
        if not np.any(active):
            break
        idx = np.flatnonzero(active)
        xa, xb, fa, fb = a[idx], b[idx], ga[idx], gb[idx]
        xn = (xa * fb - xb * fa) / (fb - fa)
        bad = ~np.isfinite(xn) | (xn <= np.minimum(xa, xb)) | (xn >= np.maximum(xa, xb))
        xn = np.where(bad, 0.5 * (xa + xb), xn)
        fn = G(xn, idx)
        x[idx], gx[idx] = xn, fn
        same_a = np.sign(fn) == np.sign(fa)
        # the endpoint sharing the sign of fn moves; if the same endpoint
        # moved last time too, the stale one has its value halved
        stale_b = same_a & (side[idx] == 1)
        stale_a = ~same_a & (side[idx] == -1)
        a[idx] = np.where(same_a, xn, xa)
        ga[idx] = np.where(same_a, fn, np.where(stale_a, 0.5 * fa, fa))
        b[idx] = np.where(same_a, xb, xn)
        gb[idx] = np.where(same_a, np.where(stale_b, 0.5 * fb, fb), fn)
        side[idx] = np.where(same_a, 1, -1)
        active[idx] = (np.abs(fn) > tol_g) & (np.abs(b[idx] - a[idx]) > tol_x(xn))
    return x, gx, np.abs(b - a)


def _x_tol(x):
    return 4e-16 * np.maximum(1.0, np.abs(x))


def _prufer_roots(problem: SpectralProblem, n: np.ndarray, rho_floor: float,
                  rho_cap: float):
    sigma, bc = problem.sigma, problem.bc
    target = _targets(bc, n)
    b = apply_T(sigma, int(2 * n.max())).values.real if n.size else np.zeros(0)
    coef_idx = 2 * n - 1 if bc == DIRICHLET else 2 * n - 2
    guess = target - 0.5 * b[coef_idx]
    guess = np.clip(guess, rho_floor * 1.01, rho_cap)
    rtol, atol = problem.rel_tol, problem.abs_tol

    def G(rho, idx):
        return PI * (rho - target[idx]) + prufer_deviation(sigma, rho, rtol, atol).real

    all_idx = np.arange(n.size)
    g0 = G(guess, all_idx)
    lo, hi = guess.copy(), guess.copy()
    glo, ghi = g0.copy(), g0.copy()
    step = np.maximum(np.abs(g0) / PI * 1.2, 1e-6 * np.maximum(1.0, guess))
    need = np.ones(n.size, dtype=bool)
    up = g0 < 0
    cur, gcur = guess.copy(), g0.copy()
    for _ in range(80):
        done = np.abs(gcur) <= RESIDUAL_TOL * 0.1
        need &= ~done
        if not np.any(need):
            break
        idx = np.flatnonzero(need)
        cand = np.where(up[idx], cur[idx] + step[idx], cur[idx] - step[idx])
        at_floor = (~up[idx]) & (cand < rho_floor)
        cand = np.where(at_floor, rho_floor, cand)
        if np.any(cand > rho_cap):
            raise BracketError(
                f"no bracket below rho = {rho_cap:.4g} for index {int(n[idx][np.argmax(cand)])}")
        gc = G(cand, idx)
        crossed = np.sign(gc) != np.sign(gcur[idx])
        if np.any(at_floor & ~crossed):
            bad = n[idx][at_floor & ~crossed]
            raise BracketError(f"root for index {int(bad[0])} lies below rho = {rho_floor}")
        for j, i in enumerate(idx):
            if crossed[j]:
                if up[i]:
                    lo[i], glo[i], hi[i], ghi[i] = cur[i], gcur[i], cand[j], gc[j]
                else:
                    lo[i], glo[i], hi[i], ghi[i] = cand[j], gc[j], cur[i], gcur[i]
                need[i] = False
            else:
                cur[i], gcur[i] = cand[j], gc[j]
                step[i] *= 2.0
    else:
        raise BracketError("bracketing did not terminate")
    done = np.abs(gcur) <= RESIDUAL_TOL * 0.1
    lo = np.where(done, cur, lo)
    hi = np.where(done, cur, hi)
    glo = np.where(done, gcur, glo)
    ghi = np.where(done, gcur, ghi)
    rho, g, width = _illinois(G, lo, hi, glo, ghi, RESIDUAL_TOL, _x_tol)
    # a bracket shrunk to rounding width pins the root even when integrator
    # noise keeps |G| a little above RESIDUAL_TOL
    pinned = width <= 4 * _x_tol(rho)
    return rho, np.abs(g), pinned


def _char_roots(problem: SpectralProblem, n_wanted: np.ndarray, lam_hint_hi=None):
    """Eigenvalues from sign changes of the characteristic function in lambda."""
    sigma, bc = problem.sigma, problem.bc
    rtol = min(problem.rel_tol, 1e-11)
    atol = min(problem.abs_tol, 1e-13)
    comp = 0 if bc == DIRICHLET else 1
    nmax = int(n_wanted.max())
    lam_lo = -sigma.sup_bound() ** 2 - 1.0
    lam_hi = (nmax + 1.0) ** 2 + sigma.sup_bound() ** 2 + 1.0 if lam_hint_hi is None else lam_hint_hi
    for _ in range(60):
        if _zero_count(sigma, bc, lam_hi, rtol, atol) >= nmax:
            break
        lam_hi = 2 * lam_hi + 1
    else:
        raise BracketError("could not enclose the requested eigenvalues")
    expected = _zero_count(sigma, bc, lam_hi, rtol, atol)

    def chi(lam, idx=None):
        return np.real(np.asarray(quasi_derivative_solve(sigma, lam, rtol, atol))[comp])

    dt = 0.05
    for _ in range(6):
        t = np.arange(0.0, np.sqrt(lam_hi - lam_lo) + dt, dt)
        lam = lam_lo + t ** 2
        lam[-1] = min(lam[-1], lam_hi)
        lam = np.unique(lam)
        c = chi(lam)
        flips = np.flatnonzero(np.sign(c[1:]) * np.sign(c[:-1]) < 0)
        exact = np.flatnonzero(c == 0)
        if flips.size + exact.size == expected:
            break
        dt /= 2
    else:
        raise SolverError("characteristic scan keeps missing roots")
    a, b = lam[flips], lam[flips + 1]
    ga, gb = c[flips], c[flips + 1]
    roots, g, _ = _illinois(chi, a, b, ga, gb, 0.0, _x_tol)
    roots = np.sort(np.concatenate([roots, lam[exact]]))
    res = np.abs(chi(roots)) if roots.size else np.zeros(0)
    return roots, res


# -- public eigenvalue interface --------------------------------------------


def _finish(problem, n, lam, rho, res, method, meta):
    order = np.argsort(n)
    return Spectrum(n[order], _realify(rho[order]), _realify(lam[order]), method,
                    np.asarray(res, dtype=float)[order], problem.bc, meta)


def characteristic_eigenvalues(problem: SpectralProblem, n_max: int) -> Spectrum:
    """Eigenvalues 1..n_max by root finding on u(pi, lam) or v(pi, lam)."""
    if problem.sigma.complex_valued:
        raise ValueError("shooting solvers need a real sigma; use the Galerkin oracle")
    n = np.arange(1, n_max + 1)
    roots, res = _char_roots(problem, n)
    if roots.size < n_max:
        raise SolverError(f"found {roots.size} of {n_max} eigenvalues")
    lam = roots[:n_max]
    if np.any(np.diff(lam) <= 0):
        raise SolverError("duplicate roots detected")
    return _finish(problem, n, lam, principal_sqrt(lam), res[:n_max], "characteristic",
                   {"rtol": problem.rel_tol, "atol": problem.abs_tol})


def eigenvalues(problem: SpectralProblem, n_max: int, rho_floor: float = 0.05) -> Spectrum:
    """Eigenvalues 1..n_max of L_D or L_DN for real sigma.

    Indices with ``lambda <= rho_floor^2`` (including negative eigenvalues)
    are delegated to the characteristic-function solver; all others solve
    ``theta(pi, rho) = pi n`` (resp. ``pi (n - 1/2)``) for rho > 0.
    """
    sigma = problem.sigma
    if sigma.complex_valued:
        raise ValueError("shooting solvers need a real sigma; use the Galerkin oracle")
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    n = np.arange(1, n_max + 1)
    low = min(count_below(sigma, problem.bc, rho_floor ** 2), n_max)
    rho = np.zeros(n_max, dtype=complex)
    res = np.zeros(n_max)
    meta = {"rtol": problem.rel_tol, "atol": problem.abs_tol,
            "delegated_low_indices": int(low), "residual_tol": RESIDUAL_TOL}
    if low:
        lam_low, res_low = _char_roots(problem, n[:low], lam_hint_hi=rho_floor ** 2 + 1.0)
        lam_low = lam_low[:low]
        if lam_low.size < low:
            raise SolverError("low eigenvalues not all found")
        rho[:low] = principal_sqrt(lam_low)
        res[:low] = res_low[:low]
    if low < n_max:
        hi_n = n[low:]
        margin = 4.0 + 2.0 * sigma.sup_bound() + sigma.sup_bound() ** 2
        r, g, pinned = _prufer_roots(problem, hi_n, rho_floor, n_max + 2 + margin)
        rho[low:] = r
        res[low:] = g
        unresolved = (g > RESIDUAL_TOL) & ~pinned
        if np.any(unresolved):
            worst = int(hi_n[unresolved][np.argmax(g[unresolved])])
            raise SolverError(f"residual above tolerance for index {worst}")
    rr = np.real(rho[low:])
    if rr.size > 1 and np.any(np.diff(rr) <= 0):
        raise SolverError("duplicate or misordered roots detected")
    lam = rho ** 2
    lam[:low] = np.real(lam[:low])
    return _finish(problem, n, lam, rho, res, "prufer", meta)


def strip_check(s: Spectrum, R: float) -> bool:
    """All ``|Im rho_n| < 4 exp(2 pi R)``."""
    return bool(np.all(np.abs(np.imag(s.rho)) < 4 * np.exp(2 * PI * R)))


def fourier_F(sigma: PotentialSpec, rho):
    """``int_0^pi sigma(x) exp(i rho x) dx``."""
    out = exp_integral(sigma, rho)
    return out if np.ndim(out) else out[()]


def fourier_F_strip_max(sigma: PotentialSpec, rho: float, nu: float = 0.0,
                        samples: int = 41) -> float:
    """``max |F|`` over ``Re z in [rho - 1/2, rho + 1/2]``, ``Im z in {-nu, 0, nu}``.

    The maximum is taken on ``samples`` equispaced real parts; a single
    real ``rho`` can sit on a near-zero of F, the window cannot.
    """
    re = np.linspace(rho - 0.5, rho + 0.5, samples)
    z = (re[:, None] + 1j * np.array([-nu, 0.0, nu])[None, :]).ravel()
    return float(np.max(np.abs(exp_integral(sigma, z))))
