"""Higher-order eigenvalue expansions: the fit and the series behind it.

Run:  python demos/03_expansions.py
"""
import numpy as np

from slspec.asymptotics import (S_expansion, S_table, f_recurrence, linear_parts,
                                order_estimate, rate_fit, thm41_alphas, thm51_check)
from slspec.potential import PotentialSpec, constant_q
from slspec.prufer import SpectralProblem, eigenvalues


def both(sig, n):
    return (eigenvalues(SpectralProblem(sig, "dirichlet", 1e-13, 1e-13), n),
            eigenvalues(SpectralProblem(sig, "dirichlet_neumann", 1e-13, 1e-13), n))


# q = 1 shifts every eigenvalue by one, so sqrt(k^2 + 1) - k is known exactly
# and the residual after the 1/(2k) term decays like 1/k.
n = 80
q1 = constant_q(1.0)
alpha = thm41_alphas(q1, *both(q1, n))
k = np.arange(1, n + 1)
print("residuals k^2 (s_2k - 1/(2k)) at k = 1, 10, 80:",
      np.round(alpha[1::2][[0, 9, 79]], 8).tolist())
print("decay slope:", round(rate_fit(alpha[1::2], 10, n)[0], 4))

# Fitting the next terms recovers the coefficients from the boundary values of sigma.
sig = PotentialSpec.fourier(0.0, [0.1, 0.05])
rep = thm51_check(sig, *both(sig, n), m=2)
print("\nfitted h:", np.round(rep["fitted_coeffs"]["h"], 6).tolist(),
      " linear parts:", np.round(linear_parts(sig, 2)[0], 6).tolist())
print("fitted g:", np.round(rep["fitted_coeffs"]["g"], 6).tolist(),
      " linear parts:", np.round(linear_parts(sig, 2)[1], 6).tolist())

# The successive-approximation series evaluated two ways.
sig = PotentialSpec.fourier(0.0, [], [0.0, 0.5])
table = f_recurrence(sig, 2)
for rho in (20.0, 40.0, 80.0):
    _, S, _ = S_table(sig, rho, 3)
    direct = sum(S[j][-1] for j in (1, 2, 3)).real
    print(f"rho = {rho:4.0f}: quadrature {direct: .3e}, expansion {S_expansion(sig, rho, 2, table): .3e}")
print("two-point order of the mismatch:", round(order_estimate(sig, 2)["order"], 3))
