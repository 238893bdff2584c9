"""A point interaction at the midpoint, three ways.

q = c * delta(x - pi/2) has no pointwise values, but its antiderivative
sigma = c * H(x - pi/2) is an ordinary step function.  Everything below is
driven by that step.

Run:  python demos/01_delta_interaction.py
"""
import numpy as np

from slspec.galerkin import assemble, eigen_solve
from slspec.potential import delta_q
from slspec.prufer import SpectralProblem, characteristic_eigenvalues, eigenvalues

c = 3.0
sigma = delta_q(c)
print(f"sigma jumps by {c} at pi/2; knots {sigma.knots_x.round(4).tolist()}")

# Even-index Dirichlet eigenfunctions sin(2jx) vanish at pi/2 and never see
# the interaction, so lambda_2 = 4 and lambda_4 = 16 survive unchanged.
for bc in ("dirichlet", "dirichlet_neumann"):
    p = SpectralProblem(sigma, bc)
    s = eigenvalues(p, 6)
    ch = characteristic_eigenvalues(p, 6)
    print(f"\n{bc}")
    print("  angle solver     ", np.round(s.lam, 10))
    print("  sign-change solver", np.round(ch.lam, 10))
    print("  low indices handed to the sign-change solver:",
          s.meta["delegated_low_indices"])

# The Galerkin truncation converges only algebraically for a step in sigma.
ref = eigenvalues(SpectralProblem(sigma, "dirichlet"), 3).lam
print("\nGalerkin error in the first three Dirichlet eigenvalues:")
for N in (32, 128, 512, 2048):
    g = eigen_solve(assemble(SpectralProblem(sigma, "dirichlet"), N), 3).lam
    print(f"  N = {N:5d}   max error {np.max(np.abs(g - ref)):.2e}")
