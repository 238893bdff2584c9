"""Square-rooted eigenvalues minus their free values, and what is left after
the linear term.

For sigma = eps * sin 2x the remainder s_k is, to first order, minus half
the k-th sine coefficient of sigma.  The difference Phi = s + b/2 should
shrink like eps^2.

Run:  python demos/02_remainders.py
"""
import numpy as np

from slspec.asymptotics import phi_of_sigma, remainders
from slspec.potential import PotentialSpec, sample_ball, sobolev_norm
from slspec.prufer import SpectralProblem, eigenvalues
from slspec.sequences import apply_T, hat_decompose, hat_norm


def both(sig, n):
    return (eigenvalues(SpectralProblem(sig, "dirichlet", 1e-12, 1e-12), n),
            eigenvalues(SpectralProblem(sig, "dirichlet_neumann", 1e-12, 1e-12), n))


print("eps      ||s||        ||Phi||      ||Phi||/eps^2")
for eps in (0.2, 0.1, 0.05, 0.025):
    sig = PotentialSpec.fourier(0.0, [], [0.0, eps])
    r = remainders(*both(sig, 40))
    phi = phi_of_sigma(sig, r)
    print(f"{eps:<8} {np.linalg.norm(r.s_values):.4e}   {np.linalg.norm(phi):.4e}   "
          f"{np.linalg.norm(phi) / eps ** 2:.4f}")

# For a linear sigma (constant q) the sine coefficients decay like 1/k, so
# the sequence leaves the weighted space and the hat decomposition picks up
# the harmonic basis sequence.
b = apply_T(PotentialSpec.piecewise_linear([0, np.pi], [-np.pi, 0.0]), 400).values
h = hat_decompose(b, 1.0)
print(f"\nT(x - pi): basis coefficients {np.round(h.alphas, 6).tolist()}, "
      f"hat norm {hat_norm(h):.4f}")

# A random draw from a Sobolev ball, and its remainder sequence.
sig = sample_ball(1.0, 2.0, seed=3)
print(f"\nsample: ||sigma||_(W^1) = {sobolev_norm(sig, 1.0):.4f}")
r = remainders(*both(sig, 30), theta=1.0)
print("first remainders:", np.round(r.s_values[:6], 6).tolist())
