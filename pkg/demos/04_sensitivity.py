"""How eigenvalues respond to a change in sigma, and how close the
eigenfunctions are to sines.

Run:  python demos/04_sensitivity.py
"""
import numpy as np

from slspec.potential import PotentialSpec, sample_ball
from slspec.prufer import SpectralProblem
from slspec.sensitivity import asymptotic_gap, eigenvalue_derivative, fd_check

zero = PotentialSpec.zero()
for name, h in [("sin 2x", PotentialSpec.fourier(0.0, [], [0.0, 1.0])),
                ("cos x", PotentialSpec.fourier(0.0, [1.0]))]:
    d, _ = eigenvalue_derivative(zero, h, 1)
    print(f"sigma = 0, direction {name:6s}: d lambda_1 = {d:.10f}")
print("(for cos x the exact value is -8/(3 pi) =", round(-8 / (3 * np.pi), 10), ")")

sig = sample_ball(1.0, 1.0, K=16, seed=7)
h = sample_ball(0.5, 1.0, K=8, seed=8)
for k in (1, 3, 6):
    d, ds = eigenvalue_derivative(sig, h, k)
    print(f"k = {k}: d lambda = {d: .6f}, d s = {ds: .6f}, "
          f"relative gap to central difference {fd_check(sig, h, k):.1e}")

print("\neigenfunction distance to sin kx for a rough sample (theta = 0.3):")
out = asymptotic_gap(SpectralProblem(sample_ball(0.3, 1.0, seed=1), "dirichlet"), 0.3,
                     [10, 20, 40, 80])
for k, g in zip(out["k"], out["gap"]):
    print(f"  k = {k:3d}   max |y_k - sin kx| = {g:.3e}")
print(f"  log-log slope {out['slope']:.3f}")
