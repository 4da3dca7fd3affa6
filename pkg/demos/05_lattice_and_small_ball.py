"""Essential LCD of lifted vectors and small-ball probabilities of sums.

The LCD scan finds the smallest scale D at which D * y sits suspiciously
close to the integer lattice; its certificate is recomputable from y
alone.  Small-ball estimates then quantify anti-concentration of linear
sign and Gaussian sums, and the tensorization check shows how quickly
coordinate-wise smallness dies out in product form.
"""

import numpy as np

from polycond import (
    DEFAULT_ALPHA,
    DistributionSpec,
    LcdQuery,
    SeedPolicy,
    dist_to_lattice,
    lcd_estimate,
    lift_monomial,
    small_ball_estimate,
    tensorization_check,
)

# distance to the integer lattice, the primitive behind the LCD
print("dist((0.5, 0.5), Z^2) =", dist_to_lattice([0.5, 0.5]))
print("dist((1.0, 2.0), Z^2) =", dist_to_lattice([1.0, 2.0]))

# 4 * (3/4, 1/2, 1/4) = (3, 2, 1) is an exact lattice point; with a
# strict tolerance the scan certifies the left edge of the window there
y = np.array([0.75, 0.5, 0.25])
q = LcdQuery(alpha=0.05, gamma0=0.05, d_max=8.0)
res = lcd_estimate(y, q)
print(f"\nLCD of {y.tolist()}: found = {res.found}, D* = {res.lcd:.4f} (near 4)")
cert = res.certificate
print("certificate: dist(D* y, Z^3) =", f"{cert['lattice_dist']:.6f}",
      "< threshold", f"{cert['threshold']:.6f}")
print("recomputed from y:", f"{dist_to_lattice(cert['D_star'] * y):.6f}")

# an irrational-direction vector stays far from the lattice at every
# scale below d_max, so nothing is found
vague = np.array([1.0, np.sqrt(2)]) / np.sqrt(3.0)
res2 = lcd_estimate(vague, LcdQuery(alpha=0.2, gamma0=0.1, d_max=3.0))
print("near-irrational direction: found =", res2.found,
      "(lcd is nan, certificate is None)")

# monomial lift: degree-d coordinate products, unit norm preserved
x = np.array([0.6, 0.8])
lift = lift_monomial(x, 2)
print("\nlift of (0.6, 0.8) at d=2:", lift.tolist(), "| norm =", np.linalg.norm(lift))
print("alpha schedule: alpha(8, 2) =", f"{DEFAULT_ALPHA.alpha(8, 2):.3f}",
      "alpha(2, 3) =", f"{DEFAULT_ALPHA.alpha(2, 3):.3f}")

# small-ball: P(|S - v| <= eps) for S = a1/sqrt2 + a2/sqrt2, signs a_i.
# S in {-sqrt2, 0, sqrt2} with P(0) = 1/2, so small eps give 1/2 exactly.
seeds = SeedPolicy(31)
yb = np.array([1.0, 1.0]) / np.sqrt(2.0)
est = small_ball_estimate(yb, DistributionSpec("rademacher"), [0.1, 2.0], 20000, seeds)
lo, hi = est.ci
print("\nsign sum at eps = 0.1: estimate =", f"{est.estimate[0]:.4f}",
      "(exact 1/2), CI", f"[{lo[0]:.4f}, {hi[0]:.4f}]")
print("eps = 2.0 swallows every atom: estimate =", est.estimate[1])

# gaussian sums spread out: the concentration function is about
# 2 eps / sqrt(2 pi) for small eps
gst = small_ball_estimate(yb, DistributionSpec("gaussian"), [0.05, 0.5], 50000, seeds, key=(1,))
print("gaussian sum: estimate at eps = 0.05:", f"{gst.estimate[0]:.4f}",
      "(density bound 0.0399)")

# tensorization: P(sum of n squared gaussians < delta^2 n) decays like
# (c delta)^n, far below the single-coordinate rate
tn = tensorization_check(DistributionSpec("gaussian"), 6, [0.2, 0.5, 1.0], 10**5, seeds, key=(2,))
for delta, p in zip(tn.grid, tn.estimate):
    print(f"P(mean square < {delta:.1f}^2) = {p:.5f}  vs (3 delta)^6 = {(3 * delta) ** 6:.5f}")
