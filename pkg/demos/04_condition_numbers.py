"""Pointwise condition numbers and the quadratic growth bound.

mu1 and mu2 compare the system's Weyl norm against the smallest tangent
singular value and the largest residual; a planted double root drives
both to infinity, and the zero system reports 0 by convention.  The last
section samples the growth bound that controls how fast |f| can rise in
an eps-ball around a near-root.
"""

import numpy as np

from polycond import (
    CoefficientTensor,
    DistributionSpec,
    PolynomialSystem,
    SeedPolicy,
    SystemShape,
    UnitPair,
    cond_at,
    growth_check,
    l_min,
    l_pair,
    plant_double_root,
    sample_system,
    sigma_min_tangent,
)

seeds = SeedPolicy(21)
shape = SystemShape(n=6, d=3)
sys_t = PolynomialSystem(rand=sample_system(shape, DistributionSpec("gaussian"), seeds))

x = np.zeros(shape.n)
x[0] = 1.0
rep = cond_at(sys_t, x)
print(f"random system at e_1: mu1 = {rep.mu1:.3f}, mu2 = {rep.mu2:.3f}, "
      f"sigma_min_tangent = {rep.sigma_min_tangent:.3f}")
print("weyl_total:", round(rep.weyl_total, 3),
      "| infinite flags:", rep.mu1_infinite, rep.mu2_infinite)

# a planted double root makes the tangent Jacobian singular up to roundoff:
# sigma_min lands at ~1e-17 rather than exactly 0, so mu1 is finite but huge
pair = UnitPair(x=np.eye(shape.n)[0], y=np.eye(shape.n)[1])
planted = plant_double_root(shape, pair, DistributionSpec("gaussian"), seeds, key=(1,))
prep = cond_at(planted, pair.x)
print("at a planted double root: sigma_min_tangent =",
      f"{prep.sigma_min_tangent:.2e},", "mu1 =", f"{prep.mu1:.2e},",
      "mu2 =", f"{prep.mu2:.2e}")

# exact degeneracy does flag infinity: both forms x_1^2 have a tangent
# Jacobian that is identically zero at e_1
tiny = SystemShape(n=3, d=2)
data = np.zeros(tiny.tensor_shape)
data[:, 0, 0] = 1.0
sing = PolynomialSystem(rand=CoefficientTensor(tiny, data))
srep = cond_at(sing, np.eye(3)[0])
print("hand-built f = (x1^2, x1^2): mu1_infinite =", srep.mu1_infinite,
      "| mu2 =", srep.mu2, "(residual |f| = 1 keeps it finite)")

# a zero system reports 0 for both numbers rather than 0/0
zrep = cond_at(PolynomialSystem(rand=CoefficientTensor.zeros(shape)), x)
print("zero system convention: mu1 =", zrep.mu1, "mu2 =", zrep.mu2)

# growth bound near an approximate minimizer of L
small = SystemShape(n=4, d=2)
s2 = PolynomialSystem(rand=sample_system(small, DistributionSpec("gaussian"), SeedPolicy(5)))
res = l_min(s2, restarts=15, seeds=SeedPolicy(5), key=(3,))
eps = max(2.0 * res.value, 1e-3)
out = growth_check(s2, res.argmin, eps=eps, samples=2000, seeds=SeedPolicy(5), key=(4,))
bound = small.d ** 2.25 * (2.0 + np.sqrt(small.n)) ** small.d
print(f"growth check at eps = {eps:.3f}: max |f| / (sqrt(n) eps^2) = "
      f"{out['max_ratio']:.3f} (sampled over the eps-ball)")
print("stays below the coarse ceiling d^2.25 (2 + sqrt(n))^d =",
      f"{bound:.1f}:", out["max_ratio"] <= bound)
print("consistency: sigma_min_tangent helper agrees with the report:",
      np.isclose(sigma_min_tangent(sys_t, x), rep.sigma_min_tangent))
print("l_pair at the argmin:", f"{l_pair(s2, res.argmin):.3e}")
