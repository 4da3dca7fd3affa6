"""Sparse / compressible / incompressible trichotomy on the unit sphere.

Anti-concentration arguments split unit vectors by how concentrated their
mass is: genuinely spread-out vectors carry a guaranteed set of
medium-sized coordinates (the spread set), while vectors close to sparse
ones are handled separately.  The parameters shrink with the degree.
"""

import numpy as np

from polycond import CompressibilityParams, classify, dist_to_sparse, spread_set

params = CompressibilityParams.for_degree(2)
print(f"degree-2 parameters: delta = {params.delta}, rho = {params.rho}")

n = 12

# a standard basis vector is 1-sparse
e1 = np.zeros(n)
e1[0] = 1.0
rep = classify(e1, params)
print("\ne_1:", rep.kind, "| dist to sparse =", rep.dist_to_sparse)

# the uniform direction is as spread out as possible
u = np.ones(n) / np.sqrt(n)
rep = classify(u, params)
print("uniform:", rep.kind, "| dist to sparse =", f"{rep.dist_to_sparse:.4f}",
      "| spread set size =", len(rep.spread_set))

# one big coordinate plus a faint tail is compressible: near sparse but
# not exactly sparse
v = np.full(n, 0.02 / np.sqrt(n - 1))
v[0] = np.sqrt(1.0 - 0.02**2)
rep = classify(v, params)
print("spike + faint tail:", rep.kind,
      "| dist to sparse =", f"{rep.dist_to_sparse:.4f}", f"(< rho = {params.rho})")

# dist_to_sparse is an exact truncation: keep the ceil(delta n) largest
# magnitudes (delta = 0.4, n = 5 keeps two)
w = np.array([0.8, 0.5, 0.3, 0.1, 0.1])
w = w / np.linalg.norm(w)
wide = CompressibilityParams(delta=0.4, rho=0.1)
print("\nbest 2-sparse distance for", np.round(w, 3).tolist(), "=",
      f"{dist_to_sparse(w, wide):.4f}",
      "(= norm of the 3 smallest entries:",
      f"{np.linalg.norm(np.sort(np.abs(w))[:-2]):.4f})")

# the spread set of an incompressible vector: coordinates in the band
# [rho / sqrt(2 n), 1 / sqrt(delta n)], at least rho^2 delta n / 2 of them
idx = spread_set(u, params)
lo = params.rho / np.sqrt(2 * n)
hi = 1.0 / np.sqrt(params.delta * n)
print(f"\nspread set of the uniform direction: {len(idx)} coordinates "
      f"(guarantee >= {params.rho**2 * params.delta * n / 2:.4f})")
print(f"band: [{lo:.4f}, {hi:.4f}], uniform coordinate = {1 / np.sqrt(n):.4f}")

# random unit vectors in moderate dimension are essentially always
# incompressible at these (deliberately small) parameters
rng = np.random.default_rng(99)
kinds = []
for _ in range(500):
    g = rng.standard_normal(n)
    kinds.append(classify(g / np.linalg.norm(g), params).kind)
print("\n500 random unit vectors:",
      {k: kinds.count(k) for k in ("sparse", "compressible", "incompressible")})
