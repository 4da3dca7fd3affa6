"""Tour of system containers, evaluation, and derivative contractions.

Builds a tiny homogeneous system by hand, evaluates it, and walks through
the derivative operator's two defining identities: agreement with finite
differences and the falling-factorial scaling on repeated directions.
"""

import math

import numpy as np

from polycond import (
    CoefficientTensor,
    PolynomialSystem,
    SystemShape,
    TangentFrame,
    derivative_contract,
    evaluate,
    jacobian,
    jacobian_tangent,
    monomial_forms,
    symmetrize,
    weyl_norm,
)

shape = SystemShape(n=3, d=2)
print(f"shape: n={shape.n}, d={shape.d}, forms m={shape.m}, tensor {shape.tensor_shape}")

data = np.zeros(shape.tensor_shape)
data[0] = np.eye(3)                     # f_1(x) = x1^2 + x2^2 + x3^2
data[1, 0, 1] = data[1, 1, 0] = 1.0     # f_2(x) = 2 x1 x2
sys_t = PolynomialSystem(rand=CoefficientTensor(shape, data))

x = np.array([1.0, 2.0, 2.0])
print("f(1,2,2) =", evaluate(sys_t, x))

u = np.array([0.0, 1.0, 0.0])
print("first derivative along e2:", derivative_contract(sys_t, x, [u]))
h = 1e-6
fd = (evaluate(sys_t, x + h * u) - evaluate(sys_t, x - h * u)) / (2 * h)
print("central difference:        ", fd)

for k in range(shape.d + 1):
    got = derivative_contract(sys_t, x, [x] * k)
    print(f"k={k}: contraction with x in every slot = {got},",
          f"expected {math.perm(shape.d, k)} * f(x)")

J = jacobian(sys_t, x)
print("Jacobian columns are k=1 contractions with basis vectors:")
print(J)

xu = x / np.linalg.norm(x)
R = jacobian_tangent(sys_t, TangentFrame.at(xu))
print("tangent-restricted Jacobian:", R.Jt.shape,
      "smallest singular value:", f"{R.sigma_min:.4f}",
      "(zero: f_1 = |x|^2 is constant on the sphere, so its tangent row vanishes)")

sym = symmetrize(sys_t.rand)
print("symmetrized tensor evaluates identically:",
      np.allclose(evaluate(PolynomialSystem(rand=sym), x), evaluate(sys_t, x)))

forms = monomial_forms(sys_t)
print("monomial view of f_2:", dict(forms[1].coeffs))
print("Weyl norms per form:", weyl_norm(sys_t).per_form)
