"""Dense coefficient tensors for systems of n-1 homogeneous d-linear forms.

A system is stored as a real array of shape (m, n, ..., n) with m = n - 1
forms and d trailing index axes; entry (l, i1, ..., id) is the coefficient
of x_{i1}...x_{id} in form l.  Everything else in the package (evaluation,
derivative contraction, Jacobian restriction to tangent frames,
symmetrization, Weyl norms) operates on this representation.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import cached_property, lru_cache

import numpy as np

from .errors import ContractViolation, ShapeError

#: Refuse tensor allocations with more entries than this (m * n^d).
ALLOCATION_CAP = 100_000_000


@dataclass(frozen=True)
class SystemShape:
    """Dimensions of a system: m = n - 1 forms of degree d in n variables."""

    n: int
    d: int

    def __post_init__(self):
        if not isinstance(self.n, int) or self.n < 2:
            raise ShapeError(f"need an integer n >= 2 variables, got n={self.n!r}")
        if not isinstance(self.d, int) or self.d < 1:
            raise ShapeError(f"need an integer degree d >= 1, got d={self.d!r}")

    @property
    def m(self) -> int:
        return self.n - 1

    @property
    def tensor_shape(self) -> tuple[int, ...]:
        return (self.m,) + (self.n,) * self.d

    @property
    def entry_count(self) -> int:
        return self.m * self.n**self.d


def _freeze(arr: np.ndarray) -> np.ndarray:
    arr.setflags(write=False)
    return arr


def check_allocation(shape: SystemShape) -> None:
    """Refuse tensor-sized allocations beyond ALLOCATION_CAP entries."""
    if shape.entry_count > ALLOCATION_CAP:
        raise ShapeError(
            f"tensor with {shape.entry_count} entries exceeds the "
            f"allocation cap of {ALLOCATION_CAP}"
        )


@dataclass(frozen=True, eq=False)
class CoefficientTensor:
    """Immutable dense array of coefficients a[l, i1, ..., id].

    The constructor freezes the given array (it becomes read-only); callers
    that need to keep a writable copy should pass one explicitly.
    """

    shape: SystemShape
    data: np.ndarray

    def __post_init__(self):
        check_allocation(self.shape)
        arr = np.ascontiguousarray(self.data, dtype=np.float64)
        if arr.ndim == 1 and arr.size == self.shape.entry_count:
            arr = arr.reshape(self.shape.tensor_shape)
        if arr.shape != self.shape.tensor_shape:
            raise ShapeError(
                f"coefficient array has shape {arr.shape}, "
                f"expected {self.shape.tensor_shape}"
            )
        if not np.all(np.isfinite(arr)):
            raise ValueError("coefficient entries must all be finite")
        object.__setattr__(self, "data", _freeze(arr))

    @classmethod
    def zeros(cls, shape: SystemShape) -> "CoefficientTensor":
        check_allocation(shape)
        return cls(shape, np.zeros(shape.tensor_shape))

    @classmethod
    def from_array(cls, data) -> "CoefficientTensor":
        """Infer the SystemShape from an (m, n, ..., n) array with m = n - 1."""
        arr = np.asarray(data, dtype=np.float64)
        if arr.ndim < 2:
            raise ShapeError("expected at least a (m, n) array")
        n = arr.shape[1]
        d = arr.ndim - 1
        shape = SystemShape(n, d)
        if arr.shape != shape.tensor_shape:
            raise ShapeError(
                f"array shape {arr.shape} is not (n-1, n, ..., n) for any (n, d)"
            )
        return cls(shape, arr)

    def scaled(self, c: float) -> "CoefficientTensor":
        return CoefficientTensor(self.shape, self.data * float(c))


@dataclass(frozen=True, eq=False)
class PolynomialSystem:
    """A random coefficient part plus an optional deterministic part.

    The effective coefficient array is the entrywise sum det + rand.
    """

    rand: CoefficientTensor
    det: CoefficientTensor | None = None

    def __post_init__(self):
        if self.det is not None and self.det.shape != self.rand.shape:
            raise ShapeError(
                f"det shape {self.det.shape} differs from rand shape {self.rand.shape}"
            )

    @property
    def shape(self) -> SystemShape:
        return self.rand.shape

    @cached_property
    def coeffs(self) -> np.ndarray:
        """Combined coefficient array (read-only, cached)."""
        if self.det is None:
            return self.rand.data
        return _freeze(self.det.data + self.rand.data)

    def scaled(self, c: float) -> "PolynomialSystem":
        det = None if self.det is None else self.det.scaled(c)
        return PolynomialSystem(rand=self.rand.scaled(c), det=det)


def _check_point(shape: SystemShape, x) -> np.ndarray:
    v = np.asarray(x, dtype=np.float64)
    if v.shape != (shape.n,):
        raise ShapeError(f"point has shape {v.shape}, expected ({shape.n},)")
    if not np.all(np.isfinite(v)):
        raise ValueError("point entries must be finite")
    return v


def _contract_all(t: np.ndarray, vecs) -> np.ndarray:
    """Contract every trailing axis of t against the given vectors."""
    out = t
    for v in reversed(vecs):
        out = out @ v
    return out


def _contract_except(t: np.ndarray, vecs, free: int) -> np.ndarray:
    """Contract all trailing axes but `free`, leaving an (m, n_free) matrix.

    Axes are consumed from the last one backwards so slot j stays at axis
    j + 1 until its turn.
    """
    out = t
    for j in range(len(vecs) - 1, -1, -1):
        if j == free:
            continue
        out = np.tensordot(out, vecs[j], axes=(j + 1, 0))
    return out


def evaluate(sys: PolynomialSystem, x) -> np.ndarray:
    """Evaluate every form of the system at the point x.

    Args:
      sys: the system.
      x: point in R^n.

    Returns:
      Length-m vector of form values, computed by d successive mode
      contractions of the combined tensor with x (O(m n^d) arithmetic).
    """
    v = _check_point(sys.shape, x)
    return _contract_all(sys.coeffs, [v] * sys.shape.d)


def derivative_contract(sys: PolynomialSystem, x, dirs) -> np.ndarray:
    """Contract the k-th derivative at x against k direction vectors.

    Each form is d-linear in its tensor slots, so the k-th derivative
    applied to (y_1, ..., y_k) is the sum over ordered assignments of the
    k directions to distinct slots, x filling the remaining slots.  With
    dirs = [x]*k this recovers the Euler identity d(d-1)...(d-k+1) f(x);
    k = 0 reduces to plain evaluation.
    """
    shape = sys.shape
    xv = _check_point(shape, x)
    dv = [_check_point(shape, y) for y in dirs]
    k = len(dv)
    if k > shape.d:
        raise ValueError(f"derivative order k={k} exceeds degree d={shape.d}")
    if k == 0:
        return evaluate(sys, xv)
    t = sys.coeffs
    total = np.zeros(shape.m)
    vecs = [xv] * shape.d
    for slots in itertools.permutations(range(shape.d), k):
        for s, y in zip(slots, dv):
            vecs[s] = y
        total += _contract_all(t, vecs)
        for s in slots:
            vecs[s] = xv
    return total


def _jacobian_raw(t: np.ndarray, d: int, x: np.ndarray) -> np.ndarray:
    vecs = [x] * d
    out = _contract_except(t, vecs, 0)
    for s in range(1, d):
        out = out + _contract_except(t, vecs, s)
    return out


def _deriv_value(t: np.ndarray, d: int, x, ys) -> np.ndarray:
    """Unvalidated k-th derivative contraction on a raw array, per form."""
    k = len(ys)
    if k == 0:
        return _contract_all(t, [x] * d)
    total = np.zeros(t.shape[0])
    vecs = [x] * d
    for slots in itertools.permutations(range(d), k):
        for s, y in zip(slots, ys):
            vecs[s] = y
        total += _contract_all(t, vecs)
        for s in slots:
            vecs[s] = x
    return total


def _deriv_dir_matrix(t: np.ndarray, d: int, x, ys, which: int) -> np.ndarray:
    """(m, n) matrix B with B v = _deriv_value when ys[which] is set to v."""
    k = len(ys)
    out = np.zeros((t.shape[0], t.shape[1]))
    vecs = [x] * d
    for slots in itertools.permutations(range(d), k):
        for s, y in zip(slots, ys):
            vecs[s] = y
        out += _contract_except(t, vecs, slots[which])
        for s in slots:
            vecs[s] = x
    return out


def _deriv_x_matrix(t: np.ndarray, d: int, x, ys) -> np.ndarray:
    """(m, n) Jacobian of _deriv_value with respect to the base point x."""
    k = len(ys)
    if k == 0:
        return _jacobian_raw(t, d, x)
    out = np.zeros((t.shape[0], t.shape[1]))
    vecs = [x] * d
    for slots in itertools.permutations(range(d), k):
        for s, y in zip(slots, ys):
            vecs[s] = y
        taken = set(slots)
        for s in range(d):
            if s not in taken:
                out += _contract_except(t, vecs, s)
        for s in slots:
            vecs[s] = x
    return out


def jacobian(sys: PolynomialSystem, x) -> np.ndarray:
    """Matrix of partial derivatives, entry (l, j) = d f_l / d x_j at x."""
    v = _check_point(sys.shape, x)
    return _jacobian_raw(sys.coeffs, sys.shape.d, v)


def _tangent_basis(v: np.ndarray) -> np.ndarray:
    """Orthonormal (n, n-1) basis of the complement of unit v, unvalidated."""
    n = v.shape[0]
    drop = int(np.argmax(np.abs(v)))
    cols = np.zeros((n, n))
    cols[:, 0] = v
    keep = [j for j in range(n) if j != drop]
    for c, j in enumerate(keep, start=1):
        cols[j, c] = 1.0
    q, _ = np.linalg.qr(cols)
    return q[:, 1:]


@dataclass(frozen=True, eq=False)
class TangentFrame:
    """A unit vector with an orthonormal basis of its orthogonal complement."""

    x: np.ndarray
    basis: np.ndarray

    def __post_init__(self):
        x = np.ascontiguousarray(self.x, dtype=np.float64)
        b = np.ascontiguousarray(self.basis, dtype=np.float64)
        n = x.shape[0] if x.ndim == 1 else 0
        if n < 2 or b.shape != (n, n - 1):
            raise ShapeError(
                f"frame needs x of shape (n,) and basis (n, n-1), got {x.shape} and {b.shape}"
            )
        if abs(np.linalg.norm(x) - 1.0) > 1e-12:
            raise ContractViolation(f"frame center has norm {np.linalg.norm(x)!r}, expected 1")
        if np.max(np.abs(b.T @ b - np.eye(n - 1))) > 1e-10:
            raise ContractViolation("frame basis columns are not orthonormal")
        if np.max(np.abs(b.T @ x)) > 1e-10:
            raise ContractViolation("frame basis is not orthogonal to x")
        object.__setattr__(self, "x", _freeze(x))
        object.__setattr__(self, "basis", _freeze(b))

    @property
    def n(self) -> int:
        return self.x.shape[0]

    @classmethod
    def at(cls, x) -> "TangentFrame":
        """Complete x (normalized) to an orthonormal frame of R^n.

        The standard basis vector at the largest-|x_j| coordinate is dropped
        before orthogonalization, which keeps the completion well conditioned
        when x is near a coordinate axis.
        """
        v = np.asarray(x, dtype=np.float64)
        nrm = np.linalg.norm(v)
        if v.ndim != 1 or v.shape[0] < 2 or nrm == 0.0:
            raise ShapeError("need a nonzero vector of length >= 2")
        v = v / nrm
        return cls(x=v, basis=_tangent_basis(v))


@dataclass(frozen=True, eq=False)
class RestrictedJacobian:
    """Jacobian at a frame center, its restriction to the tangent basis, and
    the smallest singular value of the restriction."""

    J: np.ndarray
    Jt: np.ndarray
    sigma_min: float


def jacobian_tangent(sys: PolynomialSystem, frame: TangentFrame) -> RestrictedJacobian:
    """Restrict the Jacobian at frame.x to the tangent space spanned by frame.basis.

    Jt = J basis is square (n-1) x (n-1); sigma_min is its least singular
    value, the reciprocal of the restricted inverse norm.
    """
    if frame.n != sys.shape.n:
        raise ShapeError(f"frame lives in R^{frame.n}, system in R^{sys.shape.n}")
    J = jacobian(sys, frame.x)
    Jt = J @ frame.basis
    sigma_min = float(np.linalg.svd(Jt, compute_uv=False)[-1])
    return RestrictedJacobian(J=J, Jt=Jt, sigma_min=sigma_min)


def symmetrize(t: CoefficientTensor) -> CoefficientTensor:
    """Average the tensor over all d! orderings of its index axes.

    Evaluation is invariant under this map; it canonicalizes the tensor
    without changing the polynomial.
    """
    d = t.shape.d
    acc = np.zeros_like(t.data)
    for perm in itertools.permutations(range(1, d + 1)):
        acc += t.data.transpose((0,) + perm)
    return CoefficientTensor(t.shape, acc / math.factorial(d))


@lru_cache(maxsize=64)
def _monomial_table(n: int, d: int):
    """Grouping of flat tensor cells by sorted multi-index.

    Returns (exponents, group, orbit): exponents[a] is the exponent vector of
    monomial a, group[c] the monomial index of flat cell c (row-major), and
    orbit[a] the number of index orderings of that monomial, the multinomial
    d! / prod(alpha_i!).
    """
    ids: dict[tuple[int, ...], int] = {}
    exponents: list[tuple[int, ...]] = []
    group = np.empty(n**d, dtype=np.intp)
    orbit: list[int] = []
    for c, idx in enumerate(itertools.product(range(n), repeat=d)):
        alpha = [0] * n
        for i in idx:
            alpha[i] += 1
        key = tuple(alpha)
        a = ids.get(key)
        if a is None:
            a = len(exponents)
            ids[key] = a
            exponents.append(key)
            orbit.append(0)
        group[c] = a
        orbit[a] += 1
    return tuple(exponents), _freeze(group), _freeze(np.array(orbit, dtype=np.float64))


@dataclass(frozen=True, eq=False)
class MonomialForm:
    """A single form's monomial coefficients keyed by exponent vector alpha."""

    n: int
    d: int
    coeffs: dict

    def evaluate(self, x) -> float:
        v = np.asarray(x, dtype=np.float64)
        total = 0.0
        for alpha, c in self.coeffs.items():
            term = c
            for j, a in enumerate(alpha):
                if a:
                    term *= v[j] ** a
            total += term
        return float(total)


def monomial_forms(sys: PolynomialSystem) -> list[MonomialForm]:
    """Collapse each form's tensor into monomial coefficients c_alpha.

    c_alpha is the sum of the tensor entries over all index orderings of the
    monomial alpha; evaluating the result reproduces evaluate(sys, x).
    """
    shape = sys.shape
    exponents, group, orbit = _monomial_table(shape.n, shape.d)
    flat = sys.coeffs.reshape(shape.m, -1)
    forms = []
    for l in range(shape.m):
        c = np.bincount(group, weights=flat[l], minlength=len(exponents))
        forms.append(
            MonomialForm(shape.n, shape.d, {a: float(v) for a, v in zip(exponents, c)})
        )
    return forms


@dataclass(frozen=True, eq=False)
class WeylNorm:
    per_form: np.ndarray
    total: float


def weyl_norm(sys: PolynomialSystem) -> WeylNorm:
    """Weyl norms of the combined system.

    Monomial coefficients are divided by the square root of their orbit size
    binom(d, alpha) before taking l2 norms; under this inner product the KSS
    ensemble's coefficients are standard Gaussians.

    Returns:
      WeylNorm with per_form[l] = ||f_l||_W and total the Euclidean norm of
      per_form.
    """
    shape = sys.shape
    _, group, orbit = _monomial_table(shape.n, shape.d)
    flat = sys.coeffs.reshape(shape.m, -1)
    per = np.empty(shape.m)
    for l in range(shape.m):
        c = np.bincount(group, weights=flat[l], minlength=orbit.shape[0])
        a = c / np.sqrt(orbit)
        per[l] = math.sqrt(float(a @ a))
    return WeylNorm(per_form=per, total=float(np.linalg.norm(per)))


def _kron_chain(vectors) -> np.ndarray:
    """Flattened outer product of the given vectors, row-major index order."""
    out = np.asarray(vectors[0], dtype=np.float64)
    for v in vectors[1:]:
        out = np.multiply.outer(out, np.asarray(v, dtype=np.float64)).reshape(-1)
    return out
