"""Condition functionals of a polynomial system at and near critical pairs.

The central quantity is L(x, y), a scale-normalized measure of how close x
is to being a root with degenerate direction y; its global minimum over
orthonormal pairs controls the condition numbers mu1 and mu2 computed here.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .ensembles import DistributionSpec, SeedPolicy, sample_system
from .errors import ConstructionError, ContractViolation, PreconditionError
from .systems import (
    CoefficientTensor,
    PolynomialSystem,
    SystemShape,
    TangentFrame,
    _deriv_value,
    _deriv_x_matrix,
    _jacobian_raw,
    _kron_chain,
    _tangent_basis,
    evaluate,
    derivative_contract,
    jacobian_tangent,
    weyl_norm,
)

_UNIT_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class UnitPair:
    """An orthonormal pair: unit x, unit y, x and y orthogonal."""

    x: np.ndarray
    y: np.ndarray

    def __post_init__(self):
        x = np.ascontiguousarray(self.x, dtype=np.float64)
        y = np.ascontiguousarray(self.y, dtype=np.float64)
        if x.shape != y.shape or x.ndim != 1:
            raise ContractViolation(f"pair vectors must share a 1-d shape, got {x.shape} and {y.shape}")
        if abs(np.linalg.norm(x) - 1.0) > _UNIT_TOL or abs(np.linalg.norm(y) - 1.0) > _UNIT_TOL:
            raise ContractViolation("pair vectors must be unit length within 1e-10")
        if abs(float(x @ y)) > _UNIT_TOL:
            raise ContractViolation("pair vectors must be orthogonal within 1e-10")
        x.setflags(write=False)
        y.setflags(write=False)
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "y", y)

    @property
    def n(self) -> int:
        return self.x.shape[0]


@dataclass(frozen=True)
class CondReport:
    """Pointwise condition numbers at a unit vector x.

    mu1_infinite / mu2_infinite flag the +inf cases explicitly (the float
    fields then hold math.inf); a system with zero Weyl norm reports both
    numbers as 0 by convention, since the numerators vanish identically.
    """

    mu1: float
    mu2: float
    sigma_min_tangent: float
    weyl_total: float
    mu1_infinite: bool
    mu2_infinite: bool


@dataclass(frozen=True, eq=False)
class LMinResult:
    """Best local minimum of L found by multistart descent.

    value is always an upper bound on the true minimum; converged reports
    whether the last restart's accepted step size fell below tol.
    """

    value: float
    argmin: UnitPair
    restarts_used: int
    converged: bool


def _scale(shape: SystemShape) -> float:
    # A = sqrt(d^{9/2} n); L^2 = |f| / A + |Jy|^2 / A^2.
    return math.sqrt(shape.d**4.5 * shape.n)


def l_pair(sys: PolynomialSystem, p: UnitPair) -> float:
    """L(x, y) = sqrt(|f(x)| / sqrt(d^4.5 n) + |D_x(y)|^2 / (d^4.5 n))."""
    a = _scale(sys.shape)
    f = np.linalg.norm(evaluate(sys, p.x))
    g = np.linalg.norm(derivative_contract(sys, p.x, [p.y]))
    return math.sqrt(f / a + (g / a) ** 2)


class _Kernel:
    """Contraction bundle for the optimizer's hot loop.

    Degree 2 gets a closed form through per-form symmetrized matrices (one
    batched matmul per quantity); other degrees fall back on the generic
    slot-sum contractions.
    """

    def __init__(self, t: np.ndarray, d: int):
        self.t = t
        self.d = d
        self.sym2 = t + t.transpose(0, 2, 1) if d == 2 else None

    def f_jac(self, x):
        """(f(x), Jacobian at x)."""
        if self.sym2 is not None:
            jac = self.sym2 @ x
            return 0.5 * (jac @ x), jac
        return _deriv_value(self.t, self.d, x, []), _jacobian_raw(self.t, self.d, x)

    def norms(self, x, y):
        """(|f(x)|, |D_x(y)|)."""
        if self.sym2 is not None:
            jac = self.sym2 @ x
            return float(np.linalg.norm(0.5 * (jac @ x))), float(np.linalg.norm(jac @ y))
        return (
            float(np.linalg.norm(_deriv_value(self.t, self.d, x, []))),
            float(np.linalg.norm(_deriv_value(self.t, self.d, x, [y]))),
        )

    def m_xy(self, x, y):
        """Jacobian of x -> J(x) y."""
        if self.sym2 is not None:
            return self.sym2 @ y
        return _deriv_x_matrix(self.t, self.d, x, [y])


def _l_sq(kern: _Kernel, a: float, x: np.ndarray, y: np.ndarray) -> float:
    fn, gn = kern.norms(x, y)
    return fn / a + (gn / a) ** 2


def _unit_vec(v: np.ndarray) -> np.ndarray:
    return v / np.linalg.norm(v)


def _retract(x: np.ndarray, y: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    x = x / np.linalg.norm(x)
    y = y - (x @ y) * x
    y = y / np.linalg.norm(y)
    return x, y


def _random_pair(rng: np.random.Generator, n: int) -> tuple[np.ndarray, np.ndarray]:
    return _retract(rng.standard_normal(n), rng.standard_normal(n))


def _lsq_gradient(kern: _Kernel, a: float, x, y):
    """Euclidean gradient of L^2 in (x, y), zero subgradient at f = 0."""
    f, jac = kern.f_jac(x)
    v = jac @ y
    fn = np.linalg.norm(f)
    gx = 2.0 * (kern.m_xy(x, y).T @ v) / a**2
    if fn > 0.0:
        gx = gx + (jac.T @ f) / (fn * a)
    gy = 2.0 * (jac.T @ v) / a**2
    return gx, gy


def _project_tangent(x, y, gx, gy):
    """Project a Euclidean gradient onto the tangent space of the manifold."""
    a = float(x @ gx)
    b = float(y @ gy)
    c = 0.5 * (float(y @ gx) + float(x @ gy))
    return gx - a * x - c * y, gy - b * y - c * x


def _exact_y(jac: np.ndarray, x: np.ndarray) -> np.ndarray:
    """Minimizer of |J y| over unit y orthogonal to x, for fixed x."""
    basis = _tangent_basis(x)
    _, _, vt = np.linalg.svd(jac @ basis, full_matrices=False)
    return basis @ vt[-1]


def _tangent_newton(kern: _Kernel, x: np.ndarray, iters: int = 60) -> np.ndarray:
    """Newton iteration for f(x) = 0 restricted to the sphere.

    lstsq absorbs the singular Jacobian at multiplicity-2 roots, where the
    iteration still converges linearly at rate 1/2; backtracking on |f|
    keeps every step a strict improvement, so the endpoint is the best root
    approximation this start can reach.
    """
    for _ in range(iters):
        f, jac = kern.f_jac(x)
        fn = np.linalg.norm(f)
        if fn == 0.0:
            break
        basis = _tangent_basis(x)
        u, *_ = np.linalg.lstsq(jac @ basis, -f, rcond=None)
        scale = 1.0
        moved = False
        for _ in range(12):
            cx = x + scale * (basis @ u)
            cx /= np.linalg.norm(cx)
            if np.linalg.norm(kern.f_jac(cx)[0]) < fn:
                x = cx
                moved = True
                break
            scale *= 0.5
        if not moved:
            break
    return x


def _gauss_newton_polish(kern: _Kernel, a: float, x, y, iters: int = 30):
    """Quadratically-converging polish near exact double roots.

    Newton steps on the stacked residual [f(x); J(x) y; constraints] are
    accepted only when they lower the true L^2, so the polish can only
    improve on the descent result.
    """
    val = _l_sq(kern, a, x, y)
    n = x.shape[0]
    m = kern.t.shape[0]
    for _ in range(iters):
        f, jac = kern.f_jac(x)
        r = np.concatenate(
            [f, jac @ y, [0.5 * (x @ x - 1.0), 0.5 * (y @ y - 1.0), x @ y]]
        )
        big = np.zeros((2 * m + 3, 2 * n))
        big[:m, :n] = jac
        big[m : 2 * m, :n] = kern.m_xy(x, y)
        big[m : 2 * m, n:] = jac
        big[2 * m, :n] = x
        big[2 * m + 1, n:] = y
        big[2 * m + 2, :n] = y
        big[2 * m + 2, n:] = x
        step, *_ = np.linalg.lstsq(big, -r, rcond=None)
        improved = False
        scale = 1.0
        for _ in range(8):
            cx, cy = _retract(x + scale * step[:n], y + scale * step[n:])
            cand = _l_sq(kern, a, cx, cy)
            if cand < val:
                x, y, val = cx, cy, cand
                improved = True
                break
            scale *= 0.5
        if not improved:
            break
    return x, y, val


def l_min(
    sys: PolynomialSystem,
    restarts: int = 50,
    max_iters: int = 200,
    tol: float = 1e-9,
    seeds: SeedPolicy = SeedPolicy(0),
    key: tuple = (0,),
    newton_scans: int = 12,
) -> LMinResult:
    """Multistart projected descent for min L(x, y) over orthonormal pairs.

    Each restart scans newton_scans root candidates (tangent Newton from
    Gaussian starts, scored by L after the exact y-refresh) to pick its
    starting pair, runs backtracking gradient descent on L^2 (halving from
    step 0.1) with the normalize/Gram-Schmidt retraction, periodically
    refreshing y with its exact minimizer for the current x, then chases
    the nearest root with tangent Newton and polishes with Gauss-Newton
    steps, keeping every candidate only when it improves L^2.  Restarts
    draw independent seed-derived streams and are reduced in restart
    order, so the result is deterministic under any execution schedule.
    """
    if restarts < 1:
        raise ValueError(f"need restarts >= 1, got {restarts}")
    shape = sys.shape
    kern = _Kernel(sys.coeffs, shape.d)
    a = _scale(shape)
    best_val = math.inf
    best_pair = None
    converged = False
    for r in range(restarts):
        rng = seeds.stream(*key, r)
        x, y = _random_pair(rng, shape.n)
        y = _exact_y(kern.f_jac(x)[1], x)
        val = _l_sq(kern, a, x, y)
        for s in range(max(newton_scans, 0)):
            x0 = x if s == 0 else _unit_vec(rng.standard_normal(shape.n))
            xr = _tangent_newton(kern, x0)
            yr = _exact_y(kern.f_jac(xr)[1], xr)
            vr = _l_sq(kern, a, xr, yr)
            if vr < val:
                x, y, val = xr, yr, vr
        last_step = math.inf
        for it in range(max_iters):
            gx, gy = _lsq_gradient(kern, a, x, y)
            px, py = _project_tangent(x, y, gx, gy)
            gnorm = math.sqrt(float(px @ px + py @ py))
            if gnorm * 0.1 < tol:
                last_step = gnorm * 0.1
                break
            step = 0.1
            accepted = False
            while step * gnorm >= tol:
                cx, cy = _retract(x - step * px, y - step * py)
                cand = _l_sq(kern, a, cx, cy)
                if cand < val:
                    x, y, val = cx, cy, cand
                    accepted = True
                    break
                step *= 0.5
            last_step = step * gnorm
            if not accepted:
                break
            if (it + 1) % 4 == 0:
                y2 = _exact_y(kern.f_jac(x)[1], x)
                v2 = _l_sq(kern, a, x, y2)
                if v2 < val:
                    y, val = y2, v2
        # Endgame: descent crawls in the flat valley of a multiple root, so
        # chase the root directly, re-minimize y, and keep any improvement.
        x2 = _tangent_newton(kern, x)
        y2 = _exact_y(kern.f_jac(x2)[1], x2)
        v2 = _l_sq(kern, a, x2, y2)
        if v2 < val:
            x, y, val = x2, y2, v2
        x, y, val = _gauss_newton_polish(kern, a, x, y)
        converged = last_step < tol
        if val < best_val:
            best_val = val
            best_pair = UnitPair(x, y)
    # Recompute through the public formula so value and argmin agree exactly.
    return LMinResult(
        value=l_pair(sys, best_pair),
        argmin=best_pair,
        restarts_used=restarts,
        converged=converged,
    )


def cond_at(sys: PolynomialSystem, x) -> CondReport:
    """Pointwise condition numbers mu1, mu2 at unit x.

    Uniform degrees make the degree-scaling matrix sqrt(d) times the
    identity, so the restricted-inverse factor is sqrt(d) / sigma_min on
    the tangent space at x.  Zero-norm systems report 0 for both numbers;
    a zero sigma_min or a zero max |f_i(x)| otherwise produces an explicit
    infinity flag.
    """
    xv = np.ascontiguousarray(x, dtype=np.float64)
    if abs(np.linalg.norm(xv) - 1.0) > _UNIT_TOL:
        raise PreconditionError("cond_at needs a unit vector within 1e-10")
    shape = sys.shape
    frame = TangentFrame.at(xv)
    sigma = jacobian_tangent(sys, frame).sigma_min
    w = weyl_norm(sys)
    sqd = math.sqrt(shape.d)
    fmax = float(np.max(np.abs(evaluate(sys, xv))))
    wmax = float(np.max(w.per_form))

    if w.total == 0.0:
        mu1, inf1 = 0.0, False
    elif sigma == 0.0:
        mu1, inf1 = math.inf, True
    else:
        mu1, inf1 = w.total * sqd / sigma, False

    if wmax == 0.0:
        mu2, inf2 = 0.0, False
    else:
        first = math.inf if sigma == 0.0 else math.sqrt(shape.n) * wmax * sqd / sigma
        second = math.inf if fmax == 0.0 else wmax / fmax
        mu2 = min(first, second)
        inf2 = math.isinf(mu2)

    return CondReport(
        mu1=mu1,
        mu2=mu2,
        sigma_min_tangent=float(sigma),
        weyl_total=w.total,
        mu1_infinite=inf1,
        mu2_infinite=inf2,
    )


def sigma_min_tangent(sys: PolynomialSystem, x) -> float:
    """Smallest singular value of the Jacobian restricted to the tangent at x."""
    xv = np.ascontiguousarray(x, dtype=np.float64)
    return jacobian_tangent(sys, TangentFrame.at(xv)).sigma_min


def plant_double_root(
    shape: SystemShape,
    p: UnitPair,
    dist: DistributionSpec,
    seeds: SeedPolicy,
    key: tuple = (0,),
) -> PolynomialSystem:
    """Sample a system, then force f(x) = 0 and D_x(y) = 0 exactly.

    Both constraints are linear functionals of each form's coefficient row,
    represented by the tensors u = x^{otimes d} and w = sum over slots of x
    ... y ... x; subtracting the orthogonal projection onto span{u, w} in
    coefficient space zeroes both functionals without touching anything
    else.  For an orthonormal pair u and w are automatically orthogonal.
    """
    if p.n != shape.n:
        raise ConstructionError(f"pair dimension {p.n} does not match shape n={shape.n}")
    tensor = sample_system(shape, dist, seeds, key)
    d = shape.d
    u = _kron_chain([p.x] * d)
    w = np.zeros_like(u)
    vecs = [p.x] * d
    for s in range(d):
        vecs[s] = p.y
        w += _kron_chain(vecs)
        vecs[s] = p.x
    uu = float(u @ u)
    ww = float(w @ w)
    uw = float(u @ w)
    gram = uu * ww - uw * uw
    if gram <= 1e-12 * max(uu * ww, 1.0):
        raise ConstructionError("constraint functionals are linearly dependent for this pair")
    flat = tensor.data.reshape(shape.m, -1).copy()
    fu = flat @ u
    fw = flat @ w
    # Solve the 2x2 Gram system for the projection coefficients per form.
    cu = (ww * fu - uw * fw) / gram
    cw = (uu * fw - uw * fu) / gram
    flat -= np.outer(cu, u) + np.outer(cw, w)
    return PolynomialSystem(rand=CoefficientTensor(shape, flat.reshape(shape.tensor_shape)))


def growth_check(
    sys: PolynomialSystem,
    p: UnitPair,
    eps: float,
    samples: int,
    seeds: SeedPolicy,
    key: tuple = (0,),
) -> dict:
    """Sampled bound on |f(x + eps t y + eps^2 z)| / (sqrt(n) eps^2).

    Requires l_pair(sys, p) <= eps < 1.  Draws |t| <= 1 and z in the unit
    ball uniformly; the first sample is pinned at t = 0, z = 0 so the
    hypothesis algebra |f(x)| / (sqrt(n) eps^2) <= d^{9/4} is always
    exercised.  Returns {"max_ratio": ...} for comparison against the
    caller's growth constant.
    """
    if not (0.0 < eps < 1.0):
        raise PreconditionError(f"need 0 < eps < 1, got {eps}")
    lp = l_pair(sys, p)
    if lp > eps:
        raise PreconditionError(f"l_pair = {lp:.3e} exceeds eps = {eps:.3e}")
    n = sys.shape.n
    rng = seeds.stream(*key)
    denom = math.sqrt(n) * eps * eps
    max_ratio = np.linalg.norm(evaluate(sys, p.x)) / denom
    for _ in range(max(samples - 1, 0)):
        t = rng.uniform(-1.0, 1.0)
        z = rng.standard_normal(n)
        z *= rng.uniform() ** (1.0 / n) / np.linalg.norm(z)
        pt = p.x + eps * t * p.y + eps * eps * z
        max_ratio = max(max_ratio, np.linalg.norm(evaluate(sys, pt)) / denom)
    return {"max_ratio": float(max_ratio)}
