"""The smallness functional, its minimizer, condition numbers, planting."""

import math
from types import SimpleNamespace

import numpy as np
import pytest

from conftest import random_system, random_unit
from polycond import (
    CoefficientTensor,
    ConstructionError,
    ContractViolation,
    DistributionSpec,
    PolynomialSystem,
    PreconditionError,
    SeedPolicy,
    SystemShape,
    UnitPair,
    cond_at,
    derivative_contract,
    evaluate,
    growth_check,
    jacobian,
    l_min,
    l_pair,
    plant_double_root,
    sigma_min_tangent,
    weyl_norm,
)

GAUSS = DistributionSpec("gaussian")


def orthonormal_pair(rng: np.random.Generator, n: int) -> UnitPair:
    x = random_unit(rng, n)
    y = rng.standard_normal(n)
    y -= (y @ x) * x
    return UnitPair(x=x, y=y / np.linalg.norm(y))


def scale_factor(n: int, d: int) -> float:
    return math.sqrt(d**4.5 * n)


def grid_l_min(sys_t: PolynomialSystem, n_theta=70, n_phi=140, n_psi=100) -> float:
    """Exhaustive minimum of L over a sphere-times-circle product grid.

    x ranges over a latitude/longitude grid of the 2-sphere and, per x, y
    over an angular grid of the tangent circle, around 1e6 feasible pairs.
    """
    t = sys_t.coeffs
    sym = t + t.transpose(0, 2, 1)
    a = scale_factor(3, 2)
    thetas = np.linspace(0.0, math.pi, n_theta)
    phis = np.linspace(0.0, 2.0 * math.pi, n_phi, endpoint=False)
    tt, pp = np.meshgrid(thetas, phis, indexing="ij")
    xs = np.stack(
        [np.sin(tt) * np.cos(pp), np.sin(tt) * np.sin(pp), np.cos(tt)], axis=-1
    ).reshape(-1, 3)
    psis = np.linspace(0.0, 2.0 * math.pi, n_psi, endpoint=False)
    cs, sn = np.cos(psis), np.sin(psis)
    best = math.inf
    for x in xs:
        fx = 0.5 * (sym @ x) @ x
        jac = sym @ x
        drop = int(np.argmax(np.abs(x)))
        u = np.zeros(3)
        u[(drop + 1) % 3] = 1.0
        u1 = u - (u @ x) * x
        u1 /= np.linalg.norm(u1)
        u2 = np.cross(x, u1)
        g1, g2 = jac @ u1, jac @ u2
        jy_sq = np.einsum("l,p->p", g1 * g1, cs * cs)
        jy_sq += 2.0 * (g1 @ g2) * cs * sn
        jy_sq += (g2 @ g2) * (sn * sn)
        vals = np.sqrt(np.linalg.norm(fx) / a + jy_sq / a**2)
        best = min(best, float(vals.min()))
    return best


def test_unit_pair_validation():
    rng = np.random.default_rng(0)
    p = orthonormal_pair(rng, 4)
    assert p.n == 4
    with pytest.raises(ContractViolation):
        UnitPair(x=np.array([1.0, 1.0, 0.0]), y=np.array([0.0, 0.0, 1.0]))
    with pytest.raises(ContractViolation):
        UnitPair(x=np.array([1.0, 0.0, 0.0]), y=np.array([1.0, 0.0, 0.0]))


def test_l_pair_matches_definition():
    rng = np.random.default_rng(1)
    for n, d in ((3, 2), (4, 3)):
        sys_t = random_system(n, d, seed=n + d)
        p = orthonormal_pair(rng, n)
        a = scale_factor(n, d)
        f = np.linalg.norm(evaluate(sys_t, p.x))
        g = np.linalg.norm(derivative_contract(sys_t, p.x, [p.y]))
        want = math.sqrt(f / a + (g / a) ** 2)
        assert l_pair(sys_t, p) == pytest.approx(want, rel=1e-12)


def test_l_pair_zero_iff_both_vanish():
    shape = SystemShape(3, 2)
    zero = PolynomialSystem(rand=CoefficientTensor.zeros(shape))
    rng = np.random.default_rng(2)
    p = orthonormal_pair(rng, 3)
    assert l_pair(zero, p) == 0.0
    assert l_pair(random_system(3, 2, seed=3), p) > 0.0


def test_l_min_zero_system():
    shape = SystemShape(4, 2)
    zero = PolynomialSystem(rand=CoefficientTensor.zeros(shape))
    res = l_min(zero, restarts=2, max_iters=20, newton_scans=1)
    assert res.value == 0.0
    assert res.converged


def test_l_min_self_consistent_and_orthonormal():
    sys_t = random_system(5, 2, seed=4)
    res = l_min(sys_t, restarts=6, max_iters=80, seeds=SeedPolicy(5), newton_scans=3)
    assert abs(res.value - l_pair(sys_t, res.argmin)) <= 1e-12
    p = res.argmin
    assert abs(np.linalg.norm(p.x) - 1.0) < 1e-9
    assert abs(np.linalg.norm(p.y) - 1.0) < 1e-9
    assert abs(float(p.x @ p.y)) < 1e-9
    assert res.restarts_used == 6


def test_l_min_deterministic():
    sys_t = random_system(4, 3, seed=6)
    r1 = l_min(sys_t, restarts=4, max_iters=60, seeds=SeedPolicy(7), newton_scans=2)
    r2 = l_min(sys_t, restarts=4, max_iters=60, seeds=SeedPolicy(7), newton_scans=2)
    assert r1.value == r2.value
    assert np.array_equal(r1.argmin.x, r2.argmin.x)


def test_l_min_beats_exhaustive_grid():
    sys_t = random_system(3, 2, seed=8)
    grid = grid_l_min(sys_t)
    res = l_min(sys_t, restarts=12, max_iters=150, seeds=SeedPolicy(9), newton_scans=6)
    assert res.value <= grid + 1e-3


def test_planted_minimum_found():
    rng = np.random.default_rng(10)
    for n, d, seed in ((4, 2, 11), (6, 3, 12)):
        p = orthonormal_pair(rng, n)
        sys_t = plant_double_root(SystemShape(n, d), p, GAUSS, SeedPolicy(seed))
        res = l_min(sys_t, restarts=25, max_iters=150, seeds=SeedPolicy(seed + 1))
        assert res.value <= 1e-6


def test_plant_double_root_contract():
    rng = np.random.default_rng(13)
    n, d = 5, 3
    p = orthonormal_pair(rng, n)
    sys_t = plant_double_root(SystemShape(n, d), p, GAUSS, SeedPolicy(14))
    assert np.linalg.norm(evaluate(sys_t, p.x)) <= 1e-10
    assert np.linalg.norm(derivative_contract(sys_t, p.x, [p.y])) <= 1e-10
    # The two exact zeros drive l_pair to the sqrt of the zero tolerance
    # over the normalizer; roundoff keeps it above zero.
    a = scale_factor(n, d)
    assert l_pair(sys_t, p) <= math.sqrt(1e-10 / a + (1e-10 / a) ** 2)


def test_plant_rejects_degenerate_pair():
    x = np.zeros(4)
    x[0] = 1.0
    fake = SimpleNamespace(x=x, y=x, n=4)
    with pytest.raises(ConstructionError):
        plant_double_root(SystemShape(4, 2), fake, GAUSS, SeedPolicy(15))


def test_planted_perturbation_sweep_monotone():
    rng = np.random.default_rng(16)
    n, d = 4, 2
    shape = SystemShape(n, d)
    p = orthonormal_pair(rng, n)
    sys_t = plant_double_root(shape, p, GAUSS, SeedPolicy(17))
    noise = CoefficientTensor(shape, rng.standard_normal(shape.tensor_shape))
    vals = []
    for eta in (1e-6, 1e-4, 1e-2):
        bumped = PolynomialSystem(rand=sys_t.rand, det=noise.scaled(eta))
        vals.append(l_pair(bumped, p))
    assert vals[0] < vals[1] < vals[2]


def test_cond_at_zero_system_convention():
    shape = SystemShape(4, 2)
    zero = PolynomialSystem(rand=CoefficientTensor.zeros(shape))
    x = np.array([1.0, 0.0, 0.0, 0.0])
    rep = cond_at(zero, x)
    assert rep.sigma_min_tangent == 0.0
    assert rep.mu1 == 0.0 and not rep.mu1_infinite
    assert rep.mu2 == 0.0 and not rep.mu2_infinite


def test_cond_at_requires_unit_point():
    sys_t = random_system(4, 2, seed=18)
    with pytest.raises(PreconditionError):
        cond_at(sys_t, np.array([2.0, 0.0, 0.0, 0.0]))


def test_cond_at_linear_case_matches_matrix_oracle():
    sys_t = random_system(5, 1, seed=19)
    a = sys_t.coeffs
    rng = np.random.default_rng(20)
    x = random_unit(rng, 5)
    rep = cond_at(sys_t, x)
    basis = np.linalg.svd(x[None, :])[2][1:].T
    smin = np.linalg.svd(a @ basis, compute_uv=False)[-1]
    want = np.linalg.norm(a) * 1.0 / smin
    assert rep.mu1 == pytest.approx(want, rel=1e-8)


def test_cond_at_mu2_bounded_by_first_term():
    rng = np.random.default_rng(21)
    for seed in range(3):
        n, d = 5, 2
        sys_t = random_system(n, d, seed=22 + seed)
        x = random_unit(rng, n)
        rep = cond_at(sys_t, x)
        first = (
            math.sqrt(n)
            * weyl_norm(sys_t).per_form.max()
            * math.sqrt(d)
            / rep.sigma_min_tangent
        )
        assert rep.mu2 <= first * (1 + 1e-12)


def test_cond_at_mu1_scale_invariant():
    rng = np.random.default_rng(23)
    sys_t = random_system(5, 3, seed=24)
    x = random_unit(rng, 5)
    base = cond_at(sys_t, x)
    for c in (0.25, 8.0):
        rep = cond_at(sys_t.scaled(c), x)
        assert rep.mu1 == pytest.approx(base.mu1, rel=1e-10)
        assert rep.mu2 == pytest.approx(base.mu2, rel=1e-10)


def test_sigma_min_tangent_alias():
    rng = np.random.default_rng(25)
    sys_t = random_system(4, 2, seed=26)
    x = random_unit(rng, 4)
    assert sigma_min_tangent(sys_t, x) == cond_at(sys_t, x).sigma_min_tangent


def test_growth_check_zero_system():
    shape = SystemShape(4, 2)
    zero = PolynomialSystem(rand=CoefficientTensor.zeros(shape))
    rng = np.random.default_rng(27)
    p = orthonormal_pair(rng, 4)
    out = growth_check(zero, p, eps=1e-3, samples=50, seeds=SeedPolicy(28))
    assert out["max_ratio"] == 0.0


def test_growth_check_preconditions():
    rng = np.random.default_rng(29)
    sys_t = random_system(4, 2, seed=30)
    p = orthonormal_pair(rng, 4)
    with pytest.raises(PreconditionError):
        growth_check(sys_t, p, eps=1.5, samples=10, seeds=SeedPolicy(0))
    with pytest.raises(PreconditionError):
        growth_check(sys_t, p, eps=1e-12, samples=10, seeds=SeedPolicy(0))


def test_growth_check_hypothesis_algebra():
    rng = np.random.default_rng(31)
    n, d = 5, 2
    p = orthonormal_pair(rng, n)
    sys_t = plant_double_root(SystemShape(n, d), p, GAUSS, SeedPolicy(32))
    out = growth_check(sys_t, p, eps=1e-3, samples=1, seeds=SeedPolicy(33))
    assert out["max_ratio"] <= d**2.25


def test_growth_check_eps_scaling_stable():
    rng = np.random.default_rng(34)
    n, d = 5, 2
    p = orthonormal_pair(rng, n)
    sys_t = plant_double_root(SystemShape(n, d), p, GAUSS, SeedPolicy(35))
    r1 = growth_check(sys_t, p, eps=1e-3, samples=1000, seeds=SeedPolicy(36))["max_ratio"]
    r2 = growth_check(sys_t, p, eps=5e-4, samples=1000, seeds=SeedPolicy(36))["max_ratio"]
    assert r2 <= 2.0 * r1
    assert r2 >= 0.5 * r1


def test_jacobian_contract_consistency():
    # J(x) y equals the first derivative contracted against y.
    sys_t = random_system(5, 3, seed=37)
    rng = np.random.default_rng(38)
    x, y = rng.standard_normal(5), rng.standard_normal(5)
    assert np.allclose(
        jacobian(sys_t, x) @ y, derivative_contract(sys_t, x, [y]), rtol=1e-12
    )
