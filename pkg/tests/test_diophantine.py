"""Lattice distance, essential LCD, small-ball and tensorization checks."""

import itertools
import math

import numpy as np
import pytest

from polycond import (
    DEFAULT_ALPHA,
    AlphaPolicy,
    CompressibilityParams,
    ConfigError,
    DistributionSpec,
    LcdQuery,
    PreconditionError,
    SeedPolicy,
    classify,
    dist_to_lattice,
    evaluate,
    lcd_estimate,
    lift_monomial,
    small_ball_estimate,
    tensorization_check,
)
from conftest import random_system

RAD = DistributionSpec("rademacher")
GAUSS = DistributionSpec("gaussian")


def box_lattice_distance(v: np.ndarray) -> float:
    """Brute-force min over the 3^m box of lattice points around round(v)."""
    base = np.round(v)
    best = math.inf
    for offs in itertools.product((-1.0, 0.0, 1.0), repeat=len(v)):
        z = base + np.array(offs)
        best = min(best, float(np.linalg.norm(v - z)))
    return best


def test_dist_to_lattice_basics():
    assert dist_to_lattice(np.array([3.0, -2.0, 0.0])) == 0.0
    assert dist_to_lattice(np.array([0.5, 0.5])) == pytest.approx(math.sqrt(0.5))


def test_dist_to_lattice_matches_box_enumeration():
    rng = np.random.default_rng(0)
    for m in (1, 3, 6):
        for _ in range(5):
            v = rng.uniform(-4.0, 4.0, size=m)
            assert dist_to_lattice(v) == pytest.approx(box_lattice_distance(v), abs=1e-12)


def test_lift_monomial_basics():
    e1 = np.zeros(3)
    e1[0] = 1.0
    lifted = lift_monomial(e1, 2)
    want = np.zeros(9)
    want[0] = 1.0
    assert np.array_equal(lifted, want)
    rng = np.random.default_rng(1)
    x = rng.standard_normal(5)
    x /= np.linalg.norm(x)
    assert abs(np.linalg.norm(lift_monomial(x, 3)) - 1.0) < 1e-12


def test_lift_monomial_matches_evaluation():
    sys_t = random_system(4, 3, seed=2)
    flat = sys_t.coeffs.reshape(3, -1)
    rng = np.random.default_rng(3)
    for _ in range(5):
        x = rng.standard_normal(4)
        want = evaluate(sys_t, x)
        got = flat @ lift_monomial(x, 3)
        assert np.allclose(got, want, rtol=1e-12)


def test_lift_monomial_cap():
    with pytest.raises(ValueError):
        lift_monomial(np.ones(20), 8)


def test_lcd_query_validation():
    with pytest.raises(ConfigError):
        LcdQuery(alpha=0.4, gamma0=1.5, d_max=2.0)
    with pytest.raises(ConfigError):
        LcdQuery(alpha=-1.0, gamma0=0.5, d_max=2.0)
    with pytest.raises(ConfigError):
        LcdQuery(alpha=0.4, gamma0=0.5, d_max=2.0, coarse_step=0.7)
    with pytest.raises(ConfigError):
        LcdQuery(alpha=0.4, gamma0=0.5, d_max=2.0, coarse_step=1e-3, refine_tol=0.1)


def test_lcd_scalar_oracle():
    res = lcd_estimate(np.array([1.0]), LcdQuery(alpha=0.4, gamma0=0.5, d_max=2.0))
    assert res.found
    assert res.lcd == pytest.approx(2.0 / 3.0, abs=1e-4)


def test_lcd_half_vector_oracle():
    y = np.full(4, 0.5)
    res = lcd_estimate(y, LcdQuery(alpha=0.7, gamma0=0.5, d_max=2.0))
    assert res.found
    assert res.lcd == pytest.approx(4.0 / 3.0, abs=1e-4)


def test_lcd_scaling_law():
    y = np.array([1.0, 0.25, -0.4])
    base = lcd_estimate(y, LcdQuery(alpha=0.4, gamma0=0.5, d_max=8.0))
    assert base.found
    for c in (0.5, 2.0):
        res = lcd_estimate(c * y, LcdQuery(alpha=0.4, gamma0=0.5, d_max=8.0 / c))
        assert res.found
        assert res.lcd == pytest.approx(base.lcd / c, abs=1e-3)


def test_lcd_certificate_soundness():
    y = np.array([0.5, 0.5, 0.5, 0.5])
    q = LcdQuery(alpha=0.7, gamma0=0.5, d_max=2.0)
    res = lcd_estimate(y, q)
    cert = res.certificate
    d_star = cert["D_star"]
    dist = dist_to_lattice(d_star * y)
    threshold = min(q.gamma0 * np.linalg.norm(d_star * y), q.alpha)
    assert dist == pytest.approx(cert["lattice_dist"], abs=1e-15)
    assert threshold == pytest.approx(cert["threshold"], abs=1e-15)
    assert dist < threshold


def test_lcd_not_found_below_boundary():
    res = lcd_estimate(np.array([1.0]), LcdQuery(alpha=0.4, gamma0=0.5, d_max=0.5))
    assert not res.found
    assert math.isnan(res.lcd)
    assert res.certificate is None


def test_lcd_of_incompressible_lift_stays_large():
    # Lifted incompressible vectors show no lattice proximity below
    # n^(d/2) / (C d)^(C d).  C must be generous at this scale: with rho as
    # small as 0.025 a unit vector with one dominant coordinate is still
    # incompressible, and its lift's LCD approaches the scalar value
    # 1/(1 + gamma0) = 2/3, so d_max has to sit below 2/3.  C = 1.35 gives
    # d_max ~ 0.55 at n = 8.
    d, c = 2, 1.35
    params = CompressibilityParams.for_degree(d)
    rng = np.random.default_rng(4)
    for n in (6, 8):
        alpha = DEFAULT_ALPHA.alpha(n, d)
        d_max = n ** (d / 2) / (c * d) ** (c * d)
        assert d_max < 2.0 / 3.0
        checked = 0
        for _ in range(40):
            x = rng.standard_normal(n)
            x /= np.linalg.norm(x)
            if classify(x, params).kind != "incompressible":
                continue
            checked += 1
            res = lcd_estimate(lift_monomial(x, d), LcdQuery(alpha=alpha, gamma0=0.5, d_max=d_max))
            assert not res.found
        assert checked >= 30


def test_alpha_policy_regimes():
    policy = AlphaPolicy()
    n = 10**9
    assert policy.alpha(n, 2) == pytest.approx(n ** (7 * 2 / 16 - 0.25))
    assert policy.alpha(100, 5) == pytest.approx(100 ** (5 / 4))
    assert policy.alpha(2, 3) == pytest.approx(2 ** (3 / 4))
    with pytest.raises(ConfigError):
        policy.alpha(1, 2)
    with pytest.raises(ConfigError):
        policy.alpha(10, 0)


def test_small_ball_rademacher_exact():
    y = np.array([1.0, 1.0]) / math.sqrt(2.0)
    est = small_ball_estimate(y, RAD, [0.1], trials=100_000, seeds=SeedPolicy(6))
    lo, hi = est.ci
    assert lo[0] <= 0.5 <= hi[0]
    assert est.estimate[0] == pytest.approx(0.5, abs=0.01)


def test_small_ball_gaussian_density_bound():
    y = np.array([1.0])
    est = small_ball_estimate(y, GAUSS, [1e-3, 0.1, 0.3], trials=100_000, seeds=SeedPolicy(7))
    _, hi = est.ci
    assert est.estimate[0] <= 2e-3 + (hi[0] - est.estimate[0])
    for j, eps in ((1, 0.1), (2, 0.3)):
        assert est.estimate[j] <= eps + (hi[j] - est.estimate[j])


def test_small_ball_monotone_and_bounded():
    y = np.array([0.9, 0.7, 0.3])
    est = small_ball_estimate(y, GAUSS, [0.05, 0.1, 0.5, 2.0, 10.0], trials=20_000, seeds=SeedPolicy(8))
    assert np.all(np.diff(est.estimate) >= 0)
    assert np.all(est.estimate <= 1.0)
    assert est.estimate[-1] == 1.0


def test_small_ball_preconditions():
    with pytest.raises(PreconditionError):
        small_ball_estimate(np.array([0.5]), GAUSS, [0.1], trials=20_000, seeds=SeedPolicy(9))
    with pytest.raises(PreconditionError):
        small_ball_estimate(np.array([1.0]), GAUSS, [0.1], trials=100, seeds=SeedPolicy(9))


def test_small_ball_consistency_constant_small():
    # Whenever eps is at least 1/LCD, Q(eps) <= C1 (eps/gamma0 + exp(-2 alpha^2))
    # should hold with a modest fitted C1; assert the corpus fit stays below 16.
    fits = []
    for y, dist, alpha, lcd in (
        (np.array([1.0]), RAD, 0.4, 2.0 / 3.0),
        (np.full(4, 0.5), RAD, 0.7, 4.0 / 3.0),
        (np.array([1.0]), GAUSS, 0.4, 2.0 / 3.0),
        (np.full(4, 0.5), GAUSS, 0.7, 4.0 / 3.0),
    ):
        for mult in (1.0, 2.0, 5.0):
            eps = mult / lcd
            est = small_ball_estimate(y, dist, [eps], trials=20_000, seeds=SeedPolicy(10))
            bound = eps / 0.5 + math.exp(-2.0 * alpha**2)
            fits.append(float(est.estimate[0]) / bound)
    assert max(fits) <= 16.0


def test_tensorization_monotone_and_degenerate():
    est = tensorization_check(GAUSS, n=4, delta_grid=[0.2, 0.5, 1.0, 50.0], trials=100_000, seeds=SeedPolicy(11))
    assert np.all(np.diff(est.hits) >= 0)
    assert est.estimate[-1] == 1.0


def test_tensorization_small_delta_bound():
    est = tensorization_check(GAUSS, n=6, delta_grid=[0.1], trials=200_000, seeds=SeedPolicy(12))
    assert est.estimate[0] <= (3.0 * 0.1) ** 6


def test_tensorization_preconditions():
    with pytest.raises(PreconditionError):
        tensorization_check(GAUSS, n=4, delta_grid=[0.1], trials=10_000, seeds=SeedPolicy(13))
