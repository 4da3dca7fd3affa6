"""Alternating-maximization opnorm estimator against closed-form oracles."""

import itertools

import numpy as np
import pytest

from polycond import (
    CoefficientTensor,
    DistributionSpec,
    SeedPolicy,
    SystemShape,
    opnorm,
    opnorm_scaling,
)

GAUSS = DistributionSpec("gaussian")


def contract(arr: np.ndarray, vecs) -> np.ndarray:
    out = arr
    for v in reversed(vecs):
        out = out @ v
    return out


def test_zero_tensor():
    res = opnorm(CoefficientTensor.zeros(SystemShape(n=4, d=2)))
    assert res.value == 0.0
    assert res.unsquared == 0.0


def test_d1_matches_svd():
    rng = np.random.default_rng(0)
    for _ in range(5):
        a = rng.standard_normal((20, 30))
        res = opnorm(a, restarts=8, seeds=SeedPolicy(1))
        want = np.linalg.svd(a, compute_uv=False)[0] ** 2
        assert res.value == pytest.approx(want, rel=1e-8)
        assert res.converged


def test_rank_one_closed_form():
    rng = np.random.default_rng(1)
    u = rng.standard_normal(3)
    u /= np.linalg.norm(u)
    v = rng.standard_normal(5)
    v /= np.linalg.norm(v)
    t = np.einsum("l,i,j->lij", u, v, v)
    res = opnorm(t, restarts=6, seeds=SeedPolicy(2))
    assert res.value == pytest.approx(1.0, rel=1e-10)
    for slot in res.arg:
        assert abs(float(slot @ v)) == pytest.approx(1.0, abs=1e-8)


def test_value_recomputes_from_arg():
    rng = np.random.default_rng(2)
    t = rng.standard_normal((4, 5, 5, 5))
    res = opnorm(t, restarts=10, seeds=SeedPolicy(3))
    r = contract(t, res.arg)
    assert float(r @ r) == pytest.approx(res.value, abs=1e-10 * max(res.value, 1.0))
    for slot in res.arg:
        assert np.linalg.norm(slot) == pytest.approx(1.0, abs=1e-12)


def test_restarts_monotone():
    rng = np.random.default_rng(3)
    t = rng.standard_normal((3, 6, 6))
    vals = [opnorm(t, restarts=r, seeds=SeedPolicy(4)).value for r in (1, 5, 20)]
    assert vals[0] <= vals[1] <= vals[2]


def test_standard_basis_lower_bound():
    rng = np.random.default_rng(4)
    t = rng.standard_normal((4, 8, 8))
    res = opnorm(t, restarts=20, seeds=SeedPolicy(5))
    basis_best = float((t**2).sum(axis=0).max())
    assert res.value >= basis_best - 1e-12
    # the bound is what alternating maximization must beat at every basis pair
    for i, j in itertools.product(range(8), range(8)):
        assert res.value + 1e-12 >= float((t[:, i, j] ** 2).sum())


def test_sign_and_form_permutation_invariance():
    rng = np.random.default_rng(5)
    t = rng.standard_normal((4, 5, 5))
    base = opnorm(t, restarts=10, seeds=SeedPolicy(6)).value
    neg = opnorm(-t, restarts=10, seeds=SeedPolicy(6)).value
    perm = opnorm(t[rng.permutation(4)], restarts=10, seeds=SeedPolicy(6)).value
    assert neg == pytest.approx(base, rel=1e-10)
    assert perm == pytest.approx(base, rel=1e-10)


def test_determinism():
    rng = np.random.default_rng(6)
    t = rng.standard_normal((3, 4, 4, 4))
    a = opnorm(t, restarts=5, seeds=SeedPolicy(7), key=(1, 2))
    b = opnorm(t, restarts=5, seeds=SeedPolicy(7), key=(1, 2))
    assert a.value == b.value
    assert all(np.array_equal(x, y) for x, y in zip(a.arg, b.arg))


def test_input_validation():
    with pytest.raises(ValueError):
        opnorm(np.ones(5))
    with pytest.raises(ValueError):
        opnorm(np.ones((2, 3)), restarts=0)


def test_scaling_validation():
    with pytest.raises(ValueError):
        opnorm_scaling(2, [8, 8], GAUSS, trials=2, seeds=SeedPolicy(8))
    with pytest.raises(ValueError):
        opnorm_scaling(2, [8, 6], GAUSS, trials=2, seeds=SeedPolicy(8))
    with pytest.raises(ValueError):
        opnorm_scaling(2, [6], GAUSS, trials=0, seeds=SeedPolicy(8))
    with pytest.raises(ValueError):
        opnorm_scaling(2, [6], GAUSS, trials=2, seeds=SeedPolicy(8), k_restrict=6)


def test_scaling_d1_matrix_edge():
    table = opnorm_scaling(1, [8, 16], GAUSS, trials=8, seeds=SeedPolicy(9), restarts=6)
    for n, median in zip(table.n_list, table.medians):
        edge = n * (1.0 + np.sqrt((n - 1) / n)) ** 2
        assert median <= 2.0 * edge
        assert median >= edge / 2.0
    assert table.values.shape == (2, 8)
    assert np.array_equal(table.ratios, table.medians / np.array([8.0, 16.0]))


def test_scaling_deterministic_and_restricted():
    a = opnorm_scaling(2, [5, 6], GAUSS, trials=3, seeds=SeedPolicy(10), restarts=4)
    b = opnorm_scaling(2, [5, 6], GAUSS, trials=3, seeds=SeedPolicy(10), restarts=4)
    assert np.array_equal(a.values, b.values)
    r = opnorm_scaling(2, [6], GAUSS, trials=3, seeds=SeedPolicy(10), restarts=4, k_restrict=3)
    assert r.k_restrict == 3
    assert np.all(r.values > 0.0)
