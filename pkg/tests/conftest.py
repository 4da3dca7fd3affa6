"""Shared independent oracles for the test suite.

Everything here recomputes package quantities from their definitions with
deliberately naive loops, so agreement with the fast kernels is meaningful.
"""

import itertools

import numpy as np

from polycond import (
    CoefficientTensor,
    DistributionSpec,
    PolynomialSystem,
    SeedPolicy,
    SystemShape,
    sample_system,
)


def naive_evaluate(t: np.ndarray, x: np.ndarray) -> np.ndarray:
    """f_l(x) as the literal nested sum over all index tuples."""
    m = t.shape[0]
    n = t.shape[1]
    d = t.ndim - 1
    out = np.zeros(m)
    for l in range(m):
        for idx in itertools.product(range(n), repeat=d):
            prod = t[(l, *idx)]
            for i in idx:
                prod *= x[i]
            out[l] += prod
    return out


def naive_derivative(t: np.ndarray, x: np.ndarray, dirs) -> np.ndarray:
    """k-th derivative contraction as a sum over ordered injective slots.

    Each choice of k distinct slots (in order) receives the k directions;
    the remaining slots keep x.
    """
    m = t.shape[0]
    n = t.shape[1]
    d = t.ndim - 1
    k = len(dirs)
    out = np.zeros(m)
    for slots in itertools.permutations(range(d), k):
        vecs = [x] * d
        for s, y in zip(slots, dirs):
            vecs[s] = y
        for l in range(m):
            for idx in itertools.product(range(n), repeat=d):
                prod = t[(l, *idx)]
                for pos, i in enumerate(idx):
                    prod *= vecs[pos][i]
                out[l] += prod
    return out


def random_system(n: int, d: int, seed: int, kind: str = "gaussian") -> PolynomialSystem:
    rand = sample_system(
        SystemShape(n=n, d=d), DistributionSpec(kind), SeedPolicy(seed)
    )
    return PolynomialSystem(rand=rand)


def random_unit(rng: np.random.Generator, n: int) -> np.ndarray:
    v = rng.standard_normal(n)
    return v / np.linalg.norm(v)


def system_from_array(data) -> PolynomialSystem:
    return PolynomialSystem(rand=CoefficientTensor.from_array(np.asarray(data, float)))
