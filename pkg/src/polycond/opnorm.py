"""Alternating maximization for the squared multilinear sup norm.

The objective is sup over unit vectors v_1..v_d of the sum over forms of
the squared full contraction.  With all slots but one fixed the objective
is |B v|^2 for a partial-contraction matrix B, so each slot update is an
exact argmax (top right singular vector); sweeps are monotone and the
result is always a certified lower bound on the true sup.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .ensembles import DistributionSpec, SeedPolicy
from .systems import CoefficientTensor, _contract_all, _contract_except


@dataclass(frozen=True, eq=False)
class OpnormResult:
    """Best found value of the squared sup, with the achieving unit vectors.

    value is the squared objective (matching the sum-of-squares form the
    bounds are stated in); unsquared exposes its square root.  converged
    reports whether the best restart's sweep-to-sweep relative change fell
    below tol before max_sweeps.
    """

    value: float
    arg: list
    sweeps: int
    restarts: int
    converged: bool

    @property
    def unsquared(self) -> float:
        return math.sqrt(self.value)


def _coerce(t) -> np.ndarray:
    if isinstance(t, CoefficientTensor):
        return t.data
    arr = np.ascontiguousarray(t, dtype=np.float64)
    if arr.ndim < 2:
        raise ValueError(f"need at least a (m, n) array, got shape {arr.shape}")
    return arr


def _objective(t: np.ndarray, vecs) -> float:
    r = _contract_all(t, vecs)
    return float(r @ r)


def opnorm(
    t,
    restarts: int = 20,
    max_sweeps: int = 200,
    tol: float = 1e-10,
    seeds: SeedPolicy = SeedPolicy(0),
    key: tuple = (0,),
) -> OpnormResult:
    """Maximize the squared contraction over unit vectors, slotwise.

    Accepts a CoefficientTensor or any raw (m, n_1, ..., n_d) array; slot
    sizes may differ (rectangular restriction).  Restarts draw independent
    seed-derived streams and reduce in restart order, first-found on ties.
    """
    if restarts < 1:
        raise ValueError(f"need restarts >= 1, got {restarts}")
    arr = _coerce(t)
    d = arr.ndim - 1
    sizes = arr.shape[1:]
    best_val = -math.inf
    best_arg = None
    best_sweeps = 0
    best_conv = False
    for r in range(restarts):
        rng = seeds.stream(*key, r)
        vecs = []
        for size in sizes:
            v = rng.standard_normal(size)
            vecs.append(v / np.linalg.norm(v))
        val = _objective(arr, vecs)
        sweeps = 0
        conv = False
        for _ in range(max_sweeps):
            prev = val
            for j in range(d):
                b = _contract_except(arr, vecs, j)
                _, s, vt = np.linalg.svd(b, full_matrices=False)
                vecs[j] = vt[0]
                val = float(s[0] ** 2)
            sweeps += 1
            if abs(val - prev) <= tol * max(abs(prev), 1e-300):
                conv = True
                break
        if val > best_val:
            best_val = val
            best_arg = [v.copy() for v in vecs]
            best_sweeps = sweeps
            best_conv = conv
    return OpnormResult(
        value=best_val,
        arg=best_arg,
        sweeps=best_sweeps,
        restarts=restarts,
        converged=best_conv,
    )


@dataclass(frozen=True, eq=False)
class OpnormScaling:
    """Per-trial squared opnorms across tensor sizes, with medians.

    values[i, j] is trial j at n_list[i]; ratios = medians / n track the
    linear-in-n growth the sup is expected to follow at fixed degree.
    """

    d: int
    n_list: tuple
    k_restrict: int | None
    values: np.ndarray
    medians: np.ndarray
    ratios: np.ndarray


def opnorm_scaling(
    d: int,
    n_list,
    dist: DistributionSpec,
    trials: int,
    seeds: SeedPolicy,
    restarts: int = 20,
    max_sweeps: int = 200,
    tol: float = 1e-10,
    k_restrict: int | None = None,
    key: tuple = (0,),
) -> OpnormScaling:
    """Median squared opnorm of (n-1, n, ..., n) iid tensors per n.

    k_restrict < n shrinks every contraction slot to the first k indices
    (the rectangular setting); sampling streams are keyed by (n, trial) so
    the table reproduces bit-exactly under any execution order.
    """
    ns = tuple(int(n) for n in n_list)
    if any(b <= a for a, b in zip(ns, ns[1:])):
        raise ValueError(f"n_list must be strictly ascending, got {ns}")
    if trials < 1:
        raise ValueError(f"need trials >= 1, got {trials}")
    values = np.empty((len(ns), trials))
    for i, n in enumerate(ns):
        if n < 2 or (k_restrict is not None and not (1 <= k_restrict < n)):
            raise ValueError(f"need n >= 2 and 1 <= k_restrict < n, got n={n}, k={k_restrict}")
        dims = (n - 1,) + (k_restrict if k_restrict is not None else n,) * d
        for j in range(trials):
            arr = dist.sample(seeds.stream(*key, 0, n, j), dims)
            res = opnorm(
                arr, restarts=restarts, max_sweeps=max_sweeps, tol=tol,
                seeds=seeds, key=(*key, 1, n, j),
            )
            values[i, j] = res.value
    medians = np.median(values, axis=1)
    return OpnormScaling(
        d=d,
        n_list=ns,
        k_restrict=k_restrict,
        values=values,
        medians=medians,
        ratios=medians / np.array(ns, dtype=np.float64),
    )
