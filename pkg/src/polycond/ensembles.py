"""Coefficient ensembles: subgaussian samplers, the KSS model, gamma control.

Sampling is driven by a splittable seed policy: every consumer derives an
independent counter-based stream from (master_seed, *key), so trials can run
in any order or on any number of workers without changing a single draw.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConfigError
from .systems import (
    CoefficientTensor,
    PolynomialSystem,
    SystemShape,
    _deriv_dir_matrix,
    _deriv_value,
    _deriv_x_matrix,
    _monomial_table,
    check_allocation,
)

_KINDS = ("gaussian", "rademacher", "uniform_pm", "table")
_SQRT3 = math.sqrt(3.0)


@dataclass(frozen=True)
class DistributionSpec:
    """A mean-zero, variance-one coefficient law.

    kind is one of "gaussian", "rademacher", "uniform_pm" (uniform on
    [-sqrt(3), sqrt(3)]), or "table" (finite support given by values/probs,
    validated to have exact mean 0 and variance 1).  t0 is the subgaussian
    tail parameter carried as metadata in experiment outputs.
    """

    kind: str
    values: tuple = None
    probs: tuple = None
    t0: float = 1.0

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise ConfigError(f"unknown dist kind {self.kind!r}, expected one of {_KINDS}")
        if self.t0 <= 0:
            raise ConfigError(f"t0 must be positive, got {self.t0}")
        if self.kind == "table":
            if not self.values or not self.probs or len(self.values) != len(self.probs):
                raise ConfigError("table kind needs matching 'values' and 'probs'")
            object.__setattr__(self, "values", tuple(float(v) for v in self.values))
            object.__setattr__(self, "probs", tuple(float(p) for p in self.probs))
            v = np.array(self.values)
            p = np.array(self.probs)
            if np.any(p < 0) or abs(p.sum() - 1.0) > 1e-12:
                raise ConfigError("table probs must be nonnegative and sum to 1")
            mean = float(p @ v)
            var = float(p @ (v * v)) - mean * mean
            if abs(mean) > 1e-12:
                raise ConfigError(f"table mean must be 0, got {mean}")
            if abs(var - 1.0) > 1e-12:
                raise ConfigError(f"table variance must be 1, got {var}")
        elif self.values is not None or self.probs is not None:
            raise ConfigError(f"values/probs are only valid for kind='table', not {self.kind!r}")

    def sample(self, rng: np.random.Generator, size) -> np.ndarray:
        if self.kind == "gaussian":
            return rng.standard_normal(size)
        if self.kind == "rademacher":
            return rng.integers(0, 2, size=size).astype(np.float64) * 2.0 - 1.0
        if self.kind == "uniform_pm":
            return rng.uniform(-_SQRT3, _SQRT3, size=size)
        return rng.choice(np.array(self.values), size=size, p=np.array(self.probs))

    def to_config(self) -> dict:
        obj = {"kind": self.kind, "t0": self.t0}
        if self.kind == "table":
            obj["values"] = list(self.values)
            obj["probs"] = list(self.probs)
        return obj

    @classmethod
    def from_config(cls, obj: dict) -> "DistributionSpec":
        if not isinstance(obj, dict) or "kind" not in obj:
            raise ConfigError(f"dist config must be a dict with a 'kind', got {obj!r}")
        known = {"kind", "values", "probs", "t0"}
        extra = set(obj) - known
        if extra:
            raise ConfigError(f"unknown dist config keys {sorted(extra)}")
        return cls(
            kind=obj["kind"],
            values=tuple(obj["values"]) if "values" in obj else None,
            probs=tuple(obj["probs"]) if "probs" in obj else None,
            t0=float(obj.get("t0", 1.0)),
        )


@dataclass(frozen=True)
class SeedPolicy:
    """Counter-based splittable seeding.

    stream(*key) yields a Philox generator derived from
    SeedSequence(master_seed, spawn_key=key); identical (master_seed, key)
    always produce identical draws, independent of call order or worker
    count.  Callers namespace their streams by a leading purpose integer.
    """

    master_seed: int = 0

    def __post_init__(self):
        if not isinstance(self.master_seed, int) or self.master_seed < 0:
            raise ConfigError(f"master_seed must be a nonnegative integer, got {self.master_seed!r}")

    def stream(self, *key: int) -> np.random.Generator:
        spawn = tuple(int(k) for k in key)
        if any(k < 0 for k in spawn):
            raise ValueError(f"stream key parts must be nonnegative, got {spawn}")
        ss = np.random.SeedSequence(self.master_seed, spawn_key=spawn)
        return np.random.Generator(np.random.Philox(ss))

    def to_config(self) -> dict:
        return {"master_seed": self.master_seed}

    @classmethod
    def from_config(cls, obj) -> "SeedPolicy":
        if isinstance(obj, int):
            return cls(master_seed=obj)
        if isinstance(obj, dict) and set(obj) <= {"master_seed"}:
            return cls(master_seed=int(obj.get("master_seed", 0)))
        raise ConfigError(f"seed config must be an int or {{'master_seed': int}}, got {obj!r}")


def sample_system(
    shape: SystemShape,
    dist: DistributionSpec,
    seeds: SeedPolicy,
    key: tuple = (0,),
) -> CoefficientTensor:
    """Sample an iid coefficient tensor, entries drawn in row-major order."""
    check_allocation(shape)
    rng = seeds.stream(*key)
    return CoefficientTensor(shape, dist.sample(rng, shape.tensor_shape))


def kss_monomial_gaussians(shape: SystemShape, seeds: SeedPolicy, key: tuple = (0,)) -> np.ndarray:
    """The standard Gaussian draws xi_alpha behind make_kss, shape (m, #monomials).

    Row l lists xi_alpha in the order of the package's canonical monomial
    enumeration; make_kss with the same seeds and key consumes exactly these
    draws, so per-form squared Weyl norms equal the row sums of squares.
    """
    exponents, _, _ = _monomial_table(shape.n, shape.d)
    rng = seeds.stream(*key)
    return rng.standard_normal((shape.m, len(exponents)))


def make_kss(shape: SystemShape, seeds: SeedPolicy, key: tuple = (0,)) -> PolynomialSystem:
    """Sample the KSS ensemble directly in monomial space.

    Each monomial alpha gets coefficient c_alpha = sqrt(binom(d, alpha)) xi_alpha
    with iid standard Gaussian xi_alpha, spread equally over the binom(d, alpha)
    index orderings, which makes the tensor symmetric and the Weyl-normalized
    coefficients exactly the xi draws.
    """
    _, group, orbit = _monomial_table(shape.n, shape.d)
    xis = kss_monomial_gaussians(shape, seeds, key)
    flat = xis[:, group] / np.sqrt(orbit[group])
    return PolynomialSystem(rand=CoefficientTensor(shape, flat.reshape(shape.tensor_shape)))


@dataclass(frozen=True, eq=False)
class GammaReport:
    """Certified lower bounds on the derivative suprema of a deterministic part.

    sup_estimates[k] estimates sup over unit vectors of the squared norm of
    the k-th derivative functional, k = 0..d; passed means no estimate
    exceeded n^gamma, i.e. no violation of gamma control was found.
    """

    gamma: float
    sup_estimates: np.ndarray
    threshold: float
    passed: bool


def _unit(v: np.ndarray) -> np.ndarray:
    return v / np.linalg.norm(v)


def _top_right_singular(B: np.ndarray) -> tuple[np.ndarray, float]:
    _, s, vt = np.linalg.svd(B, full_matrices=False)
    return vt[0], float(s[0] ** 2)


def _maximize_derivative_sq(t, d, k, restarts, sweeps, tol, seeds, key):
    """Best found value of sup ||D^(k)(x; y_1..y_k)||^2 over unit vectors.

    y slots get exact top-singular-vector updates (monotone); the x slot,
    which the functional is degree d-k homogeneous in, gets a candidate from
    the top right singular vector of the x-Jacobian, accepted only when it
    improves, with interpolated fallbacks.
    """
    n = t.shape[1]
    has_x = k < d
    best = 0.0
    for r in range(restarts):
        rng = seeds.stream(*key, k, r)
        x = _unit(rng.standard_normal(n)) if has_x else None
        ys = [_unit(rng.standard_normal(n)) for _ in range(k)]
        val = float(np.sum(_deriv_value(t, d, x, ys) ** 2))
        for _ in range(sweeps):
            prev = val
            for j in range(k):
                v, sq = _top_right_singular(_deriv_dir_matrix(t, d, x, ys, j))
                ys[j] = v
                val = sq
            if has_x:
                cand, _ = _top_right_singular(_deriv_x_matrix(t, d, x, ys))
                for w in (1.0, 0.5, 0.25):
                    trial = _unit((1.0 - w) * x + w * cand) if w < 1.0 else cand
                    tv = float(np.sum(_deriv_value(t, d, trial, ys) ** 2))
                    if tv > val:
                        x, val = trial, tv
                        break
            if val - prev <= tol * max(prev, 1e-300):
                break
        best = max(best, val)
    return best


def gamma_control_estimate(
    det: CoefficientTensor,
    gamma: float,
    restarts: int = 50,
    sweeps: int = 60,
    seeds: SeedPolicy = SeedPolicy(0),
    key: tuple = (0,),
    tol: float = 1e-12,
) -> GammaReport:
    """Probe whether a deterministic part is gamma-controlled.

    For each derivative order k = 0..d the squared functional norm is
    maximized by alternating ascent with multistart; estimates are certified
    lower bounds on the true suprema (a found point is always feasible), so
    passed = True means no violation of the n^gamma ceiling was found, not a
    proof of control.
    """
    if restarts < 1:
        raise ValueError(f"need restarts >= 1, got {restarts}")
    d = det.shape.d
    t = det.data
    sups = np.array(
        [
            _maximize_derivative_sq(t, d, k, restarts, sweeps, tol, seeds, key)
            for k in range(d + 1)
        ]
    )
    threshold = float(det.shape.n**gamma)
    return GammaReport(
        gamma=float(gamma),
        sup_estimates=sups,
        threshold=threshold,
        passed=bool(np.all(sups <= threshold)),
    )
