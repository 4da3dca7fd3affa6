"""Compressible/incompressible classification of unit vectors.

A unit vector is compressible when it sits within distance rho of the
ceil(delta n)-sparse vectors; incompressible vectors are guaranteed a large
set of coordinates in a band around 1/sqrt(n), which downstream
anti-concentration arguments consume.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, InvariantViolation, PreconditionError

KAPPA0_DEFAULT = 0.1

_log = logging.getLogger(__name__)


@dataclass(frozen=True)
class CompressibilityParams:
    """Sparsity fraction delta and distance threshold rho, both in (0,1)."""

    delta: float
    rho: float

    def __post_init__(self):
        if not (0.0 < self.delta < 1.0) or not (0.0 < self.rho < 1.0):
            raise ConfigError(
                f"delta and rho must lie in (0,1), got delta={self.delta}, rho={self.rho}"
            )

    @classmethod
    def for_degree(cls, d: int, kappa0: float = KAPPA0_DEFAULT) -> "CompressibilityParams":
        """The degree-driven default delta = rho = kappa0 / d^2."""
        if d < 1 or kappa0 <= 0:
            raise ConfigError(f"need d >= 1 and kappa0 > 0, got d={d}, kappa0={kappa0}")
        v = kappa0 / (d * d)
        return cls(delta=v, rho=v)


@dataclass(frozen=True, eq=False)
class CompressibilityReport:
    """Classification outcome; spread_set is present iff incompressible."""

    kind: str
    dist_to_sparse: float
    spread_set: np.ndarray | None


def _check_unit(x) -> np.ndarray:
    xv = np.ascontiguousarray(x, dtype=np.float64)
    if xv.ndim != 1 or abs(float(np.linalg.norm(xv)) - 1.0) > 1e-10:
        raise PreconditionError("need a unit vector within 1e-10")
    return xv


def _sparse_count(n: int, delta: float) -> int:
    return int(math.ceil(delta * n))


def dist_to_sparse(x, p: CompressibilityParams) -> float:
    """Distance from x to the nearest ceil(delta n)-sparse vector.

    Zeroing the ceil(delta n) largest-magnitude entries is the optimal
    projection, so the norm of the remainder is the exact distance.
    """
    xv = _check_unit(x)
    k = _sparse_count(xv.shape[0], p.delta)
    if k >= xv.shape[0]:
        return 0.0
    mags = np.sort(np.abs(xv))
    return float(np.linalg.norm(mags[: xv.shape[0] - k]))


def spread_set(x, p: CompressibilityParams) -> np.ndarray:
    """Indices k with rho/sqrt(2n) <= |x_k| <= 1/sqrt(delta n).

    Only defined for incompressible x.  The returned set always has at
    least rho^2 delta n / 2 members; a violation would falsify the
    guarantee this function implements, so it is logged and raised, never
    ignored.
    """
    report = classify(x, p)
    if report.kind != "incompressible":
        raise PreconditionError(f"spread_set needs an incompressible vector, got {report.kind}")
    return report.spread_set


def classify(x, p: CompressibilityParams) -> CompressibilityReport:
    """Sparse / compressible / incompressible trichotomy for unit x."""
    xv = _check_unit(x)
    n = xv.shape[0]
    k = _sparse_count(n, p.delta)
    mags = np.abs(xv)
    order = np.argsort(mags)
    tail = order[: max(n - k, 0)]
    dist = float(np.linalg.norm(xv[tail]))
    if n - k <= 0 or np.all(mags[tail] < 1e-12):
        return CompressibilityReport(kind="sparse", dist_to_sparse=dist, spread_set=None)
    if dist <= p.rho:
        return CompressibilityReport(kind="compressible", dist_to_sparse=dist, spread_set=None)
    lo = p.rho / math.sqrt(2.0 * n)
    hi = 1.0 / math.sqrt(p.delta * n)
    members = np.nonzero((mags >= lo) & (mags <= hi))[0]
    bound = p.rho**2 * p.delta * n / 2.0
    if members.shape[0] < bound:
        _log.error(
            "spread set of size %d falls below the guaranteed %g (n=%d, delta=%g, rho=%g)",
            members.shape[0], bound, n, p.delta, p.rho,
        )
        raise InvariantViolation(
            f"spread set has {members.shape[0]} members, guarantee requires >= {bound}"
        )
    return CompressibilityReport(kind="incompressible", dist_to_sparse=dist, spread_set=members)
