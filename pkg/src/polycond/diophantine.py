"""Lattice distance, essential LCD, and anti-concentration estimates.

The essential LCD of a vector y is the smallest scale D at which D*y comes
within min(gamma0 |Dy|, alpha) of the integer lattice; large LCD certifies
strong anti-concentration of weighted sums along y, which the small-ball
and tensorization estimators here probe empirically.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .ensembles import DistributionSpec, SeedPolicy
from .errors import ConfigError, PreconditionError
from .stats import GridEstimate
from .systems import ALLOCATION_CAP, _kron_chain

_BLOCK = 4096


@dataclass(frozen=True)
class LcdQuery:
    """Search parameters for lcd_estimate.

    coarse_step = None derives the default min(1e-3, 1/(4 max|y_i|)) per
    call, small enough that the first qualifying window is never skipped.
    """

    alpha: float
    gamma0: float
    d_max: float
    coarse_step: float | None = None
    refine_tol: float = 1e-6

    def __post_init__(self):
        if self.alpha <= 0:
            raise ConfigError(f"alpha must be positive, got {self.alpha}")
        if not (0.0 < self.gamma0 < 1.0):
            raise ConfigError(f"gamma0 must lie in (0,1), got {self.gamma0}")
        if self.d_max <= 0:
            raise ConfigError(f"d_max must be positive, got {self.d_max}")
        if self.coarse_step is not None:
            if not (0.0 < self.coarse_step < 0.5):
                raise ConfigError(f"coarse_step must lie in (0, 1/2), got {self.coarse_step}")
            if self.refine_tol >= self.coarse_step:
                raise ConfigError("refine_tol must be smaller than coarse_step")
        if self.refine_tol <= 0:
            raise ConfigError(f"refine_tol must be positive, got {self.refine_tol}")


@dataclass(frozen=True)
class LcdResult:
    """Outcome of the LCD scan; lcd and certificate are valid when found.

    The certificate pins the qualifying scale: dist(D_star y, Z^m) =
    lattice_dist < threshold = min(gamma0 |D_star y|, alpha), recomputable
    exactly from y.
    """

    found: bool
    lcd: float
    certificate: dict | None


@dataclass(frozen=True)
class AlphaPolicy:
    """The alpha(n, d) schedule used by LCD-based anti-concentration bounds.

    Returns n^(7d/16 - 1/4) in the moderate-degree regime, operationalized
    as d <= log n / (3 log log n), and n^(d/4) otherwise (including every n
    where the proxy bound is undefined or nonpositive).
    """

    def alpha(self, n: int, d: int) -> float:
        if n < 2 or d < 1:
            raise ConfigError(f"need n >= 2 and d >= 1, got n={n}, d={d}")
        lln = math.log(math.log(n)) if n > 2 else -1.0
        if lln > 0 and d <= math.log(n) / (3.0 * lln):
            return float(n ** (7.0 * d / 16.0 - 0.25))
        return float(n ** (d / 4.0))


DEFAULT_ALPHA = AlphaPolicy()


def dist_to_lattice(v) -> float:
    """Euclidean distance from v to the nearest integer lattice point."""
    arr = np.asarray(v, dtype=np.float64)
    return float(np.linalg.norm(arr - np.round(arr)))


def lift_monomial(x, d: int) -> np.ndarray:
    """All degree-d coordinate products of x, indexed row-major over (i_1..i_d).

    The lift has |lift|_2 = |x|_2^d, so unit vectors lift to unit vectors.
    """
    xv = np.asarray(x, dtype=np.float64)
    if xv.ndim != 1 or d < 1:
        raise ValueError(f"need a vector and d >= 1, got shape {xv.shape}, d={d}")
    if xv.shape[0] ** d > ALLOCATION_CAP:
        raise ValueError(f"lift size {xv.shape[0]}**{d} exceeds the allocation cap")
    return _kron_chain([xv] * d)


def _lcd_qualifies(y: np.ndarray, ynorm: float, gamma0: float, alpha: float, scale: float) -> bool:
    return dist_to_lattice(scale * y) < min(gamma0 * scale * ynorm, alpha)


def lcd_estimate(y, q: LcdQuery) -> LcdResult:
    """Locate the essential LCD by coarse scan plus left bisection.

    Scans D over (0, d_max] in coarse steps; at the first qualifying D the
    boundary of the qualifying region is bisected to within refine_tol and
    the returned scale itself satisfies the defining inequality (the
    certificate records both sides).  found=False means no scale up to
    d_max qualifies.
    """
    yv = np.asarray(y, dtype=np.float64)
    ynorm = float(np.linalg.norm(yv))
    if yv.ndim != 1 or ynorm == 0.0:
        raise ValueError("need a nonzero vector")
    step = q.coarse_step
    if step is None:
        step = min(1e-3, 1.0 / (4.0 * float(np.max(np.abs(yv)))))
    grid = np.arange(step, q.d_max + step / 2, step)
    first = None
    for lo_idx in range(0, grid.shape[0], _BLOCK):
        block = grid[lo_idx : lo_idx + _BLOCK]
        scaled = block[:, None] * yv[None, :]
        dists = np.linalg.norm(scaled - np.round(scaled), axis=1)
        thresh = np.minimum(q.gamma0 * block * ynorm, q.alpha)
        hits = np.nonzero(dists < thresh)[0]
        if hits.size:
            first = float(block[hits[0]])
            break
    if first is None:
        return LcdResult(found=False, lcd=math.nan, certificate=None)
    lo, hi = max(first - step, 0.0), first
    while hi - lo > q.refine_tol:
        mid = 0.5 * (lo + hi)
        if _lcd_qualifies(yv, ynorm, q.gamma0, q.alpha, mid):
            hi = mid
        else:
            lo = mid
    lattice_dist = dist_to_lattice(hi * yv)
    threshold = min(q.gamma0 * hi * ynorm, q.alpha)
    return LcdResult(
        found=True,
        lcd=hi,
        certificate={"D_star": hi, "lattice_dist": lattice_dist, "threshold": threshold},
    )


def small_ball_estimate(
    y,
    dist: DistributionSpec,
    eps_grid,
    trials: int,
    seeds: SeedPolicy,
    key: tuple = (0,),
) -> GridEstimate:
    """Monte Carlo Levy concentration function of S = sum a_i y_i.

    For each eps the estimate is the exact sliding-window supremum
    sup_v #{|S - v| <= eps} / trials over the sampled sums (every optimal
    window can be slid to start at a sample, so anchoring windows at the
    sorted samples loses nothing).  Wilson 95% intervals accompany each
    point.
    """
    yv = np.asarray(y, dtype=np.float64)
    if float(np.linalg.norm(yv)) < 1.0 - 1e-12:
        raise PreconditionError("small_ball_estimate needs |y| >= 1")
    if trials < 10**4:
        raise PreconditionError(f"need trials >= 1e4, got {trials}")
    eps = np.asarray(eps_grid, dtype=np.float64)
    sums = np.empty(trials)
    done = 0
    block_idx = 0
    while done < trials:
        take = min(_BLOCK, trials - done)
        rng = seeds.stream(*key, block_idx)
        draws = dist.sample(rng, (take, yv.shape[0]))
        sums[done : done + take] = draws @ yv
        done += take
        block_idx += 1
    sums.sort()
    hits = np.empty(eps.shape[0], dtype=np.int64)
    for i, e in enumerate(eps):
        upper = np.searchsorted(sums, sums + 2.0 * e, side="right")
        hits[i] = int(np.max(upper - np.arange(trials)))
    return GridEstimate(grid=eps, hits=hits, trials=trials)


def tensorization_check(
    dist: DistributionSpec,
    n: int,
    delta_grid,
    trials: int,
    seeds: SeedPolicy,
    key: tuple = (0,),
) -> GridEstimate:
    """Empirical P(sum of n squared draws < delta^2 n) over a delta grid."""
    if trials < 10**5:
        raise PreconditionError(f"need trials >= 1e5, got {trials}")
    if n < 1:
        raise ValueError(f"need n >= 1, got {n}")
    deltas = np.asarray(delta_grid, dtype=np.float64)
    cutoffs = deltas**2 * n
    hits = np.zeros(deltas.shape[0], dtype=np.int64)
    done = 0
    block_idx = 0
    rows = max(_BLOCK, 10**5 // max(n, 1))
    while done < trials:
        take = min(rows, trials - done)
        rng = seeds.stream(*key, block_idx)
        draws = dist.sample(rng, (take, n))
        sumsq = np.einsum("ij,ij->i", draws, draws)
        hits += (sumsq[None, :] < cutoffs[:, None]).sum(axis=1)
        done += take
        block_idx += 1
    return GridEstimate(grid=deltas, hits=hits, trials=trials)
