"""Binomial confidence intervals and the shared grid-estimate record."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

#: two-sided 95% normal quantile
Z95 = 1.959963984540054


def wilson_interval(hits, trials: int, z: float = Z95):
    """Wilson score interval for a binomial proportion.

    Args:
      hits: observed success count (scalar or array).
      trials: number of trials, >= 1.
      z: normal quantile; z=3 gives the "3 sigma" interval used in
        acceptance checks of exact probabilities.

    Returns:
      (low, high) arrays clipped to [0, 1].
    """
    if trials < 1:
        raise ValueError(f"need trials >= 1, got {trials}")
    h = np.asarray(hits, dtype=np.float64)
    p = h / trials
    z2 = z * z / trials
    center = (p + z2 / 2.0) / (1.0 + z2)
    half = z * np.sqrt(p * (1.0 - p) / trials + z2 / (4.0 * trials)) / (1.0 + z2)
    return np.clip(center - half, 0.0, 1.0), np.clip(center + half, 0.0, 1.0)


@dataclass(frozen=True, eq=False)
class GridEstimate:
    """Per-grid-point hit counts with Wilson intervals.

    Used for every frequency-over-a-grid result in the package: tail curves,
    small-ball concentration, tensorization probabilities.
    """

    grid: np.ndarray
    hits: np.ndarray
    trials: int
    z: float = field(default=Z95)

    def __post_init__(self):
        grid = np.asarray(self.grid, dtype=np.float64)
        hits = np.asarray(self.hits, dtype=np.int64)
        if grid.shape != hits.shape:
            raise ValueError("grid and hits must have matching shapes")
        if self.trials < 1:
            raise ValueError(f"need trials >= 1, got {self.trials}")
        if np.any(hits < 0) or np.any(hits > self.trials):
            raise ValueError("hit counts must lie in [0, trials]")
        object.__setattr__(self, "grid", grid)
        object.__setattr__(self, "hits", hits)

    @property
    def estimate(self) -> np.ndarray:
        return self.hits / self.trials

    @property
    def ci(self) -> tuple[np.ndarray, np.ndarray]:
        return wilson_interval(self.hits, self.trials, self.z)
