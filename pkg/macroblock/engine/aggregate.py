from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence, Tuple, Union

import numpy as np

from ..snr import DiscreteDistribution

# Two-sided 95% quantile of the standard normal distribution
_Z95 = 1.96
# Rounding slack allowed when checking that a row is a CDF
_CDF_TOLERANCE = 1e-12


@dataclass(frozen=True, eq=False)
class EmpiricalCDF:
    """A CDF pooled over network realizations.

    Attributes:
        grid: Thresholds, in the units of the aggregated quantity.
        values: Pooled probability at or below each threshold.
        count: Number of realizations pooled.
    """

    grid: np.ndarray
    values: np.ndarray
    count: int

    @classmethod
    def from_rows(cls, grid: Union[Sequence[float], np.ndarray], rows: Sequence[np.ndarray]) -> EmpiricalCDF:
        """Pools per-realization CDF rows, each evaluated on grid, by averaging them."""
        if len(rows) == 0:
            raise ValueError("No realizations to aggregate")

        grid = np.asarray(grid, dtype=float)
        stacked = np.stack([np.asarray(row, dtype=float) for row in rows])
        if stacked.shape[1] != len(grid):
            raise ValueError(f"Rows have {stacked.shape[1]} points, grid has {len(grid)}")

        outside = (stacked < -_CDF_TOLERANCE) | (stacked > 1.0 + _CDF_TOLERANCE)
        if np.any(outside):
            raise ValueError(f"CDF row {np.flatnonzero(outside.any(axis=1))[0]} leaves [0, 1]")
        falling = np.diff(stacked, axis=1) < -_CDF_TOLERANCE
        if np.any(falling):
            raise ValueError(f"CDF row {np.flatnonzero(falling.any(axis=1))[0]} decreases")

        values = stacked.mean(axis=0)

        return cls(grid=grid, values=values, count=len(rows))


def aggregate_cdf(
    distributions: Sequence[DiscreteDistribution], grid: Union[Sequence[float], np.ndarray]
) -> EmpiricalCDF:
    """The mean over realizations of each realization's CDF, sampled on grid.

    By total probability this is the CDF of the quantity for a random realization
    under random blockage.
    """
    if len(distributions) == 0:
        raise ValueError("No realizations to aggregate")

    grid = np.asarray(grid, dtype=float)
    return EmpiricalCDF.from_rows(grid, [dist.cdf(grid) for dist in distributions])


def spatial_average(values: Sequence[float]) -> Tuple[float, float]:
    """Returns the mean and the 95% normal-approximation half-width 1.96·s/√n.

    s is the sample standard deviation; a single value has half-width 0.
    """
    values = np.asarray(values, dtype=float)
    if len(values) == 0:
        raise ValueError("No values to average")

    mean = float(np.mean(values))
    if len(values) == 1:
        return mean, 0.0

    spread = float(np.std(values, ddof=1))
    return mean, _Z95 * spread / math.sqrt(len(values))
