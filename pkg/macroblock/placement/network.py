from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Tuple

import numpy as np

from .stream import RngStream
from ..geometry import Point2D


def _check_density(density: float) -> None:
    if not density > 0:
        raise ValueError(f"invalid density: {density}")


def cell_radius(lambda_bs: float) -> float:
    """Average cell radius (λπ)^(-1/2) of a perfectly packed cellular layout."""
    _check_density(lambda_bs)
    return 1.0 / math.sqrt(lambda_bs * math.pi)


@dataclass(frozen=True, eq=False)
class NetworkRealization:
    """One sampled network geometry around a source transmitter at the origin.

    Attributes:
        base_stations: (K, 2) array of positions ordered by distance to the origin.
        interferers: (M, 2) array of interfering transmitter positions.
        lambda_bs: Base station density the realization was drawn with.
        index: Realization index, also the substream index it was drawn from.
    """

    base_stations: np.ndarray
    lambda_bs: float
    interferers: np.ndarray = field(default_factory=lambda: np.zeros((0, 2)))
    index: Optional[int] = None

    def __post_init__(self):
        distances = np.hypot(self.base_stations[:, 0], self.base_stations[:, 1])
        if np.any(np.diff(distances) < 0):
            raise ValueError("Base stations are not ordered by distance")

    @property
    def source(self) -> Point2D:
        return Point2D(0.0, 0.0)

    @property
    def m(self) -> int:
        return len(self.interferers)

    def distances(self) -> np.ndarray:
        return np.hypot(self.base_stations[:, 0], self.base_stations[:, 1])

    def base_station(self, i: int) -> Point2D:
        """Returns X_i, counting from 1."""
        return Point2D.of(self.base_stations[i - 1])

    def transmitter(self, j: int) -> Point2D:
        """Returns Y_j. Y_0 is the source, Y_1..Y_M the interferers."""
        if j == 0:
            return self.source

        return Point2D.of(self.interferers[j - 1])


def distances_from_uniforms(lambda_bs: float, uniforms: np.ndarray) -> np.ndarray:
    """Inverts the conditional distance CDF 1 - exp(-λπ(r_i² - r_{i-1}²)) for each
    uniform draw in turn, starting from r_0 = 0.

    Rows of a 2-D array of uniforms are independent sequences.
    """
    _check_density(lambda_bs)
    increments = -np.log1p(-np.asarray(uniforms, dtype=float)) / (lambda_bs * math.pi)

    return np.sqrt(np.cumsum(increments, axis=-1))


def sample_ordered_distances(lambda_bs: float, count: int, rng: RngStream) -> np.ndarray:
    """Returns the distances to the count nearest points of a PPP, nearest first."""
    if count < 1:
        raise ValueError(f"Base station count is not positive: {count}")

    return distances_from_uniforms(lambda_bs, rng.random(count))


def polar_to_points(distances: np.ndarray, angles: np.ndarray) -> np.ndarray:
    distances = np.asarray(distances, dtype=float)
    angles = np.asarray(angles, dtype=float)
    return np.column_stack((distances * np.cos(angles), distances * np.sin(angles)))


def sample_base_stations(lambda_bs: float, count: int, rng: RngStream) -> np.ndarray:
    """Returns a (count, 2) array of the nearest base stations, ordered by distance.

    Distances are drawn first, then angles uniform on [0, 2π).
    """
    distances = sample_ordered_distances(lambda_bs, count, rng)
    angles = 2.0 * math.pi * rng.random(count)

    return polar_to_points(distances, angles)


def _uniform_on_disk(radius: float, count: int, rng: RngStream) -> np.ndarray:
    draws = rng.random((count, 2))
    return polar_to_points(radius * np.sqrt(draws[:, 0]), 2.0 * math.pi * draws[:, 1])


def sample_blockage_fields(
    lambda_bl: float, region_radius: float, fields: int, rng: RngStream
) -> Tuple[np.ndarray, np.ndarray]:
    """Draws independent blockage fields, each a PPP of density lambda_bl on the disk of
    radius region_radius about the origin.

    Returns the centers of every field stacked into one (k, 2) array, and for each
    center the index of the field it belongs to.
    """
    if lambda_bl < 0:
        raise ValueError(f"Blockage density is negative: {lambda_bl}")
    if region_radius <= 0:
        raise ValueError(f"Region radius is not positive: {region_radius}")
    if fields < 1:
        raise ValueError(f"Field count is not positive: {fields}")

    if lambda_bl == 0:
        return np.zeros((0, 2)), np.zeros(0, dtype=np.intp)

    counts = rng.poisson(lambda_bl * math.pi * region_radius ** 2, size=fields)
    centers = _uniform_on_disk(region_radius, int(counts.sum()), rng)
    return centers, np.repeat(np.arange(fields), counts)


def sample_blockages(lambda_bl: float, region_radius: float, rng: RngStream) -> np.ndarray:
    """Returns the blockage centers of a PPP of density lambda_bl restricted to the disk
    of radius region_radius about the origin, as a (k, 2) array."""
    centers, _ = sample_blockage_fields(lambda_bl, region_radius, 1, rng)
    return centers


def place_interferers(
    realization: NetworkRealization,
    n: int,
    m: int,
    lambda_bs: float,
    rng: RngStream,
) -> np.ndarray:
    """Places one interferer uniformly in each of the m nearest non-serving cells.

    Interferer j is hosted by X_{n+j}. The offsets from the hosts depend only on rng,
    so calls for different n with equal streams move the same offsets to other hosts.
    """
    if n not in (1, 2):
        raise ValueError(f"Macrodiversity order must be 1 or 2, got {n}")
    if m < 0:
        raise ValueError(f"Interferer count is negative: {m}")
    if len(realization.base_stations) < n + m:
        raise ValueError(
            f"need N+M base stations: have {len(realization.base_stations)}, need {n + m}"
        )

    if m == 0:
        return np.zeros((0, 2))

    offsets = _uniform_on_disk(cell_radius(lambda_bs), m, rng)
    return realization.base_stations[n: n + m] + offsets
