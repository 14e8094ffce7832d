from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Union

import numpy as np

from .distribution import DiscreteDistribution
from ..blocking import pair_stats, path_stats
from ..placement import NetworkRealization
from ..tool import db_to_linear


class Scheme(enum.Enum):
    selection = "selection"
    diversity = "diversity"

    @classmethod
    def of(cls, scheme: Union[str, Scheme]) -> Scheme:
        if isinstance(scheme, cls):
            return scheme
        try:
            return cls(scheme)
        except ValueError:
            raise ValueError(f"Unknown combining scheme: {scheme}") from None


@dataclass(frozen=True)
class ChannelParams:
    """Propagation and blockage parameters shared by every link of a realization.

    Attributes:
        alpha: Path-loss exponent.
        snr0_db: SNR of an unblocked reference link of unit length, in dB.
        width: Blockage width W.
        lambda_bl: Blockage density.
    """

    alpha: float = 3.0
    snr0_db: float = 15.0
    width: float = 0.8
    lambda_bl: float = 0.6

    def __post_init__(self):
        if self.alpha <= 0:
            raise ValueError(f"Path-loss exponent is not positive: {self.alpha}")
        if self.width <= 0:
            raise ValueError(f"Blockage width is not positive: {self.width}")
        if self.lambda_bl < 0:
            raise ValueError(f"Blockage density is negative: {self.lambda_bl}")

    @property
    def snr0(self) -> float:
        return db_to_linear(self.snr0_db)


def path_gains(distances: np.ndarray, alpha: float) -> np.ndarray:
    """Ω = R^(-α) for each distance."""
    return np.power(np.asarray(distances, dtype=float), -alpha)


def snr_distribution(
    realization: NetworkRealization,
    n: int,
    scheme: Union[str, Scheme],
    params: ChannelParams,
    correlated: bool = True,
) -> DiscreteDistribution:
    """Exact SNR distribution of one realization under random blockage.

    With n = 2 the pair of nearest base stations is combined by the given scheme.
    correlated=False drops the overlap correlation and keeps the marginals.
    """
    scheme = Scheme.of(scheme)
    if n not in (1, 2):
        raise ValueError(f"Macrodiversity order must be 1 or 2, got {n}")
    if len(realization.base_stations) < n:
        raise ValueError(
            f"Realization has {len(realization.base_stations)} base stations, need {n}"
        )

    snr0 = params.snr0
    distances = realization.distances()[:n]
    omega = path_gains(distances, params.alpha)

    if n == 1:
        single = path_stats(
            realization.source, realization.base_station(1), params.width, params.lambda_bl
        )
        return DiscreteDistribution.from_atoms([0.0, snr0 * omega[0]], [single.p1, single.q1])

    stats = pair_stats(
        realization.source,
        realization.base_station(1),
        realization.base_station(2),
        params.width,
        params.lambda_bl,
    )
    if not correlated:
        stats = stats.independent()

    pmf = stats.joint
    received = snr0 * omega
    if scheme is Scheme.diversity:
        return DiscreteDistribution.from_atoms(
            [0.0, received[1], received[0], received[0] + received[1]],
            [pmf[1, 1], pmf[1, 0], pmf[0, 1], pmf[0, 0]],
        )

    return DiscreteDistribution.from_atoms(
        [0.0, received[1], received[0]],
        [pmf[1, 1], pmf[1, 0], pmf[0, 0] + pmf[0, 1]],
    )


def outage(dist: DiscreteDistribution, beta_db: float) -> float:
    """P[X <= β] with β given in dB."""
    return dist.cdf(db_to_linear(beta_db))


def coverage(dist: DiscreteDistribution, beta_db: float) -> float:
    """P[X > β], the complement of the outage probability."""
    return 1.0 - outage(dist, beta_db)
