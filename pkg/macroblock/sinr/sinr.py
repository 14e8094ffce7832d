from __future__ import annotations

from dataclasses import dataclass
from typing import List, Union

import numpy as np

from .states import BlockingState, iter_state_space
from ..blocking import PairBlockingStats, pair_stats, path_stats
from ..placement import NetworkRealization
from ..snr import ChannelParams, DiscreteDistribution, Scheme, path_gains
from ..tool import db_to_linear


@dataclass(frozen=True, eq=False)
class GainMatrix:
    """Path gains Ω_{i,j} = R_{i,j}^(-α) from transmitter Y_j to base station X_i.

    Attributes:
        values: (N, M+1) array; column 0 is the source transmitter.
    """

    values: np.ndarray

    def __post_init__(self):
        if not np.all(np.isfinite(self.values)) or np.any(self.values <= 0):
            raise ValueError("Path gains must be positive and finite")

    @classmethod
    def from_realization(
        cls, realization: NetworkRealization, n: int, m: int, alpha: float
    ) -> GainMatrix:
        receivers = realization.base_stations[:n]
        transmitters = np.vstack(([0.0, 0.0], realization.interferers[:m]))
        distances = np.hypot(
            receivers[:, None, 0] - transmitters[None, :, 0],
            receivers[:, None, 1] - transmitters[None, :, 1],
        )
        return cls(path_gains(distances, alpha))

    def __getitem__(self, index) -> float:
        i, j = index
        return float(self.values[i - 1, j])

    @property
    def n(self) -> int:
        return self.values.shape[0]

    @property
    def m(self) -> int:
        return self.values.shape[1] - 1


@dataclass(frozen=True, eq=False)
class TransmitterColumns:
    """Per-transmitter blocking statistics and path gains of one realization.

    Attributes:
        stats: Blocking statistics of Y_j against the serving base stations, j = 0..M.
        gains: Path gains of the same paths.
    """

    stats: List[PairBlockingStats]
    gains: GainMatrix

    @property
    def m(self) -> int:
        return len(self.stats) - 1

    def head(self, m: int) -> TransmitterColumns:
        """The columns of the source and the first m interferers."""
        if m > self.m:
            raise ValueError(f"Only {self.m} interferers available, asked for {m}")

        return TransmitterColumns(self.stats[: m + 1], GainMatrix(self.gains.values[:, : m + 1]))


def column_stats(
    realization: NetworkRealization, n: int, m: int, params: ChannelParams
) -> TransmitterColumns:
    if n not in (1, 2):
        raise ValueError(f"Macrodiversity order must be 1 or 2, got {n}")
    if len(realization.base_stations) < n:
        raise ValueError(
            f"Realization has {len(realization.base_stations)} base stations, need {n}"
        )
    if realization.m < m:
        raise ValueError(f"Realization has {realization.m} interferers, need {m}")

    stats = []
    for j in range(m + 1):
        tx = realization.transmitter(j)
        if n == 2:
            stats.append(
                pair_stats(
                    tx,
                    realization.base_station(1),
                    realization.base_station(2),
                    params.width,
                    params.lambda_bl,
                )
            )
        else:
            stats.append(
                path_stats(tx, realization.base_station(1), params.width, params.lambda_bl)
            )

    return TransmitterColumns(stats, GainMatrix.from_realization(realization, n, m, params.alpha))


def state_sinrs(bits: np.ndarray, gains: np.ndarray, snr0: float) -> np.ndarray:
    # Scaled by SNR_0 so that an interference-free link gives exactly SNR_0 * Ω
    clear = 1.0 - bits
    received = snr0 * clear * gains[None, :, :]
    interference = received[:, :, 1:].sum(axis=2)

    return received[:, :, 0] / (1.0 + interference)


def sinr_for_state(state: BlockingState, gains: GainMatrix, snr0_db: float, i: int) -> float:
    """SINR at base station X_i for one blocking state."""
    if state.bits.shape != gains.values.shape:
        raise ValueError(
            f"State is {state.bits.shape} but gains are {gains.values.shape}"
        )

    rows = state_sinrs(state.bits[None, :, :], gains.values, db_to_linear(snr0_db))
    return float(rows[0, i - 1])


def combine(sinr1, sinr2, scheme: Union[str, Scheme]):
    """Selection keeps the stronger branch, diversity adds both branches."""
    if Scheme.of(scheme) is Scheme.selection:
        return np.maximum(sinr1, sinr2)

    return np.add(sinr1, sinr2)


def distribution_from_columns(
    columns: TransmitterColumns,
    n: int,
    scheme: Union[str, Scheme],
    snr0_db: float,
    correlated: bool = True,
) -> DiscreteDistribution:
    stats = columns.stats if correlated else [s.independent() for s in columns.stats]
    snr0 = db_to_linear(snr0_db)

    # Equal SINRs are merged per run of states so only distinct atoms accumulate
    values, weights = [], []
    for space in iter_state_space(stats, n):
        rows = state_sinrs(space.bits, columns.gains.values, snr0)
        sinrs = rows[:, 0] if n == 1 else combine(rows[:, 0], rows[:, 1], scheme)
        merged, inverse = np.unique(sinrs, return_inverse=True)
        values.append(merged)
        weights.append(np.bincount(inverse.ravel(), weights=space.probabilities, minlength=len(merged)))

    return DiscreteDistribution.from_atoms(np.concatenate(values), np.concatenate(weights))


def sinr_distribution(
    realization: NetworkRealization,
    n: int,
    m: int,
    scheme: Union[str, Scheme],
    params: ChannelParams,
    correlated: bool = True,
) -> DiscreteDistribution:
    """Exact SINR distribution of one realization with m interferers.

    States of the blocking matrix that give the same SINR are merged into one atom.
    """
    columns = column_stats(realization, n, m, params)
    return distribution_from_columns(columns, n, scheme, params.snr0_db, correlated)
