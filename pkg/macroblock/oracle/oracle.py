from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple, Union

import numpy as np

from ..geometry import Point2D, PointLike, blocks_many
from ..placement import NetworkRealization, RngStream, sample_blockage_fields
from ..snr import ChannelParams, Scheme
from ..sinr import GainMatrix, combine, sinr_distribution, state_sinrs

logger = logging.getLogger(__name__)

# Trials drawn per vectorized batch; bounds memory at high blockage counts
_TRIAL_CHUNK = 20000
# Relative slack when matching sampled SINRs to exact atoms
_ATOM_SLACK = 1e-9

Path = Tuple[PointLike, PointLike]


@dataclass(frozen=True, eq=False)
class OracleReport:
    """Outcome of a geometric blockage experiment.

    Attributes:
        pmf: 2x2 empirical pmf of the two blocking indicators, indexed [b1, b2].
        plos: Fraction of trials in which at least one path was clear.
        trials: Number of blockage draws.
        stderr: Binomial standard error of each pmf entry.
        samples: Per-trial combined SINR, when the experiment produced one.
    """

    pmf: np.ndarray
    plos: float
    trials: int
    stderr: np.ndarray
    samples: Optional[np.ndarray] = None

    @property
    def plos_stderr(self) -> float:
        return math.sqrt(self.plos * (1.0 - self.plos) / self.trials)


def covering_radius(paths: Sequence[Path], width: float) -> float:
    """Radius of an origin-centered disk holding every blockage that can touch a path."""
    return max(Point2D.of(tx).norm() + (Point2D.of(rx) - tx).norm() for tx, rx in paths) + width


def draw_blocking(
    paths: Sequence[Path],
    width: float,
    lambda_bl: float,
    trials: int,
    rng: RngStream,
) -> np.ndarray:
    """Draws trials independent blockage fields and tests every path against each.

    Returns a (trials, len(paths)) boolean array; entry [t, k] is True when some
    blockage of trial t falls in the rectangle of path k. All paths of one trial
    share the same blockages.
    """
    if trials < 1:
        raise ValueError(f"Trial count is not positive: {trials}")
    if lambda_bl < 0:
        raise ValueError(f"Blockage density is negative: {lambda_bl}")

    blocked = np.zeros((trials, len(paths)), dtype=bool)
    if lambda_bl == 0:
        return blocked

    radius = covering_radius(paths, width)
    for start in range(0, trials, _TRIAL_CHUNK):
        stop = min(start + _TRIAL_CHUNK, trials)
        centers, owner = sample_blockage_fields(lambda_bl, radius, stop - start, rng)
        if len(centers) == 0:
            continue

        for k, (tx, rx) in enumerate(paths):
            hits = blocks_many(centers, tx, rx, width)
            blocked[start:stop, k] = np.bincount(owner[hits], minlength=stop - start) > 0

    return blocked


def _report(b1: np.ndarray, b2: np.ndarray, samples: Optional[np.ndarray] = None) -> OracleReport:
    trials = len(b1)
    counts = np.zeros((2, 2))
    np.add.at(counts, (b1.astype(int), b2.astype(int)), 1.0)
    pmf = counts / trials
    stderr = np.sqrt(pmf * (1.0 - pmf) / trials)

    return OracleReport(
        pmf=pmf, plos=1.0 - pmf[1, 1], trials=trials, stderr=stderr, samples=samples
    )


def empirical_pair_pmf(
    tx: PointLike,
    x1: PointLike,
    x2: PointLike,
    width: float,
    lambda_bl: float,
    trials: int,
    rng: RngStream,
) -> OracleReport:
    """Tallies how often the paths tx→x1 and tx→x2 are blocked by random blockages."""
    blocked = draw_blocking([(tx, x1), (tx, x2)], width, lambda_bl, trials, rng)
    return _report(blocked[:, 0], blocked[:, 1])


def empirical_sinr_samples(
    realization: NetworkRealization,
    n: int,
    m: int,
    scheme: Union[str, Scheme],
    params: ChannelParams,
    trials: int,
    rng: RngStream,
) -> np.ndarray:
    """Combined SINR of the realization under trials random blockage fields.

    Every path from Y_0..Y_m to X_1..X_n is tested against the same blockages, so
    blocking shared between transmitters is kept.
    """
    if n not in (1, 2):
        raise ValueError(f"Macrodiversity order must be 1 or 2, got {n}")
    if realization.m < m:
        raise ValueError(f"Realization has {realization.m} interferers, need {m}")

    paths = [
        (realization.transmitter(j), realization.base_station(i))
        for j in range(m + 1)
        for i in range(1, n + 1)
    ]
    blocked = draw_blocking(paths, params.width, params.lambda_bl, trials, rng)
    bits = blocked.reshape(trials, m + 1, n).transpose(0, 2, 1).astype(np.uint8)

    gains = GainMatrix.from_realization(realization, n, m, params.alpha)
    rows = state_sinrs(bits, gains.values, params.snr0)
    logger.debug("Drew %d blockage fields for realization %s", trials, realization.index)
    if n == 1:
        return rows[:, 0]

    return combine(rows[:, 0], rows[:, 1], scheme)


def empirical_los(
    realization: NetworkRealization, n: int, params: ChannelParams, trials: int, rng: RngStream
) -> OracleReport:
    """Blocking of the source's paths to its n nearest base stations.

    With n = 1 the second indicator repeats the first.
    """
    if n == 1:
        paths = [(realization.source, realization.base_station(1))]
    else:
        paths = [(realization.source, realization.base_station(i)) for i in (1, 2)]

    blocked = draw_blocking(paths, params.width, params.lambda_bl, trials, rng)
    return _report(blocked[:, 0], blocked[:, -1])


@dataclass(frozen=True, eq=False)
class SinrDeviation:
    """Gap between the sampled and the exact SINR CDF of one realization.

    Attributes:
        thresholds: Atoms of the exact distribution, where the CDFs are compared.
        exact: Exact CDF at each threshold.
        empirical: Fraction of sampled SINRs at or below each threshold.
        stderr: Binomial standard error of each empirical value.
        trials: Number of blockage draws.
    """

    thresholds: np.ndarray
    exact: np.ndarray
    empirical: np.ndarray
    stderr: np.ndarray
    trials: int

    @property
    def gaps(self) -> np.ndarray:
        return self.empirical - self.exact

    @property
    def max_gap(self) -> float:
        return float(np.max(np.abs(self.gaps)))

    @property
    def z_score(self) -> float:
        """The largest gap in units of its standard error."""
        return float(np.max(np.abs(self.gaps) / self.stderr))

    def within(self, sigmas: float = 3.0) -> bool:
        return bool(np.all(np.abs(self.gaps) <= sigmas * self.stderr + 1e-12))


def sinr_deviation(
    realization: NetworkRealization,
    n: int,
    m: int,
    scheme: Union[str, Scheme],
    params: ChannelParams,
    trials: int,
    rng: RngStream,
    correlated: bool = True,
) -> SinrDeviation:
    """Measures how far sampled SINRs stray from the exact distribution.

    The exact distribution treats the blocking of different transmitters as
    independent, while sampled blockages are shared by every path. Interferers near
    the source's paths make the two disagree by many standard errors; the gap is
    logged and returned, never corrected.
    """
    samples = np.sort(empirical_sinr_samples(realization, n, m, scheme, params, trials, rng))
    dist = sinr_distribution(realization, n, m, scheme, params, correlated)

    thresholds = dist.values
    exact = np.asarray(dist.cdf(thresholds), dtype=float)
    empirical = np.searchsorted(samples, thresholds * (1.0 + _ATOM_SLACK), side="right") / trials
    stderr = np.sqrt(np.maximum(exact * (1.0 - exact), 1e-12) / trials)

    deviation = SinrDeviation(thresholds, exact, empirical, stderr, trials)
    if not deviation.within():
        logger.info(
            "Realization %s: sampled SINR CDF is off the exact one by %.4g (%.1f standard errors)",
            realization.index,
            deviation.max_gap,
            deviation.z_score,
        )

    return deviation
