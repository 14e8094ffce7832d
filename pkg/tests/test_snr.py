import math

import numpy as np
import pytest

from macroblock.blocking import pair_stats
from macroblock.placement import NetworkRealization, RngStream, sample_base_stations
from macroblock.snr import (
    ChannelParams,
    DiscreteDistribution,
    Scheme,
    coverage,
    outage,
    path_gains,
    snr_distribution,
)
from macroblock.tool import db_to_linear, linear_to_db

SNR0 = db_to_linear(15.0)


def _fixed(*points):
    return NetworkRealization(base_stations=np.array(points, dtype=float), lambda_bs=0.3)


PAIR = _fixed((1.0, 0.0), (1.5 * math.cos(math.pi / 3), 1.5 * math.sin(math.pi / 3)))


def test_units():
    assert db_to_linear(10.0) == pytest.approx(10.0)
    assert db_to_linear(np.array([0.0, 20.0])) == pytest.approx([1.0, 100.0])
    assert linear_to_db(100.0) == pytest.approx(20.0)
    with pytest.raises(ValueError):
        linear_to_db(0.0)


def test_distribution_merges_and_normalizes():
    dist = DiscreteDistribution.from_atoms([4.0, 0.0, 1.0, 4.0, 2.0], [0.25, 0.25, 0.25, 0.25, 0.0])
    assert dist.atoms == [(0.0, 0.25), (1.0, 0.25), (4.0, 0.5)]
    assert dist.mean() == pytest.approx(2.25)

    with pytest.raises(ValueError):
        DiscreteDistribution.from_atoms([1.0, 2.0], [0.5, 0.6])
    with pytest.raises(ValueError):
        DiscreteDistribution.from_atoms([-1.0], [1.0])
    with pytest.raises(ValueError):
        DiscreteDistribution.from_atoms([], [])


def test_distribution_from_samples():
    dist = DiscreteDistribution.from_samples([3.0, 1.0, 3.0, 3.0])
    assert dist.atoms == [(1.0, 0.25), (3.0, 0.75)]


def test_outage_examples():
    dist = DiscreteDistribution.from_atoms([0.0, 1.0, 4.0], [0.25, 0.25, 0.5])
    assert outage(dist, 0.0) == pytest.approx(0.5)
    assert coverage(dist, 0.0) == pytest.approx(0.5)
    assert outage(dist, 10.0) == 1.0

    positive = DiscreteDistribution.from_atoms([1.0, 4.0], [0.5, 0.5])
    assert outage(positive, -10.0) == 0.0


def test_cdf_on_grid():
    dist = DiscreteDistribution.from_atoms([0.0, 1.0, 4.0], [0.25, 0.25, 0.5])
    assert dist.cdf(np.array([-1.0, 0.0, 0.5, 1.0, 3.9, 4.0])) == pytest.approx(
        [0.0, 0.25, 0.25, 0.5, 0.5, 1.0]
    )


def test_channel_params_validation():
    with pytest.raises(ValueError):
        ChannelParams(alpha=0.0)
    with pytest.raises(ValueError):
        ChannelParams(width=-1.0)
    with pytest.raises(ValueError):
        ChannelParams(lambda_bl=-0.1)
    assert ChannelParams().snr0 == pytest.approx(SNR0)


def test_no_blockage_gives_one_atom():
    params = ChannelParams(lambda_bl=0.0)
    omega = path_gains(PAIR.distances(), 3.0)

    dist = snr_distribution(PAIR, 2, "diversity", params)
    assert len(dist) == 1
    assert dist.values[0] == pytest.approx(SNR0 * omega.sum())

    single = snr_distribution(PAIR, 1, "selection", params)
    assert single.atoms == [(pytest.approx(SNR0 * omega[0]), 1.0)]


def test_selection_with_equal_marginals():
    """Two equidistant base stations at p = 1/2 without correlation."""
    params = ChannelParams(width=0.8, lambda_bl=0.6)
    distance = math.log(2) / (params.lambda_bl * params.width)
    realization = _fixed((distance, 0.0), (-distance, 0.0))

    dist = snr_distribution(realization, 2, Scheme.selection, params, correlated=False)
    assert dist.values == pytest.approx([0.0, SNR0 * distance ** -3])
    assert dist.probabilities == pytest.approx([0.25, 0.75])


def test_diversity_cdf_steps():
    params = ChannelParams(width=0.8, lambda_bl=0.6)
    stats = pair_stats(PAIR.source, PAIR.base_station(1), PAIR.base_station(2), 0.8, 0.6)
    r1, r2 = SNR0 * path_gains(PAIR.distances(), 3.0)
    rh = stats.rho * stats.h

    dist = snr_distribution(PAIR, 2, "diversity", params)
    assert dist.cdf(0.0) == pytest.approx(stats.p1 * stats.p2 + rh, abs=1e-12)
    assert dist.cdf(r2) == pytest.approx(stats.p1, abs=1e-12)
    assert dist.cdf(r1) == pytest.approx(stats.p1 + stats.q1 * stats.p2 - rh, abs=1e-12)
    assert dist.cdf(r1 + r2) == 1.0


def test_selection_cdf_plateau():
    params = ChannelParams(width=0.8, lambda_bl=0.6)
    stats = pair_stats(PAIR.source, PAIR.base_station(1), PAIR.base_station(2), 0.8, 0.6)
    r1, r2 = SNR0 * path_gains(PAIR.distances(), 3.0)

    dist = snr_distribution(PAIR, 2, "selection", params)
    assert dist.cdf(r2) == pytest.approx(stats.p1, abs=1e-12)
    assert dist.cdf(0.5 * (r1 + r2)) == pytest.approx(stats.p1, abs=1e-12)
    assert dist.cdf(r1) == 1.0


def test_uncorrelated_is_product_pmf():
    params = ChannelParams(width=0.8, lambda_bl=0.6)
    stats = pair_stats(PAIR.source, PAIR.base_station(1), PAIR.base_station(2), 0.8, 0.6)
    r1, r2 = SNR0 * path_gains(PAIR.distances(), 3.0)

    dist = snr_distribution(PAIR, 2, "diversity", params, correlated=False)
    expected = {
        0.0: stats.p1 * stats.p2,
        r2: stats.p1 * stats.q2,
        r1: stats.q1 * stats.p2,
        r1 + r2: stats.q1 * stats.q2,
    }
    for value, probability in dist:
        assert probability == pytest.approx(expected[value], abs=1e-12)


def test_selection_dominates_diversity():
    params = ChannelParams(width=0.8, lambda_bl=0.6)
    grid = db_to_linear(np.arange(-30.0, 40.5, 0.5))
    for index in range(200):
        points = sample_base_stations(0.3, 2, RngStream(8, index))
        realization = NetworkRealization(base_stations=points, lambda_bs=0.3)
        for correlated in (True, False):
            selection = snr_distribution(realization, 2, "selection", params, correlated)
            diversity = snr_distribution(realization, 2, "diversity", params, correlated)
            assert np.all(selection.cdf(grid) >= diversity.cdf(grid) - 1e-12)


def test_snr_needs_enough_base_stations():
    with pytest.raises(ValueError):
        snr_distribution(_fixed((1.0, 0.0)), 2, "diversity", ChannelParams())
    with pytest.raises(ValueError):
        snr_distribution(PAIR, 3, "diversity", ChannelParams())
    with pytest.raises(ValueError, match="Unknown combining scheme"):
        snr_distribution(PAIR, 2, "mrc", ChannelParams())
