import itertools
import math
import tracemalloc
from collections import defaultdict

import numpy as np
import pytest

from macroblock.blocking import pair_stats
from macroblock.placement import (
    BASE_STATION_STREAM,
    INTERFERER_STREAM,
    NetworkRealization,
    RngStream,
    place_interferers,
    sample_base_stations,
)
from macroblock.sinr import (
    BlockingState,
    GainMatrix,
    TransmitterColumns,
    blocking_state_space,
    column_stats,
    combine,
    distribution_from_columns,
    iter_state_space,
    sinr_distribution,
    sinr_for_state,
    state_bits,
)
from macroblock.snr import ChannelParams, snr_distribution
from macroblock.tool import db_to_linear

SNR0 = db_to_linear(15.0)


def _realization(index, n, m, seed=3, lambda_bs=0.3):
    stream = RngStream(seed, index)
    points = sample_base_stations(lambda_bs, n + m, stream.substream(BASE_STATION_STREAM))
    realization = NetworkRealization(base_stations=points, lambda_bs=lambda_bs, index=index)
    interferers = place_interferers(
        realization, n, m, lambda_bs, stream.substream(INTERFERER_STREAM)
    )
    return NetworkRealization(
        base_stations=points, lambda_bs=lambda_bs, interferers=interferers, index=index
    )


def test_sinr_for_state_example():
    gains = GainMatrix(np.array([[0.125, 0.05]]))
    clear = BlockingState(np.zeros((1, 2), dtype=np.uint8), 1.0)
    assert sinr_for_state(clear, gains, 15.0, 1) == pytest.approx(1.5314, abs=1e-4)

    blocked_source = BlockingState(np.array([[1, 0]], dtype=np.uint8), 1.0)
    assert sinr_for_state(blocked_source, gains, 15.0, 1) == 0.0

    blocked_interferer = BlockingState(np.array([[0, 1]], dtype=np.uint8), 1.0)
    assert sinr_for_state(blocked_interferer, gains, 15.0, 1) == pytest.approx(SNR0 * 0.125)


def test_sinr_for_state_checks_shapes():
    gains = GainMatrix(np.array([[0.125, 0.05]]))
    with pytest.raises(ValueError):
        sinr_for_state(BlockingState(np.zeros((2, 2), dtype=np.uint8), 1.0), gains, 15.0, 1)


def test_gain_matrix_rejects_nonpositive_gains():
    with pytest.raises(ValueError):
        GainMatrix(np.array([[0.1, 0.0]]))


def test_combine():
    assert combine(0.0, 2.5, "selection") == 2.5
    assert combine(1.5, 2.5, "diversity") == 4.0

    rng = np.random.default_rng(1)
    a, b = rng.exponential(size=1000), rng.exponential(size=1000)
    assert np.all(combine(a, b, "selection") <= combine(a, b, "diversity"))


def test_state_bits_layout():
    bits = state_bits(2, 2)
    assert bits.shape == (16, 2, 2)
    # State 6 = 0b0110: bit 1 -> row 1 col 0, bit 2 -> row 0 col 1
    assert bits[6].tolist() == [[0, 1], [1, 0]]


def test_state_space_sizes():
    stats = pair_stats((0, 0), (1, 0), (0, 1.5), 0.8, 0.6)
    assert len(blocking_state_space([stats], 2)) == 4
    assert len(blocking_state_space([stats] * 3, 2)) == 64
    assert len(blocking_state_space([stats] * 4, 1)) == 16

    space = blocking_state_space([stats], 2)
    for state in space:
        b1, b2 = state.bits[:, 0]
        assert state.probability == pytest.approx(stats.pmf(b1, b2), abs=1e-15)

    with pytest.raises(ValueError, match="state space too large"):
        blocking_state_space([stats] * 13, 2)


def test_state_bits_runs_match_full_table():
    bits = state_bits(2, 3)
    assert bits.dtype == np.uint8
    assert np.array_equal(state_bits(2, 3, 10, 27), bits[10:27])


def test_state_space_walk_matches_full_space():
    first = pair_stats((0, 0), (1, 0), (0.8, 0.9), 0.8, 0.6)
    second = pair_stats((0.5, -1.0), (1, 0), (0.8, 0.9), 0.8, 0.6)
    space = blocking_state_space([first, second, first], 2)

    pieces = list(iter_state_space([first, second, first], 2, chunk=5))
    assert [piece.offset for piece in pieces] == list(range(0, 64, 5))
    assert np.array_equal(np.concatenate([p.bits for p in pieces]), space.bits)
    assert np.allclose(np.concatenate([p.probabilities for p in pieces]), space.probabilities)


def test_large_state_space_stays_in_bounded_memory():
    params = ChannelParams(width=0.8, lambda_bl=0.6)
    realization = _realization(0, 2, 9)
    columns = column_stats(realization, 2, 9, params)

    tracemalloc.start()
    try:
        dist = distribution_from_columns(columns, 2, "diversity", 15)
        _, peak = tracemalloc.get_traced_memory()
    finally:
        tracemalloc.stop()

    # 2^20 states; a full table of bits and SINRs alone would take several hundred MB
    assert peak < 200 * 2 ** 20
    assert dist.probabilities.sum() == pytest.approx(1.0, abs=1e-9)
    assert dist.cdf(0.0) == pytest.approx(columns.stats[0].pmf(1, 1), abs=1e-12)


def test_state_probabilities_are_column_products():
    first = pair_stats((0, 0), (1, 0), (0.8, 0.9), 0.8, 0.6)
    second = pair_stats((0.5, -1.0), (1, 0), (0.8, 0.9), 0.8, 0.6)
    space = blocking_state_space([first, second], 2)
    assert len(space) == 16
    for state in space:
        expected = first.pmf(*state.bits[:, 0]) * second.pmf(*state.bits[:, 1])
        assert state.probability == pytest.approx(expected, abs=1e-15)


def test_state_space_normalization():
    params = ChannelParams(width=0.8, lambda_bl=0.6)
    for index in range(100):
        realization = _realization(index, 2, 6)
        columns = column_stats(realization, 2, 6, params)
        for m in range(7):
            space = blocking_state_space(columns.head(m).stats, 2)
            assert abs(space.probabilities.sum() - 1.0) <= 1e-12


def test_no_interferers_matches_snr():
    params = ChannelParams(width=0.8, lambda_bl=0.6)
    for index in range(200):
        realization = _realization(index, 2, 0, seed=12)
        for n, scheme, correlated in itertools.product((1, 2), ("selection", "diversity"), (True, False)):
            snr = snr_distribution(realization, n, scheme, params, correlated)
            sinr = sinr_distribution(realization, n, 0, scheme, params, correlated)
            assert len(snr) == len(sinr)
            assert np.allclose(snr.values, sinr.values, rtol=1e-12, atol=0.0)
            assert np.allclose(snr.probabilities, sinr.probabilities, rtol=0.0, atol=1e-12)


def test_no_blockage_single_atom():
    realization = NetworkRealization(
        base_stations=np.array([[1.0, 0.0], [0.0, 1.6]]),
        lambda_bs=0.3,
        interferers=np.array([[0.3, 1.8]]),
    )
    params = ChannelParams(lambda_bl=0.0)
    gains = GainMatrix.from_realization(realization, 1, 1, 3.0)

    dist = sinr_distribution(realization, 1, 1, "selection", params)
    assert len(dist) == 1
    assert dist.values[0] == pytest.approx(gains[1, 0] / (1 / SNR0 + gains[1, 1]))


def _brute_force(realization, m, scheme, params):
    gains = GainMatrix.from_realization(realization, 2, m, params.alpha)
    stats = [
        pair_stats(realization.transmitter(j), realization.base_station(1),
                   realization.base_station(2), params.width, params.lambda_bl)
        for j in range(m + 1)
    ]

    atoms = defaultdict(float)
    for outcome in itertools.product([(0, 0), (0, 1), (1, 0), (1, 1)], repeat=m + 1):
        probability = math.prod(stats[j].pmf(*outcome[j]) for j in range(m + 1))
        sinrs = []
        for i in (1, 2):
            signal = (1 - outcome[0][i - 1]) * gains[i, 0]
            interference = sum((1 - outcome[j][i - 1]) * gains[i, j] for j in range(1, m + 1))
            sinrs.append(signal / (1 / params.snr0 + interference))
        combined = max(sinrs) if scheme == "selection" else sum(sinrs)
        atoms[combined] += probability

    return atoms


@pytest.mark.parametrize("scheme", ["selection", "diversity"])
def test_matches_brute_force_enumeration(scheme):
    realization = NetworkRealization(
        base_stations=np.array([[0.9, 0.2], [-0.4, 1.3], [1.8, 1.1], [-1.5, -1.6]]),
        lambda_bs=0.3,
        interferers=np.array([[1.6, 1.5], [-1.2, -1.9]]),
    )
    params = ChannelParams(width=0.8, lambda_bl=0.6)
    dist = sinr_distribution(realization, 2, 2, scheme, params)

    atoms = _brute_force(realization, 2, scheme, params)
    values = np.array(sorted(atoms))
    expected = np.cumsum([atoms[v] for v in values])
    # Just above each atom, clear of rounding differences in the SINR values
    for threshold in values * (1 + 1e-9):
        reference = expected[np.searchsorted(values, threshold, side="right") - 1]
        assert dist.cdf(threshold) == pytest.approx(reference, abs=1e-12)


def test_selection_dominates_diversity_with_interference():
    params = ChannelParams(width=0.8, lambda_bl=0.6)
    grid = db_to_linear(np.arange(-30.0, 40.5, 0.5))
    for index in range(50):
        realization = _realization(index, 2, 3)
        selection = sinr_distribution(realization, 2, 3, "selection", params)
        diversity = sinr_distribution(realization, 2, 3, "diversity", params)
        assert np.all(selection.cdf(grid) >= diversity.cdf(grid) - 1e-12)


def test_outage_grows_with_interferers():
    params = ChannelParams(width=0.6, lambda_bl=0.6)
    beta = db_to_linear(15.0)
    for index in range(50):
        realization = _realization(index, 2, 6, lambda_bs=0.8)
        columns = column_stats(realization, 2, 6, params)
        outages = [
            distribution_from_columns(columns.head(m), 2, "diversity", 15.0).cdf(beta)
            for m in range(7)
        ]
        assert np.all(np.diff(outages) >= -1e-12)


def test_uncorrelated_columns_ignore_correlation_flag():
    params = ChannelParams(width=0.8, lambda_bl=0.6)
    realization = _realization(4, 2, 2)
    columns = column_stats(realization, 2, 2, params)
    independent = TransmitterColumns([s.independent() for s in columns.stats], columns.gains)

    a = distribution_from_columns(independent, 2, "diversity", 15.0, correlated=True)
    b = distribution_from_columns(columns, 2, "diversity", 15.0, correlated=False)
    assert np.array_equal(a.values, b.values)
    assert a.probabilities == pytest.approx(b.probabilities, abs=1e-15)


def test_column_head():
    params = ChannelParams()
    realization = _realization(0, 2, 3)
    columns = column_stats(realization, 2, 3, params)
    assert columns.m == 3
    assert columns.head(1).gains.values.shape == (2, 2)
    with pytest.raises(ValueError):
        columns.head(4)
