from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Optional, Sequence

import numpy as np

from ..blocking import PairBlockingStats

# Exact enumeration is refused beyond 2^24 states
MAX_STATE_BITS = 24
# States materialized at once when a state space is walked in pieces
STATE_CHUNK = 2 ** 16


@dataclass(frozen=True, eq=False)
class BlockingState:
    """One outcome of the blocking matrix B.

    Attributes:
        bits: (N, M+1) array; bits[i-1, j] = 1 when the path from Y_j to X_i is blocked.
        probability: Probability of this outcome.
    """

    bits: np.ndarray
    probability: float

    def blocked(self, i: int, j: int) -> bool:
        return bool(self.bits[i - 1, j])


def state_bits(n: int, columns: int, start: int = 0, stop: Optional[int] = None) -> np.ndarray:
    """Returns the blocking matrices of states start..stop-1 (all states by default) as
    a (stop - start, n, columns) uint8 array.

    State k holds bit (j*n + i) of k in row i, column j.
    """
    total = n * columns
    if total > MAX_STATE_BITS:
        raise ValueError(f"state space too large: 2^{total} states")
    if stop is None:
        stop = 2 ** total

    codes = np.arange(start, stop, dtype="<u4")
    flat = np.unpackbits(codes.view(np.uint8).reshape(-1, 4), axis=1, bitorder="little")
    return flat[:, :total].reshape(-1, columns, n).transpose(0, 2, 1)


@dataclass(frozen=True, eq=False)
class BlockingStateSpace:
    """Blocking states of a realization with their probabilities, in state order.

    A space may hold only a contiguous run of the states, starting at state offset.
    """

    bits: np.ndarray
    probabilities: np.ndarray
    offset: int = 0

    def __len__(self) -> int:
        return len(self.probabilities)

    def __getitem__(self, k: int) -> BlockingState:
        return BlockingState(self.bits[k], float(self.probabilities[k]))

    def __iter__(self) -> Iterator[BlockingState]:
        for k in range(len(self)):
            yield self[k]

    @property
    def n(self) -> int:
        return self.bits.shape[1]

    @property
    def m(self) -> int:
        return self.bits.shape[2] - 1


def _check_columns(pair_stats_per_tx: Sequence[PairBlockingStats], n: int) -> int:
    if n not in (1, 2):
        raise ValueError(f"Macrodiversity order must be 1 or 2, got {n}")
    columns = len(pair_stats_per_tx)
    if columns < 1:
        raise ValueError("Need blocking statistics for at least the source transmitter")
    if n * columns > MAX_STATE_BITS:
        raise ValueError(
            f"state space too large: 2^{n * columns} states for N={n}, M={columns - 1}"
        )

    return columns


def iter_state_space(
    pair_stats_per_tx: Sequence[PairBlockingStats], n: int, chunk: int = STATE_CHUNK
) -> Iterator[BlockingStateSpace]:
    """Walks the blocking matrix states in runs of at most chunk states.

    Memory stays proportional to chunk whatever the number of interferers.
    """
    columns = _check_columns(pair_stats_per_tx, n)
    if chunk < 1:
        raise ValueError(f"Chunk size is not positive: {chunk}")

    column_index = np.arange(columns)
    if n == 2:
        pmfs = np.stack([stats.joint for stats in pair_stats_per_tx])
    else:
        marginals = np.stack([stats.marginal(1) for stats in pair_stats_per_tx])

    size = 2 ** (n * columns)
    for start in range(0, size, chunk):
        bits = state_bits(n, columns, start, min(start + chunk, size))
        if n == 2:
            factors = pmfs[column_index, bits[:, 0, :], bits[:, 1, :]]
        else:
            factors = marginals[column_index, bits[:, 0, :]]
        yield BlockingStateSpace(bits=bits, probabilities=np.prod(factors, axis=1), offset=start)


def blocking_state_space(
    pair_stats_per_tx: Sequence[PairBlockingStats], n: int
) -> BlockingStateSpace:
    """Enumerates the blocking matrix states for transmitters j = 0..M.

    Columns are independent of each other; within a column the pair of paths follows
    the column's joint pmf (n = 2) or the marginal of X_1 (n = 1).
    """
    pieces = list(iter_state_space(pair_stats_per_tx, n))
    if len(pieces) == 1:
        return pieces[0]

    return BlockingStateSpace(
        bits=np.concatenate([piece.bits for piece in pieces]),
        probabilities=np.concatenate([piece.probabilities for piece in pieces]),
    )
