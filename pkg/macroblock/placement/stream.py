from __future__ import annotations

from typing import Optional, Tuple, Union

import numpy as np

# Positions within a realization's substream. Each consumer draws from its own child
# so the number of draws one consumer makes never shifts another's.
BASE_STATION_STREAM = 0
INTERFERER_STREAM = 1
BLOCKAGE_STREAM = 2

_MAX_SEED = 2 ** 64


class RngStream:
    """A deterministic random stream identified by a 64-bit seed and a substream path.

    Streams with the same seed and path produce the same draws. Children made with
    substream() are statistically independent of their parent and of each other.

    Attributes:
        seed: The 64-bit experiment seed.
        path: Substream indices, the first of which is the realization index.
    """

    def __init__(self, seed: int, index: Union[int, Tuple[int, ...]] = ()) -> None:
        if not 0 <= int(seed) < _MAX_SEED:
            raise ValueError(f"Seed is not a 64-bit unsigned integer: {seed}")

        path = (index,) if isinstance(index, (int, np.integer)) else tuple(index)
        if any(int(i) < 0 for i in path):
            raise ValueError(f"Substream index is negative: {path}")

        self.seed = int(seed)
        self.path = tuple(int(i) for i in path)
        self.generator = np.random.default_rng(
            np.random.SeedSequence(self.seed, spawn_key=self.path)
        )

    def __repr__(self) -> str:
        return f"RngStream(seed={self.seed}, path={self.path})"

    @property
    def index(self) -> Optional[int]:
        return self.path[0] if len(self.path) > 0 else None

    def substream(self, position: int) -> RngStream:
        return RngStream(self.seed, self.path + (position,))

    def random(self, size=None):
        """Uniform draws on [0, 1)."""
        return self.generator.random(size)

    def poisson(self, mean: float, size=None):
        if size is None:
            return int(self.generator.poisson(mean))

        return self.generator.poisson(mean, size)
