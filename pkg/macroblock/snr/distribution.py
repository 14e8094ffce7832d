from __future__ import annotations

from typing import Iterator, Sequence, Tuple, Union

import numpy as np

_SUM_TOLERANCE = 1e-9


class DiscreteDistribution:
    """A finite distribution over nonnegative values.

    Atoms are kept sorted by value with duplicates merged and zero-probability atoms
    dropped. Probabilities are normalized to sum to one.

    Attributes:
        values: Strictly increasing atom values.
        probabilities: Probability of each atom.
    """

    def __init__(self, values: np.ndarray, probabilities: np.ndarray) -> None:
        self.values = values
        self.probabilities = probabilities

    @classmethod
    def from_atoms(
        cls,
        values: Union[Sequence[float], np.ndarray],
        probabilities: Union[Sequence[float], np.ndarray],
    ) -> DiscreteDistribution:
        values = np.asarray(values, dtype=float).ravel()
        probabilities = np.asarray(probabilities, dtype=float).ravel()
        if values.shape != probabilities.shape:
            raise ValueError(
                f"Got {len(values)} values but {len(probabilities)} probabilities"
            )
        if len(values) == 0:
            raise ValueError("Distribution has no atoms")
        if not np.all(np.isfinite(values)) or np.any(values < 0):
            raise ValueError("Atom values must be finite and nonnegative")
        if np.any(probabilities < 0):
            raise ValueError("Atom probabilities must be nonnegative")

        total = probabilities.sum()
        if abs(total - 1.0) > _SUM_TOLERANCE:
            raise ValueError(f"Atom probabilities sum to {total}")

        # Exact-equality merge; np.unique sorts as well
        merged_values, inverse = np.unique(values, return_inverse=True)
        merged = np.bincount(inverse.ravel(), weights=probabilities, minlength=len(merged_values))
        keep = merged > 0.0

        return cls(merged_values[keep], merged[keep] / merged[keep].sum())

    @classmethod
    def from_samples(cls, samples: Union[Sequence[float], np.ndarray]) -> DiscreteDistribution:
        """The empirical distribution of the samples, each weighted equally."""
        samples = np.asarray(samples, dtype=float).ravel()
        if len(samples) == 0:
            raise ValueError("No samples given")

        return cls.from_atoms(samples, np.full(len(samples), 1.0 / len(samples)))

    @classmethod
    def point_mass(cls, value: float) -> DiscreteDistribution:
        return cls.from_atoms([value], [1.0])

    def __len__(self) -> int:
        return len(self.values)

    def __iter__(self) -> Iterator[Tuple[float, float]]:
        return zip(self.values.tolist(), self.probabilities.tolist())

    def __repr__(self) -> str:
        atoms = ", ".join(f"{v:g}: {p:g}" for v, p in self)
        return f"DiscreteDistribution({{{atoms}}})"

    @property
    def atoms(self):
        return list(self)

    def cdf(self, threshold: Union[float, np.ndarray]) -> Union[float, np.ndarray]:
        """P[X <= threshold]. Atoms equal to the threshold are included."""
        cumulative = np.minimum(np.concatenate(([0.0], np.cumsum(self.probabilities))), 1.0)
        # Rounding can leave the last step a hair away from one
        cumulative[-1] = 1.0
        counts = np.searchsorted(self.values, threshold, side="right")
        result = cumulative[counts]

        return float(result) if np.ndim(result) == 0 else result

    def mean(self) -> float:
        return float(np.dot(self.values, self.probabilities))
