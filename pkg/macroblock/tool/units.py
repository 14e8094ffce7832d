import math
from typing import Union

import numpy as np


def db_to_linear(value_db: Union[float, np.ndarray]) -> Union[float, np.ndarray]:
    """Converts a power ratio in dB to its linear value, 10^(x/10)."""
    if isinstance(value_db, np.ndarray):
        return np.power(10.0, value_db / 10.0)

    return 10.0 ** (value_db / 10.0)


def linear_to_db(value: float) -> float:
    if value <= 0:
        raise ValueError(f"Cannot express non-positive ratio in dB: {value}")

    return 10.0 * math.log10(value)
