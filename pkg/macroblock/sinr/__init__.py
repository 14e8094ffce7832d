from .states import (
    BlockingState,
    BlockingStateSpace,
    blocking_state_space,
    iter_state_space,
    state_bits,
    MAX_STATE_BITS,
    STATE_CHUNK,
)
from .sinr import (
    GainMatrix,
    TransmitterColumns,
    column_stats,
    sinr_for_state,
    state_sinrs,
    combine,
    sinr_distribution,
    distribution_from_columns,
)
