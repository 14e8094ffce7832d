from .pairstats import (
    PairBlockingStats,
    nlos_prob,
    pair_stats,
    path_stats,
    joint_pmf,
    los_probability,
    COHERENCE_TOLERANCE,
)
