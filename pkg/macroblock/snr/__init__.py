from .distribution import DiscreteDistribution
from .snr import (
    ChannelParams,
    Scheme,
    snr_distribution,
    path_gains,
    outage,
    coverage,
)
