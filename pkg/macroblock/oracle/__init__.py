from .oracle import (
    OracleReport,
    SinrDeviation,
    covering_radius,
    draw_blocking,
    empirical_pair_pmf,
    empirical_sinr_samples,
    empirical_los,
    sinr_deviation,
)
