from .config import (
    ConfigError,
    MissingExperimentError,
    Correlation,
    Experiment,
    ExperimentConfig,
    Mode,
    build_config,
    load_config_file,
    parse_config_text,
    parse_entries,
    resolve_entries,
    CONFIG_KEYS,
)
from .aggregate import EmpiricalCDF, aggregate_cdf, spatial_average
from .engine import (
    Case,
    ExperimentOutput,
    RealizationOutput,
    cases,
    run_experiment,
    run_realization,
    run_realizations,
    sample_realization,
    PLOS_GRID,
)
