from __future__ import annotations

import logging
import os
from dataclasses import dataclass, field, replace
from multiprocessing import Event, Pool
from typing import Dict, List, Optional, Tuple, Union

import numpy as np

from .aggregate import EmpiricalCDF, spatial_average
from .config import ExperimentConfig, Experiment, Mode
from ..blocking import los_probability, pair_stats, path_stats
from ..curve import CurveTable
from ..oracle import empirical_los, empirical_sinr_samples
from ..placement import (
    BASE_STATION_STREAM,
    BLOCKAGE_STREAM,
    INTERFERER_STREAM,
    NetworkRealization,
    RngStream,
    place_interferers,
    sample_base_stations,
)
from ..sinr import column_stats, distribution_from_columns
from ..snr import ChannelParams, DiscreteDistribution, Scheme
from ..tool import db_to_linear

logger = logging.getLogger(__name__)

# p_LOS is a probability, so its CDF is sampled on [0, 1] rather than on the dB grid
PLOS_GRID = tuple(float(x) for x in np.linspace(0.0, 1.0, 101))

ABORT = None
CONFIG = None

# (curve name, swept value or None)
CurveKey = Tuple[str, Optional[float]]
Quantity = Union[float, DiscreteDistribution]


@dataclass(frozen=True)
class Case:
    """One curve point evaluated on every realization."""

    curve: str
    x: Optional[float]
    n: int
    width: float
    lambda_bl: float
    m: int
    scheme: Optional[Scheme]
    correlated: bool

    @property
    def key(self) -> CurveKey:
        return self.curve, self.x


@dataclass(frozen=True, eq=False)
class RealizationOutput:
    """Everything one realization contributes to an experiment, keyed by curve point."""

    index: int
    realization: NetworkRealization
    values: Dict[CurveKey, Quantity]
    rho: Dict[CurveKey, float] = field(default_factory=dict)


@dataclass(frozen=True, eq=False)
class ExperimentOutput:
    """Named curves over a shared x column.

    Attributes:
        config: The configuration the curves were computed with.
        x_name: Header of the x column.
        x_values: Thresholds (CDF experiments) or swept parameter values.
        curves: Curve values in column order.
        half_widths: 95% half-widths of spatially averaged curves, when available.
    """

    config: ExperimentConfig
    x_name: str
    x_values: np.ndarray
    curves: Dict[str, np.ndarray]
    half_widths: Dict[str, np.ndarray] = field(default_factory=dict)

    def to_table(self) -> CurveTable:
        names = list(self.curves)
        rows = np.column_stack([self.x_values] + [self.curves[name] for name in names])
        return CurveTable(self.config.experiment.value, [self.x_name] + names, rows.tolist())


def _label(value: float) -> str:
    return f"{value:g}"


def cases(config: ExperimentConfig) -> List[Case]:
    """Every curve point of the experiment in column order."""
    experiment = config.experiment
    sweeps_lambda = experiment in (Experiment.plos_vs_lambda_bl, Experiment.snr_outage_vs_lambda_bl)
    sweeps_m = experiment is Experiment.sinr_outage_vs_M
    schemes = (None,) if experiment.is_plos else config.scheme

    result = []
    for width in config.width:
        for lambda_bl in config.lambda_bl:
            for m in config.m:
                for n in config.n:
                    for scheme in schemes:
                        for correlated in config.correlated.variants:
                            name = f"N{n}"
                            if scheme is not None:
                                name += f"_{scheme.value}"
                            name += "_corr" if correlated else "_ind"
                            if len(config.width) > 1:
                                name += f"_W{_label(width)}"
                            if len(config.lambda_bl) > 1 and not sweeps_lambda:
                                name += f"_lbl{_label(lambda_bl)}"
                            if len(config.m) > 1 and not sweeps_m:
                                name += f"_M{m}"

                            if sweeps_lambda:
                                x = lambda_bl
                            elif sweeps_m:
                                x = float(m)
                            else:
                                x = None

                            result.append(
                                Case(name, x, n, width, lambda_bl, m, scheme, correlated)
                            )

    return result


def sample_realization(config: ExperimentConfig, index: int) -> NetworkRealization:
    """The base stations of realization index; interferers are placed per order N."""
    stream = RngStream(config.seed, index)
    count = max(config.n) + max(config.m)
    base_stations = sample_base_stations(
        config.lambda_bs, count, stream.substream(BASE_STATION_STREAM)
    )

    return NetworkRealization(base_stations=base_stations, lambda_bs=config.lambda_bs, index=index)


def run_realization(config: ExperimentConfig, index: int) -> RealizationOutput:
    """Evaluates every curve point of the experiment on realization index.

    The geometry is sampled once; all variants share it, and every variant with the
    same order N shares the same interferers.
    """
    stream = RngStream(config.seed, index)
    realization = sample_realization(config, index)
    m_max = max(config.m)

    with_interferers = {
        n: replace(
            realization,
            interferers=place_interferers(
                realization, n, m_max, config.lambda_bs, stream.substream(INTERFERER_STREAM)
            ),
        )
        for n in config.n
    }

    values: Dict[CurveKey, Quantity] = {}
    rho: Dict[CurveKey, float] = {}
    columns_cache = {}
    for case in cases(config):
        params = ChannelParams(
            alpha=config.alpha,
            snr0_db=config.snr0_db,
            width=case.width,
            lambda_bl=case.lambda_bl,
        )
        local = with_interferers[case.n]

        if config.experiment.is_plos:
            values[case.key] = _plos(config, local, case, params, stream)
            if case.n == 2 and config.experiment is Experiment.plos_vs_lambda_bl:
                stats = pair_stats(
                    local.source, local.base_station(1), local.base_station(2),
                    case.width, case.lambda_bl,
                )
                rho[(f"rho_mean_W{_label(case.width)}", case.x)] = stats.rho
            continue

        if config.mode is Mode.geometric:
            samples = empirical_sinr_samples(
                local, case.n, case.m, case.scheme, params, config.trials,
                stream.substream(BLOCKAGE_STREAM),
            )
            dist = DiscreteDistribution.from_samples(samples)
        else:
            cache_key = (case.n, case.width, case.lambda_bl)
            if cache_key not in columns_cache:
                columns_cache[cache_key] = column_stats(local, case.n, m_max, params)
            columns = columns_cache[cache_key].head(case.m)
            dist = distribution_from_columns(
                columns, case.n, case.scheme, config.snr0_db, case.correlated
            )

        if config.experiment.is_cdf:
            values[case.key] = dist
        else:
            values[case.key] = dist.cdf(db_to_linear(config.beta_db))

    return RealizationOutput(index=index, realization=realization, values=values, rho=rho)


def _plos(
    config: ExperimentConfig,
    realization: NetworkRealization,
    case: Case,
    params: ChannelParams,
    stream: RngStream,
) -> float:
    if config.mode is Mode.geometric:
        report = empirical_los(
            realization, case.n, params, config.trials, stream.substream(BLOCKAGE_STREAM)
        )
        return report.plos

    if case.n == 1:
        stats = path_stats(realization.source, realization.base_station(1), case.width, case.lambda_bl)
    else:
        stats = pair_stats(
            realization.source,
            realization.base_station(1),
            realization.base_station(2),
            case.width,
            case.lambda_bl,
        )

    return los_probability(stats, case.n, case.correlated)


def grid_of(config: ExperimentConfig) -> np.ndarray:
    """The CDF thresholds in the units of the aggregated quantity."""
    if config.experiment is Experiment.plos_cdf:
        return np.asarray(PLOS_GRID)

    return db_to_linear(np.asarray(config.threshold_grid, dtype=float))


def summarize(output: RealizationOutput, grid: np.ndarray) -> Dict[CurveKey, Union[float, np.ndarray]]:
    """Reduces a realization's distributions to their CDF on grid."""
    summary: Dict[CurveKey, Union[float, np.ndarray]] = {}
    for key, value in output.values.items():
        if isinstance(value, DiscreteDistribution):
            summary[key] = value.cdf(grid)
        elif key[1] is None:
            # Per-realization p_LOS of a CDF experiment
            summary[key] = DiscreteDistribution.point_mass(min(max(value, 0.0), 1.0)).cdf(grid)
        else:
            summary[key] = value

    summary.update(output.rho)
    return summary


def _worker_init(event, config):
    global ABORT, CONFIG
    ABORT = event
    CONFIG = config


def _realization_job(index: int):
    global ABORT, CONFIG
    if ABORT is not None and ABORT.is_set():
        return None

    try:
        return summarize(run_realization(CONFIG, index), grid_of(CONFIG))
    except Exception as e:
        if ABORT is not None:
            # Abort all jobs
            ABORT.set()
        raise RuntimeError(f"Error in realization {index}") from e


def run_realizations(config: ExperimentConfig) -> List[Dict[CurveKey, Union[float, np.ndarray]]]:
    """Summaries of every realization, in realization order.

    Realization i always draws from substream i, so the result does not depend on the
    number of workers.
    """
    if config.workers == 1:
        _worker_init(None, config)
        return [_realization_job(index) for index in range(config.realizations)]

    abort = Event()
    workers = min(config.workers, os.cpu_count() or 1, config.realizations)
    chunksize = 1 + config.realizations // (4 * workers)
    with Pool(processes=workers, initializer=_worker_init, initargs=(abort, config)) as pool:
        summaries = pool.map(_realization_job, range(config.realizations), chunksize)

    return summaries


def _gain_columns(curves: Dict[str, np.ndarray]) -> Dict[str, np.ndarray]:
    gains = {}
    for name, values in curves.items():
        partner = "N2" + name[2:]
        if name.startswith("N1_") and partner in curves:
            gains["gain" + name[2:]] = values - curves[partner]

    return gains


def run_experiment(config: ExperimentConfig) -> ExperimentOutput:
    """Runs every realization of the experiment and pools the results into curves."""
    logger.info(
        "Running %s over %d realizations with %d worker(s)",
        config.experiment.value,
        config.realizations,
        config.workers,
    )
    summaries = run_realizations(config)

    curve_names: List[str] = []
    for case in cases(config):
        if case.curve not in curve_names:
            curve_names.append(case.curve)

    if config.experiment.is_cdf:
        grid = grid_of(config)
        curves = {
            name: EmpiricalCDF.from_rows(grid, [s[(name, None)] for s in summaries]).values
            for name in curve_names
        }
        if config.experiment is Experiment.plos_cdf:
            x_name, x_values = "plos", grid
        else:
            x_name, x_values = "threshold_db", np.asarray(config.threshold_grid)
        logger.info("Finished %s", config.experiment.value)
        return ExperimentOutput(config, x_name, x_values, curves)

    if config.experiment is Experiment.sinr_outage_vs_M:
        x_name, x_values = "M", np.asarray(config.m, dtype=float)
    else:
        x_name, x_values = "lambda_bl", np.asarray(config.lambda_bl, dtype=float)

    if config.experiment is Experiment.plos_vs_lambda_bl and 2 in config.n:
        for width in config.width:
            curve_names.append(f"rho_mean_W{_label(width)}")

    curves, half_widths = {}, {}
    for name in curve_names:
        means, spreads = [], []
        for x in x_values:
            mean, half_width = spatial_average([s[(name, float(x))] for s in summaries])
            logger.debug("%s at %s = %g ± %g", name, x_name, mean, half_width)
            means.append(mean)
            spreads.append(half_width)
        curves[name] = np.asarray(means)
        half_widths[name] = np.asarray(spreads)

    if config.experiment is not Experiment.plos_vs_lambda_bl:
        curves.update(_gain_columns(curves))

    logger.info("Finished %s", config.experiment.value)
    return ExperimentOutput(config, x_name, x_values, curves, half_widths)
