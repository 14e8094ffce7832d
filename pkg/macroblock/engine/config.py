from __future__ import annotations

import enum
import functools
import math
from dataclasses import dataclass, field, fields, replace
from decimal import Decimal
from typing import Dict, Iterable, List, Optional, Tuple

import numpy as np
from lark import Lark, Transformer
from lark.exceptions import LarkError, UnexpectedInput

from ..sinr import MAX_STATE_BITS
from ..snr import Scheme

_MAX_SEED = 2 ** 64


class ConfigError(ValueError):
    """A configuration entry could not be parsed or is out of range."""


class MissingExperimentError(ConfigError):
    """No configuration source names the experiment to run."""


class Experiment(enum.Enum):
    plos_cdf = "plos_cdf"
    plos_vs_lambda_bl = "plos_vs_lambda_bl"
    snr_cdf = "snr_cdf"
    snr_outage_vs_lambda_bl = "snr_outage_vs_lambda_bl"
    sinr_cdf = "sinr_cdf"
    sinr_outage_vs_M = "sinr_outage_vs_M"

    @property
    def is_cdf(self) -> bool:
        return self in (Experiment.plos_cdf, Experiment.snr_cdf, Experiment.sinr_cdf)

    @property
    def is_plos(self) -> bool:
        return self in (Experiment.plos_cdf, Experiment.plos_vs_lambda_bl)

    @property
    def uses_interferers(self) -> bool:
        return self in (Experiment.sinr_cdf, Experiment.sinr_outage_vs_M)


class Mode(enum.Enum):
    analytic = "analytic"
    geometric = "geometric"


class Correlation(enum.Enum):
    true = "true"
    false = "false"
    both = "both"

    @property
    def variants(self) -> Tuple[bool, ...]:
        if self is Correlation.true:
            return (True,)
        if self is Correlation.false:
            return (False,)

        return True, False


def default_grid() -> Tuple[float, ...]:
    """-30 dB to 40 dB in 0.5 dB steps."""
    return tuple(float(x) for x in -30.0 + 0.5 * np.arange(141))


@dataclass(frozen=True)
class ExperimentConfig:
    """Complete description of one experiment.

    List-valued fields describe families of curves: every combination of widths,
    blockage densities, macrodiversity orders, interferer counts, schemes and
    correlation variants is evaluated on the same network realizations.
    """

    experiment: Experiment
    lambda_bs: float = 0.3
    lambda_bl: Tuple[float, ...] = (0.6,)
    width: Tuple[float, ...] = (0.8,)
    n: Tuple[int, ...] = (1, 2)
    m: Tuple[int, ...] = (0,)
    alpha: float = 3.0
    snr0_db: float = 15.0
    beta_db: float = 10.0
    realizations: int = 1000
    seed: int = 1
    mode: Mode = Mode.analytic
    scheme: Tuple[Scheme, ...] = (Scheme.diversity,)
    correlated: Correlation = Correlation.both
    threshold_grid: Tuple[float, ...] = field(default_factory=default_grid)
    workers: int = 1
    trials: int = 200

    def __post_init__(self):
        self._normalize()
        if not self.lambda_bs > 0:
            raise ConfigError(f"lambda_bs must be positive: {self.lambda_bs}")
        if len(self.lambda_bl) == 0 or any(x < 0 for x in self.lambda_bl):
            raise ConfigError(f"lambda_bl must be nonnegative: {self.lambda_bl}")
        if len(self.width) == 0 or any(w <= 0 for w in self.width):
            raise ConfigError(f"W must be positive: {self.width}")
        if len(self.n) == 0 or any(n not in (1, 2) for n in self.n):
            raise ConfigError(f"N must be 1 or 2: {self.n}")
        if len(self.m) == 0 or any(m < 0 for m in self.m):
            raise ConfigError(f"M must be nonnegative: {self.m}")
        if max(self.n) * (max(self.m) + 1) > MAX_STATE_BITS:
            raise ConfigError(f"state space too large for N={max(self.n)}, M={max(self.m)}")
        if not self.alpha > 0:
            raise ConfigError(f"alpha must be positive: {self.alpha}")
        if self.realizations < 1:
            raise ConfigError(f"realizations must be at least 1: {self.realizations}")
        if not 0 <= self.seed < _MAX_SEED:
            raise ConfigError(f"seed must be a 64-bit unsigned integer: {self.seed}")
        if self.workers < 1:
            raise ConfigError(f"workers must be at least 1: {self.workers}")
        if self.trials < 1:
            raise ConfigError(f"trials must be at least 1: {self.trials}")
        if len(self.scheme) == 0:
            raise ConfigError("scheme must name at least one combining scheme")
        grid = np.asarray(self.threshold_grid, dtype=float)
        if len(grid) == 0 or np.any(np.diff(grid) <= 0) or not np.all(np.isfinite(grid)):
            raise ConfigError("threshold_grid must be finite and strictly increasing")
        if self.mode is Mode.geometric and self.correlated is not Correlation.true:
            raise ConfigError("geometric mode only supports correlated = true")
        if not self.experiment.uses_interferers and self.m != (0,):
            raise ConfigError(f"{self.experiment.value} has no interferers; M must be 0")

    def _normalize(self):
        # Accept scalars, lists and plain strings from direct construction
        for name, kind in (("experiment", Experiment), ("mode", Mode), ("correlated", Correlation)):
            value = getattr(self, name)
            if isinstance(value, bool):
                value = str(value).lower()
            if not isinstance(value, kind):
                try:
                    object.__setattr__(self, name, kind(value))
                except ValueError:
                    raise ConfigError(f"Unknown {name}: {value!r}") from None

        for name, convert in (
            ("lambda_bl", float),
            ("width", float),
            ("n", int),
            ("m", int),
            ("scheme", Scheme.of),
            ("threshold_grid", float),
        ):
            value = getattr(self, name)
            if isinstance(value, (str, Scheme)) or not hasattr(value, "__iter__"):
                value = (value,)
            try:
                object.__setattr__(self, name, tuple(convert(item) for item in value))
            except (TypeError, ValueError) as e:
                raise ConfigError(f"Invalid {name}: {e}") from None

        for name, convert in (
            ("lambda_bs", float),
            ("alpha", float),
            ("snr0_db", float),
            ("beta_db", float),
            ("realizations", int),
            ("seed", int),
            ("workers", int),
            ("trials", int),
        ):
            try:
                object.__setattr__(self, name, convert(getattr(self, name)))
            except (TypeError, ValueError) as e:
                raise ConfigError(f"Invalid {name}: {e}") from None

    def with_overrides(self, **changes) -> ExperimentConfig:
        return replace(self, **changes)

    def to_lines(self) -> List[str]:
        """The resolved configuration in the config file syntax, one entry per line."""
        lines = []
        for key, attribute in CONFIG_KEYS.items():
            lines.append(f"{key} = {_format_value(getattr(self, attribute))}")

        return lines


def _format_value(value) -> str:
    if isinstance(value, enum.Enum):
        return value.value
    if isinstance(value, tuple):
        return ", ".join(_format_value(item) for item in value)
    if isinstance(value, float):
        return repr(value)

    return str(value)


# Config file key -> ExperimentConfig attribute
CONFIG_KEYS: Dict[str, str] = {
    "experiment": "experiment",
    "lambda_bs": "lambda_bs",
    "lambda_bl": "lambda_bl",
    "W": "width",
    "N": "n",
    "M": "m",
    "alpha": "alpha",
    "snr0_db": "snr0_db",
    "beta_db": "beta_db",
    "realizations": "realizations",
    "seed": "seed",
    "mode": "mode",
    "scheme": "scheme",
    "correlated": "correlated",
    "threshold_grid": "threshold_grid",
    "workers": "workers",
    "trials": "trials",
}

KEY_ALIASES: Dict[str, str] = {
    "width": "W",
    "n": "N",
    "m": "M",
}


class ConfigTransformer(Transformer):
    def start(self, entries):
        return list(entries)

    def entry(self, items):
        key, values = items
        return key.value, values, key.line

    def values(self, items):
        flat = []
        for item in items:
            if isinstance(item, list):
                flat.extend(item)
            else:
                flat.append(item)
        return flat

    def number(self, n):
        (n,) = n
        text = n.value
        if all(c.isdigit() for c in text.lstrip("+-")):
            return int(text)

        return float(text)

    def word(self, n):
        (n,) = n
        return n.value

    def range(self, n):
        start, stop, step = (self.number([x]) for x in n)
        if step <= 0 or stop < start:
            raise ConfigError(f"Invalid range {start}:{stop}:{step}")

        count = int(math.floor((stop - start) / step + 1e-9)) + 1
        # Rounded to the finest decimal written in start or step
        places = max(0, *(-Decimal(x.value).as_tuple().exponent for x in (n[0], n[2])))
        values = np.round(start + step * np.arange(count), places)
        # Integer ranges stay integral for N and M
        if isinstance(start, int) and isinstance(step, int):
            return [int(x) for x in values]

        return [float(x) for x in values]


@functools.lru_cache(maxsize=1)
def _parser() -> Lark:
    return Lark.open("config.lark", rel_to=__file__, parser="lalr")


def parse_entries(text: str, source: str = "config") -> List[Tuple[str, list, str]]:
    """Parses config text into (key, values, location) entries.

    Raises:
        ConfigError: When the text is not in key = value form.
    """
    if not text.endswith("\n"):
        text += "\n"

    try:
        tree = _parser().parse(text)
    except UnexpectedInput as e:
        raise ConfigError(f"{source} line {e.line}: malformed entry") from None

    try:
        entries = ConfigTransformer().transform(tree)
    except LarkError as e:
        # Transformer callbacks wrap their exceptions
        cause = getattr(e, "orig_exc", e)
        raise ConfigError(f"{source}: {cause}") from None

    return [(key, values, f"{source} line {line}") for key, values, line in entries]


def _single(key: str, values: list, location: str):
    if len(values) != 1:
        raise ConfigError(f"{location}: {key} takes a single value")

    return values[0]


def _as_float(key: str, value, location: str) -> float:
    if isinstance(value, str):
        raise ConfigError(f"{location}: {key} must be a number, got {value!r}")

    return float(value)


def _as_int(key: str, value, location: str) -> int:
    if not isinstance(value, int):
        raise ConfigError(f"{location}: {key} must be an integer, got {value!r}")

    return value


def _as_enum(key: str, value, location: str, kind):
    try:
        return kind(str(value).lower() if kind is Correlation else str(value))
    except ValueError:
        choices = ", ".join(member.value for member in kind)
        raise ConfigError(f"{location}: {key} must be one of {choices}, got {value!r}") from None


# Range checks applied per entry so errors can name the line or flag
_RANGES = {
    "lambda_bs": (lambda x: x > 0, "must be positive"),
    "lambda_bl": (lambda x: x >= 0, "must be nonnegative"),
    "W": (lambda x: x > 0, "must be positive"),
    "N": (lambda x: x in (1, 2), "must be 1 or 2"),
    "M": (lambda x: x >= 0, "must be nonnegative"),
    "alpha": (lambda x: x > 0, "must be positive"),
    "realizations": (lambda x: x >= 1, "must be at least 1"),
    "seed": (lambda x: 0 <= x < _MAX_SEED, "must be a 64-bit unsigned integer"),
    "workers": (lambda x: x >= 1, "must be at least 1"),
    "trials": (lambda x: x >= 1, "must be at least 1"),
}


def _convert(key: str, values: list, location: str):
    value = _convert_type(key, values, location)
    if key in _RANGES:
        check, message = _RANGES[key]
        for item in value if isinstance(value, tuple) else (value,):
            if not check(item):
                raise ConfigError(f"{location}: {key} {message}, got {item!r}")

    return value


def _convert_type(key: str, values: list, location: str):
    if key == "experiment":
        return _as_enum(key, _single(key, values, location), location, Experiment)
    if key == "mode":
        return _as_enum(key, _single(key, values, location), location, Mode)
    if key == "correlated":
        return _as_enum(key, _single(key, values, location), location, Correlation)
    if key == "scheme":
        return tuple(_as_enum(key, v, location, Scheme) for v in values)
    if key in ("lambda_bl", "W", "threshold_grid"):
        return tuple(_as_float(key, v, location) for v in values)
    if key in ("N", "M"):
        return tuple(_as_int(key, v, location) for v in values)
    if key in ("realizations", "seed", "workers", "trials"):
        return _as_int(key, _single(key, values, location), location)

    return _as_float(key, _single(key, values, location), location)


def resolve_entries(entries: Iterable[Tuple[str, list, str]]) -> Dict[str, object]:
    """Converts parsed entries to ExperimentConfig keyword arguments.

    A key repeated within the entries is an error; callers layer sources by merging
    the returned dictionaries.
    """
    resolved: Dict[str, object] = {}
    seen: Dict[str, str] = {}
    for key, values, location in entries:
        key = KEY_ALIASES.get(key, key)
        if key not in CONFIG_KEYS:
            raise ConfigError(f"{location}: unknown key {key!r}")
        if key in seen:
            raise ConfigError(f"{location}: {key} already set at {seen[key]}")

        seen[key] = location
        resolved[CONFIG_KEYS[key]] = _convert(key, values, location)

    return resolved


def load_config_file(path: str, encoding: str = "utf-8") -> Dict[str, object]:
    with open(path, "r", encoding=encoding) as f:
        text = f.read()

    return resolve_entries(parse_entries(text, source=path))


def build_config(*layers: Dict[str, object]) -> ExperimentConfig:
    """Builds a validated config from keyword layers, later layers winning.

    Raises:
        ConfigError: When no layer names the experiment or a value is out of range.
    """
    merged: Dict[str, object] = {}
    for layer in layers:
        merged.update(layer)

    if "experiment" not in merged:
        raise MissingExperimentError("experiment is required")

    known = {f.name for f in fields(ExperimentConfig)}
    unknown = set(merged) - known
    if unknown:
        raise ConfigError(f"unknown keys: {', '.join(sorted(unknown))}")

    try:
        return ExperimentConfig(**merged)
    except ConfigError:
        raise
    except (TypeError, ValueError) as e:
        raise ConfigError(str(e)) from None


def parse_config_text(text: str, source: str = "config", base: Optional[Dict] = None) -> ExperimentConfig:
    layers = [base] if base else []
    layers.append(resolve_entries(parse_entries(text, source)))

    return build_config(*layers)
