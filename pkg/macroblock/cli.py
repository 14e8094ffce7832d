import argparse
import logging
import os
import sys
from typing import Dict, List, Optional

import macroblock
from macroblock.curve import emit_results
from macroblock.engine import (
    ConfigError,
    ExperimentConfig,
    MissingExperimentError,
    build_config,
    load_config_file,
    parse_entries,
    resolve_entries,
    run_experiment,
)

OUTPUT_ENV = "MACROBLOCK_OUT"

# Flag -> config key. Each config key has one flag.
KEY_FLAGS: Dict[str, str] = {
    "--experiment": "experiment",
    "--lambda-bs": "lambda_bs",
    "--lambda-bl": "lambda_bl",
    "--width": "W",
    "--n": "N",
    "--m": "M",
    "--alpha": "alpha",
    "--snr0-db": "snr0_db",
    "--beta-db": "beta_db",
    "--realizations": "realizations",
    "--seed": "seed",
    "--mode": "mode",
    "--scheme": "scheme",
    "--correlated": "correlated",
    "--threshold-grid": "threshold_grid",
    "--workers": "workers",
    "--trials": "trials",
}


def dir_path(string):
    if os.path.exists(string) and not os.path.isdir(string):
        raise argparse.ArgumentTypeError(f"not a directory: {string}")

    return string.rstrip("/\\") or string


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="macroblock",
        description="Macrodiversity gain of mmWave uplinks under correlated blockage",
        allow_abbrev=False,
    )
    parser.add_argument(
        "entries",
        metavar="key=value",
        nargs="*",
        help="Config entries, applied after --config and before the named flags",
    )
    parser.add_argument("-c", "--config", type=str, help="Path to a key = value config file")
    parser.add_argument(
        "-o",
        "--out",
        metavar="Output directory",
        type=dir_path,
        help=f"Directory for results. Defaults to ${OUTPUT_ENV}, then ./output",
    )
    parser.add_argument(
        "--svg",
        action="store_const",
        default=False,
        const=True,
        help="Also render the curves as an SVG line chart",
    )
    parser.add_argument(
        "-v",
        "--verbose",
        action="store_const",
        default=False,
        const=True,
        help="Log every swept value",
    )
    for flag, key in KEY_FLAGS.items():
        parser.add_argument(flag, dest=f"key_{key}", metavar=key, type=str, help=f"Config {key}")

    return parser


def parse_arg(argv: Optional[List[str]] = None):
    return build_parser().parse_args(argv)


def parse_config(args) -> ExperimentConfig:
    """Resolves the config from defaults, the config file, key=value entries and flags,
    later sources winning."""
    layers = []
    if args.config is not None:
        layers.append(load_config_file(args.config))

    entry_lines = []
    for entry in args.entries:
        if "=" not in entry:
            raise ConfigError(f"argument {entry!r}: expected key=value")
        entry_lines.append(entry)
    if entry_lines:
        layers.append(resolve_entries(parse_entries("\n".join(entry_lines), source="arguments")))

    for flag, key in KEY_FLAGS.items():
        value = getattr(args, f"key_{key}")
        if value is None:
            continue

        entries = [(k, v, flag) for k, v, _ in parse_entries(f"{key} = {value}", source=flag)]
        layers.append(resolve_entries(entries))

    return build_config(*layers)


def output_dir(args) -> str:
    directory = args.out or os.environ.get(OUTPUT_ENV) or "output"
    if not os.path.exists(directory):
        os.makedirs(directory)
    elif not os.path.isdir(directory):
        raise NotADirectoryError(f"not a directory: {directory}")

    return directory


def run(args, config: ExperimentConfig) -> int:
    directory = output_dir(args)

    echo = config.to_lines()
    print(f"macroblock {macroblock.__version__}")
    for line in echo:
        print(f"  {line}")

    output = run_experiment(config)
    table = output.to_table()

    name = config.experiment.value
    svg_path = os.path.join(directory, name + ".svg") if args.svg else None
    for path in emit_results(table, os.path.join(directory, name + ".csv"), svg_path, comments=echo):
        print(f"Wrote {path}")

    return 0


def main(argv: Optional[List[str]] = None):
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.INFO,
        format="%(asctime)s - %(levelname)s - %(message)s",
    )

    try:
        config = parse_config(args)
    except MissingExperimentError:
        parser.error("experiment is required: pass --experiment or experiment=<name>")
    except Exception as e:
        print(f"macroblock: error: {e}", file=sys.stderr)
        sys.exit(1)

    try:
        status = run(args, config)
    except Exception as e:
        print(f"macroblock: error: {e}", file=sys.stderr)
        status = 1

    sys.exit(status)
