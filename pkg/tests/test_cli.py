import os

import pytest

from macroblock.cli import OUTPUT_ENV, main, output_dir, parse_arg, parse_config
from macroblock.curve import read_csv
from macroblock.engine import ConfigError, Experiment


def _run(argv):
    with pytest.raises(SystemExit) as exit_info:
        main(argv)
    return exit_info.value.code


def test_run_writes_csv_with_config_echo(tmp_path, capsys):
    status = _run(["--experiment", "plos_cdf", "--realizations", "20", "-o", str(tmp_path)])
    assert status == 0

    table, comments = read_csv(str(tmp_path / "plos_cdf.csv"))
    assert table.headers == ["plos", "N1_corr", "N1_ind", "N2_corr", "N2_ind"]
    assert len(table.rows) == 101
    assert "experiment = plos_cdf" in comments
    assert "seed = 1" in comments
    assert "realizations = 20" in comments

    printed = capsys.readouterr().out
    assert "  experiment = plos_cdf" in printed
    assert "plos_cdf.csv" in printed


def test_runs_are_reproducible(tmp_path):
    argv = ["experiment=snr_cdf", "realizations=10", "seed=77"]
    assert _run(argv + ["-o", str(tmp_path / "a")]) == 0
    assert _run(argv + ["-o", str(tmp_path / "b")]) == 0
    with open(tmp_path / "a" / "snr_cdf.csv", "rb") as a, open(tmp_path / "b" / "snr_cdf.csv", "rb") as b:
        assert a.read() == b.read()


def test_svg_output(tmp_path):
    status = _run(["--experiment", "plos_cdf", "--realizations", "5", "--svg", "-o", str(tmp_path)])
    assert status == 0
    assert (tmp_path / "plos_cdf.svg").exists()


def test_missing_experiment_is_a_usage_error(tmp_path, capsys):
    assert _run(["--realizations", "5", "-o", str(tmp_path)]) == 2
    assert "experiment is required" in capsys.readouterr().err


def test_bad_value_exits_with_diagnostic(tmp_path, capsys):
    assert _run(["experiment=snr_cdf", "lambda_bl=-1", "-o", str(tmp_path)]) == 1
    err = capsys.readouterr().err
    assert err.startswith("macroblock: error:")
    assert "lambda_bl" in err
    assert not (tmp_path / "snr_cdf.csv").exists()


def test_flag_errors_name_the_flag():
    args = parse_arg(["--experiment", "snr_cdf", "--width", "0"])
    with pytest.raises(ConfigError, match="--width"):
        parse_config(args)


def test_flags_override_file_and_entries(tmp_path):
    path = tmp_path / "run.cfg"
    path.write_text("experiment = plos_cdf\nseed = 3\nrealizations = 5\nlambda_bl = 0.3\n")

    args = parse_arg(["-c", str(path), "seed=4", "lambda_bl=0.9", "--seed", "9"])
    config = parse_config(args)
    assert config.experiment is Experiment.plos_cdf
    assert config.seed == 9
    assert config.realizations == 5
    assert config.lambda_bl == (0.9,)


def test_list_flags():
    args = parse_arg(["--experiment", "sinr_outage_vs_M", "--m", "0:6:1", "--scheme", "selection,diversity"])
    config = parse_config(args)
    assert config.m == (0, 1, 2, 3, 4, 5, 6)
    assert len(config.scheme) == 2


def test_entries_must_be_key_value():
    with pytest.raises(ConfigError, match="expected key=value"):
        parse_config(parse_arg(["experiment"]))


def test_output_dir_precedence(tmp_path, monkeypatch):
    monkeypatch.setenv(OUTPUT_ENV, str(tmp_path / "env"))
    assert output_dir(parse_arg([])) == str(tmp_path / "env")
    assert os.path.isdir(tmp_path / "env")

    assert output_dir(parse_arg(["-o", str(tmp_path / "flag")])) == str(tmp_path / "flag")


def test_output_path_that_is_a_file(tmp_path, capsys):
    target = tmp_path / "results"
    target.write_text("")
    status = _run(["--experiment", "plos_cdf", "--realizations", "5", "-o", str(target)])
    assert status == 2
    err = capsys.readouterr().err
    assert "not a directory" in err
    assert "Traceback" not in err


def test_failed_svg_leaves_no_csv(tmp_path, capsys):
    (tmp_path / "plos_cdf.svg").mkdir()
    status = _run(["--experiment", "plos_cdf", "--realizations", "5", "--svg", "-o", str(tmp_path)])
    assert status == 1
    assert "macroblock: error: Cannot write" in capsys.readouterr().err
    assert os.listdir(tmp_path) == ["plos_cdf.svg"]
