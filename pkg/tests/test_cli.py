"""Command line interface tests."""

import json
import os

import pytest

from peterlin.cli import build_parser, main, resolve_config
from peterlin.experiments import read_convergence_csv


def test_parser_defaults_are_unset():
    args = build_parser().parse_args(["run"])
    assert args.command == "run"
    assert args.nu is None
    assert args.assert_bands is None
    assert args.quiet is False


def test_parser_flags():
    args = build_parser().parse_args(
        [
            "--quiet",
            "check",
            "--eps",
            "0.01",
            "--suite",
            "cancellation",
            "--suite",
            "stokes",
        ]
    )
    assert args.quiet is True
    assert args.eps == 0.01
    assert args.suites == ["cancellation", "stokes"]


def test_parser_rejects_unknown_suite(capsys):
    with pytest.raises(SystemExit):
        build_parser().parse_args(["check", "--suite", "everything"])
    assert "invalid choice" in capsys.readouterr().err


def test_version(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["--version"])
    assert exc.value.code == 0
    assert capsys.readouterr().out.startswith("peterlin ")


def test_resolve_config_with_file(util):
    filename = os.path.join(util.TMP_DIR, "peterlin-cli.json")
    with open(filename, "w") as file:
        values = {"preset": "weakly-diffusive", "t-end": 0.25, "plot-out": "x.svg"}
        json.dump(values, file)

    args = build_parser().parse_args(["run", "--config", filename, "--nu", "0.5"])
    config, plot_requested = resolve_config(args)
    assert config.nu == 0.5
    assert config.eps == 0.001
    assert config.t_end == 0.25
    assert config.plot_out == "x.svg"
    assert plot_requested

    args = build_parser().parse_args(["run", "--assert"])
    config, plot_requested = resolve_config(args)
    assert config.assert_bands is True
    assert not plot_requested
    os.remove(filename)


def test_invalid_settings_exit(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["run", "--levels", "0,4"])
    assert exc.value.code == 2
    assert "'levels' should be positive" in capsys.readouterr().err


def test_run_and_plot(util):
    csv_path = os.path.join(util.TMP_DIR, "peterlin-cli.csv")
    svg_path = os.path.join(util.TMP_DIR, "peterlin-cli.svg")
    if os.path.isfile(svg_path):
        os.remove(svg_path)
    status = main(
        [
            "--quiet",
            "run",
            "--preset",
            "diffusive",
            "--levels",
            "4,8",
            "--t-end",
            "0.125",
            "--out",
            csv_path,
            "--plot-out",
            svg_path,
        ]
    )
    assert status == 0
    assert [row["N"] for row in read_convergence_csv(csv_path)] == [4, 8]
    assert os.path.isfile(svg_path)

    os.remove(svg_path)
    assert main(["plot", "--out", csv_path, "--plot-out", svg_path]) == 0
    assert os.path.isfile(svg_path)
    os.remove(svg_path)
    os.remove(csv_path)


def test_plot_missing_file(util, capsys):
    missing = os.path.join(util.TMP_DIR, "peterlin-missing.csv")
    status = main(["plot", "--out", missing, "--plot-out", missing + ".svg"])
    assert status == 1
    assert capsys.readouterr().err.startswith("peterlin - ")


def test_check(capsys):
    argv = ["--quiet", "check", "--suite", "adjugate", "--suite", "transport"]
    assert main(argv) == 0
    lines = capsys.readouterr().out.splitlines()
    assert [line.split()[:2] for line in lines] == [
        ["PASS", "adjugate"],
        ["PASS", "transport"],
    ]
