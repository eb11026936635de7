import json

import pytest

from src.cli.main import build_parser, config_from_args, main, run
from src.cli.outputs import clear_artifacts, get_artifacts
from src.schemas import RunConfig


@pytest.fixture(autouse=True)
def fresh_artifacts():
    clear_artifacts()
    yield
    clear_artifacts()


def test_flags_override_environment():
    args = build_parser().parse_args(["sigma", "--poly", "p.json", "--threads", "3", "--bins", "20"])
    config = config_from_args(args)
    assert config.threads == 3
    assert config.bins == 20
    assert str(config.poly_path) == "p.json"


def test_invalid_flag_value_is_input_error(capsys):
    code = main(["sigma", "--poly", "p.json", "--eta", "-1"])
    assert code == 2
    error = json.loads(capsys.readouterr().err.strip().splitlines()[-1])
    assert error["field"] == "eta"


def test_seq_command(tmp_path, capsys, data_dir):
    out = tmp_path / "seq.json"
    code = main(["seq", "--seq", str(data_dir / "sequences" / "gevrey_1.json"), "--power", "2", "--json", str(out)])
    assert code == 0
    report = json.loads(out.read_text())
    assert report["regularity"]["log_convex"]
    assert report["legendre"]["max_rel_error"] <= 1e-3
    assert report["power"]["s"] == 2.0
    assert get_artifacts("seq") == [str(out)]
    assert json.loads(capsys.readouterr().out) == report


def test_divide_command(tmp_path, data_dir, capsys):
    out = tmp_path / "divide.json"
    code = main(
        [
            "divide",
            "--poly", str(data_dir / "polys" / "xd_minus_t2_d3.json"),
            "--series", str(data_dir / "series" / "geometric_k10.json"),
            "-N", "12",
            "--json", str(out),
        ]
    )
    assert code == 0
    report = json.loads(out.read_text())
    assert report["summary"]["residual_zero"]
    assert report["substitute_check"]["passed"]
    assert len(report["r"]) == 3


def test_divide_extremal_series_runs_optimality(data_dir, capsys):
    code = main(["divide", "--poly", str(data_dir / "polys" / "xd_minus_t2_d4.json"), "-N", "40", "--k-max", "10"])
    assert code == 0
    report = json.loads(capsys.readouterr().out)
    assert report["optimality"]["positive"]


def test_divide_tangent_family_reports_translation(data_dir, capsys):
    code = main(["divide", "--poly", str(data_dir / "polys" / "x2_parabolas_t4.json"), "-N", "12"])
    assert code == 0
    assert json.loads(capsys.readouterr().out)["translation"]["matches"]


def test_gamma_command_writes_artifacts(tmp_path, data_dir, capsys):
    csv_path, svg_path = tmp_path / "gamma.csv", tmp_path / "gamma.svg"
    code = main(
        [
            "gamma",
            "--poly", str(data_dir / "polys" / "xd_minus_t2_d3.json"),
            "--csv", str(csv_path),
            "--svg", str(svg_path),
        ]
    )
    assert code == 0
    report = json.loads(capsys.readouterr().out)
    assert report["assumptions"]["failure_reason"] == "none"
    assert csv_path.read_text().startswith("re,im,t,branch_id\n")
    assert "<svg" in svg_path.read_text()


def test_malformed_polynomial_exits_with_2(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text('{"d": 2, "m": 1, "coeffs": [[]]}')
    assert main(["gamma", "--poly", str(bad)]) == 2
    error = json.loads(capsys.readouterr().err.strip().splitlines()[-1])
    assert error["error"] == "invalid_input"


def test_missing_file_exits_with_2(tmp_path, capsys):
    assert main(["sigma", "--poly", str(tmp_path / "missing.json")]) == 2
    assert json.loads(capsys.readouterr().err.strip().splitlines()[-1])["error"] == "file_not_found"


def test_report_command(tmp_path, data_dir, capsys):
    main(
        [
            "divide",
            "--poly", str(data_dir / "polys" / "xd_minus_t2_d3.json"),
            "--series", str(data_dir / "series" / "geometric_k10.json"),
            "--json", str(tmp_path / "divide.json"),
        ]
    )
    capsys.readouterr()
    assert main(["report", "--report-dir", str(tmp_path)]) == 0
    summary = json.loads(capsys.readouterr().out)
    [entry] = summary["artifacts"]
    assert entry["file"] == "divide.json" and entry["kind"] == "divide"
    assert entry["N"] == 12 and entry["residual_zero"]
    assert (tmp_path / "summary.txt").exists()
    assert get_artifacts("report") == [str(tmp_path / "summary.txt")]


def test_report_without_directory_is_usage_error(capsys):
    assert run(RunConfig(subcommand="report")) == 2
    assert json.loads(capsys.readouterr().err.strip().splitlines()[-1])["error"] == "misuse"


@pytest.mark.slow
def test_sigma_command(data_dir, capsys):
    code = main(["sigma", "--poly", str(data_dir / "polys" / "xd_minus_t2_d4.json")])
    assert code == 0
    report = json.loads(capsys.readouterr().out)
    assert report["sigma_hat"] == pytest.approx(2.0, abs=0.1)
