import json

import pytest
from pydantic import ValidationError

from src.schemas import RunConfig
from src.services.io_service import dumps, list_json, load_poly, load_sequence, load_series, write_csv, write_json
from src.services.verify_service import (
    VerifyContext,
    check_closed_forms,
    check_division,
    check_geometry,
    check_sequences,
    format_table,
    run_verification,
)


def test_bundled_inputs_load(data_dir):
    for path in list_json(data_dir / "polys"):
        P = load_poly(path)
        assert P.d >= 2
    assert load_sequence(data_dir / "sequences" / "gevrey_1.json").j_max == 48
    series = load_series(data_dir / "series" / "geometric_k10.json")
    assert len(series) == 11 and series.N == 12


def test_malformed_polynomial_names_field(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text(json.dumps({"d": 2, "m": 1, "coeffs": [[], [{"t_exponents": [2]}]]}))
    with pytest.raises(ValidationError) as excinfo:
        load_poly(path)
    assert "num" in str(excinfo.value)


def test_dumps_is_sorted_and_stable():
    text = dumps({"b": 1, "a": [1.5, {"d": None, "c": 2}]})
    assert text == dumps({"a": [1.5, {"c": 2, "d": None}], "b": 1})
    assert text.index('"a"') < text.index('"b"')
    assert text.endswith("\n")


def test_write_json_and_csv(tmp_path):
    json_path = write_json(tmp_path / "out" / "report.json", {"x": 0.1})
    assert json.loads(json_path.read_text()) == {"x": 0.1}
    csv_path = write_csv(tmp_path / "rows.csv", ["a", "b"], [[0.1, 2], [1e-300, 3]])
    assert csv_path.read_text() == "a,b\n0.1,2\n1e-300,3\n"


def test_sequence_checks_pass():
    checks = check_sequences(VerifyContext())
    assert all(c.passed for c in checks), [c for c in checks if not c.passed]


def test_division_checks_pass():
    checks = check_division(VerifyContext(seed=0))
    assert {c.name for c in checks} == {
        "division.residual_zero",
        "division.oracle",
        "division.substitute_d3",
        "division.translated",
    }
    assert all(c.passed for c in checks)


def test_closed_form_checks_pass():
    checks = check_closed_forms(VerifyContext(seed=1))
    kinds = ("fiber.closed_form", "gamma.distance")
    assert {c.name for c in checks} == {f"{kind}.d{d}" for kind in kinds for d in (2, 3, 4, 5)}
    assert all(c.passed for c in checks), [c for c in checks if not c.passed]


def test_geometry_checks_pass():
    assert all(c.passed for c in check_geometry(VerifyContext()))


@pytest.mark.slow
def test_full_matrix_is_deterministic():
    first = run_verification(seed=0)
    assert first.passed, format_table(first)
    assert dumps(first) == dumps(run_verification(seed=0))
    assert "checks passed" in format_table(first)


def test_run_config_has_no_unused_degree_field():
    assert "degree" not in RunConfig.model_fields
