import csv
import io
import json

import pytest

from app.main import build_parser, main, resolve_config
from app.core.exceptions import ConfigurationError


def _run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_eval_center(capsys):
    code, out, _ = _run(capsys, "eval", "1", "1")
    payload = json.loads(out)
    assert code == 0
    assert payload["u"] == 1.0
    assert payload["region_tag"] == "center"
    assert payload["grad"] is None
    assert "hessian_omitted" in payload


def test_eval_median(capsys):
    code, out, _ = _run(capsys, "eval", "1", "0.3")
    payload = json.loads(out)
    assert code == 0
    assert payload["u"] == pytest.approx(0.3, abs=1e-15)
    assert payload["region_tag"] == "median"
    assert payload["grad"] == [0.0, 1.0]


def test_eval_diagonal(capsys):
    code, out, _ = _run(capsys, "eval", "0.5", "0.5")
    payload = json.loads(out)
    assert code == 0
    assert payload["u"] == pytest.approx(0.3960, abs=1e-3)
    assert payload["region_tag"] == "diagonal"
    assert "hessian" not in payload
    assert payload["hessian_omitted"]


def test_eval_interior_has_hessian(capsys):
    code, out, _ = _run(capsys, "eval", "0.3", "0.6")
    payload = json.loads(out)
    assert code == 0
    assert payload["region_tag"] == "interior-off-diagonal"
    assert payload["hessian"][0][1] == payload["hessian"][1][0]


def test_eval_outside_square(capsys):
    code, out, err = _run(capsys, "eval", "2.5", "0.3")
    assert code == 2
    assert out == ""
    assert "[0, 2] x [0, 2]" in err


def test_unknown_flag_is_usage_error(capsys):
    code, _, _ = _run(capsys, "eval", "0.5", "0.5", "--colour")
    assert code == 2


def test_invalid_override_is_usage_error(capsys):
    code, _, err = _run(capsys, "eval", "0.5", "0.5", "--abs-tol", "-1")
    assert code == 2
    assert "SERIES_ABS_TOL" in err


def test_resolve_config_reports_setting():
    args = build_parser().parse_args(["theta", "0.3", "0.25", "--log-level", "loud"])
    with pytest.raises(ConfigurationError) as info:
        resolve_config(args)
    assert info.value.details["setting"] == "LOG_LEVEL"


def test_grid_csv(capsys):
    code, out, _ = _run(capsys, "grid", "--nx", "5", "--ny", "5")
    assert code == 0
    rows = list(csv.reader(io.StringIO(out)))
    assert rows[0] == ["x", "y", "u", "ux", "uy", "region"]
    body = rows[1:]
    assert len(body) == 25
    # row-major in y, then x
    assert [float(row[0]) for row in body[:5]] == [0.0, 0.5, 1.0, 1.5, 2.0]
    assert all(float(row[1]) == 0.0 for row in body[:5])
    by_point = {(float(row[0]), float(row[1])): row for row in body}
    for corner in ((0.0, 0.0), (2.0, 0.0), (0.0, 2.0), (2.0, 2.0)):
        assert float(by_point[corner][2]) == 0.0
        assert by_point[corner][3] == ""
    for (x, y), row in by_point.items():
        assert row[2] == by_point[(y, x)][2]
    assert by_point[(1.0, 1.0)][5] == "center"


def test_grid_is_deterministic(capsys):
    _, first, _ = _run(capsys, "grid", "--nx", "4", "--ny", "3", "--format", "json")
    _, second, _ = _run(capsys, "grid", "--nx", "4", "--ny", "3", "--format", "json")
    assert first == second
    assert len(json.loads(first)) == 12


def test_grid_needs_two_nodes(capsys):
    code, _, _ = _run(capsys, "grid", "--nx", "1", "--ny", "5")
    assert code == 2


def test_grid_to_file(capsys, tmp_path):
    target = tmp_path / "grid.csv"
    code, out, _ = _run(capsys, "grid", "--nx", "3", "--ny", "3", "--out", str(target))
    assert code == 0
    assert out == ""
    assert target.read_text().startswith("x,y,u,ux,uy,region\n")


def test_unwritable_output(capsys, tmp_path):
    code, _, err = _run(capsys, "grid", "--nx", "3", "--ny", "3", "--out", str(tmp_path / "missing" / "grid.csv"))
    assert code == 2
    assert "missing" in err


def test_diagonal_table(capsys):
    code, out, _ = _run(capsys, "diagonal", "--n", "11", "--format", "json")
    rows = json.loads(out)
    assert code == 0
    assert len(rows) == 11
    assert rows[0]["u"] == 0.0 and rows[-1]["u"] == 1.0
    assert all(a["u"] < b["u"] for a, b in zip(rows, rows[1:]))


def test_theta_command(capsys):
    code, out, _ = _run(capsys, "theta", "0.3", "0.25")
    payload = json.loads(out)
    assert code == 0
    assert payload["series"] == pytest.approx(payload["product"], abs=1e-12)
    assert payload["series_error"] < 1e-12


def test_verify_series_suite(capsys):
    code, out, _ = _run(capsys, "verify", "--suite", "series")
    report = json.loads(out)
    assert code == 0
    assert report["passed"]
    assert any(check["name"] == "θ₂ series/product agree" and check["passed"] for check in report["checks"])


def test_oracle_summary(capsys, tmp_path):
    target = tmp_path / "oracle.csv"
    code, out, _ = _run(capsys, "oracle", "--n", "17", "--stencil-radius", "2", "--out", str(target))
    summary = json.loads(out)
    assert code == 0
    assert summary["n"] == 17
    assert "gap_heatmap" not in summary
    lines = target.read_text().splitlines()
    assert lines[0] == "x,y,u,ux,uy,region"
    assert len(lines) == 1 + 17 * 17
