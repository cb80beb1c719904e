import pytest

from app.core.constants import VerifySuite
from app.core.exceptions import TruncationError
from app.services.verification import VerificationRunner


@pytest.fixture(scope="module")
def runner(field, analysis):
    return VerificationRunner(field, analysis, sample_count=100, dense_grid_size=201)


def _names(report):
    return {check.name for check in report.checks}


def test_series_suite_passes(runner):
    report = runner.run(VerifySuite.SERIES)
    assert report.suite == "series"
    assert "θ₂ series/product agree" in _names(report)
    assert report.passed, [check.name for check in report.failed]


def test_analysis_suite_passes(runner):
    report = runner.run(VerifySuite.ANALYSIS)
    assert "d_max > 0" in _names(report)
    assert report.passed, [check.name for check in report.failed]


def _check(report, name):
    return next(check for check in report.checks if check.name == name)


def test_first_approximation_check_compares_enough_points(runner):
    report = runner.run(VerifySuite.ANALYSIS)
    assert _check(report, "first approximation compared at 50 or more points").measured >= 50
    approximation = _check(report, "first approximation where |grad u| <= 0.3")
    assert approximation.passed
    assert not approximation.detail.startswith("0 ")


def test_heat_check_uses_extrapolated_differences(runner):
    report = runner.run(VerifySuite.ANALYSIS)
    heat = _check(report, "U(exp(-t), theta) solves the heat equation")
    assert heat.passed
    assert "extrapolated" in heat.detail


@pytest.mark.slow
def test_median_crossings_are_not_closed_form(runner):
    report = runner.run(VerifySuite.FIELD)
    nested = _check(report, "median crossings use the nested minimax")
    assert nested.passed
    assert _check(report, "gradient jump across medians within 4 delta / (1 - t)").passed


@pytest.mark.slow
def test_minimax_suite_passes(runner):
    report = runner.run(VerifySuite.MINIMAX)
    assert "dense-grid minimax agreement" in _names(report)
    assert report.passed, [check.name for check in report.failed]


@pytest.mark.slow
def test_field_suite_passes(runner):
    report = runner.run(VerifySuite.FIELD)
    assert "∞-harmonic residual < 1e-9" in _names(report)
    assert report.passed, [check.name for check in report.failed]


def test_aborted_suite_is_reported_as_failure():
    def broken_checks():
        raise TruncationError("W", 0.999999, 1)

    results = VerificationRunner._guarded(broken_checks)
    assert len(results) == 1
    assert not results[0].passed
    assert results[0].name == "broken_checks"
    assert "1 terms" in results[0].detail
