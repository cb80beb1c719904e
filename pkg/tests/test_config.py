import pytest
from pydantic import ValidationError

from app.core.config import Settings
from app.core.exceptions import ApplicationError, ConfigurationError, DomainError, TruncationError
from app.core.utils import format_float, halton_points, squeeze_bounds
from app.schemas.minimax_dto import SolverPolicy
from app.schemas.polar_dto import SeriesPolicy


def test_defaults_match_documented_tolerances():
    cfg = Settings()
    assert cfg.SERIES_ABS_TOL == 1e-15
    assert cfg.SERIES_MAX_TERMS == 100_000
    assert cfg.SERIES_BOUNDARY_SNAP == 1.0 - 1e-12
    assert cfg.SOLVER_ROOT_TOL == 1e-13
    assert cfg.LOG_LEVEL == "WARNING"


def test_environment_is_ignored(monkeypatch):
    monkeypatch.setenv("SERIES_ABS_TOL", "0.5")
    assert Settings().SERIES_ABS_TOL == 1e-15


def test_keyword_overrides_flow_into_policies():
    cfg = Settings(SERIES_ABS_TOL=1e-12, SOLVER_ROOT_TOL=1e-10)
    assert SeriesPolicy.from_settings(cfg).abs_tol == 1e-12
    assert SolverPolicy.from_settings(cfg).root_tol == 1e-10


@pytest.mark.parametrize("overrides", [
    {"SERIES_ABS_TOL": -1.0},
    {"SERIES_BOUNDARY_SNAP": 1.0},
    {"LOG_LEVEL": "LOUD"},
    {"UNKNOWN_SETTING": 1},
])
def test_invalid_overrides_are_rejected(overrides):
    with pytest.raises(ValidationError):
        Settings(**overrides)


def test_log_level_is_normalized():
    assert Settings(LOG_LEVEL="debug").LOG_LEVEL == "DEBUG"


def test_errors_carry_details():
    error = TruncationError("W", 0.999999, 10)
    assert isinstance(error, ApplicationError)
    assert error.details == {"series": "W", "argument": 0.999999, "max_terms": 10}
    assert "10 terms" in error.message

    domain = DomainError("q", 1.5, "[0, 1)")
    assert "[0, 1)" in str(domain)

    config = ConfigurationError("SERIES_ABS_TOL", "must be positive")
    assert config.details["setting"] == "SERIES_ABS_TOL"


def test_format_float_is_shortest_round_trip():
    assert format_float(0.1) == "0.1"
    assert format_float(1.0) == "1.0"
    assert format_float(None) == ""
    assert float(format_float(1 / 3)) == 1 / 3


def test_halton_points_are_deterministic_and_inside_box():
    first = halton_points(50, (0.0, 0.0), (1.0, 2.0))
    second = halton_points(50, (0.0, 0.0), (1.0, 2.0))
    assert first.shape == (50, 2)
    assert (first == second).all()
    assert (first[:, 0] > 0.0).all() and (first[:, 0] < 1.0).all()
    assert (first[:, 1] > 0.0).all() and (first[:, 1] < 2.0).all()


@pytest.mark.parametrize("x, y, lower, upper", [
    (1.0, 1.0, 1.0, 1.0),
    (0.0, 0.7, 1.0 - (1.0 + 0.09) ** 0.5, 0.0),
    (1.0, 0.3, 0.3, 0.3),
])
def test_squeeze_bounds(x, y, lower, upper):
    lo, hi = squeeze_bounds(x, y)
    assert lo == pytest.approx(lower, abs=1e-15)
    assert hi == pytest.approx(upper, abs=1e-15)
