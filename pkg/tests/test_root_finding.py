import math

import pytest

from app.core.exceptions import BracketError, ConvergenceError
from app.services.root_finding import safeguarded_newton

TOL = 1e-13


def _cubic(x):
    return x ** 3 - 2.0, 3.0 * x ** 2


def test_finds_cube_root():
    result = safeguarded_newton(_cubic, 0.0, 2.0, tol=TOL, max_iter=100, bracket_shrink=1e-15)
    assert result.root == pytest.approx(2.0 ** (1.0 / 3.0), abs=1e-12)
    assert result.residual <= TOL
    assert result.iterations >= 1


def test_decreasing_function_is_handled():
    def func(x):
        return 1.0 - x * x, -2.0 * x

    result = safeguarded_newton(func, 0.0, 3.0, tol=TOL, max_iter=100, bracket_shrink=1e-15)
    assert result.root == pytest.approx(1.0, abs=1e-12)


def test_endpoint_root_returns_immediately():
    result = safeguarded_newton(_cubic, 0.0, 2.0 ** (1.0 / 3.0), tol=TOL, max_iter=100,
                                bracket_shrink=1e-15, f_hi=0.0)
    assert result.iterations == 0
    assert result.root == 2.0 ** (1.0 / 3.0)


def test_same_sign_bracket_raises():
    with pytest.raises(BracketError) as info:
        safeguarded_newton(_cubic, 2.0, 3.0, tol=TOL, max_iter=100, bracket_shrink=1e-15, name="cubic")
    assert info.value.details["solve"] == "cubic"


def test_useless_derivative_falls_back_to_bisection():
    def func(x):
        return math.atan(x - 0.3), float("nan")

    result = safeguarded_newton(func, -5.0, 5.0, tol=1e-12, max_iter=200, bracket_shrink=1e-15)
    assert result.root == pytest.approx(0.3, abs=1e-11)


def test_flat_start_does_not_escape_bracket():
    # Newton from the guess would jump far outside [0, 10]
    def func(x):
        return math.tanh(x - 7.0), 1.0 / math.cosh(x - 7.0) ** 2

    result = safeguarded_newton(func, 0.0, 10.0, tol=TOL, max_iter=200, bracket_shrink=1e-15, guess=0.5)
    assert result.root == pytest.approx(7.0, abs=1e-12)


def test_iteration_cap_raises():
    with pytest.raises(ConvergenceError):
        safeguarded_newton(lambda x: (x - 0.123456789, 0.0), 0.0, 1.0,
                           tol=1e-15, max_iter=3, bracket_shrink=1e-16)


def test_collapsed_bracket_around_a_jump_raises():
    def jump(x):
        return (1.0 if x >= 0.3 else -1.0), 0.0

    with pytest.raises(ConvergenceError):
        safeguarded_newton(jump, 0.0, 1.0, tol=TOL, max_iter=200, bracket_shrink=1e-12)


def test_collapsed_bracket_accepts_steep_root():
    def steep(x):
        return 1e9 * (x - 0.3), 1e9

    result = safeguarded_newton(steep, 0.0, 1.0, tol=1e-14, max_iter=200, bracket_shrink=1e-12)
    assert result.root == pytest.approx(0.3, abs=1e-12)
