import math

import pytest

from app.core.exceptions import ConvergenceError, DomainError, TruncationError
from app.core.utils import squeeze_bounds
from app.schemas.minimax_dto import PlanePoint
from app.services.minimax_solver import DenseGridMinimax

QUARTER = math.pi / 4
CENTER_VALUE = 0.3960
ROOT_TOL = 1e-13


def test_inner_radius_on_the_diagonal(solver):
    r = solver.inner_max_radius(PlanePoint(x=0.5, y=0.5), QUARTER)
    assert r == pytest.approx(0.747, abs=1e-3)


def test_inner_radius_tends_to_one_near_the_axis(solver):
    point = PlanePoint(x=0.4, y=0.3)
    near_axis = solver.inner_max_radius(point, 0.01)
    assert near_axis > 0.99
    assert near_axis > solver.inner_max_radius(point, 0.3)


def test_inner_radius_rejects_end_angles(solver):
    with pytest.raises(DomainError):
        solver.inner_max_radius(PlanePoint(x=0.4, y=0.3), 0.0)


def test_diagonal_angle_is_exact(solver):
    assert solver.outer_min_angle(PlanePoint(x=0.3, y=0.3)) == QUARTER


def test_angle_moves_away_from_the_larger_coordinate(solver):
    assert solver.outer_min_angle(PlanePoint(x=0.25, y=0.75)) < QUARTER
    assert solver.outer_min_angle(PlanePoint(x=0.75, y=0.25)) > QUARTER


def test_swapped_points_have_complementary_angles(solver):
    first = solver.outer_min_angle(PlanePoint(x=0.25, y=0.75))
    second = solver.outer_min_angle(PlanePoint(x=0.75, y=0.25))
    assert first + second == pytest.approx(math.pi / 2, abs=1e-11)


def test_center_of_quadrant(solver):
    result = solver.solve_minimax(PlanePoint(x=0.5, y=0.5))
    assert result.u == pytest.approx(CENTER_VALUE, abs=1e-3)
    assert result.r_star == pytest.approx(0.747, abs=1e-3)
    gx, gy = result.grad
    assert gx == pytest.approx(0.528, abs=1e-3)
    assert gy == pytest.approx(gx, abs=1e-15)
    assert not result.closed_form


@pytest.mark.parametrize("x, y", [(0.25, 0.75), (0.1, 0.2), (0.9, 0.05), (0.6, 0.95), (0.33, 0.34)])
def test_first_order_conditions_and_bounds(solver, x, y):
    result = solver.solve_minimax(PlanePoint(x=x, y=y))
    assert result.radial_residual < 10 * ROOT_TOL
    assert result.angular_residual < 10 * ROOT_TOL
    assert 1.0 - math.hypot(1.0 - x, 1.0 - y) - 1e-12 <= result.u <= min(x, y) + 1e-12


def test_swap_symmetry_of_values(solver):
    first = solver.solve_minimax(PlanePoint(x=0.25, y=0.75))
    second = solver.solve_minimax(PlanePoint(x=0.75, y=0.25))
    assert first.u == pytest.approx(second.u, abs=1e-12)


def test_value_is_saddle_of_objective(solver):
    point = PlanePoint(x=0.3, y=0.6)
    result = solver.solve_minimax(point)
    assert solver.objective(point, result.r_star, result.theta_star) == pytest.approx(result.u, abs=1e-14)
    # max in r, min in theta
    assert solver.objective(point, result.r_star - 1e-3, result.theta_star) < result.u
    turned = result.theta_star + 1e-3
    assert solver.objective(point, solver.inner_max_radius(point, turned), turned) > result.u


def test_second_angular_derivative_matches_differences(solver):
    point = PlanePoint(x=0.3, y=0.6)
    theta, step = 0.5, 1e-5
    _, h2 = solver.h_prime(point, theta)
    ahead, _ = solver.h_prime(point, theta + step)
    behind, _ = solver.h_prime(point, theta - step)
    assert h2 >= 0.0
    assert h2 == pytest.approx((ahead - behind) / (2 * step), rel=1e-5, abs=1e-7)


def test_closed_form_limit_next_to_a_median(solver):
    result = solver.solve_minimax(PlanePoint(x=1.0 - 1e-10, y=0.4))
    assert result.closed_form
    assert result.r_star == 1.0
    assert result.u == pytest.approx(0.4, abs=1e-9)


@pytest.mark.parametrize("delta", [1e-5, 3e-6, 1e-8])
def test_near_median_solve_is_converged_or_refused(solver, delta):
    point = PlanePoint(x=1.0 - delta, y=0.5)
    lower, upper = squeeze_bounds(point.x, point.y)
    try:
        result = solver.solve_minimax(point)
    except (TruncationError, ConvergenceError):
        return
    assert lower - 1e-13 <= result.u <= upper + 1e-13
    if upper - lower <= solver.policy.squeeze_tol:
        assert result.closed_form
    else:
        assert not result.closed_form
        assert result.angular_residual < 1e-9


@pytest.mark.parametrize("x, y", [(0.0, 0.5), (1.0, 0.5), (0.5, 1.5)])
def test_points_outside_open_quadrant_are_rejected(solver, x, y):
    with pytest.raises(DomainError):
        solver.solve_minimax(PlanePoint(x=x, y=y))


def test_plane_point_outside_square():
    with pytest.raises(DomainError):
        PlanePoint.at(2.5, 0.0)


@pytest.mark.parametrize("x, y", [(0.2, 0.7), (0.5, 0.5), (0.8, 0.4)])
def test_dense_grid_agrees(solver, series_policy, x, y):
    brute = DenseGridMinimax(series_policy=series_policy)
    point = PlanePoint(x=x, y=y)
    assert brute.solve(point) == pytest.approx(solver.solve_minimax(point).u, abs=1e-6)


@pytest.mark.parametrize("x, y", [(0.3, 0.3), (0.1, 0.6)])
def test_coarse_dense_grid_agrees(solver, series_policy, x, y):
    brute = DenseGridMinimax(201, 201, series_policy)
    point = PlanePoint(x=x, y=y)
    assert brute.solve(point) == pytest.approx(solver.solve_minimax(point).u, abs=1e-6)
