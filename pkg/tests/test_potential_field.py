import math

import numpy as np
import pytest
from pydantic import ValidationError

from app.core.constants import RegionTag
from app.core.exceptions import (
    DomainError,
    HessianUndefinedError,
    SingularHessianError,
    UndefinedGradientError,
)
from app.schemas.field_dto import FieldSample
from app.schemas.minimax_dto import PlanePoint
from app.services.potential_field import fold
from app.services.series_core import SeriesCalculator

SQRT2 = math.sqrt(2.0)
CENTER_VALUE = 0.3960
OFF_DIAGONAL = [(0.2, 0.7), (0.3, 0.6), (0.8, 0.35), (0.15, 0.4), (0.6, 0.9)]


def _p(x, y):
    return PlanePoint(x=x, y=y)


# ==================== Folding and regions ====================

def test_fold_records_reflections_and_swap():
    folded = fold(_p(1.7, 0.2))
    assert folded.a == pytest.approx(0.2)
    assert folded.b == pytest.approx(0.3)
    assert folded.sign_x == -1.0 and folded.sign_y == 1.0
    assert folded.swapped


@pytest.mark.parametrize("x, y, region", [
    (1.0, 1.0, RegionTag.CENTER),
    (1.0, 0.3, RegionTag.MEDIAN),
    (0.3, 1.0, RegionTag.MEDIAN),
    (0.0, 0.4, RegionTag.BOUNDARY),
    (2.0, 1.5, RegionTag.BOUNDARY),
    (0.5, 0.5, RegionTag.DIAGONAL),
    (1.5, 0.5, RegionTag.DIAGONAL),
    (0.2, 0.7, RegionTag.INTERIOR),
])
def test_regions(field, x, y, region):
    assert field.classify_region(_p(x, y)) is region


# ==================== Values ====================

def test_dirichlet_data(field):
    assert field.eval_u(_p(1.0, 1.0)) == 1.0
    for t in np.linspace(0.0, 2.0, 21):
        for x, y in ((t, 0.0), (t, 2.0), (0.0, t), (2.0, t)):
            assert field.eval_u(_p(x, y)) == 0.0


def test_median_values_are_linear(field):
    assert field.eval_u(_p(1.0, 0.3)) == pytest.approx(0.3, abs=1e-15)
    assert field.eval_u(_p(1.7, 1.0)) == pytest.approx(0.3, abs=1e-15)


def test_value_is_continuous_at_the_median(field):
    assert field.eval_u(_p(1.0 - 1e-10, 0.4)) == pytest.approx(0.4, abs=1e-8)


def test_reflected_points_share_the_value(field):
    base = field.eval_u(_p(0.5, 0.5))
    assert base == pytest.approx(CENTER_VALUE, abs=1e-3)
    for x, y in ((1.5, 0.5), (0.5, 1.5), (1.5, 1.5)):
        assert field.eval_u(_p(x, y)) == base
    off = field.eval_u(_p(0.2, 0.7))
    assert field.eval_u(_p(0.7, 0.2)) == off
    assert field.eval_u(_p(1.8, 1.3)) == pytest.approx(off, abs=1e-12)


def test_squeeze_bounds_on_a_coarse_grid(field):
    for x in np.linspace(0.0, 2.0, 21):
        for y in np.linspace(0.0, 2.0, 21):
            point = _p(float(x), float(y))
            u = field.eval_u(point)
            assert field.lower_bound(point) - 1e-9 <= u <= field.upper_bound(point) + 1e-9


# ==================== Gradient ====================

def test_gradient_undefined_at_center_and_outer_corners(field):
    with pytest.raises(UndefinedGradientError):
        field.eval_grad(_p(1.0, 1.0))
    with pytest.raises(UndefinedGradientError):
        field.eval_grad(_p(2.0, 0.0))


def test_diagonal_gradient(field):
    gx, gy = field.eval_grad(_p(0.5, 0.5))
    assert gx == pytest.approx(0.528, abs=1e-3)
    assert gx == gy
    g = field.diagonal_value(SQRT2 * 0.5).g
    assert gx == pytest.approx(g / SQRT2, abs=1e-15)


def test_gradient_flips_under_reflection(field):
    a, b = field.eval_grad(_p(0.3, 0.6))
    assert field.eval_grad(_p(1.7, 0.6)) == pytest.approx((-a, b))
    assert field.eval_grad(_p(0.3, 1.4)) == pytest.approx((a, -b))
    assert field.eval_grad(_p(0.6, 0.3)) == pytest.approx((b, a))


def test_median_gradient(field):
    assert field.eval_grad(_p(1.0, 0.3)) == (0.0, 1.0)
    assert field.eval_grad(_p(0.3, 1.0)) == (1.0, 0.0)
    assert field.eval_grad(_p(1.0, 1.7)) == (0.0, -1.0)


@pytest.mark.parametrize("delta", [1e-5, 3e-6, 1e-8])
def test_gradient_next_to_a_median(field, delta):
    t = 0.5
    point = _p(1.0 - delta, t)
    u = field.eval_u(point)
    assert field.lower_bound(point) - 1e-13 <= u <= field.upper_bound(point) + 1e-13
    gx, gy = field.eval_grad(point)
    assert 0.0 <= gx <= 2.0 * delta / (1.0 - t)
    assert gy == pytest.approx(1.0, abs=1e-6)


@pytest.mark.parametrize("t", [0.1, 0.5, 0.9])
@pytest.mark.parametrize("delta", [1e-3, 2e-4])
def test_median_crossing_uses_the_nested_solve(field, t, delta):
    left, right = _p(1.0 - delta, t), _p(1.0 + delta, t)
    assert not field.solve_folded(fold(left)).closed_form
    (lx, ly), (rx, ry) = field.eval_grad(left), field.eval_grad(right)
    assert lx == pytest.approx(-rx, abs=1e-15) and ly == pytest.approx(ry, abs=1e-15)
    assert math.hypot(lx - rx, ly - ry) <= 4.0 * delta / (1.0 - t)


def test_boundary_gradient_is_normal(field):
    ux, uy = field.eval_grad(_p(0.0, 0.5))
    assert uy == 0.0
    assert 0.0 < ux < 1.0
    assert field.eval_grad(_p(2.0, 0.5)) == (-ux, 0.0)


def test_boundary_gradient_magnitude(field):
    assert field.boundary_gradient_magnitude(1.0) == 1.0
    small = field.boundary_gradient_magnitude(1e-3)
    assert small == pytest.approx((3e-3 * math.pi / 8.0) ** (1.0 / 3.0), rel=1e-9)
    values = [field.boundary_gradient_magnitude(t) for t in (0.1, 0.3, 0.6, 0.9)]
    assert values == sorted(values)
    with pytest.raises(DomainError):
        field.boundary_gradient_magnitude(0.0)


@pytest.mark.parametrize("x, y", OFF_DIAGONAL)
def test_gradient_matches_central_differences(field, x, y):
    h = 1e-5
    ux, uy = field.eval_grad(_p(x, y))
    fd_x = (field.eval_u(_p(x + h, y)) - field.eval_u(_p(x - h, y))) / (2 * h)
    fd_y = (field.eval_u(_p(x, y + h)) - field.eval_u(_p(x, y - h))) / (2 * h)
    assert ux == pytest.approx(fd_x, abs=1e-8)
    assert uy == pytest.approx(fd_y, abs=1e-8)


# ==================== Hessian ====================

@pytest.mark.parametrize("x, y", OFF_DIAGONAL)
def test_infinity_harmonic(field, x, y):
    g = np.array(field.eval_grad(_p(x, y)))
    hessian = np.array(field.eval_hessian(_p(x, y)))
    assert abs(g @ hessian @ g) < 1e-9


@pytest.mark.parametrize("x, y", OFF_DIAGONAL)
def test_determinant_identity(field, solver, x, y):
    result = solver.solve_minimax(_p(min(x, y), max(x, y)))
    r, theta = result.r_star, result.theta_star
    theta2 = SeriesCalculator.eval_theta2(2.0 * theta, r ** 16)
    expected = -(math.pi ** 2 / 16.0) * r ** 4 / theta2 ** 2
    assert np.linalg.det(np.array(field.eval_hessian(_p(x, y)))) == pytest.approx(expected, rel=1e-8)


def test_hessian_matches_gradient_differences(field):
    x, y, h = 0.3, 0.6, 1e-4
    hessian = field.eval_hessian(_p(x, y))
    ahead_x, behind_x = field.eval_grad(_p(x + h, y)), field.eval_grad(_p(x - h, y))
    ahead_y, behind_y = field.eval_grad(_p(x, y + h)), field.eval_grad(_p(x, y - h))
    assert hessian[0][0] == pytest.approx((ahead_x[0] - behind_x[0]) / (2 * h), abs=1e-5)
    assert hessian[0][1] == pytest.approx((ahead_y[0] - behind_y[0]) / (2 * h), abs=1e-5)
    assert hessian[1][1] == pytest.approx((ahead_y[1] - behind_y[1]) / (2 * h), abs=1e-5)


def test_hessian_is_refused_on_lines(field):
    with pytest.raises(SingularHessianError):
        field.eval_hessian(_p(0.5, 0.5))
    with pytest.raises(SingularHessianError):
        field.eval_hessian(_p(0.5, 0.5 + 1e-7))
    with pytest.raises(HessianUndefinedError):
        field.eval_hessian(_p(1.0, 0.3))
    with pytest.raises(HessianUndefinedError):
        field.eval_hessian(_p(0.0, 0.3))


def test_transverse_second_derivative_diverges(field):
    s = SQRT2 / 2
    values = [field.diagonal_transverse_second_derivative(s, t) for t in (1e-2, 1e-3, 1e-4)]
    assert values[0] > values[1] > values[2]
    assert values[2] < -50.0
    assert field.diagonal_transverse_second_derivative(s, 1e-3) == field.diagonal_transverse_second_derivative(s, -1e-3)


def test_transverse_second_derivative_matches_hessian(field):
    s, t = SQRT2 / 2, 0.2
    x, y = (s + t) / SQRT2, (s - t) / SQRT2
    (h_xx, h_xy), (_, h_yy) = field.eval_hessian(_p(x, y))
    expected = 0.5 * (h_xx - 2.0 * h_xy + h_yy)
    assert field.diagonal_transverse_second_derivative(s, t) == pytest.approx(expected, rel=1e-8)


# ==================== Diagonal ====================

def test_diagonal_endpoints(field):
    start = field.diagonal_value(0.0)
    end = field.diagonal_value(SQRT2)
    assert (start.u, start.g) == (0.0, 0.0)
    assert (end.u, end.g) == (1.0, 1.0)
    assert start.g_prime is None


def test_diagonal_midpoint(field):
    value = field.diagonal_value(SQRT2 * 0.5)
    assert value.u == pytest.approx(CENTER_VALUE, abs=1e-3)
    assert value.g == pytest.approx(0.747, abs=1e-3)
    assert value.g_prime > 0.0


def test_diagonal_is_increasing_and_convex(field):
    s_values = np.linspace(0.01, 1.3, 200)
    values = [field.diagonal_value(float(s)) for s in s_values]
    u = np.array([v.u for v in values])
    g = np.array([v.g for v in values])
    assert np.all(np.diff(u) > 0.0)
    assert np.all(np.diff(g) > 0.0)
    assert np.all(np.diff(u, 2) > 0.0)


def test_diagonal_rejects_arc_length_beyond_corner(field):
    with pytest.raises(DomainError):
        field.diagonal_value(1.5)


# ==================== Samples ====================

def test_sample_records(field):
    interior = field.sample(_p(0.3, 0.6))
    assert interior.region_tag is RegionTag.INTERIOR
    assert interior.hessian is not None

    diagonal = field.sample(_p(0.5, 0.5))
    assert diagonal.hessian is None
    assert diagonal.hessian_note

    center = field.sample(_p(1.0, 1.0))
    assert center.u == 1.0
    assert center.grad is None

    quick = field.sample(_p(0.3, 0.6), include_hessian=False)
    assert quick.hessian is None
    assert quick.hessian_note == "not requested"


@pytest.mark.parametrize("region", [RegionTag.MEDIAN, RegionTag.BOUNDARY, RegionTag.DIAGONAL, RegionTag.CENTER])
def test_sample_refuses_hessian_off_the_interior(region):
    with pytest.raises(ValidationError):
        FieldSample(point=_p(1.0, 0.3), u=0.3, grad=(0.0, 1.0),
                    hessian=((0.0, 0.0), (0.0, 0.0)), region_tag=region)


def test_interior_sample_without_hessian_needs_a_reason():
    with pytest.raises(ValidationError):
        FieldSample(point=_p(0.3, 0.6), u=0.2, grad=(0.3, 0.5), region_tag=RegionTag.INTERIOR)
    sample = FieldSample(point=_p(0.3, 0.6), u=0.2, grad=(0.3, 0.5), hessian_note="not requested",
                         region_tag=RegionTag.INTERIOR)
    assert sample.hessian is None
