import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from app.errors import DomainError, OutOfRangeError, ValidationFailure
from modules.V1.muonbackground.services import MuonService
from modules.V1.sensitivity.controller import fit_rows
from modules.V1.sensitivity.schemas import ContourPoint, ExclusionContour, FitPoint
from modules.V1.sensitivity.services import SensitivityService


# -------------------- Detectable lambda --------------------


def test_lambda_per_watt_for_ge10(ge10):
    assert SensitivityService.detectable_lambda(ge10, 1.0, margin_factor=100.0) == pytest.approx(
        59.16, rel=1e-3
    )


def test_zero_background_gives_zero_lambda(ge10):
    assert SensitivityService.detectable_lambda(ge10, 0.0) == 0.0


def test_margin_must_be_positive(ge10):
    with pytest.raises(ValidationFailure):
        SensitivityService.detectable_lambda(ge10, 1e-12, margin_factor=0.0)


@settings(max_examples=50)
@given(power=st.floats(1e-20, 1e-6), r_c=st.floats(1e-10, 1e-3))
def test_lambda_scales_as_r_c_squared(ge10, power, r_c):
    base = SensitivityService.detectable_lambda(ge10, power, r_c)
    tenfold = SensitivityService.detectable_lambda(ge10, power, 10.0 * r_c)
    assert tenfold == pytest.approx(100.0 * base, rel=1e-12)


def test_lambda_at_6_7_km(ge10, gran_sasso, set_g):
    rows = SensitivityService.lambda_depth_scan(ge10, gran_sasso, set_g, [6.7])
    assert rows[0].lambda_det == pytest.approx(7.2e-17, rel=0.25)
    assert 0 < rows[0].lambda_err < rows[0].lambda_det


def test_lambda_decreases_with_depth(ge10, gran_sasso, set_g):
    rows = SensitivityService.lambda_depth_scan(
        ge10, gran_sasso, set_g, MuonService.depth_grid(gran_sasso)
    )
    values = [r.lambda_det for r in rows]
    assert all(b < a for a, b in zip(values, values[1:]))


def test_ino_depth_is_order_1e_14(ge10, gran_sasso, set_g):
    value = SensitivityService.lambda_depth_scan(ge10, gran_sasso, set_g, [3.7])[0].lambda_det
    assert 1e-15 < value < 1e-13


@pytest.mark.parametrize(
    "site, slope, intercept",
    [("gran_sasso", -0.50, -12.74), ("standard_rock", -0.49, -12.75)],
)
def test_lambda_depth_fit(request, ge10, set_g, site, slope, intercept):
    table = request.getfixturevalue(site)
    rows = SensitivityService.lambda_depth_scan(ge10, table, set_g, MuonService.depth_grid(table))
    fit = fit_rows([(r.depth, r.lambda_det, r.lambda_err) for r in rows])
    assert fit.slope == pytest.approx(slope, abs=0.03)
    assert fit.intercept == pytest.approx(intercept, abs=0.3)


# -------------------- Depth inversion --------------------


def test_depth_for_1e_16_at_margin_100(ge10, gran_sasso, set_g):
    depth = SensitivityService.depth_for_lambda(1e-16, ge10, gran_sasso, set_g, margin_factor=100.0)
    assert 6.2 <= depth <= 6.6


def test_depth_for_1e_16_at_margin_10(ge10, gran_sasso, set_g):
    depth = SensitivityService.depth_for_lambda(1e-16, ge10, gran_sasso, set_g, margin_factor=10.0)
    assert depth == pytest.approx(4.5, abs=0.3)


def test_depth_inversion_round_trips(ge10, gran_sasso, set_g):
    target = SensitivityService.lambda_depth_scan(ge10, gran_sasso, set_g, [5.25])[0].lambda_det
    depth = SensitivityService.depth_for_lambda(target, ge10, gran_sasso, set_g, tolerance=1e-6)
    assert depth == pytest.approx(5.25, abs=1e-4)


def test_unreachable_lambda_reports_endpoints(ge10, gran_sasso, set_g):
    with pytest.raises(OutOfRangeError) as info:
        SensitivityService.depth_for_lambda(1e-25, ge10, gran_sasso, set_g)
    assert info.value.details["lambda_deep"] > 1e-25
    assert info.value.details["lambda_shallow"] > info.value.details["lambda_deep"]


def test_non_positive_target_is_refused(ge10, gran_sasso, set_g):
    with pytest.raises(ValidationFailure):
        SensitivityService.depth_for_lambda(0.0, ge10, gran_sasso, set_g)


# -------------------- Contours --------------------


def test_contour_is_a_line_of_slope_two(ge10, gran_sasso, set_g):
    grid = SensitivityService.log_r_c_grid(1e-9, 1e-3, 10)
    contour = SensitivityService.exclusion_contour(ge10, gran_sasso, set_g, 6.5, grid)
    x = np.log10([p.r_c for p in contour.points])
    y = np.log10([p.lambda_det for p in contour.points])
    slope, _ = np.polyfit(x, y, 1)
    assert slope == pytest.approx(2.0, abs=1e-9)
    assert len(contour.points) == 61


def test_deeper_contours_lie_below(ge10, gran_sasso, set_g):
    grid = SensitivityService.log_r_c_grid(1e-8, 1e-4, 5)
    shallow, deep = SensitivityService.exclusion_contours(
        ge10, gran_sasso, set_g, [3.0, 6.5], grid, workers=2
    )
    assert (shallow.depth, deep.depth) == (3.0, 6.5)
    assert all(d.lambda_det < s.lambda_det for s, d in zip(shallow.points, deep.points))


def test_contour_at_reference_r_c_equals_depth_scan(ge10, gran_sasso, set_g):
    contour = SensitivityService.exclusion_contour(ge10, gran_sasso, set_g, 6.5, [1e-8, 1e-7, 1e-6])
    scan = SensitivityService.lambda_depth_scan(ge10, gran_sasso, set_g, [6.5])
    assert contour.points[1].r_c == 1e-7
    assert contour.points[1].lambda_det == scan[0].lambda_det


def test_contour_slope_is_two_between_neighbours(ge10, gran_sasso, set_g):
    contour = SensitivityService.exclusion_contour(
        ge10, gran_sasso, set_g, 5.0, SensitivityService.log_r_c_grid(1e-9, 1e-3, 4)
    )
    for left, right in zip(contour.points, contour.points[1:]):
        slope = math.log10(right.lambda_det / left.lambda_det) / math.log10(right.r_c / left.r_c)
        assert slope == pytest.approx(2.0, rel=1e-9)


def test_contour_reaches_1e_16_near_6_5_km(ge10, gran_sasso, set_g):
    grid = [1e-7]
    at_6_5 = SensitivityService.exclusion_contour(ge10, gran_sasso, set_g, 6.5, grid).points[0]
    at_6_6 = SensitivityService.exclusion_contour(ge10, gran_sasso, set_g, 6.6, grid).points[0]
    assert at_6_5.lambda_det == pytest.approx(1e-16, rel=0.1)
    assert at_6_6.lambda_det < 1e-16


def test_contour_points_must_increase_in_r_c():
    with pytest.raises(ValueError):
        ExclusionContour(
            depth=1.0,
            points=(ContourPoint(r_c=1e-6, lambda_det=1.0), ContourPoint(r_c=1e-7, lambda_det=1.0)),
        )


def test_empty_r_c_grid(ge10, gran_sasso, set_g):
    with pytest.raises(ValidationFailure):
        SensitivityService.exclusion_contour(ge10, gran_sasso, set_g, 6.5, [])


def test_log_grid_endpoints():
    grid = SensitivityService.log_r_c_grid(1e-9, 1e-3, 10)
    assert grid[0] == pytest.approx(1e-9)
    assert grid[-1] == pytest.approx(1e-3)


# -------------------- Surface --------------------


def test_surface_lambda_top_face_within_factor_two(ge10):
    estimate = SensitivityService.surface_lambda(ge10, faces="top")
    assert 0.5e-9 <= estimate.lambda_det <= 2e-9


def test_surface_lambda_default_faces_within_order_of_magnitude(ge10):
    estimate = SensitivityService.surface_lambda(ge10)
    assert 1e-10 <= estimate.lambda_det <= 1e-8


def test_surface_extrapolation_of_depth_fit(ge10, gran_sasso, set_g):
    rows = SensitivityService.lambda_depth_scan(
        ge10, gran_sasso, set_g, MuonService.depth_grid(gran_sasso)
    )
    fit = fit_rows([(r.depth, r.lambda_det, r.lambda_err) for r in rows])
    estimate = SensitivityService.surface_extrapolation(fit)
    assert estimate.lambda_det == pytest.approx(10.0**fit.intercept)
    assert 1e-14 < estimate.lambda_det < 1e-12


# -------------------- Fitting --------------------


def test_fit_recovers_seeded_line():
    rng = np.random.default_rng(12)
    x = np.linspace(0.0, 10.0, 25)
    sigma = 0.05
    log_y = -0.3 * x + 2.0 + rng.normal(0.0, sigma, x.size)
    y = 10.0**log_y
    points = [
        FitPoint(x=float(a), y=float(b), y_err=float(b * math.log(10.0) * sigma)) for a, b in zip(x, y)
    ]
    fit = SensitivityService.weighted_log_linear_fit(points)
    assert abs(fit.slope + 0.3) < 3.0 * fit.slope_err
    assert abs(fit.intercept - 2.0) < 3.0 * fit.intercept_err
    assert fit.weighted
    assert fit.chi2 == pytest.approx(23.0, abs=4.0 * math.sqrt(2.0 * 23.0))


def test_fit_errors_scale_with_y_err():
    x = [0.0, 1.0, 2.0, 3.0]
    y = [1.0, 0.5, 0.3, 0.1]
    narrow = SensitivityService.weighted_log_linear_fit(
        [FitPoint(x=a, y=b, y_err=0.01 * b) for a, b in zip(x, y)]
    )
    wide = SensitivityService.weighted_log_linear_fit(
        [FitPoint(x=a, y=b, y_err=0.02 * b) for a, b in zip(x, y)]
    )
    assert wide.slope == pytest.approx(narrow.slope)
    assert wide.slope_err == pytest.approx(2.0 * narrow.slope_err)


def test_unweighted_fit_of_exact_line():
    points = [FitPoint(x=d, y=10.0 ** (-0.5 * d - 3.0)) for d in (1.0, 2.0, 3.0, 4.0)]
    fit = SensitivityService.weighted_log_linear_fit(points)
    assert not fit.weighted
    assert fit.slope == pytest.approx(-0.5)
    assert fit.intercept == pytest.approx(-3.0)
    assert fit.slope_err == pytest.approx(0.0, abs=1e-9)
    assert fit.caption("d") == "y = -0.50d - 3.00"


@pytest.mark.parametrize(
    "points",
    [
        [FitPoint(x=1.0, y=1.0)],
        [FitPoint(x=1.0, y=1.0), FitPoint(x=1.0, y=2.0)],
        [FitPoint(x=1.0, y=-1.0), FitPoint(x=2.0, y=2.0)],
    ],
)
def test_degenerate_fits_are_domain_errors(points):
    with pytest.raises(DomainError):
        SensitivityService.weighted_log_linear_fit(points)


def test_zero_error_points_make_the_fit_unweighted(caplog):
    points = [
        FitPoint(x=1.0, y=1e-3, y_err=1e-5),
        FitPoint(x=2.0, y=1e-4, y_err=0.0),
        FitPoint(x=3.0, y=1e-5, y_err=1e-7),
    ]
    with caplog.at_level("WARNING"):
        fit = SensitivityService.weighted_log_linear_fit(points)
    assert not fit.weighted
    assert fit.slope == pytest.approx(-1.0)
    assert fit.intercept == pytest.approx(-2.0)
    assert "fitting unweighted" in caplog.text


def test_equal_errors_match_normal_equations():
    x = np.array([0.5, 2.0, 3.5])
    log_y = np.array([-3.1, -3.9, -4.8])
    points = [FitPoint(x=float(a), y=float(10.0**b), y_err=float(0.1 * 10.0**b)) for a, b in zip(x, log_y)]
    fit = SensitivityService.weighted_log_linear_fit(points)

    n, sx, sxx = len(x), x.sum(), (x * x).sum()
    sy, sxy = log_y.sum(), (x * log_y).sum()
    det = n * sxx - sx * sx
    assert fit.slope == pytest.approx((n * sxy - sx * sy) / det, rel=1e-10)
    assert fit.intercept == pytest.approx((sxx * sy - sx * sxy) / det, rel=1e-10)


def test_fit_rows_needs_two_distinct_depths():
    assert fit_rows([(1.0, 1e-3, 1e-4)]) is None
    assert fit_rows([(1.0, 1e-3, 1e-4), (2.0, 0.0, 0.0)]) is None
