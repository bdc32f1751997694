import logging
import math
from concurrent.futures import ThreadPoolExecutor
from typing import Optional, Sequence

import numpy as np
from scipy import optimize

from app.errors import DomainError, OutOfRangeError, ValidationFailure
from modules.V1.corephysics.models import PAPER_CONSTANTS
from modules.V1.corephysics.schemas import Constants, DetectorSpec, require_finite
from modules.V1.corephysics.services import CslService
from modules.V1.muonbackground.models import DEFAULT_PARAM_ERROR
from modules.V1.muonbackground.schemas import (
    DepthIntensityTable,
    FacesConvention,
    MeanChordResult,
    MeanEnergyParams,
)
from modules.V1.muonbackground.services import MuonService
from .schemas import (
    ContourPoint,
    ExclusionContour,
    FitPoint,
    FitResult,
    LambdaScanRow,
    SurfaceEstimate,
)

logger = logging.getLogger(__name__)

LN10 = math.log(10.0)
REFERENCE_R_C = 1e-7


class SensitivityService:
    # -------------------- Detectability --------------------

    @staticmethod
    def detectable_lambda(
        det: DetectorSpec,
        background_power: float,
        r_c: float = REFERENCE_R_C,
        margin_factor: float = 100.0,
        constants: Constants = PAPER_CONSTANTS,
    ) -> float:
        """The lambda whose CSL power in the absorber equals margin_factor * background_power."""
        require_finite("background_power", background_power, minimum=0.0)
        if not margin_factor > 0:
            raise ValidationFailure(f"margin_factor must be > 0, got {margin_factor}")
        return CslService.lambda_for_power(
            margin_factor * background_power, det.mass_kg, r_c, constants
        )

    @staticmethod
    def lambda_depth_scan(
        det: DetectorSpec,
        table: DepthIntensityTable,
        params: MeanEnergyParams,
        depths: Sequence[float],
        margin_factor: float = 100.0,
        r_c: float = REFERENCE_R_C,
        faces: FacesConvention = "top+sides",
        param_error: float = DEFAULT_PARAM_ERROR,
        chord: Optional[MeanChordResult] = None,
        constants: Constants = PAPER_CONSTANTS,
    ) -> list[LambdaScanRow]:
        powers = MuonService.muon_depth_scan(
            det, table, params, depths, faces, param_error, chord, constants
        )
        return [
            LambdaScanRow(
                depth=row.depth,
                lambda_det=SensitivityService.detectable_lambda(
                    det, row.power, r_c, margin_factor, constants
                ),
                lambda_err=SensitivityService.detectable_lambda(
                    det, row.power_err, r_c, margin_factor, constants
                ),
            )
            for row in powers
        ]

    @staticmethod
    def depth_for_lambda(
        target_lambda: float,
        det: DetectorSpec,
        table: DepthIntensityTable,
        params: MeanEnergyParams,
        margin_factor: float = 100.0,
        r_c: float = REFERENCE_R_C,
        faces: FacesConvention = "top+sides",
        tolerance: float = 1e-3,
        chord: Optional[MeanChordResult] = None,
        constants: Constants = PAPER_CONSTANTS,
    ) -> float:
        """Depth (km.w.e) at which the detectable lambda falls to target_lambda."""
        require_finite("target_lambda", target_lambda)
        if target_lambda <= 0:
            raise ValidationFailure("target lambda must be > 0")

        def log_lambda(depth: float) -> float:
            power = MuonService.muon_power(
                det, depth, table, params, faces, chord=chord, constants=constants
            ).power
            return math.log10(
                SensitivityService.detectable_lambda(det, power, r_c, margin_factor, constants)
            )

        low, high = table.depth_range
        if low <= 0:
            # <E> vanishes at the surface; start just below it
            low = min(tolerance, high)
        target = math.log10(target_lambda)
        at_low, at_high = log_lambda(low), log_lambda(high)
        if not at_high <= target <= at_low:
            raise OutOfRangeError(
                f"lambda {target_lambda:.3e} 1/s is not reachable in [{low}, {high}] km.w.e at "
                f"{table.site}: detectable lambda runs from {10**at_low:.3e} to {10**at_high:.3e} 1/s",
                details={"lambda_shallow": 10**at_low, "lambda_deep": 10**at_high},
            )
        if target == at_low:
            return low
        if target == at_high:
            return high
        depth = optimize.bisect(lambda d: log_lambda(d) - target, low, high, xtol=tolerance)
        logger.debug("Depth for lambda %.3e: %.4f km.w.e", target_lambda, depth)
        return float(depth)

    @staticmethod
    def exclusion_contour(
        det: DetectorSpec,
        table: DepthIntensityTable,
        params: MeanEnergyParams,
        depth: float,
        r_c_grid: Sequence[float],
        margin_factor: float = 100.0,
        faces: FacesConvention = "top+sides",
        chord: Optional[MeanChordResult] = None,
        constants: Constants = PAPER_CONSTANTS,
    ) -> ExclusionContour:
        if not r_c_grid:
            raise ValidationFailure("r_c grid is empty")
        grid = sorted(r_c_grid)
        power = MuonService.muon_power(
            det, depth, table, params, faces, chord=chord, constants=constants
        ).power
        points = tuple(
            ContourPoint(
                r_c=r_c,
                lambda_det=SensitivityService.detectable_lambda(
                    det, power, r_c, margin_factor, constants
                ),
            )
            for r_c in grid
        )
        return ExclusionContour(
            depth=depth, margin_factor=margin_factor, site=table.site, points=points
        )

    @staticmethod
    def exclusion_contours(
        det: DetectorSpec,
        table: DepthIntensityTable,
        params: MeanEnergyParams,
        depths: Sequence[float],
        r_c_grid: Sequence[float],
        margin_factor: float = 100.0,
        faces: FacesConvention = "top+sides",
        workers: int = 4,
        constants: Constants = PAPER_CONSTANTS,
    ) -> list[ExclusionContour]:
        """One contour per depth, in the order the depths were given."""
        with ThreadPoolExecutor(max_workers=workers) as pool:
            return list(
                pool.map(
                    lambda d: SensitivityService.exclusion_contour(
                        det, table, params, d, r_c_grid, margin_factor, faces, constants=constants
                    ),
                    depths,
                )
            )

    @staticmethod
    def log_r_c_grid(low: float = 1e-9, high: float = 1e-3, per_decade: int = 10) -> list[float]:
        if not 0 < low < high:
            raise ValidationFailure("r_c grid needs 0 < low < high")
        count = int(round(math.log10(high / low) * per_decade)) + 1
        return [float(v) for v in np.logspace(math.log10(low), math.log10(high), count)]

    @staticmethod
    def surface_lambda(
        det: DetectorSpec,
        margin_factor: float = 100.0,
        r_c: float = REFERENCE_R_C,
        faces: FacesConvention = "top+sides",
        constants: Constants = PAPER_CONSTANTS,
    ) -> SurfaceEstimate:
        result = MuonService.surface_muon_power(det, faces, constants=constants)
        return SurfaceEstimate(
            lambda_det=SensitivityService.detectable_lambda(
                det, result.power, r_c, margin_factor, constants
            ),
            lambda_err=SensitivityService.detectable_lambda(
                det, result.power_err, r_c, margin_factor, constants
            ),
            source=f"surface muons ({faces})",
            power=result.power,
        )

    @staticmethod
    def surface_extrapolation(fit: FitResult) -> SurfaceEstimate:
        """Evaluate a log10(lambda) vs depth fit at zero depth."""
        value = 10.0**fit.intercept
        return SurfaceEstimate(
            lambda_det=value,
            lambda_err=value * LN10 * fit.intercept_err,
            source="depth fit extrapolated to 0 km.w.e",
        )

    # -------------------- Fitting --------------------

    @staticmethod
    def weighted_log_linear_fit(points: Sequence[FitPoint]) -> FitResult:
        """
        Least squares of log10(y) on x with weights 1/sigma^2,
        sigma = y_err / (y ln 10).

        Any zero y_err gives an ordinary fit whose errors come from the
        residual scatter; positive y_err are then ignored. Otherwise the
        errors come from the weights alone and scale with y_err.
        """
        if len(points) < 2:
            raise DomainError(f"a fit needs at least 2 points, got {len(points)}")
        x = np.array([p.x for p in points], dtype=np.float64)
        y = np.array([p.y for p in points], dtype=np.float64)
        y_err = np.array([p.y_err for p in points], dtype=np.float64)
        if np.any(y <= 0):
            raise DomainError("log-linear fit needs y > 0 at every point")
        if np.any(y_err < 0):
            raise DomainError("y_err must be >= 0")

        weighted = bool(np.all(y_err > 0))
        if not weighted and np.any(y_err > 0):
            logger.warning(
                "%d of %d points have y_err = 0; fitting unweighted",
                int(np.sum(y_err == 0)),
                len(points),
            )

        log_y = np.log10(y)
        sigma = y_err / (y * LN10) if weighted else np.ones_like(x)

        w = 1.0 / sigma**2
        ss = w.sum()
        sx = (w * x).sum()
        sy = (w * log_y).sum()
        t = (x - sx / ss) / sigma
        st2 = float((t * t).sum())
        if not st2 > 0:
            raise DomainError("degenerate fit: all x values are equal")

        slope = float((t * log_y / sigma).sum() / st2)
        intercept = float((sy - sx * slope) / ss)
        residual = log_y - (slope * x + intercept)
        chi2 = float((w * residual**2).sum())

        var_slope = 1.0 / st2
        var_intercept = (1.0 + sx * sx / (ss * st2)) / ss
        covariance = -sx / (ss * st2)
        if not weighted:
            dof = len(points) - 2
            scale = chi2 / dof if dof > 0 else 0.0
            var_slope *= scale
            var_intercept *= scale
            covariance *= scale

        logger.debug(
            "Fit over %d points: slope %.4f +- %.2g, intercept %.4f +- %.2g",
            len(points),
            slope,
            math.sqrt(var_slope),
            intercept,
            math.sqrt(var_intercept),
        )
        return FitResult(
            slope=slope,
            intercept=intercept,
            slope_err=math.sqrt(var_slope),
            intercept_err=math.sqrt(var_intercept),
            covariance=float(covariance),
            chi2=max(chi2, 0.0),
            n_points=len(points),
            weighted=weighted,
        )
