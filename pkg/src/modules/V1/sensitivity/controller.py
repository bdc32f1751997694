import logging
import math
from pathlib import Path
from typing import Optional, Sequence

from app.errors import DomainError
from app.project_schemas import CommandResult, RunConfig
from app.svgplot import Plot, series, write_svg
from app.utility import slugify, write_csv
from modules.V1.corephysics.models import get_constants, get_detector
from modules.V1.datastore.dao import DataDAO
from modules.V1.datastore.services import DataService
from modules.V1.muonbackground.models import get_mean_energy_params
from modules.V1.muonbackground.services import MuonService
from .schemas import FitPoint, FitResult
from .services import SensitivityService

logger = logging.getLogger(__name__)

FIT_HEADER = ("slope", "intercept", "slope_err", "intercept_err", "chi2", "n")
LAMBDA_HEADER = ("depth_kmwe", "lambda_per_s", "lambda_err_per_s")
CONTOUR_HEADER = ("r_c_m", "lambda_per_s")
DEFAULT_SITES = ("gran_sasso", "standard_rock")


def fit_rows(rows: Sequence[tuple[float, float, float]]) -> Optional[FitResult]:
    """Fit (x, y, y_err) rows with y > 0; None when fewer than two distinct x remain."""
    usable = [r for r in rows if r[1] > 0]
    if len({r[0] for r in usable}) < 2:
        return None
    weighted = all(r[2] > 0 for r in usable)
    points = [FitPoint(x=x, y=y, y_err=err if weighted else 0.0) for x, y, err in usable]
    return SensitivityService.weighted_log_linear_fit(points)


def write_fit(path: Path, fit: FitResult) -> Path:
    return write_csv(
        path,
        FIT_HEADER,
        [(fit.slope, fit.intercept, fit.slope_err, fit.intercept_err, fit.chi2, fit.n_points)],
    )


# ------------------------ SENSITIVITY CONTROLLER ------------------------
def sensitivity_controller(
    cfg: RunConfig,
    preset: str,
    sites: Sequence[str] = DEFAULT_SITES,
    depths: Optional[Sequence[float]] = None,
    target_lambda: Optional[float] = None,
    r_c: float = 1e-7,
    params_name: str = "set_g",
    tolerance: float = 1e-3,
) -> CommandResult[dict]:
    constants = get_constants(cfg.constants)
    det = get_detector(preset)
    params = get_mean_energy_params(params_name)
    data = DataService(cfg.data_dir)
    out = cfg.out_dir

    surface = SensitivityService.surface_lambda(det, cfg.margin_factor, r_c, cfg.faces, constants)
    logger.info("Surface detectable lambda %.3e 1/s", surface.lambda_det)

    plotted, summary = [], []
    for site in sites:
        table = data.depth_intensity(site)
        grid = list(depths) if depths else MuonService.depth_grid(table)
        rows = SensitivityService.lambda_depth_scan(
            det, table, params, grid, cfg.margin_factor, r_c, cfg.faces, constants=constants
        )
        name = slugify(table.site)
        csv_path = write_csv(
            out / f"lambda_scan_{name}.csv",
            LAMBDA_HEADER,
            [(r.depth, r.lambda_det, r.lambda_err) for r in rows],
        )
        fit = fit_rows([(r.depth, r.lambda_det, r.lambda_err) for r in rows])
        extrapolated = None
        if fit is not None:
            write_fit(out / f"lambda_scan_{name}_fit.csv", fit)
            extrapolated = SensitivityService.surface_extrapolation(fit)
            logger.info("%s lambda fit: %s", table.site, fit.caption("d"))

        depth_for_target = None
        if target_lambda is not None:
            depth_for_target = SensitivityService.depth_for_lambda(
                target_lambda,
                det,
                table,
                params,
                cfg.margin_factor,
                r_c,
                cfg.faces,
                tolerance=tolerance,
                constants=constants,
            )
            logger.info(
                "%s: lambda %.3e reached at %.3f km.w.e", table.site, target_lambda, depth_for_target
            )

        plotted.append(series(table.site, grid, [r.lambda_det for r in rows]))
        summary.append(
            {
                "site": table.site,
                "rows": [r.model_dump() for r in rows],
                "fit": fit.model_dump() if fit else None,
                "extrapolated_surface": extrapolated.model_dump() if extrapolated else None,
                "depth_for_target": depth_for_target,
                "file": str(csv_path),
            }
        )

    write_svg(
        out / "lambda_depth.svg",
        Plot(
            title=f"Detectable lambda vs depth (margin {cfg.margin_factor:g}, {preset})",
            x_label="depth [km.w.e]",
            y_label="lambda [1/s]",
            log_y=True,
            series=tuple(plotted),
        ),
    )
    return CommandResult.success(
        message="Sensitivity scan complete",
        data={
            "preset": preset,
            "margin_factor": cfg.margin_factor,
            "r_c_m": r_c,
            "target_lambda": target_lambda,
            "surface": surface.model_dump(),
            "sites": summary,
        },
    )


# ------------------------ EXCLUSION CONTROLLER ------------------------
def exclusion_controller(
    cfg: RunConfig,
    preset: str,
    depths: Sequence[float],
    sites: Sequence[str] = DEFAULT_SITES,
    rc_min: float = 1e-9,
    rc_max: float = 1e-3,
    per_decade: int = 10,
    overlays: Sequence[Path] = (),
    params_name: str = "set_g",
    workers: int = 4,
) -> CommandResult[dict]:
    constants = get_constants(cfg.constants)
    det = get_detector(preset)
    params = get_mean_energy_params(params_name)
    data = DataService(cfg.data_dir)
    grid = SensitivityService.log_r_c_grid(rc_min, rc_max, per_decade)
    out = cfg.out_dir

    plotted, files, contours = [], [], []
    for site in sites:
        table = data.depth_intensity(site)
        for contour in SensitivityService.exclusion_contours(
            det, table, params, depths, grid, cfg.margin_factor, cfg.faces, workers, constants
        ):
            path = write_csv(
                out / f"contour_{slugify(table.site)}_{contour.depth:g}kmwe.csv",
                CONTOUR_HEADER,
                [(p.r_c, p.lambda_det) for p in contour.points],
            )
            files.append(str(path))
            contours.append(contour.model_dump())
            plotted.append(
                series(
                    f"{table.site} {contour.depth:g} km.w.e",
                    [p.r_c for p in contour.points],
                    [p.lambda_det for p in contour.points],
                )
            )

    for overlay_path in overlays:
        overlay = DataDAO.load_overlay(overlay_path)
        plotted.append(
            series(
                overlay.label,
                [p.r_c for p in overlay.points],
                [p.lambda_det for p in overlay.points],
                dashed=True,
            )
        )

    write_svg(
        out / "exclusion.svg",
        Plot(
            title=f"Projected lambda-r_c sensitivity (margin {cfg.margin_factor:g}, {preset})",
            x_label="r_c [m]",
            y_label="lambda [1/s]",
            log_x=True,
            log_y=True,
            series=tuple(plotted),
        ),
    )
    return CommandResult.success(
        message="Exclusion contours written",
        data={"contours": contours, "files": files, "overlays": [str(p) for p in overlays]},
    )


# ------------------------ FIT CONTROLLER ------------------------
def fit_controller(cfg: RunConfig, input_path: Path) -> CommandResult[dict]:
    points = DataDAO.load_fit_points(input_path)
    if len(points) < 2:
        raise DomainError(f"{input_path}: a fit needs at least 2 rows, found {len(points)}")
    fit = SensitivityService.weighted_log_linear_fit(points)
    path = write_fit(cfg.out_dir / "fit.csv", fit)
    logger.info("Fit %s: %s", input_path, fit.caption())
    return CommandResult.success(
        message=fit.caption(),
        data={
            "fit": fit.model_dump(),
            "file": str(path),
            "r_squared": _r_squared(points, fit),
        },
    )


def _r_squared(points: Sequence[FitPoint], fit: FitResult) -> Optional[float]:
    logs = [math.log10(p.y) for p in points]
    mean = sum(logs) / len(logs)
    total = sum((v - mean) ** 2 for v in logs)
    if total == 0:
        return None
    residual = sum((v - fit.predict(p.x)) ** 2 for v, p in zip(logs, points))
    return 1.0 - residual / total
