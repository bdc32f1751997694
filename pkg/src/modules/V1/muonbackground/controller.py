import logging
from pathlib import Path
from typing import Optional, Sequence

from app.project_schemas import CommandResult, PathModel, RunConfig
from app.settings import get_settings
from app.svgplot import Plot, series, write_svg
from app.utility import slugify, write_csv
from modules.V1.corephysics.models import get_constants, get_detector
from modules.V1.corephysics.schemas import DetectorSpec
from modules.V1.datastore.services import DataService
from modules.V1.sensitivity.controller import fit_rows, write_fit
from .models import get_mean_energy_params
from .schemas import DepthIntensityTable, MeanChordResult
from .services import MuonService

logger = logging.getLogger(__name__)

SCAN_HEADER = ("depth_kmwe", "event_rate_per_s", "event_rate_err", "power_W", "power_err_W")
DEFAULT_SITES = ("gran_sasso", "standard_rock")


def load_sites(cfg: RunConfig, sites: Sequence[str]) -> list[DepthIntensityTable]:
    data = DataService(cfg.data_dir)
    return [data.depth_intensity(site) for site in sites]


def chord_for(
    cfg: RunConfig,
    det: DetectorSpec,
    path_model: PathModel,
    samples: Optional[int] = None,
    workers: Optional[int] = None,
) -> Optional[MeanChordResult]:
    analysis = get_settings().analysis
    chord = MuonService.resolve_chord(
        det,
        path_model,
        samples or analysis.mc_samples,
        cfg.seed,
        workers or analysis.mc_workers,
    )
    if chord is not None:
        logger.info(
            "Monte Carlo mean chord %.4f +- %.4f cm (seed %d)",
            chord.mean_chord,
            chord.mean_chord_err,
            chord.seed,
        )
    return chord


# ------------------------ MUON SCAN CONTROLLER ------------------------
def muon_scan_controller(
    cfg: RunConfig,
    preset: str,
    sites: Sequence[str] = DEFAULT_SITES,
    depths: Optional[Sequence[float]] = None,
    params_name: str = "set_g",
    path_model: PathModel = "side",
    mc_samples: Optional[int] = None,
    workers: Optional[int] = None,
) -> CommandResult[dict]:
    constants = get_constants(cfg.constants)
    det = get_detector(preset)
    params = get_mean_energy_params(params_name)
    param_error = get_settings().analysis.param_error
    chord = chord_for(cfg, det, path_model, mc_samples, workers)
    out: Path = cfg.out_dir

    rate_series, power_series, summary = [], [], []
    for table in load_sites(cfg, sites):
        grid = list(depths) if depths else MuonService.depth_grid(table)
        rows = MuonService.muon_depth_scan(
            det, table, params, grid, cfg.faces, param_error, chord, constants
        )
        name = slugify(table.site)
        csv_path = write_csv(
            out / f"muon_scan_{name}.csv",
            SCAN_HEADER,
            [(r.depth, r.event_rate, r.event_rate_err, r.power, r.power_err) for r in rows],
        )
        rate_fit = fit_rows([(r.depth, r.event_rate, r.event_rate_err) for r in rows])
        power_fit = fit_rows([(r.depth, r.power, r.power_err) for r in rows])
        if rate_fit is not None:
            write_fit(out / f"muon_scan_{name}_rate_fit.csv", rate_fit)
            logger.info("%s event rate fit: %s", table.site, rate_fit.caption("d"))
        if power_fit is not None:
            write_fit(out / f"muon_scan_{name}_power_fit.csv", power_fit)
            logger.info("%s power fit: %s", table.site, power_fit.caption("d"))

        rate_series.append(series(table.site, grid, [r.event_rate for r in rows]))
        power_series.append(series(table.site, grid, [r.power for r in rows]))
        summary.append(
            {
                "site": table.site,
                "rows": [r.model_dump() for r in rows],
                "rate_fit": rate_fit.model_dump() if rate_fit else None,
                "power_fit": power_fit.model_dump() if power_fit else None,
                "file": str(csv_path),
            }
        )

    write_svg(
        out / "muon_rate.svg",
        Plot(
            title=f"Muon events vs depth ({preset}, {cfg.faces})",
            x_label="depth [km.w.e]",
            y_label="events [1/s]",
            log_y=True,
            series=tuple(rate_series),
        ),
    )
    write_svg(
        out / "muon_power.svg",
        Plot(
            title=f"Muon power vs depth ({preset})",
            x_label="depth [km.w.e]",
            y_label="power [W]",
            log_y=True,
            series=tuple(power_series),
        ),
    )
    return CommandResult.success(
        message="Muon depth scan complete",
        data={
            "preset": preset,
            "params": params.source_label,
            "faces": cfg.faces,
            "path_model": path_model,
            "chord": chord.model_dump() if chord else None,
            "sites": summary,
        },
    )
