import logging
from typing import Optional, Sequence

import numpy as np

from app.project_schemas import CommandResult, RunConfig
from app.svgplot import Plot, series, write_svg
from app.utility import write_csv
from modules.V1.corephysics.models import get_constants, get_detector
from modules.V1.datastore.services import DEFAULT_SPECTRUM, DataService
from modules.V1.sensitivity.controller import fit_rows, write_fit
from .schemas import AreaConvention, DetectorPath
from .services import GammaService

logger = logging.getLogger(__name__)

SCAN_HEADER = ("thickness_cm", "power_W", "power_err_W")


def default_thicknesses(t_max: float, steps: int) -> list[float]:
    return [float(t) for t in np.linspace(0.0, t_max, steps)]


# ------------------------ GAMMA SCAN CONTROLLER ------------------------
def gamma_scan_controller(
    cfg: RunConfig,
    preset: str,
    thicknesses: Sequence[float],
    spectrum_name: str = DEFAULT_SPECTRUM,
    shield: str = "lead",
    area: AreaConvention = "all",
    path: DetectorPath = "side",
    paper_fit: bool = False,
) -> CommandResult[dict]:
    constants = get_constants(cfg.constants)
    det = get_detector(preset)
    data = DataService(cfg.data_dir)
    spectrum = data.gamma_spectrum(spectrum_name)
    shield_table = data.attenuation(shield)
    det_table = data.attenuation(det.material.name)

    rows = GammaService.shield_scan(
        det,
        spectrum,
        shield_table,
        det_table,
        thicknesses,
        faces=area,
        path=path,
        paper_fit=paper_fit,
        constants=constants,
    )
    out = cfg.out_dir
    csv_path = write_csv(
        out / "gamma_scan.csv", SCAN_HEADER, [(r.thickness, r.power, r.power_err) for r in rows]
    )

    fit = fit_rows([(r.thickness, r.power, r.power_err) for r in rows])
    fit_path: Optional[str] = None
    if fit is not None:
        fit_path = str(write_fit(out / "gamma_scan_fit.csv", fit))
        logger.info("Gamma scan fit: %s", fit.caption("t"))

    plotted = [r for r in rows if r.power > 0]
    svg_path = None
    if plotted:
        svg_path = str(
            write_svg(
                out / "gamma_scan.svg",
                Plot(
                    title=f"Gamma power vs {shield_table.material.name} thickness ({preset})",
                    x_label="shield thickness [cm]",
                    y_label="power [W]",
                    log_y=True,
                    series=(
                        series(spectrum.label or "spectrum", [r.thickness for r in plotted], [r.power for r in plotted]),
                    ),
                ),
            )
        )

    return CommandResult.success(
        message="Gamma shield scan complete",
        data={
            "rows": [r.model_dump() for r in rows],
            "fit": fit.model_dump() if fit else None,
            "files": {"scan": str(csv_path), "fit": fit_path, "plot": svg_path},
        },
    )
