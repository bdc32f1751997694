from typing import Annotated, Optional

import typer

from app.options import (
    Area,
    ConstantsOption,
    DataDirOption,
    OutOption,
    PresetOption,
    build_run_config,
    emit,
    guarded,
    parse_floats,
)
from app.utility import print_table
from modules.V1.datastore.services import DEFAULT_SPECTRUM
from .api_docs import gamma_scan_handler
from .controller import default_thicknesses, gamma_scan_controller

router = typer.Typer()
options = gamma_scan_handler["options"]


# -------------------- GAMMA SCAN --------------------
@router.command(
    "gamma-scan",
    help=gamma_scan_handler["description"],
    short_help=gamma_scan_handler["summary"],
    epilog=gamma_scan_handler["epilog"],
)
@guarded
def gamma_scan(
    ctx: typer.Context,
    preset: PresetOption = "ge10",
    spectrum: Annotated[str, typer.Option("--spectrum", help=options["spectrum"])] = DEFAULT_SPECTRUM,
    shield: Annotated[str, typer.Option("--shield", help=options["shield"])] = "lead",
    thicknesses: Annotated[
        Optional[str], typer.Option("--thicknesses", help=options["thicknesses"])
    ] = None,
    t_max: Annotated[float, typer.Option("--t-max", min=0, help=options["t_max"])] = 20.0,
    steps: Annotated[int, typer.Option("--steps", min=1, help=options["steps"])] = 10,
    area: Annotated[Area, typer.Option("--area", help=options["area"])] = Area.all,
    mean_chord: Annotated[bool, typer.Option("--mean-chord", help=options["mean_chord"])] = False,
    paper_fit: Annotated[bool, typer.Option("--paper-fit", help=options["paper_fit"])] = False,
    data_dir: DataDirOption = None,
    out: OutOption = None,
    constants: ConstantsOption = None,
):
    cfg = build_run_config(ctx, "gamma-scan", data_dir=data_dir, out_dir=out, constants=constants)
    grid = parse_floats(thicknesses, "--thicknesses") or default_thicknesses(t_max, steps)
    result = gamma_scan_controller(
        cfg,
        preset,
        grid,
        spectrum_name=spectrum,
        shield=shield,
        area=area.value,
        path="mean_chord" if mean_chord else "side",
        paper_fit=paper_fit,
    )
    data = result.data
    emit(
        ctx,
        result,
        lambda: print_table(
            "Gamma power vs shield thickness",
            ["thickness [cm]", "power [W]", "error [W]"],
            [(r["thickness"], r["power"], r["power_err"]) for r in data["rows"]],
        ),
    )
