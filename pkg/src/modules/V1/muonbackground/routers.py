from typing import Annotated, Optional

import typer

from app.options import (
    ConstantsOption,
    DataDirOption,
    FacesOption,
    OutOption,
    PathModelChoice,
    PresetOption,
    SeedOption,
    build_run_config,
    emit,
    guarded,
    parse_floats,
)
from app.utility import print_table
from .api_docs import muon_scan_handler
from .controller import DEFAULT_SITES, muon_scan_controller

router = typer.Typer()
options = muon_scan_handler["options"]


# -------------------- MUON SCAN --------------------
@router.command(
    "muon-scan",
    help=muon_scan_handler["description"],
    short_help=muon_scan_handler["summary"],
    epilog=muon_scan_handler["epilog"],
)
@guarded
def muon_scan(
    ctx: typer.Context,
    preset: PresetOption = "ge10",
    site: Annotated[Optional[list[str]], typer.Option("--site", help=options["site"])] = None,
    depths: Annotated[Optional[str], typer.Option("--depths", help=options["depths"])] = None,
    params: Annotated[str, typer.Option("--params", help=options["params"])] = "set_g",
    path_model: Annotated[
        PathModelChoice, typer.Option("--path-model", help=options["path_model"])
    ] = PathModelChoice.side,
    mc_samples: Annotated[
        Optional[int], typer.Option("--mc-samples", min=1, help=options["mc_samples"])
    ] = None,
    workers: Annotated[Optional[int], typer.Option("--workers", min=1, help=options["workers"])] = None,
    data_dir: DataDirOption = None,
    out: OutOption = None,
    faces: FacesOption = None,
    constants: ConstantsOption = None,
    seed: SeedOption = None,
):
    cfg = build_run_config(
        ctx, "muon-scan", data_dir=data_dir, out_dir=out, faces=faces, constants=constants, seed=seed
    )
    result = muon_scan_controller(
        cfg,
        preset,
        sites=site or DEFAULT_SITES,
        depths=parse_floats(depths, "--depths"),
        params_name=params,
        path_model=path_model.value,
        mc_samples=mc_samples,
        workers=workers,
    )

    def show() -> None:
        for entry in result.data["sites"]:
            print_table(
                f"Muon background at {entry['site']}",
                ["depth [km.w.e]", "events [1/s]", "power [W]", "power err [W]"],
                [(r["depth"], r["event_rate"], r["power"], r["power_err"]) for r in entry["rows"]],
            )

    emit(ctx, result, show)
