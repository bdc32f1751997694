from pathlib import Path
from typing import Annotated, Optional

import typer

from app.options import (
    ConstantsOption,
    DataDirOption,
    FacesOption,
    MarginOption,
    OutOption,
    PresetOption,
    build_run_config,
    emit,
    guarded,
    parse_floats,
)
from app.settings import get_settings
from app.utility import print_table
from .api_docs import exclusion_handler, fit_handler, sensitivity_handler
from .controller import DEFAULT_SITES, exclusion_controller, fit_controller, sensitivity_controller

router = typer.Typer()


# -------------------- SENSITIVITY --------------------
@router.command(
    "sensitivity",
    help=sensitivity_handler["description"],
    short_help=sensitivity_handler["summary"],
    epilog=sensitivity_handler["epilog"],
)
@guarded
def sensitivity(
    ctx: typer.Context,
    preset: PresetOption = "ge10",
    site: Annotated[
        Optional[list[str]], typer.Option("--site", help=sensitivity_handler["options"]["site"])
    ] = None,
    depths: Annotated[
        Optional[str], typer.Option("--depths", help=sensitivity_handler["options"]["depths"])
    ] = None,
    target: Annotated[
        Optional[float], typer.Option("--target", help=sensitivity_handler["options"]["target"])
    ] = None,
    r_c: Annotated[float, typer.Option("--rc", help=sensitivity_handler["options"]["rc"])] = 1e-7,
    params: Annotated[
        str, typer.Option("--params", help=sensitivity_handler["options"]["params"])
    ] = "set_g",
    data_dir: DataDirOption = None,
    out: OutOption = None,
    margin: MarginOption = None,
    faces: FacesOption = None,
    constants: ConstantsOption = None,
):
    cfg = build_run_config(
        ctx,
        "sensitivity",
        data_dir=data_dir,
        out_dir=out,
        margin=margin,
        faces=faces,
        constants=constants,
    )
    result = sensitivity_controller(
        cfg,
        preset,
        sites=site or DEFAULT_SITES,
        depths=parse_floats(depths, "--depths"),
        target_lambda=target,
        r_c=r_c,
        params_name=params,
        tolerance=get_settings().analysis.bisection_tol_kmwe,
    )

    def show() -> None:
        data = result.data
        print_table(
            "Surface estimate",
            ["source", "lambda [1/s]"],
            [(data["surface"]["source"], data["surface"]["lambda_det"])],
        )
        for entry in data["sites"]:
            rows = [(r["depth"], r["lambda_det"], r["lambda_err"]) for r in entry["rows"]]
            print_table(
                f"Detectable lambda at {entry['site']}",
                ["depth [km.w.e]", "lambda [1/s]", "error [1/s]"],
                rows,
            )
            if entry["depth_for_target"] is not None:
                print_table(
                    f"Depth for lambda = {data['target_lambda']:.3e} 1/s",
                    ["site", "depth [km.w.e]"],
                    [(entry["site"], entry["depth_for_target"])],
                )

    emit(ctx, result, show)


# -------------------- EXCLUSION --------------------
@router.command(
    "exclusion",
    help=exclusion_handler["description"],
    short_help=exclusion_handler["summary"],
    epilog=exclusion_handler["epilog"],
)
@guarded
def exclusion(
    ctx: typer.Context,
    depths: Annotated[str, typer.Option("--depths", help=exclusion_handler["options"]["depths"])] = "6.5",
    preset: PresetOption = "ge10",
    site: Annotated[
        Optional[list[str]], typer.Option("--site", help=exclusion_handler["options"]["site"])
    ] = None,
    rc_min: Annotated[
        float, typer.Option("--rc-min", help=exclusion_handler["options"]["rc_min"])
    ] = 1e-9,
    rc_max: Annotated[
        float, typer.Option("--rc-max", help=exclusion_handler["options"]["rc_max"])
    ] = 1e-3,
    per_decade: Annotated[
        int, typer.Option("--per-decade", min=1, help=exclusion_handler["options"]["per_decade"])
    ] = 10,
    overlay: Annotated[
        Optional[list[Path]], typer.Option("--overlay", help=exclusion_handler["options"]["overlay"])
    ] = None,
    params: Annotated[
        str, typer.Option("--params", help=exclusion_handler["options"]["params"])
    ] = "set_g",
    data_dir: DataDirOption = None,
    out: OutOption = None,
    margin: MarginOption = None,
    faces: FacesOption = None,
    constants: ConstantsOption = None,
):
    cfg = build_run_config(
        ctx,
        "exclusion",
        data_dir=data_dir,
        out_dir=out,
        margin=margin,
        faces=faces,
        constants=constants,
    )
    result = exclusion_controller(
        cfg,
        preset,
        depths=parse_floats(depths, "--depths"),
        sites=site or DEFAULT_SITES,
        rc_min=rc_min,
        rc_max=rc_max,
        per_decade=per_decade,
        overlays=overlay or (),
        params_name=params,
        workers=get_settings().analysis.mc_workers,
    )
    emit(
        ctx,
        result,
        lambda: print_table(
            "Contours written",
            ["site", "depth [km.w.e]", "files"],
            [
                (c["site"], c["depth"], f)
                for c, f in zip(result.data["contours"], result.data["files"])
            ],
        ),
    )


# -------------------- FIT --------------------
@router.command(
    "fit",
    help=fit_handler["description"],
    short_help=fit_handler["summary"],
    epilog=fit_handler["epilog"],
)
@guarded
def fit(
    ctx: typer.Context,
    input_path: Annotated[Path, typer.Argument(help=fit_handler["options"]["input"])],
    out: OutOption = None,
):
    cfg = build_run_config(ctx, "fit", out_dir=out)
    result = fit_controller(cfg, input_path)
    data = result.data["fit"]
    emit(
        ctx,
        result,
        lambda: print_table(
            result.message,
            ["slope", "intercept", "slope err", "intercept err", "chi2", "n"],
            [
                (
                    data["slope"],
                    data["intercept"],
                    data["slope_err"],
                    data["intercept_err"],
                    data["chi2"],
                    data["n_points"],
                )
            ],
        ),
    )
