from typing import Annotated, Optional

import typer

from app.options import ConstantsOption, PresetOption, build_run_config, emit, guarded
from app.utility import print_table
from .api_docs import csl_heating_handler
from .controller import csl_heating_controller

router = typer.Typer()


# -------------------- CSL HEATING --------------------
@router.command(
    "csl-heating",
    help=csl_heating_handler["description"],
    short_help=csl_heating_handler["summary"],
    epilog=csl_heating_handler["epilog"],
)
@guarded
def csl_heating(
    ctx: typer.Context,
    collapse_rate: Annotated[
        float, typer.Option("--lambda", help=csl_heating_handler["options"]["lambda"])
    ],
    r_c: Annotated[float, typer.Option("--rc", help=csl_heating_handler["options"]["rc"])],
    preset: PresetOption = "ge10",
    thermal: Annotated[
        Optional[str], typer.Option("--thermal", help=csl_heating_handler["options"]["thermal"])
    ] = None,
    constants: ConstantsOption = None,
):
    cfg = build_run_config(ctx, "csl-heating", constants=constants)
    result = csl_heating_controller(cfg, collapse_rate, r_c, preset, thermal)
    data = result.data
    emit(
        ctx,
        result,
        lambda: print_table(
            f"CSL heating ({data['preset']}, {data['mass_kg']:.4g} kg)",
            ["quantity", "value"],
            [
                ("power [W]", data["power_W"]),
                ("heating rate [W/kg]", data["heating_W_per_kg"]),
                (f"steady gradient R*W [K] ({data['thermal_preset']})", data["steady_gradient_K"]),
            ],
        ),
    )
