from typing import Annotated, Optional

import typer

from app.options import (
    ConstantsOption,
    DataDirOption,
    FacesOption,
    OutOption,
    SeedOption,
    build_run_config,
    emit,
    guarded,
)
from app.utility import print_table
from .api_docs import bolometer_handler
from .controller import bolometer_controller

router = typer.Typer()
options = bolometer_handler["options"]


# -------------------- BOLOMETER --------------------
@router.command(
    "bolometer",
    help=bolometer_handler["description"],
    short_help=bolometer_handler["summary"],
    epilog=bolometer_handler["epilog"],
)
@guarded
def bolometer(
    ctx: typer.Context,
    thermal: Annotated[str, typer.Option("--thermal", help=options["thermal"])] = "cuore",
    preset: Annotated[Optional[str], typer.Option("--preset", help=options["preset"])] = None,
    duration: Annotated[float, typer.Option("--duration", help=options["duration"])] = 100.0,
    dt: Annotated[float, typer.Option("--dt", help=options["dt"])] = 0.01,
    rate: Annotated[float, typer.Option("--rate", help=options["rate"])] = 0.0,
    energy: Annotated[Optional[float], typer.Option("--energy", help=options["energy"])] = None,
    collapse_rate: Annotated[float, typer.Option("--lambda", help=options["lambda"])] = 0.0,
    r_c: Annotated[float, typer.Option("--rc", help=options["rc"])] = 1e-7,
    noise: Annotated[bool, typer.Option("--noise/--no-noise", help=options["noise"])] = False,
    threshold: Annotated[
        Optional[float], typer.Option("--threshold", help=options["threshold"])
    ] = None,
    site: Annotated[Optional[str], typer.Option("--site", help=options["site"])] = None,
    depth: Annotated[Optional[float], typer.Option("--depth", help=options["depth"])] = None,
    ensemble: Annotated[int, typer.Option("--ensemble", min=0, help=options["ensemble"])] = 0,
    data_dir: DataDirOption = None,
    out: OutOption = None,
    faces: FacesOption = None,
    constants: ConstantsOption = None,
    seed: SeedOption = None,
):
    cfg = build_run_config(
        ctx,
        "bolometer",
        data_dir=data_dir,
        out_dir=out,
        faces=faces,
        constants=constants,
        seed=seed,
    )
    result = bolometer_controller(
        cfg,
        thermal=thermal,
        preset=preset,
        duration=duration,
        sample_interval=dt,
        event_rate=rate,
        event_energy=energy,
        collapse_rate=collapse_rate,
        r_c=r_c,
        noise=noise,
        threshold=threshold,
        site=site,
        depth=depth,
        ensemble=ensemble,
    )
    data = result.data
    emit(
        ctx,
        result,
        lambda: print_table(
            f"Bolometer ({data['thermal_preset']})",
            ["quantity", "value"],
            [
                ("tau [s]", data["tau_s"]),
                ("pulse peak [K]", data["pulse_peak_K"]),
                ("fluctuation floor [K]", data["fluctuation_floor_K"]),
                ("expected gradient [K]", data["expected_gradient_K"]),
                ("recovered gradient [K]", data["recovered_gradient_K"]),
                ("events injected / detected", f"{data['events_injected']} / {data['events_detected']}"),
                ("resolvable lambda [1/s]", data["resolvable_lambda_per_s"]),
            ],
        ),
    )
