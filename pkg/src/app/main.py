import os
import sys
from typing import Annotated

sys.path.append(os.path.abspath(os.path.join(os.path.dirname(__file__), "..")))

import typer

from app.options import CliState
from app.routers import routers
from app.settings import get_settings
from app.utility import setup_logging, verbosity_to_level

settings = get_settings()


# ------------------------------------------------ Typer App ----------------------------------------------
app = typer.Typer(
    name="cslbg",
    help=(
        f"{settings.app.project_name} v{settings.app.version}: gamma and muon background "
        "power, detectable CSL collapse rate versus depth, exclusion contours and "
        "bolometer traces for underground bulk-heating experiments."
    ),
    no_args_is_help=True,
    add_completion=False,
    pretty_exceptions_enable=False,
)


# ------------------------------------------------ Global Options -----------------------------------------------
@app.callback()
def main(
    ctx: typer.Context,
    verbose: Annotated[
        int, typer.Option("--verbose", "-v", count=True, help="More log output (repeatable)")
    ] = 0,
    quiet: Annotated[bool, typer.Option("--quiet", "-q", help="Only warnings and errors")] = False,
    as_json: Annotated[
        bool, typer.Option("--json", help="Print the result envelope as JSON on stdout")
    ] = False,
):
    verbosity = -1 if quiet else min(verbose, 2)
    ctx.obj = CliState(verbosity=verbosity, as_json=as_json)
    setup_logging(verbosity_to_level(verbosity))


# ------------------------------------------------- Routers -------------------------------------------------
routers(app)


def run() -> None:
    app(prog_name="cslbg")


if __name__ == "__main__":
    run()
