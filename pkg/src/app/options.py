import functools
import logging
from enum import Enum
from pathlib import Path
from typing import Annotated, Any, Callable, Optional

import click
import typer
from pydantic import BaseModel, ValidationError

from app.errors import CslbgError, ValidationFailure
from app.project_schemas import CommandResult, ExitCode, RunConfig
from app.settings import get_settings
from app.utility import console, dumps_json, err_console, exception_handler

logger = logging.getLogger(__name__)


class Faces(str, Enum):
    top_sides = "top+sides"
    all = "all"
    top = "top"


class Area(str, Enum):
    all = "all"
    top_sides = "top+sides"
    top = "top"


class ConstantsProfile(str, Enum):
    paper = "paper"
    codata = "codata"


class PathModelChoice(str, Enum):
    side = "side"
    monte_carlo = "monte_carlo"


class CliState(BaseModel):
    verbosity: int = 0
    as_json: bool = False


# ------------------------------------------------ Shared Options ------------------------------------------------

DataDirOption = Annotated[
    Optional[Path],
    typer.Option("--data-dir", help="Data directory (default: CSLBG_DATA_DIR or the bundled samples)"),
]
OutOption = Annotated[
    Optional[Path], typer.Option("--out", "-o", help="Output directory (default: CSLBG_OUT_DIR)")
]
MarginOption = Annotated[
    Optional[float], typer.Option("--margin", help="Required CSL/background power ratio")
]
FacesOption = Annotated[
    Optional[Faces], typer.Option("--faces", help="Faces counted in the muon event rate")
]
ConstantsOption = Annotated[
    Optional[ConstantsProfile], typer.Option("--constants", help="Physical constant profile")
]
SeedOption = Annotated[Optional[int], typer.Option("--seed", help="Random seed")]
PresetOption = Annotated[str, typer.Option("--preset", help="Detector preset")]


def parse_floats(text: Optional[str], name: str) -> Optional[list[float]]:
    """Comma separated numbers; None passes through, an empty list is refused."""
    if text is None:
        return None
    parts = [p.strip() for p in text.split(",") if p.strip()]
    if not parts:
        raise ValidationFailure(f"{name} must list at least one value")
    try:
        return [float(p) for p in parts]
    except ValueError:
        raise ValidationFailure(f"{name} must be comma separated numbers, got '{text}'")


def state_of(ctx: typer.Context) -> CliState:
    obj = ctx.find_root().obj
    return obj if isinstance(obj, CliState) else CliState()


def build_run_config(
    ctx: typer.Context,
    subcommand: str,
    data_dir: Optional[Path] = None,
    out_dir: Optional[Path] = None,
    margin: Optional[float] = None,
    faces: Optional[Faces] = None,
    constants: Optional[ConstantsProfile] = None,
    seed: Optional[int] = None,
) -> RunConfig:
    """Settings first, then command-line overrides."""
    settings = get_settings()
    state = state_of(ctx)
    return RunConfig(
        subcommand=subcommand,
        data_dir=data_dir or settings.data.data_dir,
        out_dir=out_dir or settings.output.out_dir,
        margin_factor=settings.analysis.margin_factor if margin is None else margin,
        faces=faces.value if faces is not None else settings.analysis.faces,
        constants=constants.value if constants is not None else settings.analysis.constants,
        seed=settings.analysis.seed if seed is None else seed,
        verbosity=state.verbosity,
        as_json=state.as_json,
    )


# ------------------------------------------------ Command Guard ------------------------------------------------


def emit(ctx: typer.Context, result: CommandResult, show: Optional[Callable[[], None]] = None) -> None:
    if state_of(ctx).as_json:
        typer.echo(dumps_json(result.model_dump(mode="json")))
    elif show is not None:
        show()
    else:
        console.print(result.message)


def guarded(command: Callable[..., Any]) -> Callable[..., Any]:
    """Map library errors to exit codes; unexpected errors exit 1."""

    @functools.wraps(command)
    def wrapper(*args: Any, **kwargs: Any) -> Any:
        ctx = kwargs.get("ctx")
        as_json = state_of(ctx).as_json if isinstance(ctx, click.Context) else False
        try:
            return command(*args, **kwargs)
        except (typer.Exit, typer.Abort):
            raise
        except CslbgError as exc:
            code = exc.exit_code
            message = exc.message
        except ValidationError as exc:
            code = ExitCode.USAGE
            first = exc.errors()[0]
            where = ".".join(str(p) for p in first.get("loc", ())) or exc.title
            message = f"invalid value for {where}: {first['msg']}"
        except Exception as exc:
            exception_handler(exc, context=command.__name__, data=kwargs)
            code = ExitCode.FAILURE
            message = f"unexpected error: {type(exc).__name__}: {exc}"

        if as_json:
            typer.echo(dumps_json(CommandResult.error(message, code).model_dump(mode="json")))
        err_console.print(f"error: {message}", style="red", markup=False, highlight=False, soft_wrap=True)
        raise typer.Exit(code=int(code))

    return wrapper
