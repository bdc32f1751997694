import hashlib
import logging
import re
import traceback
from pathlib import Path
from typing import Any, Iterable, Optional, Sequence, Union

import orjson
from rich.console import Console
from rich.logging import RichHandler
from rich.table import Table

from app.settings import get_settings

settings = get_settings()

console = Console()
err_console = Console(stderr=True)

logger = logging.getLogger(__name__)

# ------------------------------------------------------------ LOGGING ----------------------------------------------------------


def setup_logging(level: Union[int, str, None] = None) -> None:
    """Install one RichHandler on the root logger; safe to call repeatedly."""
    level = level if level is not None else settings.app.log_level
    root = logging.getLogger()
    if not any(isinstance(h, RichHandler) for h in root.handlers):
        handler = RichHandler(
            console=err_console, show_path=False, rich_tracebacks=settings.app.debug
        )
        handler.setFormatter(logging.Formatter("%(name)s: %(message)s"))
        root.addHandler(handler)
    root.setLevel(level)


def verbosity_to_level(verbosity: int) -> int:
    if verbosity < 0:
        return logging.WARNING
    if verbosity == 0:
        return logging.getLevelName(settings.app.log_level.upper())
    return logging.DEBUG


def exception_handler(
    e: BaseException,
    context: Optional[str] = None,
    data: Optional[Union[dict, str]] = None,
) -> str:
    """
    Format an unexpected exception and log it.

    Args:
        e: The exception that was raised
        context: Command or operation that was running
        data: Optional arguments to log alongside

    Returns:
        Formatted traceback string
    """
    tb_message = "".join(traceback.format_exception(type(e), e, e.__traceback__))
    if context:
        logger.error("Source: %s", context)
    if data:
        logger.error("Arguments: %s", data)
    if settings.app.debug:
        logger.error("An error occurred:\n%s", tb_message)
    else:
        logger.error("An error occurred: %s: %s", type(e).__name__, e)
    return tb_message


# ------------------------------------------------------------ FILES -----------------------------------------------------------


def sha256_of(path: Path) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(65536), b""):
            digest.update(chunk)
    return digest.hexdigest()


def ensure_dir(path: Path) -> Path:
    path.mkdir(parents=True, exist_ok=True)
    return path


def format_float(value: float, fmt: Optional[str] = None) -> str:
    return (fmt or settings.output.float_format) % value


def render_csv(
    header: Sequence[str],
    rows: Iterable[Sequence[Any]],
    metadata: Optional[dict[str, Any]] = None,
    fmt: Optional[str] = None,
) -> str:
    """CSV text with `%.6e` floats and LF endings. Metadata goes first as `# key=value`."""
    lines: list[str] = []
    for key, value in (metadata or {}).items():
        lines.append(f"# {key}={value}")
    lines.append(",".join(header))
    for row in rows:
        cells = []
        for cell in row:
            if isinstance(cell, (float, int)) and not isinstance(cell, bool):
                cells.append(format_float(float(cell), fmt))
            else:
                cells.append(str(cell))
        lines.append(",".join(cells))
    return "\n".join(lines) + "\n"


def write_text(path: Path, text: str) -> Path:
    ensure_dir(path.parent)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)
    logger.info("Wrote %s", path)
    return path


def write_csv(
    path: Path,
    header: Sequence[str],
    rows: Iterable[Sequence[Any]],
    metadata: Optional[dict[str, Any]] = None,
) -> Path:
    return write_text(path, render_csv(header, rows, metadata))


def dumps_json(content: Any) -> str:
    return orjson.dumps(
        content, option=orjson.OPT_INDENT_2 | orjson.OPT_SORT_KEYS | orjson.OPT_SERIALIZE_NUMPY
    ).decode("utf-8")


# ------------------------------------------------------------ OUTPUT ----------------------------------------------------------


def print_table(title: str, columns: Sequence[str], rows: Iterable[Sequence[Any]]) -> None:
    table = Table(title=title)
    for column in columns:
        table.add_column(column)
    for row in rows:
        table.add_row(
            *[
                format_float(c, "%.4e") if isinstance(c, float) else str(c)
                for c in row
            ]
        )
    console.print(table)


def slugify(name: str) -> str:
    """File-name safe form of a site or series name."""
    return re.sub(r"[^A-Za-z0-9]+", "_", name).strip("_") or "site"
