import logging
import math
from pathlib import Path
from typing import Sequence

from jinja2 import Environment, FileSystemLoader, StrictUndefined
from pydantic import BaseModel, ConfigDict, Field

from app.errors import ValidationFailure
from app.utility import write_text

logger = logging.getLogger(__name__)

TEMPLATE_DIR = Path(__file__).parent / "templates"
PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#e377c2", "#17becf")

environment = Environment(
    loader=FileSystemLoader(str(TEMPLATE_DIR)),
    autoescape=True,
    undefined=StrictUndefined,
    keep_trailing_newline=True,
)


class PlotSeries(BaseModel):
    model_config = ConfigDict(frozen=True)

    label: str
    x: tuple[float, ...]
    y: tuple[float, ...]
    dashed: bool = False


class Plot(BaseModel):
    model_config = ConfigDict(frozen=True)

    title: str
    x_label: str
    y_label: str
    log_x: bool = False
    log_y: bool = False
    series: tuple[PlotSeries, ...] = ()
    width: int = Field(640, ge=200)
    height: int = Field(420, ge=150)


def series(label: str, x: Sequence[float], y: Sequence[float], dashed: bool = False) -> PlotSeries:
    return PlotSeries(label=label, x=tuple(float(v) for v in x), y=tuple(float(v) for v in y), dashed=dashed)


def _transform(values: Sequence[float], log: bool) -> list[float]:
    return [math.log10(v) if log else v for v in values]


def _ticks(low: float, high: float, log: bool) -> list[float]:
    if log:
        return [float(p) for p in range(math.ceil(low), math.floor(high) + 1)]
    span = high - low
    raw = span / 5
    magnitude = 10 ** math.floor(math.log10(raw))
    step = min((m * magnitude for m in (1, 2, 5, 10) if m * magnitude >= raw), default=raw)
    first = math.ceil(low / step) * step
    count = int(math.floor((high - first) / step + 1e-9)) + 1
    return [first + i * step for i in range(count)]


def _label(value: float, log: bool) -> str:
    if log:
        return f"1e{int(round(value))}"
    return f"{value:.3g}"


def render_svg(plot: Plot) -> str:
    """
    One <polyline> per series. On log axes non-positive points are dropped;
    a series left with no points is an error.
    """
    if not plot.series:
        raise ValidationFailure("a plot needs at least one series")

    cleaned: list[tuple[PlotSeries, list[float], list[float]]] = []
    for s in plot.series:
        if len(s.x) != len(s.y):
            raise ValidationFailure(f"series '{s.label}' has mismatched x/y lengths")
        keep = [
            (x, y)
            for x, y in zip(s.x, s.y)
            if math.isfinite(x)
            and math.isfinite(y)
            and (x > 0 or not plot.log_x)
            and (y > 0 or not plot.log_y)
        ]
        if not keep:
            raise ValidationFailure(f"series '{s.label}' has no plottable points")
        if len(keep) < len(s.x):
            logger.warning("Dropped %d non-plottable points from '%s'", len(s.x) - len(keep), s.label)
        xs = _transform([p[0] for p in keep], plot.log_x)
        ys = _transform([p[1] for p in keep], plot.log_y)
        cleaned.append((s, xs, ys))

    x_low = min(min(xs) for _, xs, _ in cleaned)
    x_high = max(max(xs) for _, xs, _ in cleaned)
    y_low = min(min(ys) for _, _, ys in cleaned)
    y_high = max(max(ys) for _, _, ys in cleaned)
    if x_high == x_low:
        x_low, x_high = x_low - 0.5, x_high + 0.5
    if y_high == y_low:
        y_low, y_high = y_low - 0.5, y_high + 0.5

    left, right, top, bottom = 80, 20, 35, 50
    plot_width = plot.width - left - right
    plot_height = plot.height - top - bottom

    def px(x: float) -> float:
        return left + (x - x_low) / (x_high - x_low) * plot_width

    def py(y: float) -> float:
        return top + plot_height - (y - y_low) / (y_high - y_low) * plot_height

    rendered = [
        {
            "label": s.label,
            "color": PALETTE[i % len(PALETTE)],
            "dashed": s.dashed,
            "points": " ".join(f"{px(x):.2f},{py(y):.2f}" for x, y in zip(xs, ys)),
        }
        for i, (s, xs, ys) in enumerate(cleaned)
    ]
    template = environment.get_template("plot.svg.j2")
    return template.render(
        title=plot.title,
        x_label=plot.x_label,
        y_label=plot.y_label,
        width=plot.width,
        height=plot.height,
        left=left,
        top=top,
        plot_width=plot_width,
        plot_height=plot_height,
        x_ticks=[
            {"pos": f"{px(t):.2f}", "label": _label(t, plot.log_x)}
            for t in _ticks(x_low, x_high, plot.log_x)
        ],
        y_ticks=[
            {"pos": float(f"{py(t):.2f}"), "label": _label(t, plot.log_y)}
            for t in _ticks(y_low, y_high, plot.log_y)
        ],
        series=rendered,
    )


def write_svg(path: Path, plot: Plot) -> Path:
    return write_text(path, render_svg(plot))
