from __future__ import annotations

import io
from contextlib import ExitStack
from typing import IO, List, Optional, Sequence, Tuple

import matplotlib
from matplotlib.figure import Figure

from .table import CurveTable, atomic_output, write_csv

# Fraction of the data span added on each side of an axis
AXIS_PADDING = 0.05


def axis_bounds(values: Sequence[float]) -> Tuple[float, float]:
    """Data min/max padded by AXIS_PADDING of the span. A flat span gets ±0.5."""
    low, high = min(values), max(values)
    span = high - low
    if span == 0:
        return low - 0.5, high + 0.5

    return low - AXIS_PADDING * span, high + AXIS_PADDING * span


def render_svg(table: CurveTable) -> Figure:
    """A line chart of the table: the first column against every other column."""
    if len(table.headers) < 2:
        raise ValueError(f"Table {table.name} needs an x column and at least one curve")

    figure = Figure(figsize=(6.4, 4.8))
    ax = figure.add_subplot()
    x = table.column(table.headers[0])
    y_all = []
    for header in table.headers[1:]:
        y = table.column(header)
        y_all.extend(y)
        ax.plot(x, y, label=header)

    if len(table.rows) > 0:
        ax.set_xlim(*axis_bounds(x))
        ax.set_ylim(*axis_bounds(y_all))
    ax.set_xlabel(table.headers[0])
    ax.set_title(table.name)
    ax.grid(True, linewidth=0.5)
    ax.legend(fontsize="small")

    return figure


def write_svg(table: CurveTable, out: IO[bytes]) -> None:
    figure = render_svg(table)
    # Text as <text> elements and fixed ids keep the file stable between runs
    with matplotlib.rc_context({"svg.fonttype": "none", "svg.hashsalt": table.name}):
        figure.savefig(out, format="svg", metadata={"Date": None})


def emit_svg(table: CurveTable, path: str) -> str:
    try:
        with atomic_output(path, "wb") as out:
            write_svg(table, out)
    except OSError as e:
        raise OSError(f"Cannot write {path}: {e.strerror or e}") from e

    return path


def emit_results(
    table: CurveTable, csv_path: str, svg_path: Optional[str] = None, comments: Sequence[str] = ()
) -> List[str]:
    """Writes the CSV and, when svg_path is given, the chart.

    Both files are moved into place only once both are complete, so a failure leaves
    neither behind.
    """
    svg = io.BytesIO()
    if svg_path is not None:
        write_svg(table, svg)

    paths = [csv_path] if svg_path is None else [csv_path, svg_path]
    current = csv_path
    try:
        with ExitStack() as stack:
            csv_out = stack.enter_context(atomic_output(csv_path, "w", encoding="utf-8", newline=""))
            write_csv(table, csv_out, comments)
            if svg_path is not None:
                current = svg_path
                stack.enter_context(atomic_output(svg_path, "wb")).write(svg.getvalue())
    except OSError as e:
        raise OSError(f"Cannot write {current}: {e.strerror or e}") from e

    return paths
