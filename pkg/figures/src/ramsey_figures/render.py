"""Render ramseylab decay-curve CSVs into comparison plots.

Two figure styles are supported, both consuming the CSV formats written by
the ``ramseylab`` command-line tool:

* ``compare``: overlay the coherence column of two ``t,gamma,coherence``
  curves (typically an uncorrelated and a correlated environment) on one
  axes;
* ``components``: plot the ``full``, ``quad_component`` and
  ``quart_component`` columns of a ``fig2`` short-time breakdown.

Inputs are validated before any file is written, so a malformed CSV never
leaves a partial image behind.  Vector output (pdf/svg) is the default.
"""

from __future__ import annotations

import argparse
import csv
import sys
from dataclasses import dataclass
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)


class RenderError(Exception):
    """Invalid input data or plot description."""


@dataclass(frozen=True)
class Series:
    csv_path: str
    x_column: str
    y_column: str
    label: str


@dataclass(frozen=True)
class PlotSpec:
    series: tuple[Series, ...]
    x_label: str
    y_label: str
    out_path: str
    y_log: bool = False

    def __post_init__(self):
        if not self.series:
            raise RenderError("plot needs at least one series")


def read_columns(path: str) -> dict[str, list[float]]:
    """Parse a ramseylab CSV into named float columns, validating shape."""
    try:
        with open(path, newline="") as handle:
            reader = csv.reader(handle)
            try:
                header = next(reader)
            except StopIteration:
                raise RenderError(f"{path}: empty file") from None
            rows = list(reader)
    except OSError as exc:
        raise RenderError(f"cannot read {path}: {exc}") from exc
    if not rows:
        raise RenderError(f"{path}: no data rows")
    columns = {name: [] for name in header}
    for lineno, row in enumerate(rows, start=2):
        if len(row) != len(header):
            raise RenderError(f"{path}:{lineno}: expected {len(header)} fields, got {len(row)}")
        for name, cell in zip(header, row):
            try:
                columns[name].append(float(cell))
            except ValueError as exc:
                raise RenderError(f"{path}:{lineno}: {exc}") from exc
    return columns


def _load_series(spec: PlotSpec):
    loaded = []
    for series in spec.series:
        columns = read_columns(series.csv_path)
        for name in (series.x_column, series.y_column):
            if name not in columns:
                raise RenderError(
                    f"{series.csv_path}: missing column {name!r} (has {sorted(columns)})"
                )
        loaded.append((series, columns[series.x_column], columns[series.y_column]))
    return loaded


def render(spec: PlotSpec):
    """Validate every input, draw the figure, and write the image file.

    Returns the matplotlib figure so callers (and tests) can inspect the
    plotted data.
    """
    loaded = _load_series(spec)
    out = Path(spec.out_path)
    if out.suffix == "":
        out = out.with_suffix(".pdf")
    if out.parent and not out.parent.exists():
        raise RenderError(f"output directory does not exist: {out.parent}")
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    for series, x, y in loaded:
        ax.plot(x, y, label=series.label, linewidth=1.8)
    if spec.y_log:
        ax.set_yscale("log")
    ax.set_xlabel(spec.x_label)
    ax.set_ylabel(spec.y_label)
    ax.legend(frameon=False)
    ax.grid(True, linestyle=":", alpha=0.5)
    fig.tight_layout()
    fig.savefig(out)
    return fig


def render_coherence_comparison(csv_uncorrelated: str, csv_correlated: str,
                                out_path: str, labels=("uncorrelated", "correlated")):
    """Overlay two coherence curves that share the same time grid."""
    grid_a = read_columns(csv_uncorrelated)
    grid_b = read_columns(csv_correlated)
    for path, columns in ((csv_uncorrelated, grid_a), (csv_correlated, grid_b)):
        for name in ("t", "coherence"):
            if name not in columns:
                raise RenderError(f"{path}: missing column {name!r}")
    if grid_a["t"] != grid_b["t"]:
        raise RenderError("coherence curves must share the same time grid")
    spec = PlotSpec(
        series=(
            Series(csv_uncorrelated, "t", "coherence", labels[0]),
            Series(csv_correlated, "t", "coherence", labels[1]),
        ),
        x_label="time (units of 1/omega_c)",
        y_label="coherence factor",
        out_path=out_path,
    )
    return render(spec)


def render_component_breakdown(csv_components: str, out_path: str):
    """Plot the short-time coherence factor and its quadratic/quartic parts."""
    spec = PlotSpec(
        series=(
            Series(csv_components, "t", "full", "full"),
            Series(csv_components, "t", "quad_component", "quadratic component"),
            Series(csv_components, "t", "quart_component", "quartic component"),
        ),
        x_label="time (units of 1/omega_c)",
        y_label="coherence factor of the entangled state",
        out_path=out_path,
    )
    return render(spec)


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ramsey-figures",
        description="Render ramseylab CSV output into comparison plots.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_compare = sub.add_parser("compare", help="overlay two t,gamma,coherence curves")
    p_compare.add_argument("csv_uncorrelated", help="first curve (drawn as 'uncorrelated')")
    p_compare.add_argument("csv_correlated", help="second curve (drawn as 'correlated')")
    p_compare.add_argument("--out", required=True, help="output image (pdf/svg/png)")

    p_components = sub.add_parser(
        "components", help="plot a fig2 CSV: full, quadratic and quartic parts"
    )
    p_components.add_argument("csv_components", help="t,full,quad_component,quart_component CSV")
    p_components.add_argument("--out", required=True, help="output image (pdf/svg/png)")
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        if args.command == "compare":
            fig = render_coherence_comparison(args.csv_uncorrelated,
                                              args.csv_correlated, args.out)
        else:
            fig = render_component_breakdown(args.csv_components, args.out)
        plt.close(fig)
    except RenderError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
