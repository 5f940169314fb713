"""
Data file and plot generation for solver results.

Every file is deterministic: rows in a fixed order, floats with
``settings.float_digits`` significant digits, a units line at the top and
no timestamps.
"""

import logging
import os
from functools import singledispatch
from typing import Optional, Sequence

import matplotlib
import numpy as np
import pandas as pd
from matplotlib.figure import Figure

from ..config import settings
from ..exceptions import ContractError
from ..models.dynamics import DensityProfile
from ..models.gutzwiller import GutzwillerState
from ..models.operator import HermitianOperatorRep
from ..models.spectrum import ButterflyDataset, SpectrumSlice

logger = logging.getLogger(__name__)

UNITS_LATTICE = "energy/J, length/lambda, time*J"
UNITS_CALIBRATION = "energy/E_R, length/lambda, depth V0/E_R"

FIGSIZE = (8.0, 6.0)
# fixed salt for element ids, text kept as text
SVG_RC = {"svg.hashsalt": "fluxlab", "svg.fonttype": "none", "svg.image_inline": True}


def _float_format() -> str:
    return f"%.{settings.float_digits}g"


def _ensure_parent(path: str) -> None:
    directory = os.path.dirname(path)
    if directory:
        os.makedirs(directory, exist_ok=True)


def _write_text(path: str, text: str) -> str:
    """Write text with LF line endings, creating parent directories."""
    try:
        _ensure_parent(path)
        with open(path, "w", encoding="utf-8", newline="\n") as f:
            f.write(text)
    except OSError as e:
        raise OSError(e.errno, f"cannot write output file: {e.strerror}", path) from e
    logger.debug(f"Wrote {path}")
    return path


def write_csv(frame: pd.DataFrame, output_file: str, units: str = UNITS_LATTICE) -> str:
    """
    Write a data frame as CSV preceded by a ``# units:`` comment line.

    Args:
        frame: Table to write; columns appear in frame order
        output_file: Path to output CSV file
        units: Units stamp for the header line

    Returns:
        Path to generated CSV file
    """
    body = frame.to_csv(index=False, float_format=_float_format(), lineterminator="\n")
    return _write_text(output_file, f"# units: {units}\n{body}")


def _new_axes(title: str, x_label: str, y_label: str):
    fig = Figure(figsize=FIGSIZE)
    ax = fig.add_subplot()
    ax.set_title(title)
    ax.set_xlabel(x_label)
    ax.set_ylabel(y_label)
    return fig, ax


def _save_svg(fig: Figure, output_file: str, units: str) -> str:
    """Save a figure as SVG without a date stamp and with fixed element ids."""
    try:
        _ensure_parent(output_file)
        with matplotlib.rc_context(SVG_RC):
            fig.savefig(output_file, format="svg", metadata={"Date": None, "Description": f"units: {units}"})
    except OSError as e:
        raise OSError(e.errno, f"cannot write output file: {e.strerror}", output_file) from e
    logger.debug(f"Wrote {output_file}")
    return output_file


def render_scatter_svg(
    x: np.ndarray,
    y: np.ndarray,
    output_file: str,
    x_range: tuple[float, float],
    y_range: tuple[float, float],
    title: str,
    x_label: str = "alpha",
    y_label: str = "energy/J",
    units: str = UNITS_LATTICE,
    marker_size: float = 1.0,
) -> str:
    """
    Render black points on a white plot, one marker per data row.

    The markers form the group with id ``data``.

    Args:
        x: Horizontal coordinates
        y: Vertical coordinates
        output_file: Path to output SVG file
        x_range: Horizontal axis limits
        y_range: Vertical axis limits
        title: Plot title

    Returns:
        Path to generated SVG file
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape != y.shape:
        raise ContractError(f"scatter needs matching coordinates, got {x.shape} and {y.shape}")
    fig, ax = _new_axes(title, x_label, y_label)
    ax.scatter(x, y, s=marker_size, c="black", marker="o", linewidths=0, gid="data")
    ax.set_xlim(*x_range)
    ax.set_ylim(*y_range)
    return _save_svg(fig, output_file, units)


def render_heatmap_svg(
    values: np.ndarray,
    output_file: str,
    title: str,
    vmin: float = 0.0,
    vmax: Optional[float] = None,
    x_label: str = "",
    y_label: str = "",
    x_range: Optional[tuple[float, float]] = None,
    y_range: Optional[tuple[float, float]] = None,
    units: str = UNITS_LATTICE,
) -> str:
    """
    Render a grayscale map, light for large and dark for small values.

    ``values[row, col]`` becomes one image pixel with row 0 at the bottom.
    Values are clipped to ``[vmin, vmax]``; ``vmax`` defaults to the maximum.

    Returns:
        Path to generated SVG file
    """
    values = np.asarray(values, dtype=float)
    if values.ndim != 2:
        raise ContractError(f"heat map needs a 2D array, got shape {values.shape}")
    vmax = float(values.max()) if vmax is None else vmax
    if vmax <= vmin:
        vmax = vmin + 1.0
    extent = None
    if x_range is not None and y_range is not None and x_range[1] > x_range[0] and y_range[1] > y_range[0]:
        extent = (x_range[0], x_range[1], y_range[0], y_range[1])

    fig, ax = _new_axes(title, x_label, y_label)
    # "none" keeps one pixel per cell in vector output
    ax.imshow(
        values,
        cmap="gray",
        vmin=vmin,
        vmax=vmax,
        origin="lower",
        interpolation="none",
        aspect="auto",
        extent=extent,
        gid="data",
    )
    return _save_svg(fig, output_file, units)


def dump_operator(op: HermitianOperatorRep, output_file: str) -> str:
    """
    Write the stored upper triangle of an operator as text.

    The header is ``dim n_x n_y alpha_p alpha_r J``; a real-valued flux is
    written as ``alpha_p = value`` with ``alpha_r = 0``. Each following line is
    ``row col re im`` in row-major order.

    Returns:
        Path to generated text file
    """
    fmt = _float_format()
    flux = op.flux
    if flux is None:
        alpha_p, alpha_r = "0", "1"
    elif flux.is_rational:
        alpha_p, alpha_r = str(flux.p), str(flux.r)
    else:
        alpha_p, alpha_r = fmt % flux.value, "0"
    lines = [f"{op.dim} {op.n_x} {op.n_y} {alpha_p} {alpha_r} {fmt % op.J}"]
    lines.extend(
        f"{row} {col} {fmt % value.real} {fmt % value.imag}"
        for row, col, value in zip(op.rows, op.cols, op.values)
    )
    return _write_text(output_file, "\n".join(lines) + "\n")


@singledispatch
def emit_dataset(dataset, fmt: str, output_base: str) -> list[str]:
    """
    Write a solver result as CSV or SVG files next to ``output_base``.

    Args:
        dataset: Result of a solver
        fmt: ``"csv"`` or ``"svg"``
        output_base: Path prefix; suffixes and extensions are appended

    Returns:
        Paths of the generated files
    """
    raise ContractError(f"no emitter for {type(dataset).__name__}")


def _check_format(fmt: str, supported: Sequence[str] = ("csv", "svg")) -> None:
    if fmt not in supported:
        raise ContractError(f"unsupported output format {fmt!r}; expected one of {list(supported)}")


@emit_dataset.register
def _(dataset: ButterflyDataset, fmt: str, output_base: str) -> list[str]:
    _check_format(fmt)
    if fmt == "csv":
        return [
            write_csv(dataset.to_frame(), f"{output_base}.csv"),
            write_csv(dataset.bands_frame(), f"{output_base}_bands.csv"),
        ]
    title = f"Hofstadter butterfly, r <= {dataset.r_max}, {dataset.k_samples}^2 k-points"
    return [render_scatter_svg(dataset.alpha, dataset.energy, f"{output_base}.svg", (0.0, 1.0), (-4.0, 4.0), title)]


@emit_dataset.register
def _(dataset: SpectrumSlice, fmt: str, output_base: str) -> list[str]:
    _check_format(fmt)
    if fmt == "csv":
        return [
            write_csv(dataset.to_frame(), f"{output_base}.csv"),
            write_csv(dataset.bands_frame(), f"{output_base}_bands.csv"),
        ]
    frame = dataset.to_frame()
    title = f"Harper spectrum at alpha = {dataset.flux.label}"
    return [
        render_scatter_svg(
            frame["alpha"].to_numpy(), frame["energy_over_J"].to_numpy(), f"{output_base}.svg", (0.0, 1.0), (-4.0, 4.0), title
        )
    ]


@emit_dataset.register
def _(dataset: DensityProfile, fmt: str, output_base: str) -> list[str]:
    _check_format(fmt)
    if fmt == "csv":
        return [write_csv(dataset.to_frame(), f"{output_base}.csv")]
    times = dataset.times
    t_range = (float(times[0]), float(times[-1])) if times.size else (0.0, 0.0)
    return [
        render_heatmap_svg(
            dataset.density.T,
            f"{output_base}.svg",
            f"Density n(y, t) at alpha = {dataset.flux.label}",
            x_label="t*J",
            y_label="m",
            x_range=t_range,
            y_range=(0, dataset.spec.n_y - 1),
        )
    ]


@emit_dataset.register
def _(dataset: GutzwillerState, fmt: str, output_base: str) -> list[str]:
    _check_format(fmt)
    if fmt == "csv":
        return [write_csv(dataset.to_frame(), f"{output_base}.csv")]
    label = f"{dataset.alpha:.{settings.float_digits}g}" if dataset.alpha is not None else "?"
    return [
        render_heatmap_svg(
            dataset.as_map(np.abs(dataset.phi)),
            f"{output_base}_abs_phi.svg",
            f"|phi| at alpha = {label}",
            vmin=0.0,
            vmax=1.0,
            x_label="n",
            y_label="m",
        ),
        render_heatmap_svg(
            dataset.as_map(dataset.sigma2),
            f"{output_base}_sigma2.svg",
            f"sigma^2 at alpha = {label}",
            vmin=0.0,
            vmax=1.0,
            x_label="n",
            y_label="m",
        ),
    ]


@emit_dataset.register
def _(dataset: pd.DataFrame, fmt: str, output_base: str) -> list[str]:
    _check_format(fmt, ("csv",))
    return [write_csv(dataset, f"{output_base}.csv", units=UNITS_CALIBRATION)]
