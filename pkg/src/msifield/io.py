"""CSV/JSON ingestion, grid aggregation and model serialization.

Grid CSVs are plain numeric, row-major, headerless by default.  Model files
are JSON documents whose numeric fields round-trip bit-identically through
Python's shortest-repr float formatting.
"""
from __future__ import annotations

import csv
import json
from pathlib import Path

import numpy as np

from .errors import (
    NegativeValueError,
    NonNumericError,
    OutOfExtentError,
    RaggedGridError,
)
from .model import Axis, Breakpoints, GridField, MsiModel, StripSeries
from .predict import RectangleTotals

__all__ = [
    "read_csv_matrix",
    "load_grid",
    "load_series",
    "load_partition_values",
    "load_rectangle_totals",
    "write_matrix",
    "strip_sums",
    "rect_sums",
    "model_to_json",
    "model_from_json",
    "save_model",
    "load_model",
]


def read_csv_matrix(path, header: bool = False) -> np.ndarray:
    """Parse a rectangular numeric CSV into a float matrix."""
    rows: list[list[float]] = []
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        for lineno, row in enumerate(reader, start=1):
            if header and lineno == 1:
                continue
            cells = [c.strip() for c in row if c.strip() != ""] if row else []
            if not cells:
                continue
            try:
                rows.append([float(c) for c in cells])
            except ValueError as exc:
                raise NonNumericError(f"{path}: line {lineno}: {exc}") from None
    if not rows:
        raise NonNumericError(f"{path}: no numeric data")
    width = len(rows[0])
    if any(len(r) != width for r in rows):
        raise RaggedGridError(f"{path}: rows have differing lengths")
    return np.asarray(rows, dtype=float)


def load_grid(path, header: bool = False, cell_size: float = 1.0,
              origin: tuple[float, float] = (0.0, 0.0)) -> GridField:
    """Load a precipitation grid; cell (r, c) is the value on the 1-based
    (r+1)-th vertical, (c+1)-th horizontal strip crossing."""
    arr = read_csv_matrix(path, header=header)
    if np.any(arr < 0):
        raise NegativeValueError(f"{path}: grid contains negative values")
    return GridField(arr, cell_size=cell_size, origin=origin)


def load_series(path, axis: Axis | str = Axis.VERTICAL, header: bool = False) -> StripSeries:
    """Load a strip/time series stored as a single CSV row or column."""
    arr = read_csv_matrix(path, header=header)
    if 1 not in arr.shape:
        raise RaggedGridError(
            f"{path}: series must be a single row or column, got shape {arr.shape}"
        )
    if np.any(arr < 0):
        raise NegativeValueError(f"{path}: series contains negative values")
    return StripSeries(Axis(axis), arr.ravel())


def load_partition_values(path, subintervals: int = 2, header: bool = False
                          ) -> dict[tuple[int, int], np.ndarray]:
    """Load per-subinterval partition values stored with one row per
    (scale interval, subinterval) pair in interval-major order."""
    arr = read_csv_matrix(path, header=header)
    if arr.shape[0] % subintervals != 0:
        raise RaggedGridError(
            f"{path}: {arr.shape[0]} rows do not split into groups of {subintervals}"
        )
    out = {}
    for idx in range(arr.shape[0]):
        n, m = divmod(idx, subintervals)
        out[(n + 1, m + 1)] = arr[idx]
    return out


def load_rectangle_totals(path, shape: tuple[int, int] | None = None,
                          header: bool = False) -> RectangleTotals:
    """Load sub-rectangle totals: one row per rectangle in row-major (k1, k2)
    order, one column per sub-rectangle."""
    arr = read_csv_matrix(path, header=header)
    if np.any(arr < 0):
        raise NegativeValueError(f"{path}: totals contain negative values")
    return RectangleTotals.from_rows(arr, shape=shape)


def write_matrix(path, matrix: np.ndarray, digits: int = 6) -> None:
    """Write a matrix as fixed-format decimal CSV so runs can be diffed."""
    arr = np.atleast_2d(np.asarray(matrix, dtype=float))
    fmt = f"%.{int(digits)}f"
    with open(path, "w", newline="") as fh:
        for row in arr:
            fh.write(",".join(fmt % v for v in row))
            fh.write("\n")


def strip_sums(grid: GridField, axis: Axis | str) -> StripSeries:
    """Accumulated values on strips: row sums for vertical strips, column
    sums for horizontal strips."""
    axis = Axis(axis)
    if axis is Axis.VERTICAL:
        vals = grid.values.sum(axis=1)
    elif axis is Axis.HORIZONTAL:
        vals = grid.values.sum(axis=0)
    else:
        raise ValueError("strip sums are defined for the vertical/horizontal axes")
    return StripSeries(axis, vals)


def _axis_weights(points: tuple[float, ...], n_cells: int) -> np.ndarray:
    """weights[i, c] = overlap length of interval [p_i, p_{i+1}) with cell
    [c, c+1); fractional boundaries split cells proportionally by length."""
    if points[0] < 0 or points[-1] > n_cells:
        raise OutOfExtentError(
            f"breakpoints [{points[0]}, {points[-1]}] exceed grid extent [0, {n_cells}]"
        )
    weights = np.zeros((len(points) - 1, n_cells))
    for i, (lo, hi) in enumerate(zip(points, points[1:])):
        for c in range(int(np.floor(lo)), min(int(np.ceil(hi)), n_cells)):
            weights[i, c] = min(hi, c + 1) - max(lo, c)
    return weights


def _split_points(points: tuple[float, ...]) -> tuple[float, ...]:
    out: list[float] = []
    for lo, hi in zip(points, points[1:]):
        out.extend((lo, 0.5 * (lo + hi)))
    out.append(points[-1])
    return tuple(out)


def rect_sums(grid: GridField, a: Breakpoints, b: Breakpoints,
              sub_split: bool = False) -> RectangleTotals:
    """Sum cell values over every (sub-)rectangle of the breakpoint grid.

    ``a`` cuts rows (vertical strips), ``b`` cuts columns.  With
    ``sub_split`` each rectangle is halved on both axes; the four
    sub-rectangles are ordered row-major: (low-a, low-b), (low-a, high-b),
    (high-a, low-b), (high-a, high-b).  Cells straddling fractional
    boundaries contribute proportionally to the overlapped area.
    """
    if not sub_split:
        wa = _axis_weights(a.points, grid.rows)
        wb = _axis_weights(b.points, grid.cols)
        totals = wa @ grid.values @ wb.T
        return RectangleTotals(totals[:, :, None])
    wa = _axis_weights(_split_points(a.points), grid.rows)
    wb = _axis_weights(_split_points(b.points), grid.cols)
    fine = wa @ grid.values @ wb.T  # (2*K1, 2*K2)
    k1, k2 = a.n_intervals, b.n_intervals
    out = np.empty((k1, k2, 4))
    for i in range(k1):
        for j in range(k2):
            block = fine[2 * i:2 * i + 2, 2 * j:2 * j + 2]
            out[i, j] = block.ravel()
    return RectangleTotals(out)


def model_to_json(model: MsiModel) -> dict:
    return {
        "lambda1": model.lam[0],
        "lambda2": model.lam[1],
        "H1": model.hurst[0],
        "H2": model.hurst[1],
        "Hprime1": list(model.hprime1),
        "Hprime2": list(model.hprime2),
        "breakpoints_a": list(model.breakpoints_a.points),
        "breakpoints_b": list(model.breakpoints_b.points),
        "simulatable": model.simulatable,
    }


def model_from_json(doc: dict) -> MsiModel:
    model = MsiModel(
        lam=(doc["lambda1"], doc["lambda2"]),
        hurst=(doc["H1"], doc["H2"]),
        hprime1=tuple(doc["Hprime1"]),
        hprime2=tuple(doc["Hprime2"]),
        breakpoints_a=Breakpoints(tuple(doc["breakpoints_a"])),
        breakpoints_b=Breakpoints(tuple(doc["breakpoints_b"])),
    )
    return model


def save_model(model: MsiModel, path) -> None:
    Path(path).write_text(json.dumps(model_to_json(model), indent=2) + "\n")


def load_model(path) -> MsiModel:
    return model_from_json(json.loads(Path(path).read_text()))
