"""Shared domain types: grids, strip series, breakpoints and the fitted model.

All types are immutable value objects; once constructed they are safe to
share across threads.  Strip and time indices are unitless integers --
physical units (km, minutes) enter only through ``cell_size`` metadata at
the I/O boundary.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    InvalidHurstPrimeError,
    InvalidScaleError,
    LengthMismatchError,
    NegativeValueError,
)

__all__ = [
    "Axis",
    "GridField",
    "StripSeries",
    "Breakpoints",
    "ScaleVector",
    "HurstVector",
    "MsiModel",
    "validate_model",
]


class Axis(str, enum.Enum):
    VERTICAL = "vertical"
    HORIZONTAL = "horizontal"
    TIME = "time"


def _as_float_matrix(values) -> np.ndarray:
    arr = np.asarray(values, dtype=float)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class GridField:
    """Dense matrix of non-negative accumulation values (mm per cell).

    Rows index vertical strips, columns horizontal strips; ``cell_size``
    is the square cell side length in km.
    """

    values: np.ndarray
    cell_size: float = 1.0
    origin: tuple[float, float] = (0.0, 0.0)

    def __post_init__(self):
        arr = _as_float_matrix(self.values)
        if arr.ndim != 2 or arr.shape[0] < 1 or arr.shape[1] < 1:
            raise ValueError("grid must be a 2-d matrix with at least one cell")
        if not np.all(np.isfinite(arr)):
            raise ValueError("grid contains non-finite entries")
        if np.any(arr < 0):
            raise NegativeValueError("grid contains negative entries")
        if not (self.cell_size > 0):
            raise ValueError("cell_size must be positive")
        object.__setattr__(self, "values", arr)
        object.__setattr__(self, "origin", (float(self.origin[0]), float(self.origin[1])))

    @property
    def rows(self) -> int:
        return self.values.shape[0]

    @property
    def cols(self) -> int:
        return self.values.shape[1]


@dataclass(frozen=True)
class StripSeries:
    """Accumulated values on successive strips (or time steps) along one axis."""

    axis: Axis
    values: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.values, dtype=float).ravel()
        if arr.size < 2:
            raise ValueError("series needs at least two entries")
        if not np.all(np.isfinite(arr)):
            raise ValueError("series contains non-finite entries")
        if np.any(arr < 0):
            raise NegativeValueError("series contains negative entries")
        arr.setflags(write=False)
        object.__setattr__(self, "axis", Axis(self.axis))
        object.__setattr__(self, "values", arr)

    def __len__(self) -> int:
        return int(self.values.size)


@dataclass(frozen=True)
class Breakpoints:
    """Strictly increasing interval end points; the first point is the origin
    of the interval structure (not necessarily zero)."""

    points: tuple[float, ...]

    def __post_init__(self):
        pts = tuple(float(p) for p in self.points)
        if len(pts) < 2:
            raise ValueError("need at least two breakpoints")
        if any(not math.isfinite(p) for p in pts):
            raise ValueError("breakpoints must be finite")
        if any(b <= a for a, b in zip(pts, pts[1:])):
            raise ValueError("breakpoints must be strictly increasing")
        object.__setattr__(self, "points", pts)

    def __len__(self) -> int:
        return len(self.points)

    @property
    def n_intervals(self) -> int:
        return len(self.points) - 1

    def interval(self, i: int) -> tuple[float, float]:
        """Bounds of the 1-based interval ``i``."""
        if not 1 <= i <= self.n_intervals:
            raise IndexError(f"interval index {i} out of range 1..{self.n_intervals}")
        return self.points[i - 1], self.points[i]

    def lengths(self) -> tuple[float, ...]:
        return tuple(b - a for a, b in zip(self.points, self.points[1:]))


@dataclass(frozen=True)
class ScaleVector:
    """Per-transition scale ratios (successive interval length ratios)."""

    ratios: tuple[float, ...]

    def __post_init__(self):
        r = tuple(float(x) for x in self.ratios)
        if any(not math.isfinite(x) or x <= 0 for x in r):
            raise ValueError("scale ratios must be finite and positive")
        object.__setattr__(self, "ratios", r)

    def __len__(self) -> int:
        return len(self.ratios)

    def __iter__(self):
        return iter(self.ratios)


@dataclass(frozen=True)
class HurstVector:
    """A sequence of Hurst exponents.  Values above one are legal for the
    field-level exponents; only the sheet exponents are confined to (0, 1)."""

    values: tuple[float, ...]

    def __post_init__(self):
        v = tuple(float(x) for x in self.values)
        if any(not math.isfinite(x) for x in v):
            raise ValueError("Hurst values must be finite")
        object.__setattr__(self, "values", v)

    def __len__(self) -> int:
        return len(self.values)

    def __iter__(self):
        return iter(self.values)


@dataclass(frozen=True)
class MsiModel:
    """Fitted multi-scale-invariant field parameters.

    ``lam`` and ``hurst`` are the per-axis scale and field Hurst pairs;
    ``hprime1``/``hprime2`` hold one sheet exponent per scale interval on
    the matching axis.  Sheet exponents outside (0, 1) are representable
    (estimation can produce them) but flag the model as non-simulatable.
    """

    lam: tuple[float, float]
    hurst: tuple[float, float]
    hprime1: tuple[float, ...]
    hprime2: tuple[float, ...]
    breakpoints_a: Breakpoints = field(default=None)
    breakpoints_b: Breakpoints = field(default=None)

    def __post_init__(self):
        lam = (float(self.lam[0]), float(self.lam[1]))
        hurst = (float(self.hurst[0]), float(self.hurst[1]))
        hp1 = tuple(float(x) for x in self.hprime1)
        hp2 = tuple(float(x) for x in self.hprime2)
        for v in (*lam, *hurst, *hp1, *hp2):
            if not math.isfinite(v):
                raise ValueError("model parameters must be finite")
        if lam[0] <= 1 or lam[1] <= 1:
            raise InvalidScaleError(f"scale parameters must exceed 1, got {lam}")
        if hurst[0] <= 0 or hurst[1] <= 0:
            raise ValueError(f"field Hurst exponents must be positive, got {hurst}")
        if self.breakpoints_a is None:
            object.__setattr__(self, "breakpoints_a", _default_breakpoints(len(hp1)))
        if self.breakpoints_b is None:
            object.__setattr__(self, "breakpoints_b", _default_breakpoints(len(hp2)))
        if len(hp1) != self.breakpoints_a.n_intervals:
            raise LengthMismatchError(
                f"hprime1 has {len(hp1)} entries for {self.breakpoints_a.n_intervals} intervals"
            )
        if len(hp2) != self.breakpoints_b.n_intervals:
            raise LengthMismatchError(
                f"hprime2 has {len(hp2)} entries for {self.breakpoints_b.n_intervals} intervals"
            )
        object.__setattr__(self, "lam", lam)
        object.__setattr__(self, "hurst", hurst)
        object.__setattr__(self, "hprime1", hp1)
        object.__setattr__(self, "hprime2", hp2)

    @property
    def simulatable(self) -> bool:
        """True when every sheet exponent lies strictly inside (0, 1), so the
        product-form sheet covariance is positive definite."""
        return all(0.0 < h < 1.0 for h in (*self.hprime1, *self.hprime2))


def _default_breakpoints(n_intervals: int) -> Breakpoints:
    return Breakpoints(tuple(float(k) for k in range(n_intervals + 1)))


def validate_model(model: MsiModel) -> MsiModel:
    """Check the full set of model invariants and return the model unchanged.

    Structural invariants (scales above one, matching lengths, finiteness)
    are already enforced at construction; this adds the simulation
    requirement that every sheet exponent lies in (0, 1).  Estimation and
    prediction workflows may carry non-simulatable models and should
    consult ``model.simulatable`` instead of calling this.

    Idempotent: ``validate_model(validate_model(m))`` is ``m``.
    """
    if not isinstance(model, MsiModel):
        raise TypeError("expected an MsiModel")
    if not model.simulatable:
        bad = [h for h in (*model.hprime1, *model.hprime2) if not 0.0 < h < 1.0]
        raise InvalidHurstPrimeError(
            f"sheet Hurst exponents must lie in (0, 1); offending values: {bad}"
        )
    return model
