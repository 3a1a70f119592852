"""Rectangle-to-rectangle prediction from the fitted scale structure, plus
MAPE accuracy scoring with the conventional Lewis bands.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Mapping

import numpy as np

from .errors import (
    EmptySetError,
    MissingRectangleError,
    ZeroActualError,
)
from .model import MsiModel

__all__ = [
    "RectangleTotals",
    "PredictionReport",
    "LewisClass",
    "predict_rect",
    "mape",
    "lewis_class",
    "prediction_report",
]


@dataclass(frozen=True)
class RectangleTotals:
    """Accumulated values on a K1 x K2 grid of scale rectangles, each split
    into S sub-rectangles.

    ``values[k1-1, k2-1, i-1]`` is the total on sub-rectangle i of rectangle
    (k1, k2); rectangle keys are 1-based pairs throughout.
    """

    values: np.ndarray  # (K1, K2, S)

    def __post_init__(self):
        arr = np.asarray(self.values, dtype=float)
        if arr.ndim != 3 or min(arr.shape) < 1:
            raise ValueError("totals must have shape (K1, K2, S)")
        if not np.all(np.isfinite(arr)):
            raise ValueError("totals contain non-finite entries")
        if np.any(arr < 0):
            raise ValueError("totals must be non-negative")
        arr = arr.copy()
        arr.setflags(write=False)
        object.__setattr__(self, "values", arr)

    @classmethod
    def from_rows(cls, rows: np.ndarray, shape: tuple[int, int] | None = None
                  ) -> "RectangleTotals":
        """Build from a (K1*K2, S) matrix whose rows run over rectangles in
        row-major (k1, k2) order.  Without an explicit ``shape`` the rectangle
        grid is assumed square."""
        arr = np.asarray(rows, dtype=float)
        if arr.ndim != 2:
            raise ValueError("rows must be a 2-d matrix")
        if shape is None:
            k = int(round(arr.shape[0] ** 0.5))
            if k * k != arr.shape[0]:
                raise ValueError(
                    f"{arr.shape[0]} rows do not form a square rectangle grid; "
                    "pass shape explicitly"
                )
            shape = (k, k)
        if shape[0] * shape[1] != arr.shape[0]:
            raise ValueError(f"shape {shape} does not match {arr.shape[0]} rows")
        return cls(arr.reshape(shape[0], shape[1], arr.shape[1]))

    @property
    def shape(self) -> tuple[int, int]:
        return self.values.shape[0], self.values.shape[1]

    def keys(self) -> list[tuple[int, int]]:
        k1, k2 = self.shape
        return [(i, j) for i in range(1, k1 + 1) for j in range(1, k2 + 1)]

    def sub_totals(self, key: tuple[int, int]) -> np.ndarray:
        self._check_key(key)
        return self.values[key[0] - 1, key[1] - 1]

    def total(self, key: tuple[int, int]) -> float:
        return float(np.sum(self.sub_totals(key)))

    def totals(self) -> dict[tuple[int, int], float]:
        return {key: self.total(key) for key in self.keys()}

    def _check_key(self, key: tuple[int, int]) -> None:
        k1, k2 = self.shape
        if not (1 <= key[0] <= k1 and 1 <= key[1] <= k2):
            raise MissingRectangleError(
                f"rectangle {tuple(key)} outside the {k1}x{k2} grid"
            )


class LewisClass(str, enum.Enum):
    HIGHLY_ACCURATE = "highly_accurate"
    GOOD = "good"
    REASONABLE = "reasonable"
    INACCURATE = "inaccurate"


def predict_rect(totals: RectangleTotals, model: MsiModel,
                 initial: tuple[int, int]) -> dict[tuple[int, int], float]:
    """Forward rectangle predictions from one known rectangle:

        Yhat_{i, l} = lam1**((l1-k1)*H1) * lam2**((l2-k2)*H2) * Y_{i, k}

    summed over sub-rectangles i.  Only rectangles with l >= initial
    componentwise are predicted (backward extrapolation is rejected); the
    prediction at the initial rectangle equals its actual total.
    """
    totals._check_key(initial)
    k1, k2 = initial
    lam1, lam2 = model.lam
    h1, h2 = model.hurst
    base = totals.sub_totals(initial)
    out: dict[tuple[int, int], float] = {}
    for l1, l2 in totals.keys():
        if l1 < k1 or l2 < k2:
            continue
        factor = lam1 ** ((l1 - k1) * h1) * lam2 ** ((l2 - k2) * h2)
        out[(l1, l2)] = float(np.sum(factor * base))
    return out


def mape(actual: Mapping[tuple[int, int], float],
         predicted: Mapping[tuple[int, int], float],
         exclude: frozenset | set = frozenset()) -> float:
    """Mean absolute percentage error over the included rectangle keys:

        100 / n * sum |actual - predicted| / actual.
    """
    keys = [k for k in actual.keys() if k not in exclude]
    if not keys:
        raise EmptySetError("no rectangles left after exclusion")
    missing = [k for k in keys if k not in predicted]
    if missing:
        raise MissingRectangleError(f"predictions missing for {missing}")
    errors = []
    for k in keys:
        a = float(actual[k])
        if a <= 0:
            raise ZeroActualError(f"actual value at {k} is not positive")
        errors.append(abs(a - float(predicted[k])) / a)
    return 100.0 * sum(errors) / len(errors)


def lewis_class(gamma: float) -> LewisClass:
    """Accuracy band of a MAPE value: <=10 highly accurate, (10, 20] good,
    (20, 50] reasonable, >50 inaccurate."""
    g = float(gamma)
    if g < 0:
        raise ValueError("MAPE is non-negative")
    if g <= 10.0:
        return LewisClass.HIGHLY_ACCURATE
    if g <= 20.0:
        return LewisClass.GOOD
    if g <= 50.0:
        return LewisClass.REASONABLE
    return LewisClass.INACCURATE


@dataclass(frozen=True)
class PredictionReport:
    """Predicted and actual rectangle totals with per-rectangle relative
    errors, the MAPE over non-initial rectangles, and its Lewis band."""

    initial: tuple[int, int]
    predicted: dict[tuple[int, int], float]
    actual: dict[tuple[int, int], float]
    per_rect_abs_rel_error: dict[tuple[int, int], float]
    mape: float
    lewis: LewisClass

    def to_jsonable(self) -> dict:
        def keyed(d):
            return {f"{k[0]},{k[1]}": v for k, v in sorted(d.items())}

        return {
            "initial": f"{self.initial[0]},{self.initial[1]}",
            "predicted": keyed(self.predicted),
            "actual": keyed(self.actual),
            "abs_rel_error": keyed(self.per_rect_abs_rel_error),
            "mape": self.mape,
            "lewis": self.lewis.value,
        }


def prediction_report(totals: RectangleTotals, model: MsiModel,
                      initial: tuple[int, int]) -> PredictionReport:
    """Predict every forward rectangle from ``initial`` and score the result,
    excluding the initial rectangle from the MAPE per convention."""
    predicted = predict_rect(totals, model, initial)
    initial = (int(initial[0]), int(initial[1]))
    actual = {k: totals.total(k) for k in predicted}
    gamma = mape(actual, predicted, exclude={initial})
    errors = {
        k: abs(actual[k] - predicted[k]) / actual[k]
        for k in predicted if k != initial
    }
    return PredictionReport(
        initial=initial,
        predicted=predicted,
        actual=actual,
        per_rect_abs_rel_error=errors,
        mape=gamma,
        lewis=lewis_class(gamma),
    )
