"""Estimation pipeline: scale-interval detection, scale parameters,
quadratic-variation Hurst estimation, dyadic sheet-exponent estimation and
model assembly.

A note on the quadratic-variation convention: ``quadratic_variation`` offers
two modes.  ``increment`` squares successive differences of the partition
values, which is the textbook quadratic variation.  ``raw`` (the default)
squares the partition values themselves; this is the convention that
reproduces the bundled Brisbane case-study tables, whose published variation
ratios follow from the listed partition values directly.  The ratio-based
Hurst estimator is insensitive to the 1/l normalization as long as the
partition count matches across scale intervals.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from decimal import ROUND_HALF_UP, Decimal
from typing import Mapping, Sequence

import numpy as np

from .errors import (
    DegenerateIntervalError,
    InvalidRatioError,
    LengthMismatchError,
    TooShortError,
    UnitScaleError,
    ZeroDenominatorError,
)
from .model import Breakpoints, MsiModel, ScaleVector

__all__ = [
    "SubintervalLayout",
    "QuadraticVariationTable",
    "build_subinterval_layout",
    "detect_scale_intervals",
    "scale_from_breakpoints",
    "quadratic_variation",
    "hurst_from_ratio",
    "hurst_prime_dyadic",
    "interval_hurst_means",
    "assemble_model",
]

MIN_SEGMENT = 3


@dataclass(frozen=True)
class SubintervalLayout:
    """Sampling layout: each scale interval split into two equal subintervals,
    each carrying ``points_per_subinterval`` equally spaced sample positions
    (subinterval boundaries included)."""

    breakpoints: Breakpoints
    points_per_subinterval: int
    positions: Mapping[tuple[int, int], tuple[float, ...]]

    def __post_init__(self):
        if self.points_per_subinterval < 3:
            raise ValueError("need at least 3 sample points per subinterval")


def build_subinterval_layout(breakpoints: Breakpoints,
                             points_per_subinterval: int) -> SubintervalLayout:
    """Equally spaced sample positions for every (interval, subinterval) pair."""
    if points_per_subinterval < 3:
        raise ValueError("need at least 3 sample points per subinterval")
    positions: dict[tuple[int, int], tuple[float, ...]] = {}
    for n in range(1, breakpoints.n_intervals + 1):
        lo, hi = breakpoints.interval(n)
        mid = 0.5 * (lo + hi)
        positions[(n, 1)] = tuple(np.linspace(lo, mid, points_per_subinterval))
        positions[(n, 2)] = tuple(np.linspace(mid, hi, points_per_subinterval))
    return SubintervalLayout(breakpoints, points_per_subinterval, positions)


@dataclass(frozen=True)
class QuadraticVariationTable:
    """SS values per (scale interval, subinterval) with the mode that
    produced them."""

    ss: Mapping[tuple[int, int], float]
    mode: str

    def __post_init__(self):
        if any(v < 0 for v in self.ss.values()):
            raise ValueError("quadratic variations must be non-negative")

    @classmethod
    def from_partition_values(cls, values: Mapping[tuple[int, int], Sequence[float]],
                              mode: str = "raw") -> "QuadraticVariationTable":
        return cls({key: quadratic_variation(v, mode=mode) for key, v in values.items()},
                   mode)

    def ratio(self, n: int, m: int) -> float:
        """SS_{n+1,m} / SS_{n,m}."""
        denom = self.ss[(n, m)]
        if denom <= 0:
            raise InvalidRatioError(f"SS[{n},{m}] is not positive")
        return self.ss[(n + 1, m)] / denom


def quadratic_variation(values: Sequence[float], l_m: int | None = None,
                        mode: str = "raw") -> float:
    """Normalized sum of squares over one subinterval's partition values.

    raw:        sum_k values[k]**2 / l      (matches the published tables)
    increment:  sum_k (values[k] - values[k-1])**2 / l

    ``l_m``, when given, must equal the partition count.
    """
    arr = np.asarray(values, dtype=float).ravel()
    l = arr.size
    if l < 2:
        raise TooShortError("need at least two partition values")
    if l_m is not None and int(l_m) != l:
        raise LengthMismatchError(f"got {l} values for declared partition count {l_m}")
    if mode == "raw":
        total = float(np.sum(arr ** 2))
    elif mode == "increment":
        total = float(np.sum(np.diff(arr) ** 2))
    else:
        raise ValueError(f"unknown mode {mode!r}; expected 'raw' or 'increment'")
    return total / l


def _segment_cost(y: np.ndarray, design: np.ndarray) -> float:
    """Residual sum of squares of an independent quadratic fit."""
    coef, *_ = np.linalg.lstsq(design, y, rcond=None)
    resid = y - design @ coef
    return float(resid @ resid)


def detect_scale_intervals(values: Sequence[float], segments: int,
                           min_segment: int = MIN_SEGMENT) -> Breakpoints:
    """Breakpoints minimizing the total squared residual of independent
    quadratic fits, one per segment, over all integer cut positions.

    Returns breakpoints in strip-count units including both endpoints, so
    segment ``n`` covers 1-based strips ``points[n-1]+1 .. points[n]``.
    Exhaustive via dynamic programming over precomputed segment costs.
    """
    y = np.asarray(values, dtype=float).ravel()
    length = y.size
    segments = int(segments)
    if segments < 1:
        raise ValueError("segments must be >= 1")
    if length < segments * min_segment:
        raise TooShortError(
            f"series of length {length} cannot carry {segments} segments "
            f"of at least {min_segment} points"
        )
    if segments == 1:
        return Breakpoints((0.0, float(length)))

    x = np.arange(length, dtype=float)
    design_full = np.column_stack([x ** 2, x, np.ones(length)])
    # cost[i, j]: SSE of one quadratic fit over values[i:j]
    cost = np.full((length + 1, length + 1), np.inf)
    for i in range(length):
        for j in range(i + min_segment, length + 1):
            cost[i, j] = _segment_cost(y[i:j], design_full[: j - i])

    best = np.full((segments + 1, length + 1), np.inf)
    prev = np.zeros((segments + 1, length + 1), dtype=int)
    best[0, 0] = 0.0
    for k in range(1, segments + 1):
        for j in range(k * min_segment, length + 1):
            candidates = best[k - 1, : j - min_segment + 1] + cost[: j - min_segment + 1, j]
            i = int(np.argmin(candidates))
            best[k, j] = candidates[i]
            prev[k, j] = i

    cuts = [length]
    for k in range(segments, 0, -1):
        cuts.append(int(prev[k, cuts[-1]]))
    cuts.reverse()
    return Breakpoints(tuple(float(c) for c in cuts))


def scale_from_breakpoints(breakpoints: Breakpoints) -> ScaleVector:
    """Successive interval-length ratios (a_{n+1}-a_n) / (a_n - a_{n-1})."""
    if len(breakpoints) < 3:
        raise TooShortError("need at least three breakpoints for a scale ratio")
    lengths = breakpoints.lengths()
    if any(not l > 0 for l in lengths):
        raise DegenerateIntervalError("zero-length scale interval")
    return ScaleVector(tuple(b / a for a, b in zip(lengths, lengths[1:])))


def hurst_from_ratio(ratio: float, scale: float) -> float:
    """Log-ratio Hurst estimator log(ratio) / (2 * log(scale))."""
    ratio = float(ratio)
    scale = float(scale)
    if not ratio > 0:
        raise InvalidRatioError(f"variation ratio must be positive, got {ratio}")
    if not scale > 0:
        raise InvalidRatioError(f"scale must be positive, got {scale}")
    if scale == 1.0:
        raise UnitScaleError("scale parameter 1 leaves the estimator undefined")
    return math.log(ratio) / (2.0 * math.log(scale))


def hurst_prime_dyadic(values: Sequence[float], breakpoints: Breakpoints,
                       interval: int) -> float:
    """Dyadic-ratio sheet-exponent estimator on one scale interval.

    With interval bounds (a, b) on a 1-based strip series X, compares
    double-step against single-step squared differences over
    k = 1 .. floor((b-a)/2) - 1:

        Hhat = log( sum (X[a+2k+2] - X[a+2k])^2
                  / sum (X[a+k+1] - X[a+k])^2 ) / (2*log(2)).
    """
    x = np.asarray(values, dtype=float).ravel()
    lo, hi = breakpoints.interval(interval)
    for bound in (lo, hi):
        if abs(bound - round(bound)) > 1e-9:
            raise ValueError("dyadic estimation needs integer strip breakpoints")
    a, b = int(round(lo)), int(round(hi))
    if b > x.size:
        raise LengthMismatchError(
            f"interval end {b} exceeds series length {x.size}"
        )
    k_max = (b - a) // 2 - 1
    if k_max < 1:
        raise TooShortError(f"interval of length {b - a} is too short (need >= 4)")
    ks = np.arange(1, k_max + 1)
    # 1-based strip index i lives at x[i-1]
    double = x[a + 2 * ks + 1] - x[a + 2 * ks - 1]
    single = x[a + ks] - x[a + ks - 1]
    num = float(np.sum(double ** 2))
    den = float(np.sum(single ** 2))
    if den == 0.0 or num == 0.0:
        raise ZeroDenominatorError("dyadic difference sums vanish on this interval")
    return math.log(num / den) / (2.0 * math.log(2.0))


def _round_half_up(value: float, digits: int) -> float:
    return float(Decimal(repr(value)).quantize(Decimal(1).scaleb(-digits),
                                               rounding=ROUND_HALF_UP))


def _decimal_means(rows: Sequence[Sequence[float]], digits: int) -> list[Decimal]:
    """Round-then-average in exact decimal arithmetic, so half-way means
    (e.g. (1.42 + 1.49)/2 = 1.455) round deterministically."""
    quantum = Decimal(1).scaleb(-digits)
    out = []
    for row in rows:
        vals = [Decimal(repr(float(v))).quantize(quantum, rounding=ROUND_HALF_UP)
                for v in row]
        mean = (sum(vals) / len(vals)).quantize(quantum, rounding=ROUND_HALF_UP)
        out.append(mean)
    return out


def interval_hurst_means(estimates: Sequence[Sequence[float]],
                         round_digits: int | None = 2) -> tuple[float, ...]:
    """First averaging stage: the subinterval pair of each scale transition
    collapses to one per-transition Hurst value.

    ``estimates[n]`` holds the subinterval estimates of transition ``n``.
    With ``round_digits`` set (the reported-precision convention of the
    case-study workflow), both the inputs and the means are rounded half-up
    at that many decimals, in exact decimal arithmetic.
    """
    if round_digits is None:
        return tuple(sum(float(v) for v in row) / len(row) for row in estimates)
    return tuple(float(m) for m in _decimal_means(estimates, round_digits))


def assemble_model(scales: Sequence[Sequence[float]],
                   hursts: Sequence[Sequence[Sequence[float]]],
                   hprimes: Sequence[Sequence[float]],
                   breakpoints: Sequence[Breakpoints],
                   round_digits: int | None = 2) -> MsiModel:
    """Two-stage averaging of per-axis estimates into a fitted model.

    Per axis i:
      * ``scales[i]``  -- per-transition scale ratios, averaged directly;
      * ``hursts[i]``  -- nested per-transition, per-subinterval Hurst
        estimates, averaged subinterval pair -> transition value (rounded at
        ``round_digits``), then transition pair -> axis Hurst;
      * ``hprimes[i]`` -- per-interval sheet exponents, carried through
        (rounded at ``round_digits``).
    """
    if len(scales) != 2 or len(hursts) != 2 or len(hprimes) != 2 or len(breakpoints) != 2:
        raise LengthMismatchError("expected per-axis pairs of estimates")
    lam = []
    hurst = []
    for axis in range(2):
        ratios = [float(v) for v in scales[axis]]
        if not ratios:
            raise LengthMismatchError("each axis needs at least one scale ratio")
        lam.append(sum(ratios) / len(ratios))
        if round_digits is None:
            means = interval_hurst_means(hursts[axis], None)
            hurst.append(sum(means) / len(means))
        else:
            means = _decimal_means(hursts[axis], round_digits)
            hurst.append(float(sum(means) / len(means)))
    hp = []
    for axis in range(2):
        vals = [float(v) for v in hprimes[axis]]
        if round_digits is not None:
            vals = [_round_half_up(v, round_digits) for v in vals]
        hp.append(tuple(vals))
    return MsiModel(
        lam=(lam[0], lam[1]),
        hurst=(hurst[0], hurst[1]),
        hprime1=hp[0],
        hprime2=hp[1],
        breakpoints_a=breakpoints[0],
        breakpoints_b=breakpoints[1],
    )
