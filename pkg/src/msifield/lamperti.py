"""Weighting-plus-log-reindexing transforms between geometric-lattice fields
and their periodic/stationary counterparts, and the dilation/shift operator
calculus built on them.

Lattice functions are finite maps from integer index pairs to the field
sampled at the corresponding geometric lattice point; evaluating outside the
stored index set is an error rather than an extrapolation, which keeps the
operator identities exactly testable.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping

from .errors import NonLatticeScaleError, OffLatticeError

__all__ = [
    "LatticeFunction",
    "quasi_lamperti",
    "inverse_quasi_lamperti",
    "lamperti_map",
    "inverse_lamperti_map",
    "apply_dilation",
    "shift_map",
]

#: |log_alpha(t) - round(log_alpha(t))| below this counts as on-lattice.
LATTICE_TOL = 1e-9


@dataclass(frozen=True)
class LatticeFunction:
    """A field sampled on the geometric lattice {(a1**n1, a2**n2)}, stored by
    its integer exponents."""

    base: tuple[float, float]
    values: Mapping[tuple[int, int], float]

    def __post_init__(self):
        base = (float(self.base[0]), float(self.base[1]))
        if base[0] <= 1 or base[1] <= 1:
            raise ValueError(f"lattice base must exceed 1 componentwise, got {base}")
        vals = {}
        for key, v in dict(self.values).items():
            n = (int(key[0]), int(key[1]))
            v = float(v)
            if not math.isfinite(v):
                raise ValueError(f"non-finite value at lattice index {n}")
            vals[n] = v
        object.__setattr__(self, "base", base)
        object.__setattr__(self, "values", vals)

    def __getitem__(self, index: tuple[int, int]) -> float:
        try:
            return self.values[(int(index[0]), int(index[1]))]
        except KeyError:
            raise OffLatticeError(f"index {tuple(index)} not in stored lattice") from None

    def __len__(self) -> int:
        return len(self.values)

    def indices(self):
        return self.values.keys()

    def point(self, index: tuple[int, int]) -> tuple[float, float]:
        """Geometric coordinates of a lattice index."""
        return (self.base[0] ** index[0], self.base[1] ** index[1])


def _log_index(t: float, base: float) -> int:
    if t <= 0:
        raise OffLatticeError(f"coordinate {t} is not positive")
    k = math.log(t) / math.log(base)
    k_int = round(k)
    if abs(k - k_int) >= LATTICE_TOL:
        raise OffLatticeError(f"coordinate {t} is not a power of base {base}")
    return int(k_int)


def quasi_lamperti(y: LatticeFunction, hurst: tuple[float, float],
                   t: tuple[float, float]) -> float:
    """Forward transform: t1**H1 * t2**H2 * Y(log_a1 t1, log_a2 t2).

    ``t`` must be a point of Y's geometric lattice.
    """
    n = (_log_index(t[0], y.base[0]), _log_index(t[1], y.base[1]))
    return t[0] ** hurst[0] * t[1] ** hurst[1] * y[n]


def inverse_quasi_lamperti(x: LatticeFunction, hurst: tuple[float, float],
                           t: tuple[int, int]) -> float:
    """Inverse transform: a1**(-t1*H1) * a2**(-t2*H2) * X(a1**t1, a2**t2)."""
    a1, a2 = x.base
    return a1 ** (-t[0] * hurst[0]) * a2 ** (-t[1] * hurst[1]) * x[t]


def lamperti_map(y: LatticeFunction, hurst: tuple[float, float]) -> LatticeFunction:
    """Apply the forward transform at every stored lattice point."""
    out = {n: quasi_lamperti(y, hurst, y.point(n)) for n in y.indices()}
    return LatticeFunction(y.base, out)


def inverse_lamperti_map(x: LatticeFunction, hurst: tuple[float, float]) -> LatticeFunction:
    """Apply the inverse transform at every stored lattice point."""
    out = {n: inverse_quasi_lamperti(x, hurst, n) for n in x.indices()}
    return LatticeFunction(x.base, out)


def _lattice_steps(scale: tuple[float, float], base: tuple[float, float]) -> tuple[int, int]:
    steps = []
    for lam, alpha in zip(scale, base):
        if lam <= 0:
            raise NonLatticeScaleError(f"dilation scale must be positive, got {lam}")
        u = math.log(lam) / math.log(alpha)
        u_int = round(u)
        if abs(u - u_int) >= LATTICE_TOL or u_int < 0:
            raise NonLatticeScaleError(
                f"scale {lam} is not a non-negative integer power of base {alpha}"
            )
        steps.append(int(u_int))
    return steps[0], steps[1]


def apply_dilation(x: LatticeFunction, hurst: tuple[float, float],
                   scale: tuple[float, float]) -> LatticeFunction:
    """Renormalized dilation: (lam1**-H1 * lam2**-H2) X(lam1*t1, lam2*t2).

    ``scale`` must consist of integer powers of the lattice base, so the
    dilation maps lattice points to lattice points; the result lives on the
    index set shifted down by the corresponding steps.
    """
    u = _lattice_steps(scale, x.base)
    factor = scale[0] ** (-hurst[0]) * scale[1] ** (-hurst[1])
    out = {(n1 - u[0], n2 - u[1]): factor * v for (n1, n2), v in x.values.items()}
    return LatticeFunction(x.base, out)


def shift_map(y: LatticeFunction, steps: tuple[int, int]) -> LatticeFunction:
    """Index shift: (S_u Y)(n) = Y(n + u), on the shifted index set."""
    u1, u2 = int(steps[0]), int(steps[1])
    out = {(n1 - u1, n2 - u2): v for (n1, n2), v in y.values.items()}
    return LatticeFunction(y.base, out)
