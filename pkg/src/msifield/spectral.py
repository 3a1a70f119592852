"""Finite, grid-based spectral machinery for periodically correlated (PC)
lattice fields and their scale-invariant counterparts.

Everything here works on coefficient tables over one period lattice: the
covariance table Q_n(tau), its character-transform table R_j(tau), and
truncated trigonometric density tables d_j on a frequency grid.  Lag windows
are finite and supplied by the caller, so densities are estimators rather
than exact transforms.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

import numpy as np

from .errors import NonRealResidueError
from .lamperti import LatticeFunction

__all__ = [
    "PeriodLattice",
    "PcCovarianceTable",
    "RTable",
    "DensityTable",
    "r_from_q",
    "q_from_r",
    "density_from_r",
    "msi_cov_from_pc",
    "r_h_from_q",
    "density_h",
    "harmonic_synthesize",
]

DEFAULT_RESOLUTION = 128
IMAG_TOL = 1e-10


@dataclass(frozen=True)
class PeriodLattice:
    """One period cell of a PC lattice field: indices (j1, j2) with
    0 <= j1 < U1, 0 <= j2 < U2."""

    u: tuple[int, int]

    def __post_init__(self):
        u = (int(self.u[0]), int(self.u[1]))
        if u[0] < 1 or u[1] < 1:
            raise ValueError(f"period components must be >= 1, got {u}")
        object.__setattr__(self, "u", u)

    @property
    def size(self) -> int:
        return self.u[0] * self.u[1]

    def indices(self) -> list[tuple[int, int]]:
        return [(j1, j2) for j2 in range(self.u[1]) for j1 in range(self.u[0])]

    def flat(self, j1: int, j2: int) -> int:
        """Column-major flattening j2*U1 + j1 + 1 (1-based)."""
        return j2 * self.u[0] + j1 + 1


def _normalize_lags(lags) -> tuple[tuple[int, int], ...]:
    out = tuple((int(t[0]), int(t[1])) for t in lags)
    if len(set(out)) != len(out):
        raise ValueError("lag window contains duplicates")
    if not out:
        raise ValueError("lag window is empty")
    return out


@dataclass(frozen=True)
class PcCovarianceTable:
    """Covariance table Q_n(tau) = Cov(Y(n), Y(n + tau)) of a PC lattice field,
    stored for one period of n and a finite lag window.

    Periodicity Q_{n+U} = Q_n holds by construction: lookups reduce n mod U.
    """

    lattice: PeriodLattice
    lags: tuple[tuple[int, int], ...]
    q: np.ndarray  # (U1, U2, n_lags) real

    def __post_init__(self):
        lags = _normalize_lags(self.lags)
        arr = np.asarray(self.q, dtype=float)
        expected = (*self.lattice.u, len(lags))
        if arr.shape != expected:
            raise ValueError(f"q has shape {arr.shape}, expected {expected}")
        if not np.all(np.isfinite(arr)):
            raise ValueError("covariance table contains non-finite entries")
        arr = arr.copy()
        arr.setflags(write=False)
        object.__setattr__(self, "lags", lags)
        object.__setattr__(self, "q", arr)

    @classmethod
    def from_dict(cls, u: tuple[int, int],
                  table: Mapping[tuple[tuple[int, int], tuple[int, int]], float]
                  ) -> "PcCovarianceTable":
        """Build from a {(n, tau): value} mapping covering one full period."""
        lattice = PeriodLattice(u)
        lags = sorted({(int(t[0]), int(t[1])) for _, t in table.keys()})
        arr = np.zeros((*lattice.u, len(lags)))
        seen = np.zeros(arr.shape, dtype=bool)
        pos = {t: k for k, t in enumerate(lags)}
        for (n, tau), v in table.items():
            idx = (n[0] % lattice.u[0], n[1] % lattice.u[1], pos[(int(tau[0]), int(tau[1]))])
            arr[idx] = float(v)
            seen[idx] = True
        if not seen.all():
            raise ValueError("table does not cover every (n, tau) combination")
        return cls(lattice, tuple(lags), arr)

    def lag_index(self, tau: tuple[int, int]) -> int:
        try:
            return self.lags.index((int(tau[0]), int(tau[1])))
        except ValueError:
            raise KeyError(f"lag {tuple(tau)} not in stored window") from None

    def value(self, n: tuple[int, int], tau: tuple[int, int]) -> float:
        u1, u2 = self.lattice.u
        return float(self.q[int(n[0]) % u1, int(n[1]) % u2, self.lag_index(tau)])


@dataclass(frozen=True)
class RTable:
    """Character-transform table R_j(tau), complex, over the same lag window."""

    lattice: PeriodLattice
    lags: tuple[tuple[int, int], ...]
    r: np.ndarray  # (U1, U2, n_lags) complex

    def __post_init__(self):
        lags = _normalize_lags(self.lags)
        arr = np.asarray(self.r, dtype=complex)
        expected = (*self.lattice.u, len(lags))
        if arr.shape != expected:
            raise ValueError(f"r has shape {arr.shape}, expected {expected}")
        if not np.all(np.isfinite(arr)):
            raise ValueError("R table contains non-finite entries")
        arr = arr.copy()
        arr.setflags(write=False)
        object.__setattr__(self, "lags", lags)
        object.__setattr__(self, "r", arr)

    def value(self, j: tuple[int, int], tau: tuple[int, int]) -> complex:
        idx = self.lags.index((int(tau[0]), int(tau[1])))
        return complex(self.r[int(j[0]) % self.lattice.u[0],
                              int(j[1]) % self.lattice.u[1], idx])


@dataclass(frozen=True)
class DensityTable:
    """Truncated trigonometric density d_j evaluated on a uniform frequency
    grid over [0, 2*pi]^2 (endpoints included)."""

    lattice: PeriodLattice
    freqs1: np.ndarray
    freqs2: np.ndarray
    d: np.ndarray  # (U1, U2, F1, F2) complex

    def value(self, j: tuple[int, int], f1_index: int, f2_index: int) -> complex:
        return complex(self.d[j[0], j[1], f1_index, f2_index])


def r_from_q(q: PcCovarianceTable) -> RTable:
    """Character transform of the covariance table:

    R_j(tau) = (1 / (U1*U2)) * sum_n exp(+2*pi*i*(n1*j1/U1 + n2*j2/U2)) Q_n(tau).

    This is exactly a normalized inverse 2-d DFT over the period axes.
    """
    r = np.fft.ifft2(q.q, axes=(0, 1))
    return RTable(q.lattice, q.lags, r)


def q_from_r(r: RTable, imag_tol: float = IMAG_TOL) -> PcCovarianceTable:
    """Inverse of :func:`r_from_q`:

    Q_n(tau) = sum_j exp(-2*pi*i*(n1*j1/U1 + n2*j2/U2)) R_j(tau).

    The reconstruction of a genuine covariance table is real; an imaginary
    residue above ``imag_tol`` (scaled by the table magnitude) signals an
    inconsistent R table and raises :class:`NonRealResidueError`.
    """
    qc = np.fft.fft2(r.r, axes=(0, 1))
    scale = max(1.0, float(np.abs(qc.real).max()) if qc.size else 1.0)
    residue = float(np.abs(qc.imag).max()) if qc.size else 0.0
    if residue > imag_tol * scale:
        raise NonRealResidueError(
            f"imaginary residue {residue:.3e} exceeds tolerance {imag_tol * scale:.3e}"
        )
    return PcCovarianceTable(r.lattice, r.lags, qc.real)


def _density(table: np.ndarray, lags, resolution: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    f1 = np.linspace(0.0, 2.0 * np.pi, resolution)
    f2 = np.linspace(0.0, 2.0 * np.pi, resolution)
    tau = np.asarray(lags, dtype=float)  # (L, 2)
    # phase[l, a, b] = exp(i * (tau1*f1_a + tau2*f2_b))
    phase = np.exp(1j * (tau[:, 0][:, None, None] * f1[None, :, None]
                         + tau[:, 1][:, None, None] * f2[None, None, :]))
    d = np.einsum("uvl,lab->uvab", table, phase) / (4.0 * np.pi ** 2)
    return f1, f2, d


def density_from_r(r: RTable, resolution: int = DEFAULT_RESOLUTION) -> DensityTable:
    """Spectral density estimate
    d_j(f) = (1 / (4*pi^2)) * sum_tau exp(i*(tau1*f1 + tau2*f2)) R_j(tau),
    evaluated on a uniform ``resolution`` x ``resolution`` grid over [0, 2*pi]^2.
    """
    f1, f2, d = _density(r.r, r.lags, resolution)
    return DensityTable(r.lattice, f1, f2, d)


def _msi_weights(q: PcCovarianceTable, hurst, alpha) -> np.ndarray:
    """Weights alpha1^{(2*n1+tau1)*H1} * alpha2^{(2*n2+tau2)*H2} shaped like q.q."""
    a1, a2 = float(alpha[0]), float(alpha[1])
    if a1 <= 0 or a2 <= 0:
        raise ValueError(f"alpha must be positive componentwise, got {(a1, a2)}")
    h1, h2 = float(hurst[0]), float(hurst[1])
    u1, u2 = q.lattice.u
    n1 = np.arange(u1)[:, None, None]
    n2 = np.arange(u2)[None, :, None]
    tau = np.asarray(q.lags, dtype=float)
    t1 = tau[:, 0][None, None, :]
    t2 = tau[:, 1][None, None, :]
    return a1 ** ((2 * n1 + t1) * h1) * a2 ** ((2 * n2 + t2) * h2)


def msi_cov_from_pc(q: PcCovarianceTable, hurst, alpha) -> dict:
    """Covariance of the geometrically sampled scale-invariant field built on
    the PC table:

    QH_m(tau) = alpha1^{(2*m1+tau1)*H1} * alpha2^{(2*m2+tau2)*H2} * Q_m(tau).

    Returns a {(m, tau): value} mapping over the stored period and lag window.
    """
    weighted = _msi_weights(q, hurst, alpha) * q.q
    u1, u2 = q.lattice.u
    return {
        ((m1, m2), tau): float(weighted[m1, m2, k])
        for m1 in range(u1) for m2 in range(u2)
        for k, tau in enumerate(q.lags)
    }


def r_h_from_q(q: PcCovarianceTable, hurst, alpha) -> RTable:
    """Character transform of the weighted table:

    RH_j(tau) = (1 / (U1*U2)) * sum_n exp(+2*pi*i*(n1*j1/U1 + n2*j2/U2))
                * alpha1^{(2*n1+tau1)*H1} * alpha2^{(2*n2+tau2)*H2} * Q_n(tau).
    """
    weighted = _msi_weights(q, hurst, alpha) * q.q
    r = np.fft.ifft2(weighted, axes=(0, 1))
    return RTable(q.lattice, q.lags, r)


def density_h(rh: RTable, resolution: int = DEFAULT_RESOLUTION) -> DensityTable:
    """Density of the scale-invariant field from its weighted R table; the
    trigonometric sum is the same as :func:`density_from_r`."""
    return density_from_r(rh, resolution)


def harmonic_synthesize(atoms: Mapping[tuple[float, float], complex],
                        hurst, alpha, n_range: tuple[range, range],
                        imag_tol: float = IMAG_TOL) -> LatticeFunction:
    """Synthesize a lattice field from finitely many frequency atoms:

    X(n) = alpha1^{n1*H1} * alpha2^{n2*H2}
           * sum_f exp(-i*(n1*f1 + n2*f2)) * amplitude(f).

    The atom set must be conjugate-balanced enough for a real field; an
    imaginary residue above tolerance raises :class:`NonRealResidueError`.
    """
    a1, a2 = float(alpha[0]), float(alpha[1])
    h1, h2 = float(hurst[0]), float(hurst[1])
    values = {}
    worst = 0.0
    for n1 in n_range[0]:
        for n2 in n_range[1]:
            acc = 0j
            for (f1, f2), amp in atoms.items():
                acc += complex(amp) * np.exp(-1j * (n1 * f1 + n2 * f2))
            acc *= a1 ** (n1 * h1) * a2 ** (n2 * h2)
            worst = max(worst, abs(acc.imag))
            values[(n1, n2)] = acc.real
    scale = max(1.0, max((abs(v) for v in values.values()), default=1.0))
    if worst > imag_tol * scale:
        raise NonRealResidueError(
            f"synthesized field has imaginary residue {worst:.3e}; "
            "atom set is not conjugate-balanced"
        )
    return LatticeFunction((a1, a2), values)
