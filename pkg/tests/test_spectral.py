import numpy as np
import pytest

from msifield.errors import NonRealResidueError
from msifield.spectral import (
    PcCovarianceTable,
    PeriodLattice,
    RTable,
    density_from_r,
    density_h,
    harmonic_synthesize,
    msi_cov_from_pc,
    q_from_r,
    r_from_q,
    r_h_from_q,
)

LAGS_2D = ((0, 0), (1, 0), (0, 1), (1, 1), (2, 1))


def random_table(rng, u, lags=LAGS_2D):
    lattice = PeriodLattice(u)
    q = rng.normal(size=(*lattice.u, len(lags)))
    return PcCovarianceTable(lattice, lags, q)


def brute_force_r(q: PcCovarianceTable) -> np.ndarray:
    """Direct double-sum evaluation of the character transform."""
    u1, u2 = q.lattice.u
    out = np.zeros_like(q.q, dtype=complex)
    for j1 in range(u1):
        for j2 in range(u2):
            for n1 in range(u1):
                for n2 in range(u2):
                    phase = np.exp(2j * np.pi * (n1 * j1 / u1 + n2 * j2 / u2))
                    out[j1, j2, :] += phase * q.q[n1, n2, :]
    return out / (u1 * u2)


def test_degenerate_period_is_stationary(rng):
    q = random_table(rng, (1, 1))
    r = r_from_q(q)
    assert np.allclose(r.r, q.q, rtol=0, atol=1e-15)


def test_constant_table_concentrates_at_zero_index(rng):
    lattice = PeriodLattice((3, 2))
    c = 2.5
    q = PcCovarianceTable(lattice, LAGS_2D, np.full((3, 2, len(LAGS_2D)), c))
    r = r_from_q(q)
    assert np.allclose(r.r[0, 0], c, atol=1e-14)
    mask = np.ones((3, 2), dtype=bool)
    mask[0, 0] = False
    assert np.max(np.abs(r.r[mask])) < 1e-14


def test_round_trip_both_directions(rng):
    q = random_table(rng, (3, 2))
    back = q_from_r(r_from_q(q))
    assert np.max(np.abs(back.q - q.q)) <= 1e-12
    r = r_from_q(q)
    forth = r_from_q(q_from_r(r))
    assert np.max(np.abs(forth.r - r.r)) <= 1e-12


def test_brute_force_oracle_matches_fft_path(rng):
    q = random_table(rng, (4, 3))
    r = r_from_q(q)
    assert np.max(np.abs(r.r - brute_force_r(q))) <= 1e-12


def test_delta_coefficient_reconstructs_constant():
    lattice = PeriodLattice((3, 2))
    lags = ((0, 0),)
    r = np.zeros((3, 2, 1), dtype=complex)
    c = -1.75
    r[0, 0, 0] = c
    q = q_from_r(RTable(lattice, lags, r))
    assert np.allclose(q.q, c, atol=1e-14)


def test_single_character_alternates_sign():
    lattice = PeriodLattice((2, 1))
    lags = ((0, 0),)
    r = np.zeros((2, 1, 1), dtype=complex)
    r[1, 0, 0] = 1.0
    q = q_from_r(RTable(lattice, lags, r))
    assert q.value((0, 0), (0, 0)) == pytest.approx(1.0)
    assert q.value((1, 0), (0, 0)) == pytest.approx(-1.0)


def test_inconsistent_r_raises_non_real_residue():
    lattice = PeriodLattice((2, 1))
    r = np.zeros((2, 1, 1), dtype=complex)
    r[1, 0, 0] = 1j
    with pytest.raises(NonRealResidueError):
        q_from_r(RTable(lattice, ((0, 0),), r))


def test_flat_density_from_zero_lag_coefficient():
    lattice = PeriodLattice((2, 2))
    lags = ((0, 0), (1, 0))
    r = np.zeros((2, 2, 2), dtype=complex)
    r[:, :, 0] = 1.0  # only the zero lag carries weight
    dens = density_from_r(RTable(lattice, lags, r), resolution=16)
    assert np.allclose(dens.d, 1.0 / (4 * np.pi ** 2), atol=1e-14)


def test_two_lag_cosine_density_closed_form():
    lattice = PeriodLattice((1, 1))
    tau = (2, 1)
    c = 0.8
    lags = (tau, (-tau[0], -tau[1]))
    r = np.full((1, 1, 2), c, dtype=complex)
    dens = density_from_r(RTable(lattice, lags, r), resolution=64)
    for f1, f2 in [(0.0, 0.0), (0.5, 1.0), (1.3, 2.2), (3.0, 0.1), (2.0 * np.pi, np.pi)]:
        a = np.argmin(np.abs(dens.freqs1 - f1))
        b = np.argmin(np.abs(dens.freqs2 - f2))
        expected = c * np.cos(tau[0] * dens.freqs1[a] + tau[1] * dens.freqs2[b]) \
            / (2 * np.pi ** 2)
        assert dens.d[0, 0, a, b].real == pytest.approx(expected, abs=1e-12)
        assert abs(dens.d[0, 0, a, b].imag) < 1e-14


def test_density_integral_recovers_zero_lag_coefficient(rng):
    q = random_table(rng, (2, 2), lags=((0, 0), (1, 1), (2, 1)))
    r = r_from_q(q)
    dens = density_from_r(r, resolution=128)
    integral = np.trapezoid(
        np.trapezoid(dens.d[0, 0].real, dens.freqs2, axis=1), dens.freqs1)
    assert integral == pytest.approx(r.r[0, 0, 0].real, abs=1e-3)


def test_msi_weights_trivial_cases(rng):
    q = random_table(rng, (2, 2))
    flat = msi_cov_from_pc(q, (0.0, 0.0), (2.0, 3.0))
    for (m, tau), v in flat.items():
        assert v == pytest.approx(q.value(m, tau), rel=1e-15)
    weighted = msi_cov_from_pc(q, (0.7, 0.4), (2.0, 3.0))
    assert weighted[((0, 0), (0, 0))] == pytest.approx(q.value((0, 0), (0, 0)), rel=1e-15)


def test_msi_weight_hand_value(rng):
    lattice = PeriodLattice((2, 2))
    lags = ((0, 0), (1, 1))
    q = PcCovarianceTable(lattice, lags, np.ones((2, 2, 2)))
    out = msi_cov_from_pc(q, (0.5, 0.5), (2.0, 2.0))
    # (2m1+tau1)H1 = 3*0.5, (2m2+tau2)H2 = 1*0.5 -> 2**1.5 * 2**0.5 = 4
    assert out[((1, 0), (1, 1))] == pytest.approx(4.0, rel=1e-14)


def test_zero_hurst_weighted_transform_matches_plain(rng):
    q = random_table(rng, (3, 2))
    plain = r_from_q(q)
    weighted = r_h_from_q(q, (0.0, 0.0), (2.0, 3.0))
    assert np.max(np.abs(plain.r - weighted.r)) <= 1e-13


def test_weighted_consistency_identity(rng):
    # reconstructing the weighted covariance through the weighted coefficients
    # agrees with direct weighting
    q = random_table(rng, (2, 2))
    hurst, alpha = (0.3, 0.7), (2.0, 3.0)
    direct = msi_cov_from_pc(q, hurst, alpha)
    back = q_from_r(r_h_from_q(q, hurst, alpha))
    for (m, tau), v in direct.items():
        assert back.value(m, tau) == pytest.approx(v, rel=1e-12, abs=1e-12)


def test_weighted_transform_spot_value_against_brute_force(rng):
    q = random_table(rng, (2, 2))
    hurst, alpha = (0.3, 0.7), (2.0, 3.0)
    rh = r_h_from_q(q, hurst, alpha)
    u1, u2 = 2, 2
    j = (1, 1)
    k = q.lags.index((1, 1))
    acc = 0j
    for n1 in range(u1):
        for n2 in range(u2):
            w = alpha[0] ** ((2 * n1 + 1) * hurst[0]) * alpha[1] ** ((2 * n2 + 1) * hurst[1])
            acc += np.exp(2j * np.pi * (n1 * j[0] / u1 + n2 * j[1] / u2)) * w * q.q[n1, n2, k]
    acc /= u1 * u2
    assert rh.r[1, 1, k] == pytest.approx(acc, rel=1e-12)


def test_density_h_matches_density_on_weighted_table(rng):
    q = random_table(rng, (2, 2))
    rh = r_h_from_q(q, (0.4, 0.2), (2.0, 2.0))
    a = density_h(rh, resolution=8)
    b = density_from_r(rh, resolution=8)
    assert np.array_equal(a.d, b.d)


def test_harmonic_single_atom_constant():
    field = harmonic_synthesize({(0.0, 0.0): 1.0}, (0.0, 0.0), (2.0, 2.0),
                                (range(3), range(3)))
    assert all(v == pytest.approx(1.0) for v in field.values.values())


def test_harmonic_power_growth():
    field = harmonic_synthesize({(0.0, 0.0): 1.0}, (1.0, 1.0), (2.0, 2.0),
                                (range(4), range(4)))
    for (n1, n2), v in field.values.items():
        assert v == pytest.approx(2.0 ** (n1 + n2), rel=1e-13)


def test_harmonic_conjugate_atoms_give_cosine():
    f = (0.9, 1.7)
    atoms = {f: 0.5, (-f[0], -f[1]): 0.5}
    field = harmonic_synthesize(atoms, (0.0, 0.0), (2.0, 2.0), (range(5), range(5)))
    for (n1, n2), v in field.values.items():
        assert v == pytest.approx(np.cos(n1 * f[0] + n2 * f[1]), abs=1e-12)


def test_harmonic_unbalanced_atoms_rejected():
    with pytest.raises(NonRealResidueError):
        harmonic_synthesize({(0.9, 0.4): 1.0}, (0.0, 0.0), (2.0, 2.0),
                            (range(1, 3), range(1, 3)))
