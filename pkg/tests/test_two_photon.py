import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

import oracles
from speedmeter.two_photon import (
    I2,
    DomainError,
    HomodyneReadout,
    LaserNoiseSpec,
    SignalNullError,
    homodyne_vector,
    noise_psd,
    output_spectral_matrix,
    quadratic_form,
    signal_gain,
    sql_displacement,
    symplectic_residual,
)

finite = st.floats(-1e3, 1e3, allow_nan=False)
complex_entries = st.builds(complex, finite, finite)
matrices = st.lists(complex_entries, min_size=4, max_size=4).map(
    lambda v: np.array(v, dtype=complex).reshape(2, 2))
angles = st.floats(-10, 10, allow_nan=False)


@pytest.mark.parametrize("zeta, expected", [
    (math.pi / 2, (0.0, 1.0)),
    (0.0, (1.0, 0.0)),
    (math.pi / 4, (math.sqrt(2) / 2, math.sqrt(2) / 2)),
])
def test_homodyne_vector_values(zeta, expected):
    np.testing.assert_allclose(homodyne_vector(zeta), expected, atol=1e-16)


@given(angles)
def test_homodyne_vector_unit_norm(z):
    assert np.linalg.norm(homodyne_vector(z)) == pytest.approx(1.0, abs=1e-15)


def test_homodyne_vector_broadcasts():
    assert homodyne_vector(np.zeros((3, 4))).shape == (3, 4, 2)


def test_sql_unit_case():
    assert sql_displacement(2 * oracles.HBAR, 1.0) == pytest.approx(1.0, rel=1e-12)


def test_sql_glasgow_value():
    mu = oracles.mu_arm(0.85e-3, 0.1)
    assert mu == pytest.approx(8.4646e-4, rel=1e-4)
    Omega = 2 * math.pi * 1000
    got = sql_displacement(mu / 2, Omega)
    assert got == pytest.approx(oracles.x_sql(mu / 2, Omega), rel=1e-12)
    assert got == pytest.approx(1.12e-19, rel=1e-2)


@given(st.floats(1e-6, 1e3), st.floats(1e-2, 1e5))
def test_sql_mass_scaling(M, Omega):
    assert sql_displacement(2 * M, Omega) == pytest.approx(sql_displacement(M, Omega) / math.sqrt(2))


def test_sql_rejects_dc_and_bad_mass():
    with pytest.raises(DomainError):
        sql_displacement(1.0, 0.0)
    with pytest.raises(DomainError):
        sql_displacement(0.0, 1.0)


def test_readout_validation():
    HomodyneReadout(0.3, 1.0)
    for bad in (0.0, -0.1, 1.01):
        with pytest.raises(DomainError):
            HomodyneReadout(0.3, bad)


def test_laser_spec_matrix_and_floor():
    np.testing.assert_array_equal(LaserNoiseSpec(3, 10).matrix, np.diag([3.0, 10.0]))
    with pytest.raises(DomainError):
        LaserNoiseSpec(0.5, 1)


@given(matrices, angles)
def test_quadratic_form_non_negative(M, z):
    assert quadratic_form(homodyne_vector(z), M) >= -1e-9 * (1 + np.abs(M).max() ** 2)


@given(matrices, matrices)
def test_output_spectral_matrix_hermitian_psd(A, B):
    S = output_spectral_matrix([(A, np.diag([2.0, 5.0]))], [B])
    np.testing.assert_allclose(S, S.conj().T, atol=1e-9 * (1 + np.abs(S).max()))
    assert np.linalg.eigvalsh(S).min() >= -1e-9 * (1 + np.abs(S).max())


def test_noise_psd_sum_rule():
    H = homodyne_vector(math.pi / 2)
    R = np.array([0.0, 2.0])
    T = np.array([[1, 0], [-3, 1]], dtype=complex)
    N = 0.5 * I2
    got = noise_psd(H, [(T, np.eye(2))], [N], R, 2.0)
    # phase quadrature sees 9 + 1 from T and 0.25 from N, gain |2|^2, scale 2^2
    assert got == pytest.approx(4 * (10 + 0.25) / 4)


def test_noise_psd_null_signal():
    with pytest.raises(SignalNullError):
        noise_psd(homodyne_vector(0.0), [], [I2], np.array([0.0, 1.0]), 1.0)


def test_signal_gain():
    assert signal_gain(homodyne_vector(0.0), np.array([3 + 4j, 1.0])) == pytest.approx(25.0)


@given(st.floats(-1e4, 1e4), st.floats(0, 2 * math.pi))
def test_symplectic_residual_of_ponderomotive_map(K, phase):
    T = np.exp(1j * phase) * np.array([[1, 0], [-K, 1]])
    assert symplectic_residual(T) < 1e-12 * (1 + abs(K))
