"""Displacement-referred quantum noise spectra and closed-form references.

All closed forms use the per-beam coupling
K_arm = 2 Theta gamma / (Omega^2 (gamma^2 + Omega^2)), so that the ideal
Sagnac coupling is K_sag = 4 K_arm sin^2(beta_arm) = 8 Theta gamma /
(gamma^2 + Omega^2)^2. ``Theta`` always refers to the power of a single
beam in one arm.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.constants import c as C_LIGHT
from scipy.constants import h as PLANCK

from .assembly import InterferometerSpec, apply_detection_loss, assemble, circulating_powers
from .arm_cavity import BeamDrive
from .two_photon import (
    DomainError,
    LaserNoiseSpec,
    SignalNullError,
    homodyne_vector,
    quadratic_form,
    signal_gain,
    sql_displacement,
    vacuum,
)

__all__ = [
    "LaserNoiseSpec",
    "NoiseBudget",
    "psd_general",
    "noise_budget",
    "k_sag",
    "psd_ideal_sagnac",
    "psd_asym_bs_sagnac",
    "psd_michelson_yardstick",
    "optimize_homodyne",
    "fit_slope",
    "default_slope_band",
    "rin_from_laser_level",
    "laser_level_from_rin",
    "reference_curves",
]

# keep golden-section brackets off the poles of the quadratic-form ratio
_EDGE = 1e-9


def _readout_matrices(scat, S_i=None, laser=None):
    S_i = vacuum() if S_i is None else np.asarray(S_i, dtype=float)
    laser = LaserNoiseSpec() if laser is None else laser
    inputs = {"i": S_i, "p": laser.matrix}
    return {name: (T, inputs.get(name)) for name, T in scat.ports.items()}


def psd_general(scat, zeta, S_i=None, laser=None):
    """Per-port displacement PSD (m^2/Hz) normalised to the dARM response.

    ``zeta`` may be a scalar or one angle per frequency. Loss ports are
    vacuum; the bright port carries ``laser`` (vacuum when None).
    """
    H = homodyne_vector(np.broadcast_to(zeta, scat.Omega.shape))
    gain = signal_gain(H, scat.R_minus)
    if np.any(gain == 0):
        raise SignalNullError("homodyne quadrature carries no dARM signal")
    scale = scat.x_sql**2 / gain
    return {name: scale * quadratic_form(H, T, S)
            for name, (T, S) in _readout_matrices(scat, S_i, laser).items()}


@dataclass
class NoiseBudget:
    frequencies: np.ndarray
    total_psd: np.ndarray
    per_port: dict
    asd: np.ndarray
    sql_asd: np.ndarray
    zeta: np.ndarray = field(default=None)

    @property
    def port_names(self):
        return list(self.per_port)


def _optimal_zeta_for(scat, laser):
    mats = _readout_matrices(scat, laser=laser)
    A = sum(T @ (np.eye(2) if S is None else S) @ np.conj(np.swapaxes(T, -1, -2))
            for T, S in mats.values())
    return optimize_homodyne(np.real(A), scat.R_minus)


def noise_budget(spec: InterferometerSpec, frequencies, zeta=None, optimize=False):
    """Evaluate the full budget of ``spec`` on a grid of frequencies in Hz."""
    f = np.asarray(frequencies, dtype=float)
    if np.any(f <= 0):
        raise DomainError("frequency grid must be strictly positive")
    scat = apply_detection_loss(assemble(spec, 2 * np.pi * f), spec.readout.eta_pd)
    if optimize:
        z = _optimal_zeta_for(scat, spec.laser)
    else:
        z = np.broadcast_to(spec.readout.zeta if zeta is None else zeta, f.shape).astype(float)
    per_port = psd_general(scat, z, laser=spec.laser)
    total = sum(per_port.values())
    return NoiseBudget(f, total, per_port, np.sqrt(total), scat.x_sql, z)


def k_sag(theta, gamma, Omega):
    return 8 * theta * gamma / (gamma**2 + np.asarray(Omega, dtype=float) ** 2) ** 2


def _cot(zeta):
    s = np.sin(zeta)
    if np.any(np.abs(s) < 1e-12):
        raise DomainError("sin(zeta) = 0: amplitude quadrature carries no signal")
    return np.cos(zeta) / s


def psd_ideal_sagnac(theta, gamma, Omega, zeta, M_eff):
    """Lossless symmetric Sagnac: (x_SQL^2/2) [(K - cot zeta)^2 + 1] / K."""
    K = k_sag(theta, gamma, Omega)
    if np.any(K <= 0):
        raise DomainError("coupling must be positive")
    x2 = sql_displacement(M_eff, Omega) ** 2
    return x2 / 2 * ((K - _cot(zeta)) ** 2 + 1) / K


def asym_couplings(theta, gamma, Omega):
    """Symmetric and asymmetric coupling components (K_sym, K_asym)."""
    Omega = np.asarray(Omega, dtype=float)
    K_sym = k_sag(theta, gamma, Omega)
    return K_sym, K_sym * gamma**2 / Omega**2


def bright_port_coupling(K_sym, K_asym, eta, swapped=False):
    """Shear of the bright-port transfer matrix for an unbalanced splitter.

    ``swapped=True`` returns the pairing (1+3eta^2) K_sym + (3+eta^2) K_asym,
    kept for comparison only; the default is the pairing the I/O relations
    give.
    """
    if swapped:
        return 0.5 * ((1 + 3 * eta**2) * K_sym + (3 + eta**2) * K_asym)
    return 0.5 * ((3 + eta**2) * K_sym + (1 + 3 * eta**2) * K_asym)


def psd_asym_bs_sagnac(theta, gamma, eta, Omega, zeta, M_eff, swapped=False):
    """Lossless Sagnac with splitter offset eta, referred to dARM displacement."""
    K_sym, K_asym = asym_couplings(theta, gamma, Omega)
    if np.any(K_sym <= 0):
        raise DomainError("coupling must be positive")
    cot = _cot(zeta)
    x2 = sql_displacement(M_eff, Omega) ** 2
    w_dark = ((1 - eta**2) / (1 + eta**2)) ** 2
    w_bright = (2 * eta / (1 + eta**2)) ** 2
    dark = 1 + (K_sym + eta**2 * K_asym - cot) ** 2
    bright = 1 + (bright_port_coupling(K_sym, K_asym, eta, swapped) - cot) ** 2
    return x2 / (2 * K_sym) * (w_dark * dark + w_bright * bright)


def psd_michelson_yardstick(theta_arm, gamma, Omega, zeta, M_eff):
    """Tuned Michelson with arm cavities, K = 2 Theta gamma / (Omega^2 (gamma^2 + Omega^2))."""
    Omega = np.asarray(Omega, dtype=float)
    K = 2 * theta_arm * gamma / (Omega**2 * (gamma**2 + Omega**2))
    x2 = sql_displacement(M_eff, Omega) ** 2
    return x2 / 2 * ((K - _cot(zeta)) ** 2 + 1) / K


def _ratio(zeta, A, B):
    H = homodyne_vector(zeta)
    num = np.einsum("...i,...ij,...j->...", H, A, H)
    den = np.einsum("...i,...ij,...j->...", H, B, H)
    return num / den


def optimize_homodyne(A, R, tol=1e-6):
    """Per-frequency readout angle in [0, pi) minimising H^T A H / |H^T R|^2.

    ``A`` is the real part of the summed output spectral matrix, ``R`` the
    dARM response. The ratio has period pi with one minimum and one maximum
    (a pole when the response is rank one) per period, so the
    golden-section search runs over the window that starts at the maximum.
    """
    A = np.asarray(A, dtype=float)
    B = np.real(R[..., :, None] * np.conj(R[..., None, :]))
    # maximum of A/B sits on the least-sensitive direction of the pencil (B, A)
    Lc = np.linalg.cholesky(A)
    Li = np.linalg.inv(Lc)
    _, u = np.linalg.eigh(Li @ B @ np.swapaxes(Li, -1, -2))
    h = np.einsum("...ji,...j->...i", Li, u[..., :, 0])
    pole = np.arctan2(h[..., 1], h[..., 0])
    lo = pole + _EDGE
    hi = pole + np.pi - _EDGE
    inv_phi = (np.sqrt(5) - 1) / 2
    c = hi - inv_phi * (hi - lo)
    d = lo + inv_phi * (hi - lo)
    fc, fd = _ratio(c, A, B), _ratio(d, A, B)
    while np.max(hi - lo) > tol:
        left = fc < fd
        lo, hi = np.where(left, lo, c), np.where(left, d, hi)
        c_new = np.where(left, hi - inv_phi * (hi - lo), d)
        d_new = np.where(left, c, lo + inv_phi * (hi - lo))
        fc, fd = (np.where(left, _ratio(c_new, A, B), fd),
                  np.where(left, fc, _ratio(d_new, A, B)))
        c, d = c_new, d_new
    return np.mod((lo + hi) / 2, np.pi)


def default_slope_band(frequencies):
    """Lowest half-decade of the grid, widened so a coarse grid keeps two points."""
    f = np.sort(np.asarray(frequencies, dtype=float))
    return float(f[0]), float(max(f[0] * 10**0.5, f[min(1, f.size - 1)]))


def fit_slope(frequencies, values, band=None):
    """Least-squares slope of log10(values) against log10(frequency).

    ``band`` is (f_lo, f_hi); by default the lowest half-decade of the grid.
    """
    f = np.asarray(frequencies, dtype=float)
    y = np.asarray(values, dtype=float)
    if band is None:
        band = default_slope_band(f)
    sel = (f >= band[0]) & (f <= band[1])
    if sel.sum() < 2:
        raise DomainError("slope band holds fewer than two grid points")
    return np.polyfit(np.log10(f[sel]), np.log10(y[sel]), 1)[0]


def laser_level_from_rin(rin_asd, P, wavelength):
    """Convert relative intensity noise ASD (1/rtHz) into a vacuum-normalised level."""
    h_nu = PLANCK * C_LIGHT / wavelength
    return rin_asd**2 * P / (2 * h_nu)


def rin_from_laser_level(level, P, wavelength):
    h_nu = PLANCK * C_LIGHT / wavelength
    return np.sqrt(2 * h_nu * level / P)


def reference_curves(spec: InterferometerSpec, frequencies, zeta=None):
    """SQL, ideal Sagnac and equivalent ideal Michelson ASDs (m/rtHz).

    The ideal Sagnac uses the circulating power of the lossless balanced
    counterpart of ``spec``; the Michelson arms hold the same total power
    as a Sagnac arm (both beams).
    """
    f = np.asarray(frequencies, dtype=float)
    Omega = 2 * np.pi * f
    zeta = spec.readout.zeta if zeta is None else zeta
    ideal = spec.ideal()
    a = ideal.north
    P_beam = circulating_powers(ideal)["RN"]
    theta = BeamDrive(P_beam, ideal.omega_p).theta(a)
    M = ideal.M_eff
    return {
        "sql": sql_displacement(M, Omega),
        "sagnac": np.sqrt(psd_ideal_sagnac(theta, a.gamma, Omega, zeta, M)),
        "michelson": np.sqrt(psd_michelson_yardstick(2 * theta, a.gamma, Omega, zeta, M)),
    }
