"""Quadrature-domain linear algebra for the two-photon formalism.

Sideband amplitudes at offset frequency Omega are stored as complex numpy
arrays: a quadrature vector has shape ``(..., 2)`` ordered (cosine, sine),
a transfer matrix has shape ``(..., 2, 2)``. Leading axes broadcast, which
is how a whole frequency grid is evaluated in one call.

Spectral densities are single-sided with the vacuum state equal to the
identity matrix.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.constants import hbar

I2 = np.eye(2, dtype=complex)
# symplectic form used for the commutator-preservation check
J2 = np.array([[0.0, 1.0], [-1.0, 0.0]])


class DomainError(ValueError):
    """Input outside the domain where a formula is defined."""


class SignalNullError(DomainError):
    """Readout quadrature is blind to the signal."""


class SingularityError(DomainError):
    """A resolvent or susceptibility denominator vanished."""


@dataclass(frozen=True)
class HomodyneReadout:
    zeta: float = np.pi / 2
    eta_pd: float = 1.0

    def __post_init__(self):
        if not 0.0 < self.eta_pd <= 1.0:
            raise DomainError(f"eta_pd must lie in (0, 1], got {self.eta_pd}")


def homodyne_vector(zeta):
    """(cos zeta, sin zeta); broadcasts over an array of angles."""
    zeta = np.asarray(zeta, dtype=float)
    return np.stack([np.cos(zeta), np.sin(zeta)], axis=-1)


def sql_displacement(M_eff, Omega):
    """Free-mass SQL amplitude spectral density sqrt(2 hbar / (M Omega^2)) in m/rtHz."""
    Omega = np.asarray(Omega, dtype=float)
    if np.any(Omega == 0):
        raise DomainError("x_SQL diverges at Omega = 0")
    if np.any(np.asarray(M_eff) <= 0):
        raise DomainError("effective mass must be positive")
    return np.sqrt(2 * hbar / (M_eff * Omega**2))


@dataclass(frozen=True)
class LaserNoiseSpec:
    """Excess laser noise on the bright-port input, in units of vacuum."""

    L_c: float = 1.0
    L_s: float = 1.0

    def __post_init__(self):
        if self.L_c < 1 or self.L_s < 1:
            raise DomainError("laser noise levels must sit at or above the vacuum floor (>= 1)")

    @property
    def matrix(self):
        return np.diag([float(self.L_c), float(self.L_s)])


def vacuum():
    return np.eye(2)


def matvec(M, v):
    return np.einsum("...ij,...j->...i", M, v)


def dagger(M):
    return np.conj(np.swapaxes(M, -1, -2))


def quadratic_form(H, M, S=None):
    """H^T M S M^dag H for real readout vector H; S defaults to the identity."""
    MS = M if S is None else M @ S
    out = matvec(MS @ dagger(M), H.astype(complex))
    return np.real(np.einsum("...i,...i->...", H, out))


def signal_gain(H, R):
    """|H^T R|^2."""
    return np.abs(np.einsum("...i,...i->...", H, R)) ** 2


def noise_psd(H, coherent_ports, loss_ports, R_signal, x_sql):
    """Displacement-referred noise PSD for independent inputs.

    ``coherent_ports`` is a list of ``(T, S)`` pairs, ``loss_ports`` a list of
    transfer matrices whose inputs are in vacuum. Returns m^2/Hz.
    """
    gain = signal_gain(H, R_signal)
    if np.any(gain == 0):
        raise SignalNullError("homodyne quadrature carries no signal")
    total = 0.0
    for T, S in coherent_ports:
        total = total + quadratic_form(H, T, S)
    for N in loss_ports:
        total = total + quadratic_form(H, N)
    return np.asarray(x_sql) ** 2 * total / gain


def output_spectral_matrix(coherent_ports, loss_ports):
    """Sum_j T S T^dag + Sum_k N N^dag; Hermitian positive semidefinite."""
    out = 0
    for T, S in coherent_ports:
        out = out + T @ S @ dagger(T)
    for N in loss_ports:
        out = out + N @ dagger(N)
    return out


def symplectic_residual(T):
    """max |T J T^dag - J| entrywise; zero for a lossless single-input map."""
    return np.max(np.abs(T @ J2 @ dagger(T) - J2))
