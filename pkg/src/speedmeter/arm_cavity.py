"""Lossy, possibly detuned ring arm cavity with two counter-propagating beams.

Each arm carries beams R and L. Beam outputs follow

    b^I = T_arm^I a^I + N_arm^I n^I + T_cross^I a^Ibar + N_cross^I n^Ibar
          + R_arm^I x_J / x_SQL(mu_arm)

where the arm signal is referred to the SQL of the arm's own effective
mass; the interferometer assembly rescales it to the differential mode.

Normalisation: the coupling factor is K = 2 Theta gamma_itm /
(Omega^2 (gamma^2 + Omega^2)), which is what the general radiation-pressure
matrices reduce to at zero detuning.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.constants import c as C_LIGHT

from .two_photon import I2, DomainError, SingularityError, matvec

# e_s e_c^T: force is read from the amplitude quadrature, response lands in phase
_P = np.array([[0.0, 0.0], [1.0, 0.0]], dtype=complex)
_E_S = np.array([0.0, 1.0], dtype=complex)

BEAMS = ("R", "L")


def _freq(Omega):
    """Real frequency array; extended precision is kept when supplied."""
    Omega = np.asarray(Omega)
    return Omega if Omega.dtype == np.longdouble else Omega.astype(float)


def _cplx(Omega):
    return np.result_type(Omega, np.complex128)


def other(beam):
    return "L" if beam == "R" else "R"


@dataclass(frozen=True)
class ArmCavitySpec:
    """One ring arm cavity.

    ``L`` is half the ring round-trip length, so gamma = c T / (4 L).
    ``T_loss`` lumps the round-trip loss into an effective ETM transmission.
    ``M_etm`` is the mass of each of the two ETMs.
    """

    label: str
    L: float
    T_itm: float
    T_loss: float = 0.0
    delta: float = 0.0
    M_itm: float = 1.0
    M_etm: float = 1.0

    def __post_init__(self):
        if self.label not in ("N", "E"):
            raise DomainError(f"arm label must be N or E, got {self.label!r}")
        if not 0.0 < self.T_itm < 1.0:
            raise DomainError(f"T_itm must lie in (0, 1), got {self.T_itm}")
        if not 0.0 <= self.T_loss < 1.0:
            raise DomainError(f"T_loss must lie in [0, 1), got {self.T_loss}")
        if self.L <= 0:
            raise DomainError("arm length must be positive")
        if self.M_itm <= 0 or self.M_etm <= 0:
            raise DomainError("mirror masses must be positive")

    @property
    def gamma_itm(self):
        return C_LIGHT * self.T_itm / (4 * self.L)

    @property
    def gamma_loss(self):
        return C_LIGHT * self.T_loss / (4 * self.L)

    @property
    def gamma(self):
        return self.gamma_itm + self.gamma_loss

    @property
    def mu(self):
        """Effective mass of the arm length coordinate."""
        return 2 * self.M_itm * self.M_etm / (self.M_itm + 2 * self.M_etm)

    @property
    def epsilon(self):
        """Fractional photon loss per round trip, T_loss / (T_itm + T_loss)."""
        return self.T_loss / (self.T_itm + self.T_loss)


@dataclass(frozen=True)
class BeamDrive:
    P_c: float
    omega_p: float

    def theta(self, arm: ArmCavitySpec):
        """Normalised circulating power 4 omega_p P_c / (mu c L), s^-3."""
        if self.P_c < 0:
            raise DomainError("circulating power must be non-negative")
        return 4 * self.omega_p * self.P_c / (arm.mu * C_LIGHT * arm.L)


def _denominator(spec, Omega):
    g = spec.gamma - 1j * _freq(Omega)
    return g**2 + spec.delta**2


def resolvent_matrix(spec: ArmCavitySpec, Omega):
    """Intracavity resolvent 1/D [[g - i Omega, -delta], [delta, g - i Omega]]."""
    Omega = _freq(Omega)
    D = _denominator(spec, Omega)
    if np.any(np.abs(D) < np.finfo(float).tiny):
        raise SingularityError("arm resolvent denominator vanished")
    g = spec.gamma - 1j * Omega
    out = np.empty(Omega.shape + (2, 2), dtype=_cplx(Omega))
    out[..., 0, 0] = g / D
    out[..., 1, 1] = g / D
    out[..., 0, 1] = -spec.delta / D
    out[..., 1, 0] = spec.delta / D
    return out


def _require_nonzero(Omega):
    Omega = _freq(Omega)
    if np.any(Omega == 0):
        raise DomainError("optomechanical coupling diverges at Omega = 0")
    return Omega


def coupling_factor(spec: ArmCavitySpec, theta, Omega):
    """Resonant optomechanical coupling of one beam, dimensionless."""
    Omega = _require_nonzero(Omega)
    return 2 * theta * spec.gamma_itm / (Omega**2 * (spec.gamma**2 + Omega**2))


def arm_phase(spec: ArmCavitySpec, Omega):
    return np.arctan(_freq(Omega) / spec.gamma)


def optical_rigidity(spec: ArmCavitySpec, theta, Omega):
    """Detuning-induced spring constant mu Theta delta / D(Omega)."""
    D = _denominator(spec, Omega)
    if np.any(np.abs(D) < np.finfo(float).tiny):
        raise SingularityError("arm resolvent denominator vanished")
    return spec.mu * theta * spec.delta / D


def free_susceptibility(spec: ArmCavitySpec, Omega):
    Omega = _require_nonzero(Omega)
    return -1.0 / (spec.mu * Omega**2)


def modified_susceptibility(spec: ArmCavitySpec, rigidity_sum, Omega):
    """chi / (1 + chi K_total) with the free-mass chi = -1/(mu Omega^2)."""
    chi = free_susceptibility(spec, Omega)
    denom = 1 + chi * rigidity_sum
    if np.any(np.abs(denom) < 1e-14):
        raise SingularityError("optical-spring resonance: modified susceptibility diverges")
    return chi / denom


@dataclass(frozen=True)
class ArmScattering:
    """Per-beam matrices of one arm, keyed by beam name 'R' / 'L'.

    ``T_cross[I]`` multiplies a^Ibar in b^I (likewise ``N_cross``). With the
    default ``cross="source"`` these equal the radiation-pressure matrices of
    the source beam Ibar; ``cross="geometric"`` scales them with the geometric
    mean of the two beam powers instead.
    """

    spec: ArmCavitySpec
    Omega: np.ndarray
    T_arm: dict
    N_arm: dict
    T_rp: dict
    N_rp: dict
    T_cross: dict
    N_cross: dict
    R_arm: dict
    beta: np.ndarray
    K: dict = field(default_factory=dict)


def _cross_theta(thetas, beam, cross):
    if cross == "source":
        return thetas[other(beam)]
    if cross == "geometric":
        return np.sqrt(thetas[beam] * thetas[other(beam)])
    raise DomainError(f"unknown cross-coupling convention {cross!r}")


def arm_scattering(spec: ArmCavitySpec, drive_R: BeamDrive, drive_L: BeamDrive, Omega,
                   cross="source"):
    """General (detuned) arm I/O matrices for both beams."""
    Omega = _require_nonzero(Omega)
    Lm = resolvent_matrix(spec, Omega)
    thetas = {"R": drive_R.theta(spec), "L": drive_L.theta(spec)}
    rig = optical_rigidity(spec, thetas["R"], Omega) + optical_rigidity(spec, thetas["L"], Omega)
    mu_chi = spec.mu * modified_susceptibility(spec, rig, Omega)
    LPL = Lm @ _P @ Lm
    gi, gl = spec.gamma_itm, spec.gamma_loss
    root = np.sqrt(gi * gl)

    def rp(theta, g):
        return (2 * mu_chi * theta * g)[..., None, None] * LPL

    T_arm, N_arm, T_rp, N_rp, T_cross, N_cross, R_arm, K = ({} for _ in range(8))
    for beam in BEAMS:
        th = thetas[beam]
        T_rp[beam] = rp(th, gi)
        N_rp[beam] = rp(th, root)
        T_arm[beam] = 2 * gi * Lm - I2 + T_rp[beam]
        N_arm[beam] = 2 * root * Lm + N_rp[beam]
        xth = _cross_theta(thetas, beam, cross)
        T_cross[beam] = rp(xth, gi)
        N_cross[beam] = rp(xth, root)
        R_arm[beam] = np.sqrt(4 * th * gi / Omega**2)[..., None] * matvec(Lm, _E_S)
        K[beam] = coupling_factor(spec, th, Omega)
    return ArmScattering(spec, Omega, T_arm, N_arm, T_rp, N_rp, T_cross, N_cross, R_arm,
                         arm_phase(spec, Omega), K)


def _lower_left(K):
    out = np.zeros(np.shape(K) + (2, 2), dtype=_cplx(K))
    out[..., 1, 0] = -K
    return out


def arm_scattering_resonant(spec: ArmCavitySpec, drive_R: BeamDrive, drive_L: BeamDrive, Omega,
                            cross="source"):
    """Closed-form matrices for a cavity held on resonance (delta = 0)."""
    if spec.delta != 0:
        raise DomainError("resonant closed forms require zero detuning")
    Omega = _require_nonzero(Omega)
    thetas = {"R": drive_R.theta(spec), "L": drive_L.theta(spec)}
    gi, gl, g = spec.gamma_itm, spec.gamma_loss, spec.gamma
    beta = arm_phase(spec, Omega)
    e2 = np.exp(2j * beta)[..., None, None]
    tr = (gi - gl + 1j * Omega) / (g + 1j * Omega)
    nr = 2 * gi / (g + 1j * Omega)
    ratio = np.sqrt(gl / gi)
    diag = np.zeros(Omega.shape + (2, 2), dtype=_cplx(Omega))

    T_arm, N_arm, T_rp, N_rp, T_cross, N_cross, R_arm, K = ({} for _ in range(8))
    for beam in BEAMS:
        K[beam] = coupling_factor(spec, thetas[beam], Omega)
        T_rp[beam] = e2 * _lower_left(K[beam])
        N_rp[beam] = ratio * T_rp[beam]
        T = diag.copy()
        T[..., 0, 0] = T[..., 1, 1] = tr
        T[..., 1, 0] = -K[beam]
        T_arm[beam] = e2 * T
        Nm = diag.copy()
        Nm[..., 0, 0] = Nm[..., 1, 1] = nr
        Nm[..., 1, 0] = -K[beam]
        N_arm[beam] = ratio * e2 * Nm
        Kx = coupling_factor(spec, _cross_theta(thetas, beam, cross), Omega)
        T_cross[beam] = e2 * _lower_left(Kx)
        N_cross[beam] = ratio * T_cross[beam]
        R_arm[beam] = (np.sqrt(2 * K[beam]) * np.exp(1j * beta))[..., None] * _E_S
    return ArmScattering(spec, Omega, T_arm, N_arm, T_rp, N_rp, T_cross, N_cross, R_arm, beta, K)


# Linear forms: dict mapping an input name to its coefficient. Field inputs
# carry (..., 2, 2) matrices, signal inputs 'x_N'/'x_E' carry (..., 2) vectors.

def _apply(M, form):
    out = {}
    for name, coef in form.items():
        out[name] = matvec(M, coef) if coef.ndim == M.ndim - 1 else M @ coef
    return out


def _add(*forms):
    out = {}
    for form in forms:
        for name, coef in form.items():
            out[name] = out[name] + coef if name in out else coef
    return out


def _inv2(A):
    """Closed-form inverse of a stack of 2x2 matrices (any complex dtype)."""
    det = A[..., 0, 0] * A[..., 1, 1] - A[..., 0, 1] * A[..., 1, 0]
    if np.any(det == 0):
        raise SingularityError("arm chain loop matrix is singular")
    out = np.empty_like(A)
    out[..., 0, 0] = A[..., 1, 1]
    out[..., 1, 1] = A[..., 0, 0]
    out[..., 0, 1] = -A[..., 0, 1]
    out[..., 1, 0] = -A[..., 1, 0]
    return out / det[..., None, None]


def chain_arms(north: ArmScattering, east: ArmScattering):
    """Resolve the two-arm chain a^LN = b^LE, a^RE = b^RN.

    Returns ``(b_LN, b_RE)`` as linear forms over the inputs
    a_RN, a_LE, n_LN, n_RN, n_LE, n_RE, x_N, x_E.
    """
    X_N = north.T_cross["R"]  # LN -> RN
    X_E = east.T_cross["L"]   # RE -> LE
    f_RN = {"a_RN": north.T_arm["R"], "n_RN": north.N_arm["R"],
            "n_LN": north.N_cross["R"], "x_N": north.R_arm["R"]}
    f_LN = {"a_RN": north.T_cross["L"], "n_LN": north.N_arm["L"],
            "n_RN": north.N_cross["L"], "x_N": north.R_arm["L"]}
    f_LE = {"a_LE": east.T_arm["L"], "n_LE": east.N_arm["L"],
            "n_RE": east.N_cross["L"], "x_E": east.R_arm["L"]}
    f_RE = {"a_LE": east.T_cross["R"], "n_RE": east.N_arm["R"],
            "n_LE": east.N_cross["R"], "x_E": east.R_arm["R"]}
    D1 = _inv2(I2 - X_E @ X_N)
    D2 = _inv2(I2 - X_N @ X_E)
    a_LN = _apply(D1, _add(_apply(X_E, f_RN), f_LE))
    a_RE = _apply(D2, _add(f_RN, _apply(X_N, f_LE)))
    b_LN = _add(_apply(north.T_arm["L"], a_LN), f_LN)
    b_RE = _add(_apply(east.T_arm["R"], a_RE), f_RE)
    return b_LN, b_RE
