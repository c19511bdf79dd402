"""Full Sagnac interferometer: two ring arms joined by the main beamsplitter.

The dark-port output is

    o = T_i i + T_p p + sum N_IJ n_IJ + sum M_k m_k
        + R_minus x_-/x_SQL + R_plus x_+/x_SQL

with x_+- = x_N +- x_E and x_SQL evaluated for M_eff = mu_arm / 2.
"""
from __future__ import annotations

import dataclasses
from dataclasses import dataclass, field

import numpy as np
from scipy.constants import c as C_LIGHT

from . import arm_cavity as arm
from .arm_cavity import ArmCavitySpec, BeamDrive
from .beamsplitter import BeamSplitterSpec, bs_scatter, carrier_split
from .two_photon import I2, DomainError, HomodyneReadout, LaserNoiseSpec, sql_displacement

PORTS = ("i", "p", "n_LN", "n_RN", "n_LE", "n_RE", "m_i", "m_p", "m_o")


@dataclass(frozen=True)
class InterferometerSpec:
    """Complete instrument description.

    Modelling switches:

    * ``arm_model`` -- "auto" uses the resonant closed forms when both arms
      have zero detuning and the general resolvent path otherwise.
    * ``cross`` -- "source" scales the cross-beam radiation-pressure coupling
      with the power of the beam that creates the force; "geometric" uses the
      geometric mean of both beam powers.
    * ``carrier_reflection`` -- fraction of carrier power passed on to the
      second arm: "linear" uses 1 - epsilon_arm, "exact" uses the resonant
      reflectivity of the lossy ring cavity.
    """

    P_in: float
    wavelength: float
    north: ArmCavitySpec
    east: ArmCavitySpec
    bs: BeamSplitterSpec = field(default_factory=BeamSplitterSpec)
    readout: HomodyneReadout = field(default_factory=HomodyneReadout)
    laser: LaserNoiseSpec = field(default_factory=LaserNoiseSpec)
    arm_model: str = "auto"
    cross: str = "source"
    carrier_reflection: str = "linear"

    def __post_init__(self):
        if self.P_in < 0:
            raise DomainError("input power must be non-negative")
        if self.wavelength <= 0:
            raise DomainError("wavelength must be positive")
        if self.north.label != "N" or self.east.label != "E":
            raise DomainError("arms must be labelled N and E")
        if self.arm_model not in ("auto", "general", "resonant"):
            raise DomainError(f"unknown arm_model {self.arm_model!r}")
        if self.cross not in ("source", "geometric"):
            raise DomainError(f"unknown cross-coupling convention {self.cross!r}")
        if self.carrier_reflection not in ("linear", "exact"):
            raise DomainError(f"unknown carrier_reflection {self.carrier_reflection!r}")

    @property
    def omega_p(self):
        return 2 * np.pi * C_LIGHT / self.wavelength

    @property
    def M_eff(self):
        """Mass of the differential mode: mean of mu_arm / 2 over the arms."""
        return (self.north.mu + self.east.mu) / 4

    def replace(self, **changes):
        return dataclasses.replace(self, **changes)

    def with_arms(self, **changes):
        """Apply the same field changes to both arms."""
        return self.replace(north=dataclasses.replace(self.north, **changes),
                            east=dataclasses.replace(self.east, **changes))

    def ideal(self):
        """Lossless, balanced, resonant counterpart with a perfect photodiode."""
        return self.replace(
            north=dataclasses.replace(self.north, T_loss=0.0, delta=0.0),
            east=dataclasses.replace(self.east, T_loss=0.0, delta=0.0,
                                     T_itm=self.north.T_itm, L=self.north.L,
                                     M_itm=self.north.M_itm, M_etm=self.north.M_etm),
            bs=BeamSplitterSpec(),
            readout=HomodyneReadout(self.readout.zeta, 1.0),
            laser=LaserNoiseSpec(),
        )


@dataclass(frozen=True)
class DerivedArmParams:
    gamma_arm: float
    delta_gamma: float
    epsilon_arm: float
    delta_epsilon: float


def derived_params(spec: InterferometerSpec) -> DerivedArmParams:
    n, e = spec.north, spec.east
    T_itm = (n.T_itm + e.T_itm) / 2
    T_loss = (n.T_loss + e.T_loss) / 2
    return DerivedArmParams(
        gamma_arm=(n.gamma + e.gamma) / 2,
        delta_gamma=n.gamma - e.gamma,
        epsilon_arm=T_loss / (T_itm + T_loss),
        delta_epsilon=(n.T_loss - e.T_loss) / (T_itm + T_loss),
    )


def power_buildup(a: ArmCavitySpec):
    """Circulating-to-incident power ratio of a ring cavity, Lorentzian in detuning."""
    g = a.gamma
    return 4 * a.T_itm / (a.T_itm + a.T_loss) ** 2 * g**2 / (g**2 + a.delta**2)


def carrier_pass_fraction(a: ArmCavitySpec, mode="linear"):
    """Fraction of the incident carrier power that leaves towards the other arm."""
    if mode == "linear":
        return 1 - a.epsilon
    gi, gl, d = a.gamma_itm, a.gamma_loss, a.delta
    return ((gi - gl) ** 2 + d**2) / ((gi + gl) ** 2 + d**2)


def circulating_powers(spec: InterferometerSpec):
    """Circulating power of each beam in each arm, keyed RN, LE, RE, LN (W)."""
    P_R, P_L = carrier_split(spec.bs, spec.P_in)
    n, e = spec.north, spec.east
    mode = spec.carrier_reflection
    return {
        "RN": power_buildup(n) * P_R,
        "LE": power_buildup(e) * P_L,
        "RE": power_buildup(e) * carrier_pass_fraction(n, mode) * P_R,
        "LN": power_buildup(n) * carrier_pass_fraction(e, mode) * P_L,
    }


def beam_drives(spec: InterferometerSpec):
    return {k: BeamDrive(P, spec.omega_p) for k, P in circulating_powers(spec).items()}


def kappa_variants(spec: InterferometerSpec, Omega):
    """Resonant coupling factor of every beam in every arm."""
    drives = beam_drives(spec)
    arms = {"N": spec.north, "E": spec.east}
    return {k: arm.coupling_factor(arms[k[1]], d.theta(arms[k[1]]), Omega)
            for k, d in drives.items()}


@dataclass(frozen=True)
class ScatteringAtFrequency:
    """Dark-port transfer matrices and signal responses over an Omega grid.

    ``ports`` maps each independent input (see ``PORTS``, plus "detection"
    once a photodiode loss is applied) to its (..., 2, 2) transfer matrix.
    """

    Omega: np.ndarray
    ports: dict
    R_minus: np.ndarray
    R_plus: np.ndarray
    M_eff: float

    @property
    def T_i(self):
        return self.ports["i"]

    @property
    def T_p(self):
        return self.ports["p"]

    @property
    def N_LN(self):
        return self.ports["n_LN"]

    @property
    def N_RN(self):
        return self.ports["n_RN"]

    @property
    def N_LE(self):
        return self.ports["n_LE"]

    @property
    def N_RE(self):
        return self.ports["n_RE"]

    @property
    def M_i(self):
        return self.ports["m_i"]

    @property
    def M_p(self):
        return self.ports["m_p"]

    @property
    def M_o(self):
        return self.ports["m_o"]

    @property
    def x_sql(self):
        return sql_displacement(self.M_eff, self.Omega)


def _arm_set(spec: InterferometerSpec, a: ArmCavitySpec, drive_R, drive_L, Omega):
    resonant = spec.arm_model == "resonant" or (
        spec.arm_model == "auto" and spec.north.delta == 0 and spec.east.delta == 0)
    build = arm.arm_scattering_resonant if resonant else arm.arm_scattering
    return build(a, drive_R, drive_L, Omega, cross=spec.cross)


def assemble(spec: InterferometerSpec, Omega) -> ScatteringAtFrequency:
    Omega = np.asarray(Omega, dtype=float)
    if np.any(Omega <= 0):
        raise DomainError("frequency grid must be strictly positive")
    d = beam_drives(spec)
    # the speed-meter cancellation subtracts arm-level couplings that exceed
    # the result by (gamma/Omega)^2, so the chain runs in extended precision
    wide = Omega.astype(np.longdouble)
    north = _arm_set(spec, spec.north, d["RN"], d["LN"], wide)
    east = _arm_set(spec, spec.east, d["RE"], d["LE"], wide)
    b_LN, b_RE = arm.chain_arms(north, east)
    bs = bs_scatter(spec.bs)

    o = {}
    for beam, weight in (("b_RE", bs["o"]["b_RE"]), ("b_LN", bs["o"]["b_LN"])):
        form = b_RE if beam == "b_RE" else b_LN
        for name, coef in form.items():
            if name in ("a_RN", "a_LE"):
                for src, s in bs[name].items():
                    o[src] = o.get(src, 0) + weight * s * coef
            else:
                o[name] = o.get(name, 0) + weight * coef
    o = {k: np.asarray(v, dtype=complex) for k, v in o.items()}
    ports = {name: o[name] for name in PORTS if name != "m_o"}
    ports["m_o"] = np.broadcast_to(bs["o"]["m_o"] * I2, Omega.shape + (2, 2)).copy()

    M = spec.M_eff
    c_N = o["x_N"] * np.sqrt(spec.north.mu / M)
    c_E = o["x_E"] * np.sqrt(spec.east.mu / M)
    return ScatteringAtFrequency(Omega, ports, (c_N - c_E) / 2, (c_N + c_E) / 2, M)


def apply_detection_loss(scat: ScatteringAtFrequency, eta_pd) -> ScatteringAtFrequency:
    """Attenuate the output by sqrt(eta_pd) and admix vacuum through a 'detection' port."""
    if not 0 < eta_pd <= 1:
        raise DomainError(f"eta_pd must lie in (0, 1], got {eta_pd}")
    if eta_pd == 1:
        return scat
    g = np.sqrt(eta_pd)
    ports = {k: g * v for k, v in scat.ports.items()}
    extra = np.sqrt(1 - eta_pd) * I2
    ports["detection"] = np.broadcast_to(extra, scat.Omega.shape + (2, 2)).copy()
    return dataclasses.replace(scat, ports=ports, R_minus=g * scat.R_minus, R_plus=g * scat.R_plus)
