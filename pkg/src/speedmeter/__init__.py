"""Frequency-domain quantum noise model of a Sagnac speed-meter interferometer."""
from .arm_cavity import ArmCavitySpec, BeamDrive
from .assembly import InterferometerSpec, ScatteringAtFrequency, assemble, circulating_powers
from .beamsplitter import BeamSplitterSpec
from .noise import NoiseBudget, noise_budget, reference_curves
from .presets import PRESETS, et_lf, glasgow
from .two_photon import (
    DomainError,
    HomodyneReadout,
    LaserNoiseSpec,
    SignalNullError,
    SingularityError,
)

__all__ = [
    "ArmCavitySpec",
    "BeamDrive",
    "BeamSplitterSpec",
    "DomainError",
    "HomodyneReadout",
    "InterferometerSpec",
    "LaserNoiseSpec",
    "NoiseBudget",
    "PRESETS",
    "ScatteringAtFrequency",
    "SignalNullError",
    "SingularityError",
    "assemble",
    "circulating_powers",
    "et_lf",
    "glasgow",
    "noise_budget",
    "reference_curves",
]
