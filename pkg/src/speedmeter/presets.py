"""Instrument parameter sets for the Glasgow prototype and an ET-LF-like speed meter."""
from __future__ import annotations

import numpy as np

from .arm_cavity import ArmCavitySpec
from .assembly import InterferometerSpec
from .beamsplitter import BeamSplitterSpec
from .two_photon import HomodyneReadout

PPM = 1e-6


def glasgow(**arm_overrides) -> InterferometerSpec:
    arm = dict(L=2.83 / 2, T_itm=700 * PPM, M_itm=0.85e-3, M_etm=100e-3)
    arm.update(arm_overrides)
    return InterferometerSpec(
        P_in=1.7,
        wavelength=1064e-9,
        north=ArmCavitySpec("N", **arm),
        east=ArmCavitySpec("E", **arm),
        bs=BeamSplitterSpec(eta=0.0, loss=1000 * PPM),
        readout=HomodyneReadout(zeta=np.pi / 2, eta_pd=0.95),
    )


def et_lf(**arm_overrides) -> InterferometerSpec:
    arm = dict(L=2e4 / 2, T_itm=10000 * PPM, M_itm=211.0, M_etm=211.0)
    arm.update(arm_overrides)
    return InterferometerSpec(
        P_in=45.73,
        wavelength=1064e-9,
        north=ArmCavitySpec("N", **arm),
        east=ArmCavitySpec("E", **arm),
        bs=BeamSplitterSpec(eta=0.0, loss=1000 * PPM),
        readout=HomodyneReadout(zeta=np.pi / 2, eta_pd=0.95),
    )


PRESETS = {"glasgow": glasgow, "et-lf": et_lf}

# (f_min Hz, f_max Hz, points)
DEFAULT_GRIDS = {"glasgow": (10.0, 1e5, 600), "et-lf": (1.0, 1e3, 600)}
