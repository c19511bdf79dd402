"""Lossy main beamsplitter with a splitting-ratio offset eta.

Amplitude coefficients are sqrt(R) = (1 + eta)/sqrt(2) and
sqrt(T) = (1 - eta)/sqrt(2); R + T = 1 + eta^2 is kept as is. Loss enters
through virtual splitters of reflectivity eps on the input and output sides.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .two_photon import DomainError


@dataclass(frozen=True)
class BeamSplitterSpec:
    eta: float = 0.0
    loss: float = 0.0

    def __post_init__(self):
        if not abs(self.eta) < 1:
            raise DomainError(f"|eta_bs| must be < 1, got {self.eta}")
        if not 0.0 <= self.loss < 1.0:
            raise DomainError(f"beamsplitter loss must lie in [0, 1), got {self.loss}")

    @property
    def sqrt_R(self):
        return (1 + self.eta) / np.sqrt(2)

    @property
    def sqrt_T(self):
        return (1 - self.eta) / np.sqrt(2)


def bs_scatter(spec: BeamSplitterSpec):
    """Scalar coefficient of every output with respect to every input.

    Outputs: o (dark port), q (bright return), a_RN, a_LE.
    Inputs: b_RE, b_LN (returning arm beams), i, p, m_o, m_q, m_i, m_p.
    The coefficients are frequency independent and act as multiples of the
    2x2 identity on quadrature vectors.
    """
    r, t = spec.sqrt_R, spec.sqrt_T
    keep = np.sqrt(1 - spec.loss)
    leak = np.sqrt(spec.loss)
    return {
        "o": {"b_RE": -keep * r, "b_LN": keep * t, "m_o": leak},
        "q": {"b_RE": keep * t, "b_LN": keep * r, "m_q": leak},
        "a_RN": {"i": t * keep, "m_i": t * leak, "p": r * keep, "m_p": r * leak},
        "a_LE": {"i": -r * keep, "m_i": -r * leak, "p": t * keep, "m_p": t * leak},
    }


def carrier_split(spec: BeamSplitterSpec, P_in):
    """Carrier powers launched into the R (via north) and L (via east) beams."""
    if P_in < 0:
        raise DomainError("input power must be non-negative")
    base = P_in * (1 - spec.loss) / 2
    return base * (1 + spec.eta) ** 2, base * (1 - spec.eta) ** 2
