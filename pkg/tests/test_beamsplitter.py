import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from speedmeter.beamsplitter import BeamSplitterSpec, bs_scatter, carrier_split
from speedmeter.two_photon import DomainError

s2 = 1 / math.sqrt(2)


def test_symmetric_lossless_junction():
    c = bs_scatter(BeamSplitterSpec())
    assert c["a_RN"]["i"] == pytest.approx(s2) and c["a_RN"]["p"] == pytest.approx(s2)
    assert c["a_LE"]["i"] == pytest.approx(-s2) and c["a_LE"]["p"] == pytest.approx(s2)
    assert c["o"]["b_LN"] == pytest.approx(s2) and c["o"]["b_RE"] == pytest.approx(-s2)
    assert c["o"]["m_o"] == 0


def test_offset_carrier_amplitudes():
    c = bs_scatter(BeamSplitterSpec(eta=0.01))
    assert c["a_RN"]["p"] == pytest.approx(1.01 / math.sqrt(2))
    assert c["a_LE"]["p"] == pytest.approx(0.99 / math.sqrt(2))


def test_loss_scales_and_adds_port():
    eps = 1000e-6
    c0 = bs_scatter(BeamSplitterSpec())
    c = bs_scatter(BeamSplitterSpec(loss=eps))
    assert c["o"]["m_o"] == pytest.approx(math.sqrt(eps))
    for out in ("o", "a_RN", "a_LE"):
        for src, v in c0[out].items():
            if v:
                assert c[out][src] == pytest.approx(v * math.sqrt(1 - eps))


def test_lossless_symmetric_columns_are_unitary():
    c = bs_scatter(BeamSplitterSpec())
    for src in ("i", "p"):
        assert c["a_RN"][src] ** 2 + c["a_LE"][src] ** 2 == pytest.approx(1)
    for src in ("b_RE", "b_LN"):
        assert c["o"][src] ** 2 + c["q"][src] ** 2 == pytest.approx(1)


@given(st.floats(-0.5, 0.5), st.floats(0, 0.5))
def test_offset_parameterisation(eta, eps):
    spec = BeamSplitterSpec(eta=eta, loss=eps)
    assert spec.sqrt_R**2 + spec.sqrt_T**2 == pytest.approx(1 + eta**2)
    c = bs_scatter(spec)
    total = sum(v**2 for v in c["a_RN"].values()) + sum(v**2 for v in c["a_LE"].values())
    assert total == pytest.approx(2 * (1 + eta**2))


def test_carrier_split_examples():
    assert carrier_split(BeamSplitterSpec(), 1.7) == pytest.approx((0.85, 0.85))
    assert carrier_split(BeamSplitterSpec(loss=1e-3), 1.0) == pytest.approx((0.4995, 0.4995))
    PR, PL = carrier_split(BeamSplitterSpec(eta=0.001), 1.0)
    assert PR / PL == pytest.approx((1.001 / 0.999) ** 2)
    with pytest.raises(DomainError):
        carrier_split(BeamSplitterSpec(), -1.0)


def test_validation():
    for kw in (dict(eta=1.0), dict(eta=-1.2), dict(loss=1.0), dict(loss=-0.1)):
        with pytest.raises(DomainError):
            BeamSplitterSpec(**kw)
