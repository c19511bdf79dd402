import dataclasses
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from speedmeter import glasgow, et_lf
from speedmeter.arm_cavity import BeamDrive, arm_phase
from speedmeter.assembly import (
    apply_detection_loss,
    assemble,
    carrier_pass_fraction,
    circulating_powers,
    derived_params,
    kappa_variants,
    power_buildup,
)
from speedmeter.beamsplitter import BeamSplitterSpec
from speedmeter.noise import k_sag, noise_budget
from speedmeter.two_photon import DomainError

grid = 2 * np.pi * np.logspace(1, 5, 50)


def theta_of(spec):
    return BeamDrive(circulating_powers(spec)["RN"], spec.omega_p).theta(spec.north)


def test_derived_params_examples():
    d = derived_params(glasgow())
    assert d.delta_gamma == 0 and d.delta_epsilon == 0 and d.epsilon_arm == 0
    s = glasgow().with_arms(T_loss=50e-6)
    s = s.replace(north=dataclasses.replace(s.north, T_itm=710e-6),
                  east=dataclasses.replace(s.east, T_itm=690e-6))
    d = derived_params(s)
    assert d.delta_gamma / d.gamma_arm == pytest.approx(20 / 750)


def test_circulating_power_examples():
    p = circulating_powers(et_lf().ideal())
    assert p["RN"] == pytest.approx(22.865 * 400)
    assert p["RN"] + p["LN"] == pytest.approx(18292, rel=1e-4)
    g = circulating_powers(glasgow().ideal())
    assert g["RN"] == pytest.approx(0.85 * 4 / 7e-4)
    a = glasgow().with_arms(T_loss=700e-6).north
    assert power_buildup(a) == pytest.approx(1 / 700e-6)
    assert carrier_pass_fraction(a) == pytest.approx(0.5)


def test_carrier_pass_exact_mode():
    a = glasgow().with_arms(T_loss=50e-6).north
    assert carrier_pass_fraction(a, "exact") == pytest.approx((650 / 750) ** 2)
    assert carrier_pass_fraction(glasgow().north, "exact") == 1


def test_kappa_variants():
    s = glasgow().ideal().replace(bs=BeamSplitterSpec(eta=0.01))
    k = kappa_variants(s, grid)
    np.testing.assert_allclose(k["RN"] / k["LE"], (1.01 / 0.99) ** 2)
    eps = 40 / 740
    k = kappa_variants(glasgow().ideal().with_arms(T_loss=40e-6), grid)
    np.testing.assert_allclose(k["RE"] / k["RN"], 1 - eps)
    k = kappa_variants(glasgow().ideal(), grid)
    for name in ("LE", "RE", "LN"):
        np.testing.assert_array_equal(k[name], k["RN"])


@pytest.mark.parametrize("make", [glasgow, et_lf])
def test_ideal_scattering_closed_form(make):
    s = make().ideal()
    sc = assemble(s, grid)
    K = k_sag(theta_of(s), s.north.gamma, grid)
    beta = 2 * arm_phase(s.north, grid) + np.pi / 2
    ph = np.exp(2j * beta)
    ref = np.zeros_like(sc.T_i)
    ref[:, 0, 0] = ref[:, 1, 1] = ph
    ref[:, 1, 0] = -K * ph
    scale = np.abs(ref).max(axis=(1, 2))[:, None, None]
    assert np.all(np.abs(sc.T_i - ref) < 1e-10 * scale)
    # the response is fixed up to an overall sign convention
    R = np.exp(1j * beta) * np.sqrt(2 * K)
    np.testing.assert_allclose(np.abs(sc.R_minus[:, 1]), np.abs(R), rtol=1e-10)
    np.testing.assert_allclose(sc.R_minus[:, 1] / R, sc.R_minus[0, 1] / R[0], rtol=1e-10)
    for name in ("p", "n_LN", "n_RN", "n_LE", "n_RE", "m_i", "m_p", "m_o"):
        assert np.abs(sc.ports[name]).max() < 1e-12, name
    assert np.abs(sc.R_plus).max() < 1e-12 * np.abs(sc.R_minus).max()


def test_symmetric_loss_keeps_common_mode_rejection():
    s = glasgow().with_arms(T_loss=100e-6)
    sc = assemble(s, grid)
    assert np.abs(sc.T_p).max() < 1e-14 * np.abs(sc.T_i).max()
    assert np.abs(sc.R_plus).max() < 1e-14 * np.abs(sc.R_minus).max()


def test_detuning_enters_continuously():
    base = glasgow().with_arms(T_loss=20e-6)

    def ti(delta):
        return assemble(base.replace(north=dataclasses.replace(base.north, delta=delta)), grid).T_i

    t0, t1, t2 = ti(0.0), ti(1e-9), ti(2e-9)
    d1, d2 = np.abs(t1 - t0).max(), np.abs(t2 - t0).max()
    assert 0 < d1 < 1e-6 * np.abs(t0).max()
    assert d2 / d1 == pytest.approx(2, rel=1e-3)


@pytest.mark.parametrize("cross", ["source", "geometric"])
def test_general_and_resonant_models_agree(cross):
    s = glasgow().with_arms(T_loss=60e-6).replace(bs=BeamSplitterSpec(0.01, 1e-3), cross=cross)
    a = assemble(s.replace(arm_model="general"), grid)
    b = assemble(s.replace(arm_model="resonant"), grid)
    for name, T in b.ports.items():
        scale = max(np.abs(T).max(), 1.0)
        assert np.abs(a.ports[name] - T).max() < 1e-10 * scale, name


def test_rejects_nonpositive_frequency():
    with pytest.raises(DomainError):
        assemble(glasgow(), np.array([0.0, 1.0]))


def test_detection_loss_port():
    sc = assemble(glasgow(), grid)
    d = apply_detection_loss(sc, 0.95)
    np.testing.assert_allclose(d.ports["detection"][0], math.sqrt(0.05) * np.eye(2))
    np.testing.assert_allclose(d.R_minus, math.sqrt(0.95) * sc.R_minus)
    assert apply_detection_loss(sc, 1.0) is sc
    with pytest.raises(DomainError):
        apply_detection_loss(sc, 0.0)


@settings(max_examples=15)
@given(st.floats(1e-4, 0.05), st.floats(0, 150e-6), st.floats(0, 80e-6))
def test_eta_swap_symmetry(eta, loss_n, loss_e):
    f = np.logspace(1, 5, 40)
    s = glasgow()
    s = s.replace(north=dataclasses.replace(s.north, T_loss=loss_n),
                  east=dataclasses.replace(s.east, T_loss=loss_e))
    a = s.replace(bs=BeamSplitterSpec(eta, s.bs.loss))
    b = s.replace(bs=BeamSplitterSpec(-eta, s.bs.loss),
                  north=dataclasses.replace(s.east, label="N"),
                  east=dataclasses.replace(s.north, label="E"))
    pa, pb = noise_budget(a, f).total_psd, noise_budget(b, f).total_psd
    np.testing.assert_allclose(pa, pb, rtol=1e-12)


def test_buildup_oracle_with_loss():
    a = glasgow().with_arms(T_loss=25e-6).north
    assert power_buildup(a) == pytest.approx(oracles.buildup(700e-6, 25e-6))
