import math

import pytest

import vring


def test_profile_closed_forms():
    p = vring.VorticityProfile(1.0)
    assert p.c2 == pytest.approx(30 / 19, rel=1e-13)
    assert p.c1 == pytest.approx(228 / (13 * math.pi), rel=1e-13)
    assert 2 * math.pi * p.moment(1) == pytest.approx(1.0, rel=1e-12)
    assert abs(p.moment(3)) < 1e-12
    assert p(0.0) == 0.0


def test_profile_with_extra_shape():
    p = vring.VorticityProfile(1.0, lambda x: math.sin(math.pi * x))
    assert p.rotation_energy_integral() == pytest.approx(1 / (8 * math.pi**2), rel=1e-8)


def test_ring_and_kernels():
    params = vring.RingParams(L=1.0, gamma=1.0, nu_tur=1.0)
    assert vring.thickness(params, 1e-4) == pytest.approx(1e-2)
    assert vring.height_rate(params, 1e-4) == pytest.approx(-math.log(1e-2) / (4 * math.pi))
    assert vring.G(1e-6) * 1e-6 == pytest.approx(1.0, abs=1e-4)
    assert vring.K_2d(1 + 0j) == pytest.approx(1j / (2 * math.pi))
    assert vring.mean_value_circle(1.0, 0.5) == 1.0
    with pytest.raises(ValueError):
        vring.RingParams(L=-1.0)


def test_velocity_on_axis():
    params = vring.RingParams()
    prof = vring.VorticityProfile(1.0)
    t = 1e-6
    v = vring.velocity(params, prof, t, 1e-4, vring.height(params, t))
    assert v.imag == pytest.approx(0.5, rel=1e-4)
    assert abs(v.real) < 1e-4


def test_lambda_max():
    assert vring.lambda_max_traceless(1.0, 0.0, -1.0) == pytest.approx(1.0)
    assert vring.lambda_max_traceless(1.0, 0.0, 1.0) == pytest.approx(1 / 3)


def test_config_and_validation():
    cfg = vring.load_config({"gamma": 2.0})
    assert cfg["gamma"] == 2.0
    assert cfg["quad_tol"] == 1e-8
    with pytest.raises(vring.ConfigError):
        vring.load_config({"grid": {"rmin": 0.0}})
    with pytest.raises(vring.ConfigError):
        vring.load_config({"bogus": 1})
    report = vring.validate()
    assert report["all_pass"]
    assert {c["name"] for c in report["checks"]} >= {"profile_moments", "kernel_table"}
