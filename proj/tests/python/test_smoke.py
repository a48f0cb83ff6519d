import math

import pytest

import spallsim


def test_saturation_pressure_at_boiling():
    assert spallsim.saturation_vapour_pressure(373.15) == pytest.approx(101.4e3, rel=5e-3)


def test_builtins_listed():
    assert set(spallsim.builtin_scenarios()) == {"kalifa_ptm1", "mindeguia_ptm2", "mindeguia_spalling"}


def test_validate_reports_initial_saturation():
    r = spallsim.validate("kalifa_ptm1")
    assert r["ok"]
    assert r["S_w0"] == pytest.approx(0.8242, abs=5e-4)


def test_short_run():
    out = spallsim.run("kalifa_ptm1", duration=30.0, output_every=10.0)
    assert [r["t"] for r in out["rows"]] == [0.0, 10.0, 20.0, 30.0]
    assert 0.0 <= out["max_F"] < 1.0
    assert out["final_ell"] == pytest.approx(0.12)
    assert len(out["rows"][-1]["probe_theta"]) == len(out["probe_depths"])


def test_config_round_trip_and_errors():
    text = spallsim.serialize_scenario("mindeguia_ptm2")
    assert spallsim.load_scenario(text) == "mindeguia_ptm2"
    with pytest.raises(spallsim.ScenarioError):
        spallsim.load_scenario(text.replace("ell0 = ", "ell_zero = "))
    with pytest.raises(spallsim.ScenarioError):
        spallsim.run("kalifa_ptm1", dt=-1.0)


def test_flux_and_failure():
    f = spallsim.flux_decomposition("kalifa_ptm1", 573.15, 0.5)
    assert f["dominant"] == "vapour_flow"
    F = spallsim.failure_function("kalifa_ptm1", 2000.0, 293.15)
    assert math.isfinite(F) and 0.0 <= F < 1.0
