import json
import math
import pathlib

import pytest

import latbose

CONFIGS = pathlib.Path(__file__).resolve().parents[2] / "configs"


@pytest.fixture(scope="module")
def cubic():
    return latbose.LatticeModel.load(str(CONFIGS / "cubic.json"))


def test_model_round_trip(cubic):
    doc = json.loads(cubic.to_json())
    assert doc["U"] == 4.0
    assert cubic.c_gap == 1.0
    assert cubic.hopping_length == 2
    assert cubic.dispersion(math.pi, 0.0, 0.0) == pytest.approx(4.0)


def test_scattering(cubic):
    s = latbose.scattering_data(cubic)
    assert 4 * s["gamma"] == pytest.approx(0.505462, rel=1e-5)
    assert s["eight_pi_a"] == pytest.approx(4.0 / (1 + 4.0 * s["gamma"]), rel=1e-12)
    assert s["phi0"] + s["w0"] == pytest.approx(1.0)


def test_trial_energies(cubic):
    t = latbose.trial_energy_thermo(cubic, 1e-4)
    assert t["e_psi"] >= t["leading"]
    f = latbose.trial_energy_finite(cubic, 1e-2, 16)
    assert f["N0"] > 0


def test_spectrum_and_gap(cubic):
    eig = latbose.spectrum(cubic, 2, "neumann_special")
    assert len(eig) == 27
    assert eig[:2] == [0.0, 1.0]
    assert latbose.neumann_gap(cubic, 2) == 1.0


def test_ed_and_certificate(cubic):
    weak = cubic.with_U(0.1)
    ed = latbose.ground_state_energy(weak, 4, 2)
    lb = latbose.certificate(weak, 2, 4)
    assert lb["lb_energy"] <= ed["e0"]
    assert lb["mu_min"] < lb["mu"] < lb["mu_max"]


def test_errors(cubic):
    with pytest.raises(latbose.LatboseError, match="EmptyWindow"):
        latbose.certificate(cubic, 2, 4)
    with pytest.raises(latbose.LatboseError, match="InvalidConfig"):
        latbose.LatticeModel.from_json("{}")
