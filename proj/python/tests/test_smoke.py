import json
import math
import os
import pathlib
import subprocess

import numpy as np
import pytest

import bundlesym

SCENARIOS = pathlib.Path(__file__).resolve().parents[2] / "scenarios"


def test_exp_log_round_trip():
    x = np.array([0.3, -0.2, 0.5])
    for group in ("SO3", "SU2"):
        g = bundlesym.exp(group, x)
        assert np.allclose(g @ g.conj().T, np.eye(g.shape[0]), atol=1e-13)
        assert np.allclose(bundlesym.log(group, g), x, atol=1e-12)


def test_exp_matches_rodrigues():
    w = np.array([0.4, 0.1, -0.7])
    t = np.linalg.norm(w)
    k = np.array([[0, -w[2], w[1]], [w[2], 0, -w[0]], [-w[1], w[0], 0]]) / t
    r = np.eye(3) + math.sin(t) * k + (1 - math.cos(t)) * k @ k
    assert np.allclose(bundlesym.exp("SO3", w).real, r, atol=1e-13)


def test_bracket_and_structure():
    e1, e2 = np.eye(3)[0], np.eye(3)[1]
    assert np.allclose(bundlesym.bracket("SO3", e1, e2), [0, 0, 1])
    assert bundlesym.structure_constant("SO3", 2, 0, 1) == pytest.approx(1.0)
    assert bundlesym.group_dim("SO2") == 1
    ad = bundlesym.adjoint_matrix("SO3", bundlesym.exp("SO3", np.array([0.1, 0.2, 0.3])))
    assert np.allclose(ad.T @ ad, np.eye(3), atol=1e-13)


def test_check_report():
    report = bundlesym.check(str(SCENARIOS / "so3_default.json"), "prop2")
    assert report["suite"] == "prop2"
    assert report["pass"] is True
    assert all(p["max_residual"] < 1e-10 for p in report["properties"])
    again = bundlesym.check(str(SCENARIOS / "so3_default.json"), "prop2")
    assert json.dumps(report) == json.dumps(again)
    assert bundlesym.check(str(SCENARIOS / "so3_default.json"), "tg", seed=5)["seed"] == 5
    assert "tg" in bundlesym.suite_names()


def test_errors_carry_codes():
    with pytest.raises(bundlesym.BundlesymError, match="UnknownSuite"):
        bundlesym.check(str(SCENARIOS / "so3_default.json"), "nope")
    with pytest.raises(bundlesym.BundlesymError, match="UnresolvedReference"):
        bundlesym.info(str(SCENARIOS / "broken_reference.json"))
    with pytest.raises(bundlesym.BundlesymError, match="NotFixedPoint"):
        bundlesym.reduce(str(SCENARIOS / "so3_default.json"), "charged")


def test_cyclotron_trajectory():
    t = bundlesym.trajectory(str(SCENARIOS / "so2_magnetic.json"), "cyclotron")
    x = t["x"]
    assert x.shape == (1001, 2)
    assert np.allclose(x[:, 0], np.sin(t["t"]), atol=1e-5)
    assert np.allclose(x[:, 1], np.cos(t["t"]) - 1.0, atol=1e-5)
    assert np.ptp(t["J0"]) < 1e-6
    assert np.ptp(t["H"]) < 1e-6
    report = bundlesym.reduce(str(SCENARIOS / "so2_magnetic.json"), "cyclotron")
    assert report["pass"] and report["max_deviation"] < 1e-5


def test_simulate_writes_files(tmp_path):
    side = bundlesym.simulate(str(SCENARIOS / "so2_magnetic.json"), "empty", str(tmp_path))
    assert side["points"] == 0
    lines = (tmp_path / "empty.csv").read_text().splitlines()
    assert lines == ["t,x0,x1,g00,g01,g10,g11,pi0,pi1,rho0,H,J0_0"]


@pytest.mark.skipif("BUNDLESYM_CLI" not in os.environ, reason="CLI path not provided")
def test_cli_exit_codes():
    cli = os.environ["BUNDLESYM_CLI"]
    ok = subprocess.run([cli, "check", "--scenario", str(SCENARIOS / "su2_default.json"), "--suite", "tg"],
                        capture_output=True, text=True)
    assert ok.returncode == 0
    assert json.loads(ok.stdout)["pass"] is True
    bad = subprocess.run([cli, "check", "--scenario", str(SCENARIOS / "broken_reference.json"), "--suite", "tg"],
                         capture_output=True, text=True)
    assert bad.returncode == 2
