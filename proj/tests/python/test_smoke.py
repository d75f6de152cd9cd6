import math
import os
import pathlib

import numpy as np
import pytest

import f2bp

ROOT = pathlib.Path(os.environ.get("F2BP_SOURCE_DIR", pathlib.Path(__file__).resolve().parents[2]))
DATA = ROOT / "data"
G = 6.674e-11


def body(stem):
    return f2bp.load_body(DATA / f"{stem}.vert", DATA / f"{stem}.face")


def test_table1_mass():
    b1, b2 = body("b1"), body("b2")
    assert b1.mass == pytest.approx(390.3, rel=5e-4)
    assert b2.mass == pytest.approx(4500.0, rel=5e-4)
    assert b2.volume == pytest.approx(1.8, rel=5e-4)
    assert np.diag(b2.inertia) == pytest.approx([1377.0, 814.5, 1462.5], rel=5e-4)
    assert b1.simplex_count == 8


def test_octahedron_volume():
    b = f2bp.octahedron(1.0, 2.0, 3.0, density=1.0)
    assert b.volume == pytest.approx(4.0 * 6.0 / 3.0, rel=1e-14)


def test_q_tensor_rank0_and_rank1():
    assert f2bp.q_tensor_entry([]) == (1, 36)
    assert f2bp.q_tensor_entry([0]) == (1, 144)


def test_point_mass_limit():
    b1, b2 = body("b1"), body("b2")
    g = f2bp.MutualGravity(b1, b2, G, order=0)
    X = np.array([3.0, -4.0, 12.0])
    out = g.evaluate(X, f2bp.euler313(10.0, 20.0, 30.0))
    assert out.U == pytest.approx(-G * b1.mass * b2.mass / 13.0, rel=1e-14)
    assert out.dUdX == pytest.approx(G * b1.mass * b2.mass * X / 13.0**3, rel=1e-12)
    assert g.evaluation_count == 1


def test_force_matches_finite_difference():
    g = f2bp.MutualGravity(body("b1"), body("b2"), G, order=4)
    X = np.array([4.0, 1.0, -0.5])
    R = f2bp.euler313(30.0, 40.0, 50.0)
    e = 1e-4
    fd = [(g.evaluate(X + e * d, R).U - g.evaluate(X - e * d, R).U) / (2 * e) for d in np.eye(3)]
    assert fd == pytest.approx(g.evaluate(X, R).dUdX, rel=1e-6)


def test_elements_round_trip():
    mu = 3.264e-7
    el = (4.0, 0.3, math.radians(5), math.radians(15), math.radians(60), math.radians(10))
    X, V = f2bp.elements_to_state(*el, mu)
    assert f2bp.osculating_elements(X, V, mu) == pytest.approx(el, rel=1e-12)


def test_run_scenario2_short(tmp_path):
    states = tmp_path / "states.csv"
    summary = f2bp.run(ROOT / "scenarios" / "scenario2.cfg", tf=50.0, out_states=str(states))
    assert summary["steps"] == 50
    assert summary["evaluations"] == 51
    assert summary["mean_errR"] < 1e-12
    assert states.read_text().startswith("t,")


def test_run_rkf_override():
    summary = f2bp.run(ROOT / "scenarios" / "scenario2.cfg", integrator="rkf78", tol=1e-10, tf=50.0)
    assert summary["integrator"] == "rkf78"
    assert summary["evaluations"] == 13 * (summary["steps"] + summary["rejected_steps"]) + 1


def test_errors_are_typed():
    with pytest.raises(f2bp.ConfigError):
        f2bp.run(ROOT / "scenarios" / "scenario2.cfg", tol=1e-8)
    with pytest.raises(f2bp.Error):
        f2bp.load_body(DATA / "missing.vert", DATA / "missing.face")
