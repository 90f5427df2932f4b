import math

import numpy as np
import pytest

import hopf_flow as hf


def test_field_is_unit_length():
    for p in [(1.0, 0.0, 0.0), (1.0, 1.0, 1.0), (-0.3, 2.0, 0.7)]:
        v = hf.eval_cartesian(*p)
        assert math.isclose(math.hypot(*v), 1.0, rel_tol=0, abs_tol=1e-14)
    assert hf.eval_cartesian(1.0, 1.0, 1.0)[0] == pytest.approx(40.0 / 49.0, rel=1e-15)


def test_trace_from_axis_is_arclength():
    tr = hf.trace([0.0, 0.0, 10.0], 30.0)
    assert tr["stop_reason"] == "reached_t_end"
    assert np.all(np.diff(tr["t"]) > 0)
    assert tr["t"][-1] == 30.0
    assert abs(tr["path_length"] - 30.0) <= 1e-5
    assert tr["y"].shape == (len(tr["t"]), 3)


def test_spherical_trace_refuses_axis():
    with pytest.raises(hf.SingularityError):
        hf.trace([1.0, 0.0, 0.0], 1.0, mode="spherical")
    with pytest.raises(hf.UsageError):
        hf.trace([1.0, 0.0], 1.0)


def test_reduced_equation_and_implicit_relation():
    assert hf.h_rhs(2.0, 1.0) == pytest.approx(-1.0 / 3.0, rel=1e-15)
    c = hf.implicit_constant(1.0, 0.5)
    assert c["effective"] == pytest.approx(-4.931436008177050681, rel=1e-12)
    assert c["c1"].imag == pytest.approx(math.pi, rel=1e-15)
    root = hf.solve_implicit(3.0, 0.2, 3.0, 0.1, 0.3)
    assert root["H"] == pytest.approx(0.2, abs=1e-10)

    run = hf.integrate_h(3.0, 0.2, 3.5, rel_tol=1e-12, abs_tol=1e-14)
    r_end, h_end = run["t"][-1], run["y"][-1, 0]
    again = hf.solve_implicit(3.0, 0.2, r_end, 0.02, 0.205)
    assert again["H"] == pytest.approx(h_end, abs=1e-8)


def test_first_integral_values():
    v = hf.rho(0.5, 1.0)
    assert v["rho"] == pytest.approx(-0.24127230591294375288, rel=1e-12)
    assert v["rho_xi"] == pytest.approx(-0.71541885478147506395, rel=1e-12)
    assert v["real_region"]
    assert hf.transformed_linear_residual(0.5, 1.0)["scaled"] <= 1e-12
    assert hf.linear_pde_residual(0.5, 1.0)["raw"] == pytest.approx(25.22852339240169971, rel=1e-10)
    with pytest.raises(hf.DomainError):
        hf.rho(0.5, 0.0)


def test_verify_subset():
    doc = hf.run_verify(only=["unit-norm", "bessel-wronskian"])
    reports = doc["reports"]
    assert doc["ok"] and [c["id"] for c in doc["criteria"]] == ["A1", "A4"]
    assert [r["name"] for r in reports] == ["unit-norm", "bessel-wronskian"]
    assert all(r["verdict"] == "pass" for r in reports)
    assert set(reports[0]) >= {"name", "samples", "max_abs", "rms", "verdict", "tolerance"}
    assert "pde-reference" in hf.check_names()
    with pytest.raises(hf.UsageError):
        hf.run_verify(only=["no-such-check"])
