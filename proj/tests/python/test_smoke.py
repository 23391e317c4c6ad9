import json

import numpy as np
import pytest

import zdlim


def test_step_closed_form():
    assert zdlim.zd_step(1.0, 1.0) == pytest.approx(1.0)
    assert zdlim.zd_step(0.25, 0.0) == pytest.approx(1.0)
    assert zdlim.zd_step(2.0, 2.0) == pytest.approx(0.5)
    assert zdlim.zd_step(0.5, -3.0) == 0.0


def test_semigroup_gap():
    x, gap = zdlim.semigroup_gap(0.5)
    assert x == pytest.approx(1.5)
    assert gap == pytest.approx(1.0 / 6.0, abs=1e-12)


def test_datum_json_round_trip():
    d = zdlim.Datum.from_json(
        json.dumps({"type": "step", "left": -1.0, "right": 1.0, "height": 1.0})
    )
    assert json.loads(d.to_json())["type"] == "step"
    assert d.eval(0.0) == 1.0
    values = d(np.linspace(-2.0, 2.0, 9))
    assert values.shape == (9,)
    assert values[4] == 1.0


def test_rational_backends_agree():
    d = zdlim.Datum.rational([1j], [-0.5j])
    frozen = 0.96414965481456477
    assert zdlim.zd_rational(d, 0.1, 0.0) == pytest.approx(frozen, abs=1e-9)
    assert zdlim.zd_pointwise(d, 0.1, 0.0) == pytest.approx(frozen, abs=1e-9)
    field = zdlim.zd_grid(d, 0.1, [-1.0, 0.0, 1.0])
    assert field["backend"] == "characteristics"
    assert field["values"][1] == pytest.approx(frozen, abs=1e-9)


def test_critical_values():
    d = zdlim.Datum.rational([1j], [-1.5j])  # 3/(1+y^2) breaks before t=0.5
    ks = zdlim.critical_values(d, 0.5)
    assert len(ks["values"]) == 2
    ells = [c["ell"] for c in ks["components"]]
    assert ells == [0, 1, 0]
    assert ks["components"][0]["lo"] is None  # unbounded leftmost component


def test_boundary_trace_poisson():
    d = zdlim.Datum.rational([1j], [-0.5j])
    tr = zdlim.boundary_trace(d, 0.0, [0.0], 0.5, m=512)
    assert tr["values"][0] == pytest.approx(1.5 / 2.25, abs=1e-4)


def test_mollify_and_eps_run():
    step = zdlim.Datum.step(-1.0, 1.0, 1.0)
    smooth = step.mollify(0.05)
    assert smooth.eval(0.0) == pytest.approx(1.0)
    out = zdlim.eps_run(smooth, epsilon=0.2, t_final=0.25, modes=1024, half_length=20.0)
    assert len(out["u"]) == 1024
    cons = out["conserved"]
    assert cons[-1][2] == pytest.approx(cons[0][2], abs=1e-12)  # mean is static
