import json
import math
import os
from pathlib import Path

import pytest

import debtgame

FIXTURES = Path(os.environ.get("DEBTGAME_TEST_DIR", Path(__file__).resolve().parents[1])) / "fixtures"


def test_reference_nash_point():
    out = debtgame.solve_nash(debtgame.reference_params())
    assert out["tag"] == "Ceiling"
    assert out["regime"] == "LegislatorIntervenes"
    assert out["a_star"] == pytest.approx(0.268218254085521857, rel=1e-12)
    assert out["b_star"] == pytest.approx(0.713760665123088556, rel=1e-12)
    assert out["F_resid"] <= 1e-9 and out["G_resid"] <= 1e-9


def test_best_responses_are_mutual():
    p = debtgame.reference_params()
    out = debtgame.solve_nash(p)
    assert debtgame.a_of_b(out["b_star"], p) == pytest.approx(out["a_star"], rel=1e-9)
    assert debtgame.b_of_a(out["a_star"], p) == pytest.approx(out["b_star"], rel=1e-9)


def test_no_ceiling_above_boundary():
    p = debtgame.params(**{"lambda": 0.3})
    assert debtgame.regime(p)[0] == "LegislatorAbstains"
    out = debtgame.solve_nash(p)
    assert out["tag"] == "NoCeiling"
    assert out["b_star"] is None
    assert out["a_star"] == pytest.approx(debtgame.a_bar(p))


def test_characteristic_roots():
    p = debtgame.reference_params()
    pos, neg = debtgame.char_roots(p, p["rho"])
    s2, nr = p["sigma"] ** 2, p["r"] - p["g"]
    for x in (pos, neg):
        assert abs(s2 / 2 * x * (x - 1) + nr * x - p["rho"]) < 1e-12
    assert pos > 1 and neg < 0


def test_validation_error_carries_kind():
    with pytest.raises(debtgame.DebtgameError) as info:
        debtgame.validate(debtgame.params(c2=2.5))
    assert info.value.kind == "AssumptionViolation"


def test_boundary_regime_raises():
    p = debtgame.reference_params()
    p["lambda"] = debtgame.regime_boundary(p)
    with pytest.raises(debtgame.DebtgameError) as info:
        debtgame.solve_nash(p)
    assert info.value.kind == "BoundaryRegime"


def test_resolvent_limits():
    p = debtgame.reference_params()
    mu = p["lambda"] - (p["r"] - p["g"])
    x = 50.0
    affine = p["alpha"] * (x / mu - p["m"] / p["lambda"])
    assert debtgame.H(x, p) == pytest.approx(affine, rel=1e-6)
    assert debtgame.H(1e-6, p) < 1e-9
    assert debtgame.std_normal_cdf(0.0) == 0.5


def test_simulation_close_to_value():
    p = debtgame.reference_params()
    out = debtgame.solve_nash(p)
    a, b = out["a_star"], out["b_star"]
    x0 = 0.5 * (a + b)
    sim = debtgame.simulate(p, x0, a, b, n_paths=2000, dt=2e-3, seed=11)
    analytic = debtgame.U1(x0, b, p)
    assert math.isfinite(sim["gov_mean"]) and sim["gov_se"] > 0
    assert abs(sim["gov_mean"] - analytic) < 5 * sim["gov_se"] + 0.02 * abs(analytic)


def test_cli_commands_on_fixture():
    text = (FIXTURES / "reference.json").read_text()
    code, out, err = debtgame.run_nash(text)
    assert code == 0, err
    header, row = out.strip().splitlines()
    assert header.split(",")[:3] == ["tag", "a_star", "b_star"]
    assert row.startswith("Ceiling,")

    code, out, _ = debtgame.run_check((FIXTURES / "bad_c2.json").read_text())
    assert code == 2 and "valid: no" in out


def test_sweep_matches_golden():
    text = (FIXTURES / "sweep_lambda.json").read_text()
    golden = (FIXTURES.parent / "golden" / "sweep_lambda.csv").read_text()
    assert debtgame.sweep(text) == golden


def test_config_errors_surface():
    with pytest.raises(debtgame.DebtgameError) as info:
        debtgame.run_nash((FIXTURES / "malformed.json").read_text())
    assert info.value.kind == "IoError"
    cfg = json.loads((FIXTURES / "reference.json").read_text())
    cfg["lamda"] = 0.1
    with pytest.raises(debtgame.DebtgameError) as info:
        debtgame.run_nash(json.dumps(cfg))
    assert info.value.kind == "ConfigError"
