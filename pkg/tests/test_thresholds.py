import json
import math

import pytest

from cosetlab.noise import center_probability_form, fourth_power_bound
from cosetlab.thresholds import (DECODER_KINDS, ThresholdQuery,
                                 binary_threshold, curves_csv, figure1_curves,
                                 optimize_over_rho, rows_json, table1, tau_max)


def test_binary_threshold_values():
    assert binary_threshold(6350 / 50000) == pytest.approx(0.8330, abs=5e-4)
    assert binary_threshold(0.5) == pytest.approx(1.0, abs=1e-15)
    assert binary_threshold(0.0) == pytest.approx(0.5, abs=1e-15)
    # symmetric around tau = 1/2
    assert binary_threshold(0.2) == pytest.approx(binary_threshold(0.8))


def test_binary_threshold_is_center_form_at_half_density():
    # same quantity as the q -> infinity center-probability expression
    for tau in (0.1, 0.3, 0.45):
        assert binary_threshold(tau) == pytest.approx(
            center_probability_form(tau, 0.5), abs=1e-12)


def test_classical_closed_form():
    for r, rho in [(0.1, 0.5), (0.75, 0.5), (2 / 3, 0.5), (0.3, 0.4)]:
        got = tau_max(ThresholdQuery("classical", r, rho))
        assert got == pytest.approx(rho + r * (1.0 - rho), abs=1e-15)


@pytest.mark.parametrize("kind,rhs_fn", [
    ("bw", lambda tau, rho: center_probability_form(tau, rho)),
    ("gs", lambda tau, rho: center_probability_form(tau, rho) ** 2),
    ("kv", fourth_power_bound),
])
@pytest.mark.parametrize("r,rho", [(0.1, 0.5), (0.75, 0.5), (0.3, 0.413)])
def test_tau_max_sits_on_the_feasibility_edge(kind, rhs_fn, r, rho):
    lhs = 1.0 - r / 2.0 if kind == "bw" else 1.0 - r
    tau = tau_max(ThresholdQuery(kind, r, rho))
    assert rho <= tau <= 1.0
    assert rhs_fn(tau, rho) >= lhs - 2e-9  # feasible at the returned point
    if tau < 1.0:
        assert rhs_fn(tau + 1e-6, rho) < lhs  # and tight: a nudge breaks it


def test_tau_max_saturates_for_generous_rates():
    # at R = 2/3 the fourth-power bound meets 1 - R over the whole range
    assert tau_max(ThresholdQuery("kv", 2 / 3, 0.5)) == 1.0
    assert tau_max(ThresholdQuery("gs", 0.75, 0.5)) == 1.0


def test_tau_max_monotone_in_rate():
    for kind in ("bw", "gs", "kv"):
        taus = [tau_max(ThresholdQuery(kind, r, 0.5))
                for r in (0.05, 0.1, 0.2, 0.4)]
        # a larger rate loosens the condition, so the threshold grows
        assert all(a <= b + 1e-12 for a, b in zip(taus, taus[1:]))


def test_query_validation():
    with pytest.raises(ValueError):
        ThresholdQuery("magic", 0.5, 0.5)
    with pytest.raises(ValueError):
        ThresholdQuery("bw", 0.0, 0.5)  # rate must be positive
    with pytest.raises(ValueError):
        ThresholdQuery("bw", 0.5, 0.0)
    with pytest.raises(ValueError):
        ThresholdQuery("kv", 0.5, 0.4, q=11)  # 2z+1 = rho q has no integer z
    ok = ThresholdQuery("kv", 0.5, 3 / 11, q=11, z=1)
    assert ok.z == 1


def test_discrete_kv_close_to_scale_free_at_large_q():
    rho = 999 / 1999  # 2z+1 = 999 residues out of q = 1999
    free = tau_max(ThresholdQuery("kv", 0.3, rho))
    disc = tau_max(ThresholdQuery("kv", 0.3, rho, q=1999, z=499))
    assert disc == pytest.approx(free, abs=2e-3)


def test_optimizer_hits_classical_target_curve():
    for kind in ("bw", "gs", "kv"):
        r, rho, best = optimize_over_rho(kind, classical_target=0.55)
        assert all(isinstance(v, float) for v in (r, rho, best))
        assert rho + r * (1.0 - rho) == pytest.approx(0.55, abs=1e-9)
        assert best == pytest.approx(tau_max(ThresholdQuery(kind, r, rho)),
                                     abs=1e-12)
        # local optimality: nearby on-curve points do no better
        for d in (-1e-3, 1e-3):
            rho2 = rho + d
            r2 = (0.55 - rho2) / (1.0 - rho2)
            assert tau_max(ThresholdQuery(kind, r2, rho2)) <= best + 1e-6


def test_table1_shape_and_ordering():
    rows = table1()
    assert len(rows) == 6
    assert [row.label for row in rows[:3]] == ["R=0.1", "R=0.75", "R=2/3"]
    assert all(row.label.startswith("opt") for row in rows[3:])
    for row in rows:
        assert row.tau_gs >= row.tau_bw - 1e-12
        d = row.to_dict()
        json.dumps(d)  # pure python floats only
        assert d["tau_kv"] == row.tau_kv


def test_table1_saturated_rows():
    rows = {row.label: row for row in table1()}
    assert rows["R=0.75"].tau_gs == 1.0
    assert rows["R=2/3"].tau_kv == 1.0
    assert rows["R=0.75"].saturated
    assert not rows["R=0.1"].saturated


def test_figure1_curves_and_csv():
    grid = [0.1, 0.2, 0.3]
    rows = figure1_curves(0.5, grid)
    assert [row.r for row in rows] == grid
    text = curves_csv(rows)
    lines = text.splitlines()
    assert lines[0] == "R,rho,tau_classical,tau_bw,tau_gs,tau_kv"
    assert len(lines) == 1 + len(grid)
    first = lines[1].split(",")
    assert float(first[0]) == pytest.approx(0.1)
    assert all(len(cell.split(".")[-1]) == 6 for cell in first[2:])
    assert not text.endswith("\r\n")


def test_rows_json_round_trip():
    rows = table1()
    parsed = json.loads(rows_json(rows))
    assert len(parsed) == 6
    assert parsed[0]["tau_bw"] == pytest.approx(rows[0].tau_bw, abs=1e-15)


def test_decoder_kinds_constant():
    assert DECODER_KINDS == ("bw", "gs", "kv", "classical")
    assert math.isclose(tau_max(ThresholdQuery("classical", 0.1, 0.5)), 0.55)
