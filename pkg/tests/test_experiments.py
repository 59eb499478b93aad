"""Experiment driver tests: row layouts and parameter recording."""

import math

import numpy as np
import pytest

from irswet import experiments as exp
from irswet.config import load_config
from irswet.montecarlo import CSI_BASED, CSI_FREE_IDEAL


def _cfg(**overrides):
    raw = {("run", "trials"): "80", ("run", "seed"): "1"}
    raw.update({tuple(k.split(".")): str(v) for k, v in overrides.items()})
    return load_config(overrides=raw, env={})


def test_coupling_sweep_rows():
    res = exp.coupling_sweep(_cfg(), points=11)
    assert res.columns == ["phase_rad", "amplitude"]
    assert len(res.rows) == 11
    assert res.rows[0][0] == pytest.approx(-math.pi)
    assert res.rows[-1][0] == pytest.approx(math.pi)
    amps = [r[1] for r in res.rows]
    assert max(amps) <= 1.0 + 1e-12
    assert min(amps) >= 0.2 - 1e-12
    assert res.parameters["points"] == 11


def test_coupling_sweep_ideal_flat():
    res = exp.coupling_sweep(_cfg(**{"coupling.ideal": "true"}), points=5)
    assert all(r[1] == pytest.approx(1.0) for r in res.rows)


def test_tau_fit_layout_and_scaling():
    res = exp.tau_fit(_cfg(), beta_mins=(1.0,), n_list=(16, 36))
    assert res.columns == ["beta_min", "n", "energy", "energy_over_n2", "tau"]
    assert len(res.rows) == 2
    for bm, n, energy, ratio, tau in res.rows:
        assert bm == 1.0
        assert ratio == pytest.approx(energy / n**2)
        # no amplitude penalty at beta_min = 1: energy reaches n^2
        assert ratio == pytest.approx(1.0, abs=1e-6)
        assert tau == pytest.approx(1.0, abs=1e-6)
    assert res.parameters["beta_mins"] == [1.0]
    assert res.parameters["n_list"] == [16, 36]


def test_energy_dist_layout():
    res = exp.energy_dist(_cfg(**{"run.trials": "4000"}), n_list=(16,))
    assert len(res.rows) == 1
    row = dict(zip(res.columns, res.rows[0]))
    assert row["n"] == 16
    assert row["trials"] == 4000
    assert row["mean_rel_err"] == pytest.approx(
        abs(row["mean_sim"] - row["mean_closed"]) / row["mean_closed"])
    assert row["q05"] <= row["q25"] <= row["q50"] <= row["q75"] <= row["q95"]
    # a few thousand trials put the simulated mean within a few percent
    assert row["mean_rel_err"] < 0.1


def test_energy_dist_rejects_multi_receiver_scheme():
    with pytest.raises(ValueError):
        exp.energy_dist(_cfg(**{"scheme.name": CSI_BASED}), n_list=(16,))


def test_energy_vs_distance_layout():
    cfg = _cfg(**{"geometry.nx": "4", "geometry.ny": "4"})
    res = exp.energy_vs_distance(cfg, distances=(0.5, 1.0, 2.0))
    assert res.columns == ["distance_m", "mean_received_w", "mean_received_dbm",
                           "mean_harvested_w", "median_harvested_w"]
    assert [r[0] for r in res.rows] == [0.5, 1.0, 2.0]
    received = [r[1] for r in res.rows]
    assert received[0] > received[1] > received[2]
    for r in res.rows:
        assert r[3] <= 0.45 * r[1] + 1e-18


def test_beam_plan_eleven_rows_for_ten_elements():
    res = exp.beam_plan(_cfg(), n_eff=10)
    assert res.columns == ["index", "direction_deg", "lower_edge_deg",
                           "upper_edge_deg", "clamped"]
    assert len(res.rows) == 11
    assert [r[0] for r in res.rows] == list(range(11))
    dirs = [r[1] for r in res.rows]
    assert dirs == sorted(dirs)
    assert res.diagnostics["delta_realized"] <= 0.05 + 1e-12
    assert res.parameters["n_eff"] == 10


def test_beam_plan_defaults_to_configured_aperture():
    res = exp.beam_plan(_cfg())
    assert res.parameters["n_eff"] == 10


def test_heatmap_layout():
    cfg = _cfg(**{"geometry.nx": "3", "geometry.ny": "3",
                  "scheme.name": CSI_FREE_IDEAL, "run.trials": "40"})
    res = exp.heatmap(cfg, angle_points=5, radius_points=3)
    assert len(res.rows) == 15
    row = dict(zip(res.columns, res.rows[0]))
    assert row["angle_deg"] == pytest.approx(math.degrees(row["angle_rad"]))
    assert res.diagnostics["n"] == 9
    assert res.diagnostics["directions_used"] >= 1


def test_vs_n_layout():
    cfg = _cfg(**{"run.trials": "40"})
    res = exp.vs_n(cfg, n_list=(9, 16), er_count=2,
                   schemes=[CSI_FREE_IDEAL])
    assert res.columns == ["n", "scheme", "worst_mean_harvested_w",
                           "time_fraction"]
    assert [(r[0], r[1]) for r in res.rows] == [(9, CSI_FREE_IDEAL),
                                                (16, CSI_FREE_IDEAL)]
    assert res.rows[0][3] == pytest.approx((196 - 10) / 196)
    assert res.parameters["er_count"] == 2


def test_vs_k_layout():
    cfg = _cfg(**{"run.trials": "40", "geometry.nx": "3", "geometry.ny": "3"})
    res = exp.vs_k(cfg, k_list=(1, 2), schemes=[CSI_FREE_IDEAL])
    assert res.columns[0] == "er_count"
    assert [(r[0], r[1]) for r in res.rows] == [(1, CSI_FREE_IDEAL),
                                                (2, CSI_FREE_IDEAL)]
    assert res.parameters["n"] == 9


def test_vs_k_time_fraction_depends_only_on_surface_size():
    cfg = _cfg(**{"run.trials": "40", "geometry.nx": "3", "geometry.ny": "3"})
    res = exp.vs_k(cfg, k_list=(1, 4), schemes=[CSI_FREE_IDEAL])
    fractions = {r[3] for r in res.rows}
    assert len(fractions) == 1
    assert fractions.pop() == pytest.approx((196 - 10) / 196)
