"""Experiment drivers: pure functions from a resolved scenario to table rows.

Each driver returns an ExperimentResult holding the CSV columns, the rows,
the knobs it ran with (recorded in the manifest so a run can be repeated from
it), and solver/runtime diagnostics worth keeping.  Nothing here touches the
filesystem; emission lives in reporting.py and orchestration in cli.py.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .beamplan import plan_rotation, schedule_rows
from .config import ScenarioConfig
from .geometry import ArrayGeometry, er_los_phases, pb_irs_channel
from .hardware import CouplingParams, amplitude_of_phase, wrap_phase
from .montecarlo import (ALL_SCHEMES, CSI_BASED, CSI_FREE_IDEAL,
                         CSI_FREE_PRACTICAL, EnergyScenario, heatmap_experiment,
                         simulate_energy, square_ish_grid, watts_to_dbm,
                         worst_case_compare)
from .optimize import (expected_energy, energy_variance, fit_tau,
                       om_solve, phasor_energy)
from .precoding import incident_field, mrt

DEFAULT_TAU_BETA_MINS = (0.2, 0.5, 0.8, 1.0)
DEFAULT_TAU_N_LIST = (64, 100, 144, 196)
DEFAULT_DIST_N_LIST = (100, 256, 400)
DEFAULT_VS_N_LIST = (16, 36, 64, 100, 144, 169, 195, 225)
DEFAULT_VS_K_LIST = (1, 2, 4, 8, 16, 32, 64)


@dataclass
class ExperimentResult:
    columns: list[str]
    rows: list[tuple]
    parameters: dict = field(default_factory=dict)
    diagnostics: dict = field(default_factory=dict)


def _incident(cfg: ScenarioConfig, n: int):
    """Phase front and power on an n-element surface under cfg's beacon."""
    nx, ny = square_ish_grid(n)
    sr = cfg["geometry.spacing_ratio"]
    geom = ArrayGeometry(m=cfg["geometry.m"], nx=nx, ny=ny, spacing_ratio=sr)
    ang = cfg.angles()
    field_ = incident_field(pb_irs_channel(geom, ang),
                            mrt(ang.tx_step, geom.m, cfg.transmit_watts))
    return ny, field_.phases, field_.power


def _scheme_thetas(cfg: ScenarioConfig, scheme: str, los, mus, stream_tag=0):
    """Reflection phases a single-receiver scheme would pick for this channel."""
    coup = cfg.coupling()
    if scheme == CSI_FREE_IDEAL:
        return wrap_phase(-(np.asarray(los) + np.asarray(mus))), None
    if scheme == CSI_FREE_PRACTICAL:
        if coup is None:
            return wrap_phase(-(np.asarray(los) + np.asarray(mus))), None
        sol = om_solve(coup, los, mus, seed=cfg.seed, stream_tag=stream_tag,
                       threads=cfg.threads)
        return sol.thetas, coup
    raise ValueError(f"scheme {scheme!r} needs a receiver set; "
                     f"use {CSI_FREE_IDEAL} or {CSI_FREE_PRACTICAL}")


def coupling_sweep(cfg: ScenarioConfig, points: int = 721) -> ExperimentResult:
    """Reflection amplitude across the phase range for the configured law."""
    if points < 2:
        raise ValueError("points must be >= 2")
    coup = cfg.coupling() or CouplingParams(
        beta_min=1.0, eta=math.radians(cfg["coupling.eta_deg"]),
        alpha=cfg["coupling.alpha"])
    thetas = np.linspace(-math.pi, math.pi, points)
    amps = amplitude_of_phase(thetas, coup)
    rows = [(float(t), float(a)) for t, a in zip(thetas, amps)]
    return ExperimentResult(
        columns=["phase_rad", "amplitude"],
        rows=rows,
        parameters={"points": points},
        diagnostics={"beta_min": coup.beta_min, "alpha": coup.alpha,
                     "eta_rad": coup.eta},
    )


def tau_fit(cfg: ScenarioConfig, beta_mins=DEFAULT_TAU_BETA_MINS,
            n_list=DEFAULT_TAU_N_LIST,
            er_angle_deg: float = 30.0) -> ExperimentResult:
    """Energy scaling coefficient of the phase-only design per coupling depth.

    For each amplitude floor the single-receiver design is optimized on a
    range of surface sizes and energy ~ tau * n^2 is fitted through the
    origin; strong coupling pushes tau below 1 because amplitude and
    alignment fight each other.
    """
    eta = math.radians(cfg["coupling.eta_deg"])
    alpha = cfg["coupling.alpha"]
    er_angle = math.radians(er_angle_deg)
    rows = []
    sweeps_hist = []
    for bm in beta_mins:
        coup = CouplingParams(beta_min=float(bm), eta=eta, alpha=alpha)
        points = []
        for n in n_list:
            ny, mus, _pe = _incident(cfg, int(n))
            los = er_los_phases(int(n), ny, er_angle, cfg["geometry.spacing_ratio"])
            sol = om_solve(coup, los, mus, seed=cfg.seed, threads=cfg.threads)
            points.append((int(n), sol.energy))
            sweeps_hist.append(sol.sweeps_used)
        tau = fit_tau(points)
        for n, energy in points:
            rows.append((float(bm), int(n), float(energy),
                         float(energy) / n**2, float(tau)))
    return ExperimentResult(
        columns=["beta_min", "n", "energy", "energy_over_n2", "tau"],
        rows=rows,
        parameters={"beta_mins": list(map(float, beta_mins)),
                    "n_list": list(map(int, n_list)),
                    "er_angle_deg": float(er_angle_deg)},
        diagnostics={"eta_rad": eta, "alpha": alpha,
                     "max_sweeps_used": max(sweeps_hist)},
    )


def energy_dist(cfg: ScenarioConfig, n_list=DEFAULT_DIST_N_LIST,
                er_angle_deg: float = 30.0) -> ExperimentResult:
    """Simulated energy moments against the closed-form two-moment model."""
    scheme = cfg.scheme_name
    if scheme == CSI_BASED:
        raise ValueError("energy-dist is a single-receiver experiment; "
                         "pick a csi_free scheme")
    er_angle = math.radians(er_angle_deg)
    kappa = cfg.kappa
    rows = []
    for n in n_list:
        n = int(n)
        ny, mus, pe = _incident(cfg, n)
        los = er_los_phases(n, ny, er_angle, cfg["geometry.spacing_ratio"])
        thetas, coup = _scheme_thetas(cfg, scheme, los, mus)
        amps = (np.ones(n) if coup is None
                else amplitude_of_phase(thetas, coup))
        ph = phasor_energy(thetas, amps, los, mus)
        scenario = EnergyScenario(los_phases=los, incident_phases=mus,
                                  kappa=kappa, incident_power=pe, coupling=coup)
        stats = simulate_energy(scenario, thetas, cfg.trials, cfg.seed)
        mean_cf = expected_energy(pe, kappa, ph.amp_sq_sum, ph.energy)
        var_cf = energy_variance(pe, kappa, ph.amp_sq_sum, ph.energy)
        q = stats.quantiles
        rows.append((n, scheme, stats.trials,
                     stats.mean, mean_cf, abs(stats.mean - mean_cf) / mean_cf,
                     stats.variance, var_cf, abs(stats.variance - var_cf) / var_cf,
                     q[0.05], q[0.25], q[0.5], q[0.75], q[0.95]))
    return ExperimentResult(
        columns=["n", "scheme", "trials", "mean_sim", "mean_closed",
                 "mean_rel_err", "var_sim", "var_closed", "var_rel_err",
                 "q05", "q25", "q50", "q75", "q95"],
        rows=rows,
        parameters={"n_list": list(map(int, n_list)),
                    "er_angle_deg": float(er_angle_deg)},
        diagnostics={"kappa": kappa},
    )


def energy_vs_distance(cfg: ScenarioConfig, distances=None,
                       er_angle_deg: float = 30.0) -> ExperimentResult:
    """Received and harvested power at the configured receiver angle vs range."""
    if distances is None:
        distances = np.linspace(0.5, cfg["link.charge_radius_m"], 8)
    scheme = cfg.scheme_name
    if scheme == CSI_BASED:
        raise ValueError("energy-vs-distance is a single-receiver experiment; "
                         "pick a csi_free scheme")
    n = cfg.n
    ny, mus, pe = _incident(cfg, n)
    er_angle = math.radians(er_angle_deg)
    los = er_los_phases(n, ny, er_angle, cfg["geometry.spacing_ratio"])
    thetas, coup = _scheme_thetas(cfg, scheme, los, mus)
    budget = cfg.budget()
    rows = []
    for r in distances:
        base = dict(los_phases=los, incident_phases=mus, kappa=cfg.kappa,
                    incident_power=pe, coupling=coup, physical=True,
                    receiver_distance_m=float(r), budget=budget)
        received = simulate_energy(EnergyScenario(eh=None, **base),
                                   thetas, cfg.trials, cfg.seed)
        harvested = simulate_energy(EnergyScenario(eh=cfg.eh(), **base),
                                    thetas, cfg.trials, cfg.seed)
        rows.append((float(r), received.mean, watts_to_dbm(received.mean),
                     harvested.mean, harvested.quantiles[0.5]))
    return ExperimentResult(
        columns=["distance_m", "mean_received_w", "mean_received_dbm",
                 "mean_harvested_w", "median_harvested_w"],
        rows=rows,
        parameters={"distances_m": [float(r) for r in distances],
                    "er_angle_deg": float(er_angle_deg)},
        diagnostics={"scheme": scheme, "n": n, "incident_power_w": pe},
    )


def beam_plan(cfg: ScenarioConfig, n_eff: int | None = None,
              delta: float | None = None) -> ExperimentResult:
    """Rotation schedule whose half-power lobes tile the service sector."""
    if n_eff is None:
        n_eff = cfg["geometry.ny"]
    schedule = plan_rotation(int(n_eff), cfg["geometry.spacing_ratio"],
                             delta=delta)
    half_pi = math.degrees(math.pi / 2)
    rows = []
    for i, (d_deg, lo_deg, hi_deg) in enumerate(schedule_rows(schedule)):
        at_boundary = lo_deg <= -half_pi + 1e-9 or hi_deg >= half_pi - 1e-9
        rows.append((i, d_deg, lo_deg, hi_deg, bool(at_boundary)))
    return ExperimentResult(
        columns=["index", "direction_deg", "lower_edge_deg", "upper_edge_deg",
                 "clamped"],
        rows=rows,
        parameters={"n_eff": int(n_eff),
                    "delta": None if delta is None else float(delta)},
        diagnostics={"directions": len(schedule.directions),
                     "delta_realized": schedule.delta,
                     "sin_half_width": schedule.sin_half_width,
                     "guaranteed_level": schedule.level,
                     "any_clamped": schedule.clamped},
    )


def heatmap(cfg: ScenarioConfig, angle_points: int = 37,
            radius_points: int = 8) -> ExperimentResult:
    """Polar map of mean harvested power under the configured scheme."""
    scheme = cfg.scheme_name
    cover = heatmap_experiment(
        cfg.n, scheme, cfg.trials, cfg.seed, m=cfg["geometry.m"],
        transmit_power=cfg.transmit_watts, kappa=cfg.kappa,
        coupling=cfg.coupling(), angles=cfg.angles(), budget=cfg.budget(),
        eh=cfg.eh(), angle_points=angle_points, radius_points=radius_points,
        spacing_ratio=cfg["geometry.spacing_ratio"], threads=cfg.threads)
    rows = []
    for ai, ang in enumerate(cover.angles):
        for ri, rad in enumerate(cover.radii):
            rows.append((float(ang), math.degrees(float(ang)), float(rad),
                         float(cover.grid[ai, ri])))
    return ExperimentResult(
        columns=["angle_rad", "angle_deg", "radius_m", "mean_harvested_w"],
        rows=rows,
        parameters={"angle_points": int(angle_points),
                    "radius_points": int(radius_points)},
        diagnostics={"scheme": scheme, "directions_used": cover.directions_used,
                     "n": cfg.n},
    )


def _compare_rows(cfg: ScenarioConfig, sweep_values,
                  fixed_n: int | None, fixed_k: int | None, schemes):
    rows = []
    fractions = {}
    for value in sweep_values:
        n = int(value) if fixed_n is None else fixed_n
        k = int(value) if fixed_k is None else fixed_k
        res = worst_case_compare(
            k, n, schemes, cfg.trials, cfg.seed, m=cfg["geometry.m"],
            transmit_power=cfg.transmit_watts, kappa=cfg.kappa,
            coupling=cfg.coupling(), angles=cfg.angles(),
            budget=cfg.budget(), eh=cfg.eh(), overhead=cfg.overhead(),
            spacing_ratio=cfg["geometry.spacing_ratio"], threads=cfg.threads)
        fractions[int(value)] = res.time_fraction
        for scheme in schemes:
            rows.append((int(value), scheme, res.worst[scheme],
                         res.time_fraction))
    return rows, fractions


def vs_n(cfg: ScenarioConfig, n_list=DEFAULT_VS_N_LIST,
         er_count: int | None = None, schemes=ALL_SCHEMES) -> ExperimentResult:
    """Worst-receiver harvested power as the surface grows, all schemes."""
    k = cfg.er_count if er_count is None else int(er_count)
    rows, fractions = _compare_rows(cfg, n_list, None, k, list(schemes))
    return ExperimentResult(
        columns=["n", "scheme", "worst_mean_harvested_w", "time_fraction"],
        rows=rows,
        parameters={"n_list": list(map(int, n_list)), "er_count": k,
                    "schemes": list(schemes)},
        diagnostics={"time_fractions": fractions, "trials": cfg.trials},
    )


def vs_k(cfg: ScenarioConfig, k_list=DEFAULT_VS_K_LIST,
         schemes=ALL_SCHEMES) -> ExperimentResult:
    """Worst-receiver harvested power as the receiver population grows."""
    rows, _ = _compare_rows(cfg, k_list, cfg.n, None, list(schemes))
    return ExperimentResult(
        columns=["er_count", "scheme", "worst_mean_harvested_w",
                 "time_fraction"],
        rows=rows,
        parameters={"k_list": list(map(int, k_list)), "n": cfg.n,
                    "schemes": list(schemes)},
        diagnostics={"trials": cfg.trials},
    )
