"""Monte Carlo evaluation of harvested energy over the fading channel.

Fading draws come from counter-based streams (see irswet.streams), so every
(seed, trial, element) triple maps to a fixed random value regardless of chunk
sizes or evaluation order.  Energies can be reported in scaled units (incident
power times squared channel sum) or pushed through the link budget and the
harvester into watts.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .beamplan import CoverageMap, RotationSchedule, coverage_map, plan_rotation
from .baseline import ErSet, maxmin_solve
from .geometry import AngleSet, ArrayGeometry, er_los_phases, pb_irs_channel
from .hardware import CouplingParams, amplitude_of_phase, wrap_phase
from .optimize import AOConfig, om_solve
from .precoding import incident_field, mrt
from .streams import FADING, PLACEMENT, block_normals, substream

_QUANTS = (0.05, 0.25, 0.5, 0.75, 0.95)
_CHUNK_ENTRIES = 1 << 22


def _chunk_rows(n: int) -> int:
    """Trial rows per chunk, capped so draw buffers stay near 64 MB."""
    return max(1024, _CHUNK_ENTRIES // max(n, 1))

CSI_FREE_IDEAL = "csi_free_ideal"
CSI_FREE_PRACTICAL = "csi_free_practical"
CSI_BASED = "csi_based"
ALL_SCHEMES = (CSI_FREE_IDEAL, CSI_FREE_PRACTICAL, CSI_BASED)


@dataclass(frozen=True)
class LinkBudget:
    """Antenna gains and distance-decay model of the two hops."""

    ref_loss_db: float = 31.6
    beacon_surface_exponent: float = 2.2
    surface_receiver_exponent: float = 2.7
    beacon_gain_dbi: float = 15.0
    element_gain_dbi: float = 3.0
    beacon_surface_distance_m: float = 20.0
    charge_radius_m: float = 4.0

    def __post_init__(self):
        if self.beacon_surface_distance_m <= 0.0 or self.charge_radius_m <= 0.0:
            raise ValueError("distances must be positive")


@dataclass(frozen=True)
class EhModel:
    """Piecewise-linear harvester: dead below sensitivity, flat above saturation."""

    conversion: float = 0.45
    sensitivity_dbm: float = -24.0
    saturation_dbm: float = -8.0

    def __post_init__(self):
        if not 0.0 < self.conversion <= 1.0:
            raise ValueError("conversion must lie in (0, 1]")
        if self.sensitivity_dbm >= self.saturation_dbm:
            raise ValueError("sensitivity must lie below saturation")


@dataclass(frozen=True)
class OverheadModel:
    """Coherence-block accounting for schemes that must train first."""

    coherence_symbols: int = 196

    def __post_init__(self):
        if self.coherence_symbols < 1:
            raise ValueError("coherence_symbols must be >= 1")

    def pilot_symbols(self, n: int) -> int:
        return n + 1

    def energy_fraction(self, n: int) -> float:
        """Fraction of the block left for transfer after training n elements."""
        frac = (self.coherence_symbols - self.pilot_symbols(n)) / self.coherence_symbols
        return max(0.0, frac)


@dataclass(frozen=True)
class EnergyStats:
    """Summary statistics of per-trial energy."""

    mean: float
    variance: float
    quantiles: dict[float, float]
    trials: int
    seed: int


@dataclass(frozen=True)
class EnergyScenario:
    """Everything simulate_energy needs besides the phase configuration."""

    los_phases: np.ndarray
    incident_phases: np.ndarray
    kappa: float
    incident_power: float
    coupling: CouplingParams | None = None
    physical: bool = False
    receiver_distance_m: float = 4.0
    budget: LinkBudget = field(default_factory=LinkBudget)
    eh: EhModel | None = field(default_factory=EhModel)

    def __post_init__(self):
        los = np.asarray(self.los_phases, dtype=float)
        inc = np.asarray(self.incident_phases, dtype=float)
        if los.shape != inc.shape or los.ndim != 1 or los.size == 0:
            raise ValueError("phase vectors must be non-empty, 1-d, equal shape")
        object.__setattr__(self, "los_phases", los)
        object.__setattr__(self, "incident_phases", inc)
        if self.kappa < 0.0:
            raise ValueError("kappa must be >= 0")
        if self.incident_power <= 0.0:
            raise ValueError("incident_power must be positive")

    @property
    def n(self) -> int:
        return self.los_phases.shape[0]


def dbm_to_watts(dbm: float) -> float:
    return 10.0 ** (dbm / 10.0) * 1e-3


def watts_to_dbm(watts: float) -> float:
    if watts <= 0.0:
        raise ValueError("power must be positive")
    return 10.0 * math.log10(watts / 1e-3)


def path_loss_linear(distance_m: float, exponent: float, ref_loss_db: float = 31.6) -> float:
    """Linear power gain at distance_m for the given decay exponent."""
    if distance_m <= 0.0:
        raise ValueError("distance must be positive")
    if exponent < 0.0:
        raise ValueError("exponent must be >= 0")
    return 10.0 ** (-ref_loss_db / 10.0) * distance_m ** (-exponent)


def harvest(p_in_watts, model: EhModel):
    """Harvested power for input power(s): dead zone, linear region, saturation."""
    p = np.asarray(p_in_watts, dtype=float)
    lo = dbm_to_watts(model.sensitivity_dbm)
    hi = dbm_to_watts(model.saturation_dbm)
    out = model.conversion * np.clip(p, None, hi)
    out = np.where(p < lo, 0.0, out)
    return out if out.ndim else float(out)


def chain_gain(budget: LinkBudget, receiver_distance_m: float) -> float:
    """End-to-end deterministic power gain excluding the surface itself."""
    g_beacon = 10.0 ** (budget.beacon_gain_dbi / 10.0)
    g_element = 10.0 ** (budget.element_gain_dbi / 10.0)
    hop1 = path_loss_linear(budget.beacon_surface_distance_m,
                            budget.beacon_surface_exponent, budget.ref_loss_db)
    hop2 = path_loss_linear(receiver_distance_m,
                            budget.surface_receiver_exponent, budget.ref_loss_db)
    return g_beacon * g_element * hop1 * hop2


def _config_coeffs(thetas, scenario_like_incident, coupling) -> np.ndarray:
    """Per-element complex weights beta_i exp(i(theta_i + incident_i))."""
    thetas = np.asarray(thetas, dtype=float)
    if coupling is None:
        amps = np.ones_like(thetas)
    else:
        amps = amplitude_of_phase(thetas, coupling)
    return amps * np.exp(1j * (thetas + np.asarray(scenario_like_incident, dtype=float)))


def simulate_energy(scenario: EnergyScenario, thetas, trials: int, seed: int) -> EnergyStats:
    """Monte Carlo moments and quantiles of the energy at one receiver.

    Per trial the receiver channel is one Rician draw; the energy is the
    incident power times the squared magnitude of the weighted channel sum.
    With scenario.physical, the link budget converts it to received watts and
    the harvester (when present) is applied before aggregation.
    """
    if trials < 2:
        raise ValueError("need at least 2 trials for a variance")
    thetas = np.asarray(thetas, dtype=float)
    if thetas.shape != scenario.los_phases.shape:
        raise ValueError("thetas must match the scenario's element count")
    coeffs = _config_coeffs(thetas, scenario.incident_phases, scenario.coupling)
    kap = scenario.kappa
    los_part = complex(np.sum(coeffs * np.sqrt(kap / (1.0 + kap))
                              * np.exp(1j * scenario.los_phases)))
    scatter_w = coeffs / np.sqrt(1.0 + kap)

    values = np.empty(trials)
    n = scenario.n
    step = _chunk_rows(n)
    for start in range(0, trials, step):
        count = min(step, trials - start)
        draws = block_normals(seed, (FADING,), start, count, n)
        sums = draws @ scatter_w + los_part
        values[start:start + count] = sums.real**2 + sums.imag**2
    values *= scenario.incident_power

    if scenario.physical:
        values *= chain_gain(scenario.budget, scenario.receiver_distance_m)
        if scenario.eh is not None:
            values = harvest(values, scenario.eh)

    quants = np.quantile(values, _QUANTS)
    return EnergyStats(mean=float(values.mean()),
                       variance=float(values.var(ddof=1)),
                       quantiles={q: float(v) for q, v in zip(_QUANTS, quants)},
                       trials=trials, seed=seed)


def square_ish_grid(n: int) -> tuple[int, int]:
    """Factor n into (nx, ny) with ny the divisor closest to sqrt(n)."""
    if n < 1:
        raise ValueError("n must be >= 1")
    root = math.isqrt(n)
    best = 1
    for d in range(1, n + 1):
        if d * d > n:
            break
        if n % d == 0:
            best = d
    # best is the largest divisor <= sqrt(n); compare against its partner
    partner = n // best
    ny = best if (root - best) <= (partner - root) else partner
    return n // ny, ny


@dataclass(frozen=True)
class CompareResult:
    """Worst-receiver outcome of the schemes under comparison."""

    worst: dict[str, float]
    per_er: dict[str, np.ndarray]
    positions: np.ndarray
    time_fraction: float
    directions: np.ndarray
    incident_power: float
    trials: int
    seed: int


def worst_case_compare(er_count: int, n: int, schemes, trials: int, seed: int, *,
                       m: int = 4, transmit_power: float = 1.0, kappa: float = 2.0,
                       coupling: CouplingParams | None = None,
                       angles: AngleSet | None = None,
                       budget: LinkBudget | None = None,
                       eh: EhModel | None = None,
                       overhead: OverheadModel | None = None,
                       spacing_ratio: float = 0.5,
                       cfg: AOConfig | None = None,
                       threads: int = 1) -> CompareResult:
    """Worst-receiver mean harvested power per block for each scheme.

    Receivers are dropped uniformly over the half-disc of the charge radius
    (fixed by seed).  Schemes without channel knowledge rotate through the
    planned beam directions, splitting each block evenly; the channel-aware
    baseline spends the pilot budget first, then serves the whole block with
    the max-min configuration designed on the receivers' line-of-sight
    responses.
    """
    schemes = list(schemes)
    unknown = set(schemes) - set(ALL_SCHEMES)
    if unknown:
        raise ValueError(f"unknown schemes: {sorted(unknown)}")
    if er_count < 1:
        raise ValueError("er_count must be >= 1")
    budget = budget or LinkBudget()
    eh = eh or EhModel()
    overhead = overhead or OverheadModel()
    angles = angles or AngleSet(azimuth=np.pi / 4, elevation=np.pi / 3,
                                spacing_ratio=spacing_ratio)

    nx, ny = square_ish_grid(n)
    geom = ArrayGeometry(m=m, nx=nx, ny=ny, spacing_ratio=spacing_ratio)
    field_ = incident_field(pb_irs_channel(geom, angles),
                            mrt(angles.tx_step, m, transmit_power))
    mus = field_.phases
    pe = field_.power

    place = substream(seed, PLACEMENT)
    er_angles = place.uniform(-np.pi / 2, np.pi / 2, er_count)
    er_radii = budget.charge_radius_m * np.sqrt(place.uniform(0.0, 1.0, er_count))
    positions = np.column_stack([er_angles, er_radii])
    er_phases = np.stack([er_los_phases(n, ny, a, spacing_ratio) for a in er_angles])

    schedule = plan_rotation(ny, spacing_ratio)
    directions = schedule.directions

    # one coefficient column per configuration each scheme will use
    coeff_list: list[np.ndarray] = []
    spans: dict[str, slice] = {}
    if CSI_FREE_IDEAL in schemes:
        lo = len(coeff_list)
        for d in directions:
            target = er_los_phases(n, ny, float(d), spacing_ratio)
            thetas = wrap_phase(-(target + mus))
            coeff_list.append(_config_coeffs(thetas, mus, None))
        spans[CSI_FREE_IDEAL] = slice(lo, len(coeff_list))
    if CSI_FREE_PRACTICAL in schemes:
        coup = coupling or CouplingParams(beta_min=0.2, eta=0.43 * np.pi, alpha=1.6)
        lo = len(coeff_list)
        for di, d in enumerate(directions):
            target = er_los_phases(n, ny, float(d), spacing_ratio)
            sol = om_solve(coup, target, mus, cfg, seed=seed, stream_tag=di,
                           threads=threads)
            coeff_list.append(_config_coeffs(sol.thetas, mus, coup))
        spans[CSI_FREE_PRACTICAL] = slice(lo, len(coeff_list))
    if CSI_BASED in schemes:
        # design vectors carry the per-receiver line-of-sight amplitude so the
        # max-min balances received power, not bare phase alignment
        amps = np.array([np.sqrt(pe * chain_gain(budget, float(r)) * kappa / (1.0 + kappa))
                         for r in er_radii])
        design = amps[:, None] * np.exp(1j * (er_phases + mus[None, :]))
        sol = maxmin_solve(ErSet(design, positions), cfg, seed=seed,
                           threads=threads)
        lo = len(coeff_list)
        coeff_list.append(_config_coeffs(sol.thetas, mus, None))
        spans[CSI_BASED] = slice(lo, len(coeff_list))

    coeffs = np.stack(coeff_list)  # (c, n)
    fraction = overhead.energy_fraction(n)
    per_er = {s: np.empty(er_count) for s in schemes}

    for k in range(er_count):
        gain = chain_gain(budget, float(er_radii[k]))
        los_parts = coeffs @ (np.sqrt(kappa / (1.0 + kappa)) * np.exp(1j * er_phases[k]))
        scatter_w = coeffs / np.sqrt(1.0 + kappa)
        mean_acc = np.zeros(coeffs.shape[0])
        step = _chunk_rows(n)
        for start in range(0, trials, step):
            count = min(step, trials - start)
            draws = block_normals(seed, (FADING, k), start, count, n)
            sums = draws @ scatter_w.T + los_parts[None, :]
            received = pe * gain * (sums.real**2 + sums.imag**2)
            mean_acc += harvest(received, eh).sum(axis=0)
        mean_harv = mean_acc / trials  # (c,) per-configuration mean over trials
        for s in schemes:
            block = mean_harv[spans[s]]
            if s == CSI_BASED:
                per_er[s][k] = float(block[0]) * fraction
            else:
                per_er[s][k] = float(block.mean())

    worst = {s: float(np.min(per_er[s])) for s in schemes}
    return CompareResult(worst=worst, per_er=per_er, positions=positions,
                         time_fraction=fraction, directions=directions,
                         incident_power=pe, trials=trials, seed=seed)


def heatmap_experiment(n: int, scheme: str, trials: int, seed: int, *,
                       m: int = 4, transmit_power: float = 1.0, kappa: float = 2.0,
                       coupling: CouplingParams | None = None,
                       angles: AngleSet | None = None,
                       budget: LinkBudget | None = None,
                       eh: EhModel | None = None,
                       angle_points: int = 37, radius_points: int = 8,
                       min_radius_m: float = 0.5,
                       spacing_ratio: float = 0.5,
                       cfg: AOConfig | None = None,
                       threads: int = 1) -> CoverageMap:
    """Mean harvested power over a polar grid around the surface.

    Rotation schemes average their per-direction maps with equal time weights;
    the direct scheme holds one configuration, so its map is a single tile.
    """
    if scheme not in {"dm", CSI_FREE_IDEAL, CSI_FREE_PRACTICAL}:
        raise ValueError(f"unknown heatmap scheme {scheme!r}")
    budget = budget or LinkBudget()
    eh = eh or EhModel()
    coup = coupling or CouplingParams(beta_min=0.2, eta=0.43 * np.pi, alpha=1.6)
    angles = angles or AngleSet(azimuth=np.pi / 4, elevation=np.pi / 3,
                                spacing_ratio=spacing_ratio)

    nx, ny = square_ish_grid(n)
    geom = ArrayGeometry(m=m, nx=nx, ny=ny, spacing_ratio=spacing_ratio)
    field_ = incident_field(pb_irs_channel(geom, angles),
                            mrt(angles.tx_step, m, transmit_power))
    mus = field_.phases
    pe = field_.power

    grid_angles = np.linspace(-np.pi / 2, np.pi / 2, angle_points)
    grid_radii = np.linspace(min_radius_m, budget.charge_radius_m, radius_points)
    gains = np.array([chain_gain(budget, float(r)) for r in grid_radii])

    schedule = plan_rotation(ny, spacing_ratio)
    if scheme == "dm":
        configs = [_config_coeffs(np.full(n, wrap_phase(coup.eta + np.pi / 2)), mus, coup)]
    elif scheme == CSI_FREE_IDEAL:
        configs = []
        for d in schedule.directions:
            target = er_los_phases(n, ny, float(d), spacing_ratio)
            configs.append(_config_coeffs(wrap_phase(-(target + mus)), mus, None))
    else:
        configs = []
        for di, d in enumerate(schedule.directions):
            target = er_los_phases(n, ny, float(d), spacing_ratio)
            sol = om_solve(coup, target, mus, cfg, seed=seed, stream_tag=di,
                           threads=threads)
            configs.append(_config_coeffs(sol.thetas, mus, coup))
    coeffs = np.stack(configs)  # (v, n)

    # one map per configuration; fading is shared across configurations and
    # radii within a grid angle (the channel model depends only on the angle)
    tiles = np.empty((coeffs.shape[0], angle_points, radius_points))
    scatter_w = coeffs / np.sqrt(1.0 + kappa)
    for ai, ang in enumerate(grid_angles):
        phases = er_los_phases(n, ny, float(ang), spacing_ratio)
        los_parts = coeffs @ (np.sqrt(kappa / (1.0 + kappa)) * np.exp(1j * phases))
        acc = np.zeros((coeffs.shape[0], radius_points))
        step = _chunk_rows(n)
        for start in range(0, trials, step):
            count = min(step, trials - start)
            draws = block_normals(seed, (FADING, ai), start, count, n)
            sums = draws @ scatter_w.T + los_parts[None, :]
            energy = pe * (sums.real**2 + sums.imag**2)  # (count, v)
            received = energy[:, :, None] * gains[None, None, :]
            acc += harvest(received, eh).sum(axis=0)
        tiles[:, ai, :] = acc / trials

    if scheme == "dm":
        return CoverageMap(grid=tiles[0], angles=grid_angles, radii=grid_radii,
                           directions_used=1)
    lookup = {float(d): tiles[i] for i, d in enumerate(schedule.directions)}
    return coverage_map(schedule, lambda d: lookup[d], grid_angles, grid_radii)
