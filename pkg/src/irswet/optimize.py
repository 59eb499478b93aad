"""Phase-shift selection without receiver channel knowledge.

Two schemes are provided.  The direct scheme parks every element at the phase
of maximum reflection amplitude; it wins when fading is mostly diffuse.  The
search scheme runs an alternating per-element optimization of the
line-of-sight alignment objective and wins when fading carries a strong
deterministic component.  The closed-form moments and the scheme-selection
threshold quantify that trade without simulation.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import backend
from .hardware import CouplingParams, amplitude_of_phase, wrap_phase
from .streams import PHASE_INIT, substream

SCHEME_DM = "dm"
SCHEME_OM = "om"


@dataclass(frozen=True)
class PhasorEnergy:
    """Squared magnitude of the amplitude-weighted phasor sum.

    energy = cos_sum^2 + sin_sum^2 where cos_sum and sin_sum are the resolved
    components of sum_i beta_i exp(i(theta_i + phase_i)).  amp_sq_sum carries
    sum_i beta_i^2, the diffuse-power weight that appears alongside energy in
    the closed-form moments.
    """

    energy: float
    cos_sum: float
    sin_sum: float
    amp_sq_sum: float


@dataclass(frozen=True)
class AOConfig:
    """Knobs of the alternating per-element search."""

    grid_points: int = 720
    refine_tol: float = 1e-6
    sweep_tol: float = 1e-8
    max_sweeps: int = 200
    restarts: int = 4

    def __post_init__(self):
        if self.grid_points < 8:
            raise ValueError("grid_points must be >= 8")
        if self.refine_tol <= 0.0 or self.sweep_tol <= 0.0:
            raise ValueError("tolerances must be positive")
        if self.max_sweeps < 1:
            raise ValueError("max_sweeps must be >= 1")
        if self.restarts < 0:
            raise ValueError("restarts must be >= 0")


@dataclass(frozen=True)
class OptimResult:
    """Outcome of a phase-selection run.

    objective_trace holds the objective at the initial point and after each
    improving sweep of the winning restart; it is non-decreasing by
    construction and that is enforced here.
    """

    thetas: np.ndarray
    amplitudes: np.ndarray
    energy_parts: PhasorEnergy
    sweeps_used: int
    objective_trace: np.ndarray

    def __post_init__(self):
        trace = np.asarray(self.objective_trace, dtype=float)
        object.__setattr__(self, "objective_trace", trace)
        if trace.size > 1 and np.any(np.diff(trace) < 0.0):
            raise ValueError("objective trace must be non-decreasing")

    @property
    def energy(self) -> float:
        return float(self.energy_parts.energy)

    @property
    def amp_sq_sum(self) -> float:
        return float(self.energy_parts.amp_sq_sum)


def phasor_energy(thetas, amplitudes, los_phases, incident_phases) -> PhasorEnergy:
    """Alignment objective of a phase configuration against a phase front."""
    thetas = np.asarray(thetas, dtype=float)
    amplitudes = np.asarray(amplitudes, dtype=float)
    los_phases = np.asarray(los_phases, dtype=float)
    incident_phases = np.asarray(incident_phases, dtype=float)
    if not thetas.shape == amplitudes.shape == los_phases.shape == incident_phases.shape:
        raise ValueError("thetas, amplitudes and phase vectors must share one shape")
    total = thetas + los_phases + incident_phases
    cos_sum = float(np.sum(amplitudes * np.cos(total)))
    sin_sum = float(np.sum(amplitudes * np.sin(total)))
    return PhasorEnergy(energy=cos_sum**2 + sin_sum**2, cos_sum=cos_sum,
                        sin_sum=sin_sum, amp_sq_sum=float(np.sum(amplitudes**2)))


def _prepare_grid(params: CouplingParams, cfg: AOConfig):
    grid = np.linspace(-np.pi, np.pi, cfg.grid_points, endpoint=False)
    return (grid, amplitude_of_phase(grid, params),
            np.cos(grid), np.sin(grid))


def _ao_run(thetas0, psis, params, cfg, tables):
    """Sweep one start to convergence; returns (thetas, trace, sweeps)."""
    grid, grid_beta, grid_cos, grid_sin = tables
    thetas = np.array(thetas0, dtype=float)
    uv = np.empty(2)

    def refresh():
        # fresh pairwise sums kill the roundoff drift of the in-place updates
        amps = amplitude_of_phase(thetas, params)
        total = thetas + psis
        uv[0] = np.sum(amps * np.cos(total))
        uv[1] = np.sum(amps * np.sin(total))
        return uv[0] ** 2 + uv[1] ** 2

    val = refresh()
    trace = [val]
    sweeps = 0
    for _ in range(cfg.max_sweeps):
        backend.ao_sweep(thetas, psis, params.beta_min, params.eta, params.alpha,
                         grid, grid_beta, grid_cos, grid_sin, cfg.refine_tol, uv)
        sweeps += 1
        new_val = refresh()
        if new_val > val:
            trace.append(new_val)
        if new_val <= val * (1.0 + cfg.sweep_tol):
            break
        val = new_val
    return thetas, np.asarray(trace), sweeps


def dm_solve(params: CouplingParams, n: int, los_phases=None,
             incident_phases=None) -> OptimResult:
    """Direct scheme: every element at the phase of maximum amplitude.

    Needs no channel knowledge at all.  The energy field is evaluated against
    the given phase front when one is supplied (amp_sq_sum is exactly n either
    way); without one, the phasor components are NaN.
    """
    if n < 1:
        raise ValueError("element count must be >= 1")
    theta = float(wrap_phase(params.eta + np.pi / 2.0))
    thetas = np.full(n, theta)
    amplitudes = amplitude_of_phase(thetas, params)
    if los_phases is not None and incident_phases is not None:
        energy = phasor_energy(thetas, amplitudes, los_phases, incident_phases)
        trace = np.array([energy.energy])
    else:
        energy = PhasorEnergy(energy=np.nan, cos_sum=np.nan, sin_sum=np.nan,
                              amp_sq_sum=float(n))
        trace = np.empty(0)
    return OptimResult(thetas=thetas, amplitudes=amplitudes,
                       energy_parts=energy, sweeps_used=0,
                       objective_trace=trace)


def om_solve(params: CouplingParams, los_phases, incident_phases,
             cfg: AOConfig | None = None, seed: int = 0, stream_tag: int = 0,
             threads: int = 1) -> OptimResult:
    """Search scheme: alternating per-element maximization of the alignment.

    Runs cfg.restarts uniform-random starts plus one start at the ideal
    alignment thetas = -(los + incident) and keeps the best end value.  The
    random starts are reproducible functions of (seed, stream_tag, restart).
    """
    cfg = cfg or AOConfig()
    psis = np.asarray(los_phases, dtype=float) + np.asarray(incident_phases, dtype=float)
    if psis.ndim != 1 or psis.size == 0:
        raise ValueError("phase vectors must be non-empty and 1-d")
    n = psis.shape[0]
    tables = _prepare_grid(params, cfg)
    starts = [np.asarray(wrap_phase(-psis), dtype=float)]
    for r in range(cfg.restarts):
        gen = substream(seed, PHASE_INIT, stream_tag, r)
        starts.append(gen.uniform(-np.pi, np.pi, n))

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            runs = list(pool.map(lambda s: _ao_run(s, psis, params, cfg, tables), starts))
    else:
        runs = [_ao_run(s, psis, params, cfg, tables) for s in starts]

    best = max(range(len(runs)), key=lambda i: runs[i][1][-1])
    thetas, trace, sweeps = runs[best]
    thetas = wrap_phase(thetas)
    amplitudes = amplitude_of_phase(thetas, params)
    energy = phasor_energy(thetas, amplitudes, np.zeros(n), psis)
    return OptimResult(thetas=thetas, amplitudes=amplitudes,
                       energy_parts=energy, sweeps_used=sweeps,
                       objective_trace=trace)


def kappa_boundary(n: int, amp_sq_sum: float, energy: float) -> float:
    """Fading-factor threshold below which the direct scheme wins.

    Equates the two schemes' expected energies: the direct scheme keeps full
    amplitude (amp_sq_sum = n) but random alignment, the search scheme trades
    amplitude for alignment.  Returns +inf when the search gains no alignment
    (energy <= n), in which case the direct scheme wins at every fading factor.
    """
    if n < 1:
        raise ValueError("element count must be >= 1")
    if amp_sq_sum <= 0.0 or amp_sq_sum > n * (1.0 + 1e-12):
        raise ValueError("amp_sq_sum must lie in (0, n]")
    if energy < 0.0:
        raise ValueError("energy must be >= 0")
    if energy <= n:
        return float("inf")
    return (n - amp_sq_sum) / (energy - n)


def select_scheme(kappa: float, boundary: float) -> str:
    """Pick the better scheme at fading factor kappa (ties go to the direct one)."""
    if kappa < 0.0:
        raise ValueError("kappa must be >= 0")
    return SCHEME_DM if kappa <= boundary else SCHEME_OM


def expected_energy(incident_power: float, kappa: float, amp_sq_sum: float,
                    energy: float) -> float:
    """Mean received energy under the two-moment fading model."""
    _check_moment_args(incident_power, kappa, amp_sq_sum, energy)
    scale = incident_power * amp_sq_sum / (2.0 * (1.0 + kappa))
    return scale * (2.0 + 2.0 * kappa * energy / amp_sq_sum)


def energy_variance(incident_power: float, kappa: float, amp_sq_sum: float,
                    energy: float) -> float:
    """Variance of received energy under the two-moment fading model."""
    _check_moment_args(incident_power, kappa, amp_sq_sum, energy)
    scale = incident_power * amp_sq_sum / (2.0 * (1.0 + kappa))
    return scale**2 * (4.0 + 8.0 * kappa * energy / amp_sq_sum)


def _check_moment_args(incident_power, kappa, amp_sq_sum, energy):
    if incident_power < 0.0:
        raise ValueError("incident_power must be >= 0")
    if kappa < 0.0:
        raise ValueError("kappa must be >= 0")
    if amp_sq_sum <= 0.0:
        raise ValueError("amp_sq_sum must be positive")
    if energy < 0.0:
        raise ValueError("energy must be >= 0")


def fit_tau(points) -> float:
    """Least-squares slope of energy against squared element count.

    points is an iterable of (n, energy) pairs; the fit is energy ~ tau * n^2
    through the origin, so tau = sum(energy * n^2) / sum(n^4).
    """
    pts = [(int(n), float(e)) for n, e in points]
    if not pts:
        raise ValueError("need at least one (n, energy) point")
    if any(n < 1 for n, _ in pts):
        raise ValueError("element counts must be positive")
    num = sum(e * n**2 for n, e in pts)
    den = sum(float(n) ** 4 for n, _ in pts)
    return num / den
