"""Phase selection with full channel knowledge, for comparison runs.

Given the cascaded per-element responses of every receiver, the surface can
maximize the worst receiver's energy directly.  The solver is coordinate
ascent on the exact min objective (grid scan plus golden refinement per
element, multiple restarts); an exhaustive lattice search over quantized
phases serves as an independent optimality oracle at small sizes.
"""

from __future__ import annotations

import itertools
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import backend
from .hardware import wrap_phase
from .optimize import AOConfig
from .streams import BASELINE_INIT, substream

BRUTE_LIMIT = 100_000_000
_CHUNK_ENTRIES = 4_000_000


@dataclass(frozen=True)
class ErSet:
    """Cascaded channels of the receivers under service, shape (k, n).

    Entry (k, i) is the end-to-end response of surface element i toward
    receiver k, including the incident-field phase.  positions, when known,
    carries (angle, radius) rows for reporting.
    """

    channels: np.ndarray
    positions: np.ndarray | None = None

    def __post_init__(self):
        channels = np.ascontiguousarray(self.channels, dtype=complex)
        if channels.ndim != 2 or channels.size == 0:
            raise ValueError("channels must be a non-empty (k, n) array")
        object.__setattr__(self, "channels", channels)
        if self.positions is not None:
            positions = np.asarray(self.positions, dtype=float)
            if positions.shape != (channels.shape[0], 2):
                raise ValueError("positions must be (k, 2) [angle, radius] rows")
            object.__setattr__(self, "positions", positions)

    @property
    def k(self) -> int:
        return self.channels.shape[0]

    @property
    def n(self) -> int:
        return self.channels.shape[1]


@dataclass(frozen=True)
class MaxMinResult:
    """Outcome of a worst-receiver maximization."""

    thetas: np.ndarray
    min_energy: float
    per_er: np.ndarray
    sweeps_used: int
    objective_trace: np.ndarray

    def __post_init__(self):
        trace = np.asarray(self.objective_trace, dtype=float)
        object.__setattr__(self, "objective_trace", trace)
        if trace.size > 1 and np.any(np.diff(trace) < 0.0):
            raise ValueError("objective trace must be non-decreasing")
        if not math.isclose(self.min_energy, float(np.min(self.per_er)),
                            rel_tol=1e-12, abs_tol=1e-12):
            raise ValueError("min_energy must equal the smallest per_er entry")


def per_er_energies(channels: np.ndarray, thetas: np.ndarray) -> np.ndarray:
    """|sum_i exp(i theta_i) c_{k,i}|^2 for every receiver."""
    sums = channels @ np.exp(1j * np.asarray(thetas, dtype=float))
    return np.abs(sums) ** 2


def _mm_run(thetas0, channels, cfg, tables):
    grid, grid_cos, grid_sin = tables
    thetas = np.array(thetas0, dtype=float)
    sums = np.empty(channels.shape[0], dtype=complex)

    def refresh():
        sums[:] = channels @ np.exp(1j * thetas)
        return float(np.min(sums.real**2 + sums.imag**2))

    val = refresh()
    trace = [val]
    sweeps = 0
    for _ in range(cfg.max_sweeps):
        backend.maxmin_sweep(thetas, channels, grid, grid_cos, grid_sin,
                             cfg.refine_tol, sums)
        sweeps += 1
        new_val = refresh()
        if new_val > val:
            trace.append(new_val)
        if new_val <= val * (1.0 + cfg.sweep_tol):
            break
        val = new_val
    return thetas, np.asarray(trace), sweeps


_KICK_SCALES = (1.5, 0.8, 0.4, 0.2, 0.1)
_SOFTMIN_RUNS = 8
_SOFTMIN_ITERS = 400
_ALIGNED_START_CAP = 8
# path offset separating softmin-init draws from plain restart draws
_SOFTMIN_PATH_BASE = 500


def _softmin_ascent(channels: np.ndarray, x: np.ndarray,
                    iters: int = _SOFTMIN_ITERS) -> np.ndarray:
    """Phase-only gradient ascent on a softmin of the receiver energies.

    The sharpness anneals upward so early iterations lift the average while
    late ones concentrate on the current worst receivers.  Each step projects
    the weighted-sum gradient back onto unit modulus, so the iterate stays
    feasible throughout.  Returns the phase vector with the best exact min
    energy seen along the way; it is a cheap global-shape start for the exact
    coordinate ascent, not a replacement for it.
    """
    best = x
    s = channels @ x
    best_val = float(np.min(s.real**2 + s.imag**2))
    for t in range(iters):
        s = channels @ x
        e = s.real**2 + s.imag**2
        scale = e.mean() or 1.0
        beta = 2.0 + 30.0 * t / iters
        p = np.exp(-beta * (e - e.min()) / scale)
        p /= p.sum()
        g = channels.conj().T @ (p * s)
        x = np.exp(1j * np.angle(g))
        s = channels @ x
        val = float(np.min(s.real**2 + s.imag**2))
        if val > best_val:
            best_val, best = val, x
    return wrap_phase(np.angle(best))


def maxmin_solve(ers: ErSet, cfg: AOConfig | None = None, seed: int = 0,
                 stream_tag: int = 0, threads: int = 1) -> MaxMinResult:
    """Maximize the worst receiver's energy by per-element coordinate ascent.

    The min of several quadrics has many basins, so the ascent is run from a
    mix of start families and the best end value wins: per-receiver aligned
    phases (capped, exact for a single receiver), softmin gradient starts
    that shape all receivers jointly before the exact ascent polishes them,
    and cfg.restarts uniform-random draws.  Small surfaces are the worst
    offenders relative to their cost, so the default restart count is
    size-aware: 64 when n <= 16, 32 up to n = 64, 16 beyond.  The winner is
    then kicked a few times with shrinking phase noise and re-ascended, which
    escapes shallow basins.
    """
    if cfg is None:
        n_ = ers.n
        cfg = AOConfig(restarts=64 if n_ <= 16 else (32 if n_ <= 64 else 16))
    channels = ers.channels
    n = ers.n
    grid = np.linspace(-np.pi, np.pi, cfg.grid_points, endpoint=False)
    tables = (grid, np.cos(grid), np.sin(grid))
    starts = [wrap_phase(-np.angle(channels[k]))
              for k in range(min(ers.k, _ALIGNED_START_CAP))]
    for r in range(_SOFTMIN_RUNS):
        if r == 0:
            x0 = np.exp(-1j * np.angle(channels.sum(axis=0)))
        else:
            gen = substream(seed, BASELINE_INIT, stream_tag, _SOFTMIN_PATH_BASE + r)
            x0 = np.exp(1j * gen.uniform(-np.pi, np.pi, n))
        starts.append(_softmin_ascent(channels, x0))
    for r in range(cfg.restarts):
        gen = substream(seed, BASELINE_INIT, stream_tag, r)
        starts.append(gen.uniform(-np.pi, np.pi, n))

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            runs = list(pool.map(lambda s: _mm_run(s, channels, cfg, tables), starts))
    else:
        runs = [_mm_run(s, channels, cfg, tables) for s in starts]

    best = max(range(len(runs)), key=lambda i: runs[i][1][-1])
    thetas, trace, sweeps = runs[best]

    for kick, scale in enumerate(_KICK_SCALES):
        gen = substream(seed, BASELINE_INIT, stream_tag, cfg.restarts + 1 + kick)
        kicked = thetas + gen.normal(0.0, scale, n)
        k_thetas, k_trace, k_sweeps = _mm_run(kicked, channels, cfg, tables)
        if k_trace[-1] > trace[-1]:
            thetas, trace, sweeps = k_thetas, k_trace, k_sweeps

    thetas = wrap_phase(thetas)
    per_er = per_er_energies(channels, thetas)
    return MaxMinResult(thetas=thetas, min_energy=float(np.min(per_er)),
                        per_er=per_er, sweeps_used=sweeps, objective_trace=trace)


def brute_force_maxmin(ers: ErSet, levels: int) -> MaxMinResult:
    """Exhaustive worst-receiver maximum over a uniform phase lattice.

    Every element takes one of `levels` phases 2*pi*l/levels.  A common
    lattice rotation maps the lattice onto itself and leaves every energy
    unchanged, so element 0 is pinned to lattice phase 0 without losing the
    optimum value; the remaining levels**(n-1) points are enumerated exactly.
    """
    if levels < 2:
        raise ValueError("levels must be >= 2")
    channels = ers.channels
    k, n = channels.shape
    total = levels**n
    if total > BRUTE_LIMIT:
        raise ValueError(
            f"lattice of {levels}**{n} = {float(total):.3e} points exceeds the "
            f"{BRUTE_LIMIT:.0e}-point cap; shrink n or levels")

    steps = np.exp(2j * np.pi * np.arange(levels) / levels)
    tables = [np.outer(steps, channels[:, j]) for j in range(1, n)]

    # peel leading free elements into a python loop so the broadcast grid
    # stays small; the rest are enumerated as one flat block
    inner = n - 1
    while inner > 0 and levels**inner * k > _CHUNK_ENTRIES:
        inner -= 1
    outer = n - 1 - inner

    inner_sum = np.zeros((1, k), dtype=complex)
    for tbl in tables[outer:]:
        inner_sum = (inner_sum[:, None, :] + tbl[None, :, :]).reshape(-1, k)

    base = channels[:, 0].copy()
    best_val = -1.0
    best_combo: tuple[int, ...] = ()
    best_flat = 0
    for combo in itertools.product(range(levels), repeat=outer):
        offset = base.copy()
        for d, idx in enumerate(combo):
            offset += tables[d][idx]
        cand = inner_sum + offset[None, :]
        vals = np.min(cand.real**2 + cand.imag**2, axis=1)
        flat = int(np.argmax(vals))
        if float(vals[flat]) > best_val:
            best_val = float(vals[flat])
            best_combo = combo
            best_flat = flat

    inner_idx = np.unravel_index(best_flat, (levels,) * inner) if inner else ()
    indices = (0,) + best_combo + tuple(int(i) for i in inner_idx)
    thetas = wrap_phase(2.0 * np.pi * np.asarray(indices, dtype=float) / levels)
    per_er = per_er_energies(channels, thetas)
    return MaxMinResult(thetas=thetas, min_energy=float(np.min(per_er)),
                        per_er=per_er, sweeps_used=0,
                        objective_trace=np.empty(0))
