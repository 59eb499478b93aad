"""Beam-rotation planning from the array factor alone.

A surface aligned to a pointing direction acts on receivers at other angles
through the classical line-array power pattern of its y-aperture.  The planner
spaces pointing directions so consecutive half-power beams touch in sine
space, where the beamwidth is constant; a small slack delta on the accepted
gain level lets a whole number of beams tile the half space evenly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, NamedTuple

import numpy as np

HALF_POWER = 1.0 / math.sqrt(2.0)
_EDGE_TOL = 1e-9


class BeamEdges(NamedTuple):
    lower: float
    upper: float
    clamped_lower: bool
    clamped_upper: bool


@dataclass(frozen=True)
class RotationSchedule:
    """Pointing directions covering the half space in front of the surface.

    directions are ascending, symmetric about broadside, in radians.  edges[i]
    is the (lower, upper) accepted-gain edge of beam i.  level is the gain
    each receiver direction is guaranteed from the nearest beam; delta is the
    slack below the half-power level that was spent to even out the tiling.
    """

    directions: np.ndarray
    edges: np.ndarray
    n_eff: int
    spacing_ratio: float
    delta: float
    sin_half_width: float
    clamped: bool

    @property
    def level(self) -> float:
        return HALF_POWER - self.delta

    def __len__(self) -> int:
        return self.directions.shape[0]


@dataclass(frozen=True)
class CoverageMap:
    """Time-averaged metric over a polar (angle x radius) grid."""

    grid: np.ndarray
    angles: np.ndarray
    radii: np.ndarray
    directions_used: int


def pattern_gain(omega, pointing: float, n_eff: int, spacing_ratio: float = 0.5):
    """Normalized field pattern of an n_eff-element line aperture.

    |sin(n_eff * a) / (n_eff * sin(a))| with a = pi * spacing_ratio *
    (sin(omega) - sin(pointing)); the a -> 0 singularity is removable and
    evaluates to 1.
    """
    if n_eff < 1:
        raise ValueError("n_eff must be >= 1")
    omega = np.asarray(omega, dtype=float)
    a = np.pi * spacing_ratio * (np.sin(omega) - np.sin(pointing))
    den = n_eff * np.sin(a)
    with np.errstate(divide="ignore", invalid="ignore"):
        out = np.where(den == 0.0, 1.0, np.abs(np.sin(n_eff * a) / den))
    return out if out.ndim else float(out)


def _sin_gain(x: float, n_eff: int, spacing_ratio: float) -> float:
    """Pattern gain at a sine-space offset x from the pointing direction."""
    a = math.pi * spacing_ratio * x
    den = n_eff * math.sin(a)
    if den == 0.0:
        return 1.0
    return abs(math.sin(n_eff * a) / den)


def _sin_half_width(level: float, n_eff: int, spacing_ratio: float) -> float:
    """Sine-space offset where the pattern first decays to the given level."""
    lo, hi = 0.0, 1.0 / (n_eff * spacing_ratio)  # first null
    for _ in range(80):
        mid = 0.5 * (lo + hi)
        if _sin_gain(mid, n_eff, spacing_ratio) > level:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def half_power_edges(pointing: float, n_eff: int, spacing_ratio: float = 0.5,
                     delta: float = 0.0) -> BeamEdges:
    """Angles where the beam pointed at `pointing` decays to its accepted level.

    The level is HALF_POWER - delta.  Edges that would land beyond the visible
    range are clamped to +-pi/2 and flagged.
    """
    if n_eff < 2:
        raise ValueError("n_eff must be >= 2 for a finite beamwidth")
    if not 0.0 <= delta < HALF_POWER:
        raise ValueError("delta must lie in [0, half-power level)")
    if not -math.pi / 2.0 <= pointing <= math.pi / 2.0:
        raise ValueError("pointing must lie in [-pi/2, pi/2]")
    level = HALF_POWER - delta
    s0 = math.sin(pointing)
    width = _sin_half_width(level, n_eff, spacing_ratio)

    def _edge(sign: int) -> tuple[float, bool]:
        s_target = s0 + sign * width
        if s_target >= 1.0 - 1e-15:
            return math.pi / 2.0, True
        if s_target <= -1.0 + 1e-15:
            return -math.pi / 2.0, True
        outer = math.asin(s_target)
        lo, hi = (pointing, outer) if sign > 0 else (outer, pointing)
        # gain decays monotonically from pointing toward outer
        while hi - lo > _EDGE_TOL:
            mid = 0.5 * (lo + hi)
            above = pattern_gain(mid, pointing, n_eff, spacing_ratio) > level
            if sign > 0:
                if above:
                    lo = mid
                else:
                    hi = mid
            else:
                if above:
                    hi = mid
                else:
                    lo = mid
        return 0.5 * (lo + hi), False

    lower, cl = _edge(-1)
    upper, cu = _edge(+1)
    return BeamEdges(lower=lower, upper=upper, clamped_lower=cl, clamped_upper=cu)


def plan_rotation(n_eff: int, spacing_ratio: float = 0.5, delta: float | None = None,
                  max_delta: float = 0.05) -> RotationSchedule:
    """Smallest symmetric set of pointings covering [-pi/2, pi/2].

    Consecutive beams touch at their accepted-gain edges, which are equally
    spaced in sine space.  With delta=None the slack is auto-tuned: the
    smallest value not exceeding max_delta that lets an integer number of
    beams tile the half space exactly (so no beam needs clamping).
    """
    if n_eff < 2:
        raise ValueError("n_eff must be >= 2")
    natural = _sin_half_width(HALF_POWER, n_eff, spacing_ratio)
    if delta is not None:
        if not 0.0 <= delta < HALF_POWER:
            raise ValueError("delta must lie in [0, half-power level)")
        width = _sin_half_width(HALF_POWER - delta, n_eff, spacing_ratio)
        realized = delta
    else:
        if not 0.0 < max_delta < HALF_POWER:
            raise ValueError("max_delta must lie in (0, half-power level)")
        widest = _sin_half_width(HALF_POWER - max_delta, n_eff, spacing_ratio)
        n_pos = max(0, math.ceil((1.0 / widest - 1.0) / 2.0 - 1e-12))
        width = max(natural, 1.0 / (2 * n_pos + 1))
        realized = max(0.0, HALF_POWER - _sin_gain(width, n_eff, spacing_ratio))

    sines = [0.0]
    clamped = False
    s = 0.0
    while s + width < 1.0 - 1e-12:
        nxt = s + 2.0 * width
        if nxt > 1.0 - width:
            # pulled in only when the overshoot is real, not tiling roundoff
            clamped = clamped or nxt > 1.0 - width + 1e-12
            nxt = 1.0 - width
        if nxt <= s:
            break
        sines.append(nxt)
        s = nxt

    pos = [math.asin(x) for x in sines[1:]]
    directions = np.array([-d for d in reversed(pos)] + [0.0] + pos)
    edge_sines = np.array([-x for x in reversed(sines[1:])] + sines)
    lower = np.arcsin(np.maximum(edge_sines - width, -1.0))
    upper = np.arcsin(np.minimum(edge_sines + width, 1.0))
    return RotationSchedule(directions=directions,
                            edges=np.column_stack([lower, upper]),
                            n_eff=n_eff, spacing_ratio=spacing_ratio,
                            delta=realized, sin_half_width=width,
                            clamped=clamped)


def coverage_map(schedule: RotationSchedule, evaluator: Callable[[float], np.ndarray],
                 angles, radii) -> CoverageMap:
    """Equal-time average of a per-direction metric over a polar grid.

    evaluator(direction) must return an (angles, radii)-shaped array of the
    metric earned while the surface points at that direction.
    """
    angles = np.asarray(angles, dtype=float)
    radii = np.asarray(radii, dtype=float)
    acc = np.zeros((angles.size, radii.size))
    for direction in schedule.directions:
        tile = np.asarray(evaluator(float(direction)), dtype=float)
        if tile.shape != acc.shape:
            raise ValueError(f"evaluator returned shape {tile.shape}, "
                             f"expected {acc.shape}")
        acc += tile
    return CoverageMap(grid=acc / len(schedule), angles=angles, radii=radii,
                       directions_used=len(schedule))


def schedule_rows(schedule: RotationSchedule) -> list[tuple[float, float, float]]:
    """Degree-valued (direction, lower edge, upper edge) rows for export."""
    return [(math.degrees(d), math.degrees(lo), math.degrees(hi))
            for d, (lo, hi) in zip(schedule.directions, schedule.edges)]
