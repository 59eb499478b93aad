"""Array steering vectors, the beacon-to-surface channel, and fading draws.

The beacon is a uniform linear array with `m` antennas; the reflecting surface
is a uniform planar grid of `nx * ny` elements indexed 1..n down the flattened
grid.  All phase quantities are in radians and all spacings are expressed as a
fraction of the carrier wavelength (half-wavelength by default).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

TWO_PI = 2.0 * np.pi


@dataclass(frozen=True)
class ArrayGeometry:
    """Beacon antenna count plus the reflecting-surface grid."""

    m: int
    nx: int
    ny: int
    spacing_ratio: float = 0.5

    def __post_init__(self):
        if self.m < 1:
            raise ValueError("antenna count m must be >= 1")
        if self.nx < 1 or self.ny < 1:
            raise ValueError("surface grid must be at least 1x1")
        if not self.spacing_ratio > 0:
            raise ValueError("spacing_ratio must be positive")

    @property
    def n(self) -> int:
        return self.nx * self.ny


@dataclass(frozen=True)
class AngleSet:
    """Propagation angles of the beacon-to-surface link (radians).

    `azimuth` and `elevation` are the arrival angles at the surface and
    `departure` is the angle at the beacon array.  The per-element phase steps
    are derived on access so they can never go stale.
    """

    azimuth: float
    elevation: float
    departure: float = 0.0
    spacing_ratio: float = 0.5

    def __post_init__(self):
        for name in ("azimuth", "elevation", "departure", "spacing_ratio"):
            if not np.isfinite(getattr(self, name)):
                raise ValueError(f"{name} must be finite")

    @property
    def x_step(self) -> float:
        """Phase increment per element along the x axis of the surface."""
        return TWO_PI * self.spacing_ratio * np.cos(self.azimuth)

    @property
    def y_step(self) -> float:
        """Phase increment per element along the y axis of the surface."""
        return TWO_PI * self.spacing_ratio * np.sin(self.azimuth) * np.sin(self.elevation)

    @property
    def tx_step(self) -> float:
        """Phase increment per antenna at the beacon."""
        return TWO_PI * self.spacing_ratio * np.sin(self.departure)


@dataclass(frozen=True)
class LosChannel:
    """Deterministic line-of-sight beacon-to-surface channel, shape (n, m)."""

    entries: np.ndarray


@dataclass(frozen=True)
class RicianChannel:
    """One draw of the surface-to-receiver fading channel, shape (n,)."""

    entries: np.ndarray
    kappa: float
    los_phases: np.ndarray


def element_exponents(nx: int, ny: int) -> tuple[np.ndarray, np.ndarray]:
    """Per-axis phase exponents of the flattened surface grid.

    Element j (1-based) of the planar steering vector kron(a_x, a_y) carries
    the phase x_exp * x_step + y_exp * y_step with

        x_exp = (j - 1) // ny        y_exp = (j - 1) % ny

    both 0-based.  Conventions that wrap a zero remainder up to ny describe the
    same mapping in 1-based terms.  This helper is the single authority used by
    the planar steering vector, the channel builder, and the per-element
    line-of-sight phases, so the three can never disagree.
    """
    if nx < 1 or ny < 1:
        raise ValueError("grid dimensions must be positive")
    j = np.arange(nx * ny)
    return j // ny, j % ny


def steering_ula(step: float, count: int) -> np.ndarray:
    """Unit-norm linear-array steering vector with the given phase step."""
    if count < 1:
        raise ValueError("element count must be >= 1")
    return np.exp(1j * step * np.arange(count)) / np.sqrt(count)


def steering_upa(x_step: float, y_step: float, nx: int, ny: int) -> np.ndarray:
    """Unit-norm planar-array steering vector, flattened x-major.

    Equals kron(steering_ula(x_step, nx), steering_ula(y_step, ny)).
    """
    x_exp, y_exp = element_exponents(nx, ny)
    return np.exp(1j * (x_step * x_exp + y_step * y_exp)) / np.sqrt(nx * ny)


def pb_irs_channel(geom: ArrayGeometry, angles: AngleSet) -> LosChannel:
    """Rank-one line-of-sight channel between the beacon and the surface."""
    if geom.spacing_ratio != angles.spacing_ratio:
        raise ValueError("geometry and angles disagree on spacing_ratio")
    a_rx = steering_upa(angles.x_step, angles.y_step, geom.nx, geom.ny)
    a_tx = steering_ula(angles.tx_step, geom.m)
    entries = np.sqrt(geom.m * geom.n) * np.outer(a_rx, a_tx.conj())
    return LosChannel(entries=entries)


def er_los_phase(j: int, ny: int, er_angle: float, spacing_ratio: float = 0.5,
                 n_total: int | None = None) -> float:
    """Line-of-sight phase of surface element j toward a receiver at er_angle.

    The receiver sits in the plane of the surface's y axis, so only the
    y-exponent of element j matters.  j is 1-based.
    """
    if j < 1 or (n_total is not None and j > n_total):
        raise ValueError(f"element index {j} out of range")
    y_exp = (j - 1) % ny
    return -y_exp * TWO_PI * spacing_ratio * float(np.sin(er_angle))


def er_los_phases(n: int, ny: int, er_angle: float, spacing_ratio: float = 0.5) -> np.ndarray:
    """Vector of er_los_phase over all n elements."""
    if n < 1 or ny < 1:
        raise ValueError("element counts must be positive")
    y_exp = np.arange(n) % ny
    return -y_exp * TWO_PI * spacing_ratio * np.sin(er_angle)


def rician_entries(kappa: float, los_phases: np.ndarray, scatter: np.ndarray) -> np.ndarray:
    """Combine a deterministic phase front with CN(0, 1) scatter draws.

    Per element: sqrt(kappa / (1 + kappa)) * exp(i * phase) +
    sqrt(1 / (1 + kappa)) * scatter.  Broadcasts over leading axes of scatter,
    so a (trials, n) block of draws yields (trials, n) channel entries.
    """
    if kappa < 0:
        raise ValueError("kappa must be >= 0")
    los = np.sqrt(kappa / (1.0 + kappa)) * np.exp(1j * np.asarray(los_phases))
    return los + np.sqrt(1.0 / (1.0 + kappa)) * scatter


def sample_er_channel(kappa: float, los_phases: np.ndarray, rng: np.random.Generator) -> RicianChannel:
    """Draw one realization of the surface-to-receiver channel."""
    los_phases = np.asarray(los_phases, dtype=float)
    n = los_phases.shape[0]
    scatter = (rng.standard_normal(n) + 1j * rng.standard_normal(n)) / np.sqrt(2.0)
    return RicianChannel(entries=rician_entries(kappa, los_phases, scatter),
                         kappa=kappa, los_phases=los_phases)
