"""Reflecting-element model with phase-dependent amplitude.

A practical reflecting element cannot hold unit amplitude across all phase
shifts: its reflection amplitude follows a smooth dip centered half a cycle
away from the lossless point.  The ideal-surface limit is beta_min = 1, which
makes the amplitude identically one regardless of the other parameters.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

PI = np.pi


def wrap_phase(theta):
    """Wrap angles to the interval [-pi, pi)."""
    return np.mod(np.asarray(theta) + PI, 2.0 * PI) - PI


@dataclass(frozen=True)
class CouplingParams:
    """Amplitude-phase coupling of one reflecting element.

    beta_min is the amplitude floor, eta the phase of minimum amplitude, and
    alpha the steepness of the dip.
    """

    beta_min: float
    eta: float
    alpha: float

    def __post_init__(self):
        if not 0.0 <= self.beta_min <= 1.0:
            raise ValueError("beta_min must lie in [0, 1]")
        if not self.alpha > 0.0:
            raise ValueError("alpha must be positive")
        if not np.isfinite(self.eta):
            raise ValueError("eta must be finite")


def amplitude_of_phase(theta, params: CouplingParams):
    """Reflection amplitude at phase shift theta (scalar or array).

    (1 - beta_min) * ((sin(theta - eta) + 1) / 2) ** alpha + beta_min.
    Exactly 1 at theta = eta + pi/2 and exactly beta_min at theta = eta - pi/2.
    """
    theta = np.asarray(theta, dtype=float)
    base = (np.sin(theta - params.eta) + 1.0) / 2.0
    out = (1.0 - params.beta_min) * base ** params.alpha + params.beta_min
    return out if out.ndim else float(out)


@dataclass(frozen=True)
class PhaseConfig:
    """Phase shifts of the whole surface plus its coupling model.

    Phases are wrapped to [-pi, pi) once here, at the configuration boundary;
    everything downstream treats them as opaque angles.  coupling = None means
    an ideal surface with unit amplitudes.
    """

    thetas: np.ndarray
    coupling: CouplingParams | None = None

    def __post_init__(self):
        thetas = np.asarray(self.thetas, dtype=float)
        if thetas.ndim != 1 or thetas.size == 0:
            raise ValueError("thetas must be a non-empty 1-d array")
        if not np.all(np.isfinite(thetas)):
            raise ValueError("thetas must be finite")
        object.__setattr__(self, "thetas", wrap_phase(thetas))

    @property
    def n(self) -> int:
        return self.thetas.shape[0]


def reflection_coefficients(config: PhaseConfig) -> np.ndarray:
    """Complex per-element reflection coefficients beta * exp(i * theta)."""
    if config.coupling is None:
        amplitudes = np.ones_like(config.thetas)
    else:
        amplitudes = amplitude_of_phase(config.thetas, config.coupling)
    return amplitudes * np.exp(1j * config.thetas)
