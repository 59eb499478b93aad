"""Beacon precoding and the field it deposits on the surface.

With a rank-one line-of-sight link, any unit-norm precoder deposits the same
power on every surface element; only the per-element phase of the incident
field changes.  The matched (MRT) precoder maximizes that common power, and
the deposited total equals m times the transmit power.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .geometry import LosChannel, steering_ula


class UnevenIncidentPower(ValueError):
    """Raised when per-element incident powers spread beyond tolerance.

    That can only happen when the channel is not the rank-one line-of-sight
    model this package assumes, so it is a modeling error, not a warning.
    """


@dataclass(frozen=True)
class Precoder:
    """Beacon weight vector together with its power budget."""

    weights: np.ndarray
    power_budget: float

    def __post_init__(self):
        weights = np.asarray(self.weights, dtype=complex)
        if weights.ndim != 1 or weights.size == 0:
            raise ValueError("weights must be a non-empty 1-d vector")
        object.__setattr__(self, "weights", weights)
        norm_sq = float(np.vdot(weights, weights).real)
        if norm_sq > self.power_budget * (1.0 + 1e-9):
            raise ValueError("precoder norm exceeds the power budget")


@dataclass(frozen=True)
class IncidentField:
    """Field deposited on the surface: common power and per-element phases."""

    phases: np.ndarray
    power: float
    spread: float


def mrt(tx_step: float, count: int, power: float) -> Precoder:
    """Matched precoder for a beacon steering vector with the given step."""
    if power <= 0.0:
        raise ValueError("power must be positive")
    weights = np.sqrt(power) * steering_ula(tx_step, count)
    return Precoder(weights=weights, power_budget=power)


def incident_field(channel: LosChannel, precoder: Precoder,
                   spread_tol: float = 1e-6) -> IncidentField:
    """Per-element incident phases and the common incident power.

    The relative spread (max - min) / mean of per-element powers must stay
    below spread_tol; a larger spread means the channel violates the rank-one
    line-of-sight assumption and the common-power model does not apply.
    """
    field = channel.entries @ precoder.weights
    powers = np.abs(field) ** 2
    mean_power = float(powers.mean())
    if mean_power <= 0.0:
        raise UnevenIncidentPower("incident field is identically zero")
    spread = float((powers.max() - powers.min()) / mean_power)
    if spread > spread_tol:
        raise UnevenIncidentPower(
            f"per-element incident power spread {spread:.3e} exceeds {spread_tol:.1e}")
    return IncidentField(phases=np.angle(field), power=mean_power, spread=spread)


def perturb_common_phase(precoder: Precoder, phase_offsets) -> tuple[Precoder, float]:
    """Apply per-antenna phase offsets and report the coherence loss.

    Returns the perturbed precoder and the ratio |sum exp(i * xi)|^2 / m^2:
    equal offsets give 1 (a pure common phase, which the surface cannot even
    observe); spread offsets shrink the deposited power by exactly this factor.
    """
    xis = np.asarray(phase_offsets, dtype=float)
    if xis.shape != precoder.weights.shape:
        raise ValueError("need one phase offset per antenna")
    m = xis.size
    coherence = float(np.abs(np.exp(1j * xis).sum()) ** 2) / m**2
    perturbed = Precoder(weights=precoder.weights * np.exp(1j * xis),
                         power_budget=precoder.power_budget)
    return perturbed, coherence
