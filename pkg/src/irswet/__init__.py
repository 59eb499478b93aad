"""IRS-assisted wireless energy transfer: channel models, CSI-free phase
design, beam-rotation coverage planning, a perfect-CSI max-min baseline and a
seeded Monte Carlo harness around them."""

__version__ = "0.1.0"

from .backend import active_backend
from .baseline import ErSet, MaxMinResult, brute_force_maxmin, maxmin_solve
from .beamplan import (BeamEdges, CoverageMap, RotationSchedule, coverage_map,
                       half_power_edges, pattern_gain, plan_rotation,
                       schedule_rows)
from .geometry import (AngleSet, ArrayGeometry, LosChannel, RicianChannel,
                       element_exponents, er_los_phase, er_los_phases,
                       pb_irs_channel, rician_entries, sample_er_channel,
                       steering_ula, steering_upa)
from .hardware import (CouplingParams, PhaseConfig, amplitude_of_phase,
                       reflection_coefficients, wrap_phase)
from .montecarlo import (ALL_SCHEMES, CSI_BASED, CSI_FREE_IDEAL,
                         CSI_FREE_PRACTICAL, CompareResult, EhModel,
                         EnergyScenario, EnergyStats, LinkBudget,
                         OverheadModel, chain_gain, dbm_to_watts, harvest,
                         heatmap_experiment, path_loss_linear, simulate_energy,
                         square_ish_grid, watts_to_dbm, worst_case_compare)
from .optimize import (AOConfig, OptimResult, PhasorEnergy, SCHEME_DM,
                       SCHEME_OM, dm_solve, energy_variance, expected_energy,
                       fit_tau, kappa_boundary, om_solve, phasor_energy,
                       select_scheme)
from .precoding import (IncidentField, Precoder, UnevenIncidentPower,
                        incident_field, mrt, perturb_common_phase)
from .config import ConfigError, ScenarioConfig, load_config

__all__ = [name for name in dir() if not name.startswith("_")]
