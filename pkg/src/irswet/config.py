"""Scenario configuration: INI file + override parsing with a typed schema.

One flat-section key-value document describes a scenario end to end.  Every
key has a typed default; unknown sections or keys are rejected with the exact
dotted path so a typo never silently runs the default experiment.  Precedence
is overrides > file > IRSWET_SEED env (seed only) > defaults.
"""

from __future__ import annotations

import configparser
import hashlib
import io
import os
from dataclasses import dataclass, field

from .geometry import ArrayGeometry, AngleSet
from .hardware import CouplingParams
from .montecarlo import (ALL_SCHEMES, CSI_FREE_PRACTICAL, EhModel, LinkBudget,
                         OverheadModel)

import numpy as np

SEED_ENV_VAR = "IRSWET_SEED"

# section -> key -> (type, default); bool uses configparser truthy strings
_SCHEMA: dict[str, dict[str, tuple[type, object]]] = {
    "geometry": {
        "m": (int, 4),
        "nx": (int, 10),
        "ny": (int, 10),
        "spacing_ratio": (float, 0.5),
    },
    "angles": {
        "azimuth_deg": (float, 45.0),
        "elevation_deg": (float, 60.0),
        "departure_deg": (float, 0.0),
    },
    "coupling": {
        "beta_min": (float, 0.2),
        "alpha": (float, 1.6),
        "eta_deg": (float, 77.4),
        "ideal": (bool, False),
    },
    "channel": {
        "kappa": (float, 2.0),
    },
    "power": {
        "transmit_watts": (float, 1.0),
    },
    "link": {
        "ref_loss_db": (float, 31.6),
        "beacon_surface_distance_m": (float, 20.0),
        "beacon_surface_exponent": (float, 2.2),
        "surface_receiver_exponent": (float, 2.7),
        "beacon_gain_dbi": (float, 15.0),
        "element_gain_dbi": (float, 3.0),
        "charge_radius_m": (float, 4.0),
    },
    "harvester": {
        "conversion": (float, 0.45),
        "sensitivity_dbm": (float, -24.0),
        "saturation_dbm": (float, -8.0),
        "enabled": (bool, True),
    },
    "overhead": {
        "coherence_symbols": (int, 196),
    },
    "scheme": {
        "name": (str, CSI_FREE_PRACTICAL),
        "er_count": (int, 64),
    },
    "run": {
        "trials": (int, 10000),
        "seed": (int, 0),
        "threads": (int, 1),
        "output_dir": (str, "results"),
    },
}

_TRUTHY = {"1": True, "yes": True, "true": True, "on": True,
           "0": False, "no": False, "false": False, "off": False}


class ConfigError(ValueError):
    """Invalid configuration; .diagnostics lists 'section.key: problem' lines."""

    def __init__(self, diagnostics: list[str]):
        self.diagnostics = list(diagnostics)
        super().__init__("invalid configuration:\n  " + "\n  ".join(self.diagnostics))


def _coerce(section: str, key: str, raw: str, typ: type, errors: list[str]):
    raw = raw.strip()
    try:
        if typ is bool:
            val = _TRUTHY.get(raw.lower())
            if val is None:
                raise ValueError(f"not a boolean: {raw!r}")
            return val
        if typ is int:
            return int(raw)
        if typ is float:
            v = float(raw)
            if not np.isfinite(v):
                raise ValueError("must be finite")
            return v
        return raw
    except ValueError as exc:
        errors.append(f"{section}.{key}: {exc}")
        return None


@dataclass(frozen=True)
class ScenarioConfig:
    """A fully resolved scenario; one attribute per schema key."""

    values: dict[str, dict[str, object]] = field(repr=False)

    def __getitem__(self, dotted: str):
        section, key = dotted.split(".", 1)
        return self.values[section][key]

    # builders to the domain objects -------------------------------------
    def geometry(self) -> ArrayGeometry:
        g = self.values["geometry"]
        return ArrayGeometry(m=g["m"], nx=g["nx"], ny=g["ny"],
                             spacing_ratio=g["spacing_ratio"])

    def angles(self) -> AngleSet:
        a = self.values["angles"]
        return AngleSet(azimuth=np.deg2rad(a["azimuth_deg"]),
                        elevation=np.deg2rad(a["elevation_deg"]),
                        departure=np.deg2rad(a["departure_deg"]),
                        spacing_ratio=self.values["geometry"]["spacing_ratio"])

    def coupling(self) -> CouplingParams | None:
        c = self.values["coupling"]
        if c["ideal"]:
            return None
        return CouplingParams(beta_min=c["beta_min"],
                              eta=np.deg2rad(c["eta_deg"]),
                              alpha=c["alpha"])

    def budget(self) -> LinkBudget:
        li = self.values["link"]
        return LinkBudget(**li)

    def eh(self) -> EhModel | None:
        h = dict(self.values["harvester"])
        if not h.pop("enabled"):
            return None
        return EhModel(**h)

    def overhead(self) -> OverheadModel:
        return OverheadModel(**self.values["overhead"])

    # convenience ---------------------------------------------------------
    @property
    def n(self) -> int:
        return self.values["geometry"]["nx"] * self.values["geometry"]["ny"]

    @property
    def kappa(self) -> float:
        return self.values["channel"]["kappa"]

    @property
    def seed(self) -> int:
        return self.values["run"]["seed"]

    @property
    def trials(self) -> int:
        return self.values["run"]["trials"]

    @property
    def threads(self) -> int:
        return self.values["run"]["threads"]

    @property
    def output_dir(self) -> str:
        return self.values["run"]["output_dir"]

    @property
    def scheme_name(self) -> str:
        return self.values["scheme"]["name"]

    @property
    def er_count(self) -> int:
        return self.values["scheme"]["er_count"]

    @property
    def transmit_watts(self) -> float:
        return self.values["power"]["transmit_watts"]

    # result-neutral keys: where files land and how many workers run do not
    # change any number, so they stay out of the hash
    _UNHASHED = frozenset({("run", "output_dir"), ("run", "threads")})

    def canonical_text(self) -> str:
        """Deterministic INI rendering; basis of the config hash."""
        out = io.StringIO()
        for section in sorted(self.values):
            out.write(f"[{section}]\n")
            for key in sorted(self.values[section]):
                if (section, key) in self._UNHASHED:
                    continue
                val = self.values[section][key]
                if isinstance(val, bool):
                    val = "true" if val else "false"
                elif isinstance(val, float):
                    val = repr(val)
                out.write(f"{key} = {val}\n")
        return out.getvalue()

    @property
    def config_hash(self) -> str:
        return hashlib.sha256(self.canonical_text().encode()).hexdigest()

    def to_flat_dict(self) -> dict[str, object]:
        return {f"{s}.{k}": v for s in sorted(self.values)
                for k, v in sorted(self.values[s].items())}


def parse_override(text: str) -> tuple[str, str, str]:
    """Split 'section.key=value' into its parts; raise ConfigError otherwise."""
    if "=" not in text:
        raise ConfigError([f"override {text!r}: expected section.key=value"])
    dotted, value = text.split("=", 1)
    if "." not in dotted:
        raise ConfigError([f"override {text!r}: key must be section.key"])
    section, key = dotted.strip().split(".", 1)
    return section.strip(), key.strip(), value.strip()


def load_config(path: str | None = None,
                overrides: dict[tuple[str, str], str] | None = None,
                env: dict[str, str] | None = None) -> ScenarioConfig:
    """Resolve a ScenarioConfig from defaults, file, env seed and overrides.

    overrides maps (section, key) to the raw string value; all diagnostics
    are collected before raising so a broken file reports every problem at
    once.
    """
    env = os.environ if env is None else env
    errors: list[str] = []
    values = {s: {k: d for k, (_, d) in keys.items()} for s, keys in _SCHEMA.items()}

    if SEED_ENV_VAR in env:
        coerced = _coerce("run", "seed", env[SEED_ENV_VAR], int, errors)
        if coerced is not None:
            values["run"]["seed"] = coerced

    if path is not None:
        parser = configparser.ConfigParser(interpolation=None)
        try:
            with open(path, encoding="utf-8") as fh:
                parser.read_file(fh)
        except OSError as exc:
            raise ConfigError([f"config file: {exc}"]) from exc
        except configparser.Error as exc:
            raise ConfigError([f"config file: {exc}"]) from exc
        for section in parser.sections():
            if section not in _SCHEMA:
                errors.append(f"{section}: unknown section "
                              f"(known: {', '.join(sorted(_SCHEMA))})")
                continue
            for key, raw in parser.items(section):
                if key not in _SCHEMA[section]:
                    errors.append(f"{section}.{key}: unknown key (known: "
                                  f"{', '.join(sorted(_SCHEMA[section]))})")
                    continue
                coerced = _coerce(section, key, raw, _SCHEMA[section][key][0], errors)
                if coerced is not None:
                    values[section][key] = coerced

    for (section, key), raw in (overrides or {}).items():
        if section not in _SCHEMA:
            errors.append(f"{section}: unknown section "
                          f"(known: {', '.join(sorted(_SCHEMA))})")
            continue
        if key not in _SCHEMA[section]:
            errors.append(f"{section}.{key}: unknown key (known: "
                          f"{', '.join(sorted(_SCHEMA[section]))})")
            continue
        coerced = _coerce(section, key, raw, _SCHEMA[section][key][0], errors)
        if coerced is not None:
            values[section][key] = coerced

    if errors:
        raise ConfigError(errors)

    cfg = ScenarioConfig(values=values)
    _validate_semantics(cfg, errors)
    if errors:
        raise ConfigError(errors)
    return cfg


def _validate_semantics(cfg: ScenarioConfig, errors: list[str]) -> None:
    """Range checks beyond types; appends dotted-path diagnostics."""
    v = cfg.values
    if v["geometry"]["m"] < 1:
        errors.append("geometry.m: must be >= 1")
    if v["geometry"]["nx"] < 1 or v["geometry"]["ny"] < 1:
        errors.append("geometry.nx/ny: must be >= 1")
    if v["geometry"]["spacing_ratio"] <= 0:
        errors.append("geometry.spacing_ratio: must be positive")
    if not 0.0 < v["coupling"]["beta_min"] <= 1.0:
        errors.append("coupling.beta_min: must be in (0, 1]")
    if v["coupling"]["alpha"] < 0:
        errors.append("coupling.alpha: must be >= 0")
    if v["channel"]["kappa"] < 0:
        errors.append("channel.kappa: must be >= 0")
    if v["power"]["transmit_watts"] <= 0:
        errors.append("power.transmit_watts: must be positive")
    if v["link"]["charge_radius_m"] <= 0:
        errors.append("link.charge_radius_m: must be positive")
    if v["link"]["beacon_surface_distance_m"] <= 0:
        errors.append("link.beacon_surface_distance_m: must be positive")
    if not 0.0 < v["harvester"]["conversion"] <= 1.0:
        errors.append("harvester.conversion: must be in (0, 1]")
    if v["harvester"]["saturation_dbm"] <= v["harvester"]["sensitivity_dbm"]:
        errors.append("harvester.saturation_dbm: must exceed sensitivity_dbm")
    if v["overhead"]["coherence_symbols"] < 1:
        errors.append("overhead.coherence_symbols: must be >= 1")
    if v["scheme"]["name"] not in ALL_SCHEMES:
        errors.append(f"scheme.name: must be one of {', '.join(ALL_SCHEMES)}")
    if v["scheme"]["er_count"] < 1:
        errors.append("scheme.er_count: must be >= 1")
    if v["run"]["trials"] < 2:
        errors.append("run.trials: must be >= 2")
    if v["run"]["seed"] < 0:
        errors.append("run.seed: must be >= 0")
    if v["run"]["threads"] < 1:
        errors.append("run.threads: must be >= 1")


def default_config_text() -> str:
    """A complete sample file with every key at its default."""
    out = io.StringIO()
    for section in sorted(_SCHEMA):
        out.write(f"[{section}]\n")
        for key in sorted(_SCHEMA[section]):
            val = _SCHEMA[section][key][1]
            if isinstance(val, bool):
                val = "true" if val else "false"
            out.write(f"{key} = {val}\n")
        out.write("\n")
    return out.getvalue()
