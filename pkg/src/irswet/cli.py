"""Command-line entry point mapping subcommands to experiment drivers.

Every run resolves one ScenarioConfig (defaults < file < env seed < --set
overrides < dedicated flags), executes a driver from experiments.py entirely
in memory, then atomically writes <name>.csv and <name>.manifest.json into
the output directory.  A failed run writes nothing.
"""

from __future__ import annotations

import argparse
import os
import sys

from . import __version__
from .backend import active_backend
from .config import ConfigError, load_config, parse_override
from . import experiments as exp
from .reporting import ManifestBuilder, load_manifest, write_csv
from .validate import run_checks

_EXIT_OK = 0
_EXIT_FAILURE = 1
_EXIT_CONFIG = 2


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", metavar="PATH",
                        help="INI scenario file (defaults used when absent)")
    parser.add_argument("--set", dest="overrides", action="append", default=[],
                        metavar="SECTION.KEY=VALUE",
                        help="override one config value (repeatable)")
    parser.add_argument("--seed", type=int, help="run.seed override")
    parser.add_argument("--trials", type=int, help="run.trials override")
    parser.add_argument("--threads", type=int, help="run.threads override")
    parser.add_argument("--output-dir", help="run.output_dir override")
    parser.add_argument("--from-manifest", metavar="PATH",
                        help="re-run the configuration and parameters "
                             "recorded in an earlier manifest")


def _int_list(text: str) -> list[int]:
    return [int(part) for part in text.split(",") if part.strip()]


def _float_list(text: str) -> list[float]:
    return [float(part) for part in text.split(",") if part.strip()]


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="irswet",
        description="Simulation and phase-design experiments for surface-"
                    "assisted wireless energy transfer.")
    parser.add_argument("--version", action="version",
                        version=f"irswet {__version__} ({active_backend()} backend)")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("coupling-sweep",
                       help="reflection amplitude across the phase range")
    p.add_argument("--points", type=int, default=721)
    _add_common(p)

    p = sub.add_parser("tau-fit",
                       help="energy scaling coefficient per amplitude floor")
    p.add_argument("--beta-mins", type=_float_list,
                   default=list(exp.DEFAULT_TAU_BETA_MINS))
    p.add_argument("--n-list", type=_int_list,
                   default=list(exp.DEFAULT_TAU_N_LIST))
    p.add_argument("--er-angle-deg", type=float, default=30.0)
    _add_common(p)

    p = sub.add_parser("energy-dist",
                       help="simulated energy moments vs the closed form")
    p.add_argument("--n-list", type=_int_list,
                   default=list(exp.DEFAULT_DIST_N_LIST))
    p.add_argument("--er-angle-deg", type=float, default=30.0)
    _add_common(p)

    p = sub.add_parser("energy-vs-distance",
                       help="received and harvested power vs receiver range")
    p.add_argument("--distances", type=_float_list, default=None,
                   metavar="M1,M2,...")
    p.add_argument("--er-angle-deg", type=float, default=30.0)
    _add_common(p)

    p = sub.add_parser("beam-plan",
                       help="rotation schedule tiling the service sector")
    p.add_argument("--n-eff", type=int, default=None)
    p.add_argument("--delta", type=float, default=None)
    _add_common(p)

    p = sub.add_parser("heatmap",
                       help="polar map of mean harvested power")
    p.add_argument("--angle-points", type=int, default=37)
    p.add_argument("--radius-points", type=int, default=8)
    _add_common(p)

    p = sub.add_parser("vs-n", aliases=["vs-N"],
                       help="worst-receiver power as the surface grows")
    p.add_argument("--n-list", type=_int_list,
                   default=list(exp.DEFAULT_VS_N_LIST))
    p.add_argument("--er-count", type=int, default=None)
    p.add_argument("--schemes", default=None,
                   metavar="NAME1,NAME2,...")
    _add_common(p)

    p = sub.add_parser("vs-k", aliases=["vs-K"],
                       help="worst-receiver power as receivers multiply")
    p.add_argument("--k-list", type=_int_list,
                   default=list(exp.DEFAULT_VS_K_LIST))
    p.add_argument("--schemes", default=None,
                   metavar="NAME1,NAME2,...")
    _add_common(p)

    p = sub.add_parser("validate", help="run the property-check suite")
    p.add_argument("--quick", action="store_true",
                   help="reduced draw counts, same coverage")
    _add_common(p)

    return parser


_CANONICAL = {"vs-N": "vs-n", "vs-K": "vs-k"}


def _resolve_config(args) -> tuple:
    """Merge file, manifest, --set and dedicated flags into one config."""
    overrides: dict[tuple[str, str], str] = {}
    manifest_params: dict = {}
    if args.from_manifest:
        doc = load_manifest(args.from_manifest)
        recorded = _CANONICAL.get(doc["subcommand"], doc["subcommand"])
        invoked = _CANONICAL.get(args.subcommand, args.subcommand)
        if recorded != invoked:
            raise ConfigError([
                f"manifest records subcommand {doc['subcommand']!r}; "
                f"invoked {args.subcommand!r}"])
        for dotted, value in doc["config"].items():
            section, key = dotted.split(".", 1)
            overrides[(section, key)] = str(value)
        manifest_params = dict(doc.get("parameters", {}))
    for text in args.overrides:
        section, key, value = parse_override(text)
        overrides[(section, key)] = value
    if args.seed is not None:
        overrides[("run", "seed")] = str(args.seed)
    if args.trials is not None:
        overrides[("run", "trials")] = str(args.trials)
    if args.threads is not None:
        overrides[("run", "threads")] = str(args.threads)
    if args.output_dir is not None:
        overrides[("run", "output_dir")] = args.output_dir
    cfg = load_config(args.config, overrides)
    return cfg, manifest_params


def _dispatch(args, cfg, manifest_params: dict) -> exp.ExperimentResult:
    name = _CANONICAL.get(args.subcommand, args.subcommand)

    def knob(flag: str, default):
        """Flag beats manifest beats default; argparse default means unset."""
        value = getattr(args, flag.replace("-", "_"))
        if value is not None and value != _DEFAULTS.get((name, flag)):
            return value
        if flag.replace("-", "_") in manifest_params:
            return manifest_params[flag.replace("-", "_")]
        return value if value is not None else default

    if name == "coupling-sweep":
        return exp.coupling_sweep(cfg, points=knob("points", 721))
    if name == "tau-fit":
        return exp.tau_fit(cfg, beta_mins=knob("beta-mins", None),
                           n_list=knob("n-list", None),
                           er_angle_deg=knob("er-angle-deg", 30.0))
    if name == "energy-dist":
        return exp.energy_dist(cfg, n_list=knob("n-list", None),
                               er_angle_deg=knob("er-angle-deg", 30.0))
    if name == "energy-vs-distance":
        return exp.energy_vs_distance(cfg, distances=knob("distances", None),
                                      er_angle_deg=knob("er-angle-deg", 30.0))
    if name == "beam-plan":
        return exp.beam_plan(cfg, n_eff=knob("n-eff", None),
                             delta=knob("delta", None))
    if name == "heatmap":
        return exp.heatmap(cfg, angle_points=knob("angle-points", 37),
                           radius_points=knob("radius-points", 8))
    if name == "vs-n":
        schemes = knob("schemes", None)
        if isinstance(schemes, str):
            schemes = [s.strip() for s in schemes.split(",") if s.strip()]
        return exp.vs_n(cfg, n_list=knob("n-list", None),
                        er_count=knob("er-count", None),
                        schemes=schemes or exp.ALL_SCHEMES)
    if name == "vs-k":
        schemes = knob("schemes", None)
        if isinstance(schemes, str):
            schemes = [s.strip() for s in schemes.split(",") if s.strip()]
        return exp.vs_k(cfg, k_list=knob("k-list", None),
                        schemes=schemes or exp.ALL_SCHEMES)
    raise AssertionError(f"unhandled subcommand {name}")


# argparse defaults per (subcommand, flag) so _dispatch can tell "left at
# default" apart from "explicitly set to the default value"; only list-valued
# flags need this because their argparse defaults are not None
_DEFAULTS = {
    ("tau-fit", "beta-mins"): list(exp.DEFAULT_TAU_BETA_MINS),
    ("tau-fit", "n-list"): list(exp.DEFAULT_TAU_N_LIST),
    ("energy-dist", "n-list"): list(exp.DEFAULT_DIST_N_LIST),
    ("vs-n", "n-list"): list(exp.DEFAULT_VS_N_LIST),
    ("vs-k", "k-list"): list(exp.DEFAULT_VS_K_LIST),
    ("coupling-sweep", "points"): 721,
    ("heatmap", "angle-points"): 37,
    ("heatmap", "radius-points"): 8,
    ("tau-fit", "er-angle-deg"): 30.0,
    ("energy-dist", "er-angle-deg"): 30.0,
    ("energy-vs-distance", "er-angle-deg"): 30.0,
}


def _run_validate(args, cfg) -> int:
    results = run_checks(quick=args.quick)
    rows = [(r.name, r.passed, r.detail) for r in results]
    name = "validate"
    out_dir = cfg.output_dir
    csv_path = os.path.join(out_dir, f"{name}.csv")
    count = write_csv(csv_path, ["check", "passed", "detail"],
                      [(n, p, d.replace(",", ";")) for n, p, d in rows],
                      meta=_meta(cfg, name))
    manifest = ManifestBuilder(subcommand=name, seed=cfg.seed,
                               config_hash=cfg.config_hash,
                               config_flat=cfg.to_flat_dict(),
                               parameters={"quick": bool(args.quick)},
                               diagnostics={"checks": len(rows)})
    manifest.add_output(csv_path, count)
    manifest.write(os.path.join(out_dir, f"{name}.manifest.json"))
    failed = [n for n, p, _ in rows if not p]
    for n, p, d in rows:
        print(f"{'PASS' if p else 'FAIL'} {n}: {d}")
    if failed:
        print(f"{len(failed)} of {len(rows)} checks failed", file=sys.stderr)
        return _EXIT_FAILURE
    print(f"all {len(rows)} checks passed -> {csv_path}")
    return _EXIT_OK


def _meta(cfg, subcommand: str) -> dict:
    return {"config_hash": cfg.config_hash, "seed": cfg.seed,
            "subcommand": subcommand, "backend": active_backend(),
            "version": __version__}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg, manifest_params = _resolve_config(args)
    except ConfigError as exc:
        for line in exc.diagnostics:
            print(f"config error: {line}", file=sys.stderr)
        return _EXIT_CONFIG
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return _EXIT_CONFIG

    name = _CANONICAL.get(args.subcommand, args.subcommand)
    if name == "validate":
        return _run_validate(args, cfg)

    try:
        result = _dispatch(args, cfg, manifest_params)
    except (ValueError, ConfigError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return _EXIT_FAILURE

    out_dir = cfg.output_dir
    csv_path = os.path.join(out_dir, f"{name}.csv")
    count = write_csv(csv_path, result.columns, result.rows,
                      meta=_meta(cfg, name))
    manifest = ManifestBuilder(subcommand=name, seed=cfg.seed,
                               config_hash=cfg.config_hash,
                               config_flat=cfg.to_flat_dict(),
                               parameters=result.parameters,
                               diagnostics=result.diagnostics)
    manifest.add_output(csv_path, count)
    manifest.write(os.path.join(out_dir, f"{name}.manifest.json"))
    print(f"{name}: {count} rows -> {csv_path} (config {cfg.config_hash[:12]}, "
          f"seed {cfg.seed})")
    return _EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
