"""Command-line front end.

Subcommands: geometry, analytic, simulate, sweep, validate.
Exit codes: 0 ok, 1 validation failure, 2 config error, 3 domain error.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import os
import sys
from typing import Any, Mapping, Sequence

import numpy as np
import yaml

from . import analytic, geometry, montecarlo
from ._seeding import MASK64, splitmix64
from .errors import ConfigError, DomainError
from .scenario import Scenario, load_scenario, load_scenario_file, with_overrides

SCENARIO_ENV = "RFI_COEXIST_SCENARIO"

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_CONFIG = 2
EXIT_DOMAIN = 3

SWEEP_CSV_HEADER = [
    "alpha", "lambda_bs", "lobe", "mean_K", "std_K", "skewness",
    "excess_kurtosis", "exceeds_tau", "mc_mean_K", "mc_se_mean_K", "mc_std_K",
]

DEFAULT_BS_INTENSITIES = (50.0, 100.0, 200.0)
VALIDATE_ALPHA_GRID = (2.02, 2.06, 2.1, 2.15, 2.2)


def _json_clean(obj: Any) -> Any:
    """Replace non-finite floats with null so output is strict JSON."""
    if isinstance(obj, float):
        return obj if math.isfinite(obj) else None
    if isinstance(obj, dict):
        return {k: _json_clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_json_clean(v) for v in obj]
    return obj


def _emit_json(doc: Mapping[str, Any]) -> None:
    print(json.dumps(_json_clean(dict(doc)), sort_keys=True, indent=2))


def _resolve_scenario(path: str | None) -> Scenario:
    path = path or os.environ.get(SCENARIO_ENV)
    if path:
        return load_scenario_file(path)
    return load_scenario()


def _lobes(arg: str) -> list[str]:
    return ["main", "side"] if arg == "both" else [arg]


def _fmt_kelvin(value: float) -> str:
    return "" if not math.isfinite(value) else f"{value:.6g}"


# --- report builders ----------------------------------------------------------

def _geometry_doc(geo: geometry.GeometrySummary) -> dict[str, float]:
    return {
        "d_min_m": geo.d_min,
        "d_max_m": geo.d_max,
        "d_ml_m": geo.d_ml,
        "cap_area_m2": geo.cap_area,
        "footprint_area_m2": geo.footprint_area,
        "lambda_ml": geo.lambda_ml,
        "lambda_cap": geo.lambda_cap,
        "cos_theta_max": geo.cos_theta_max,
    }


def _cumulant_doc(cs: analytic.CumulantSet, verdict: analytic.ThresholdVerdict) -> dict:
    return {
        "lobe": cs.lobe,
        "k": list(cs.k),
        "mean_K": cs.mean,
        "variance_K2": cs.variance,
        "std_K": cs.std,
        "skewness": cs.skewness,
        "excess_kurtosis": cs.excess_kurtosis,
        "mu4_K4": cs.mu4,
        "verdict": {
            "threshold_K": verdict.threshold,
            "mean_exceeds": verdict.mean_exceeds,
        },
    }


def _estimate_doc(est: montecarlo.McEstimate) -> dict:
    return {
        "lobe": est.lobe,
        "mean_K": est.mean,
        "variance_K2": est.variance,
        "skewness": est.skewness,
        "excess_kurtosis": est.excess_kurtosis,
        "se_mean_K": est.se_mean,
        "se_variance_K2": est.se_variance,
        "trials": est.trials,
        "seed": est.seed,
        "flags": list(est.flags),
    }


def _analytic_cumulants(s: Scenario, geo: geometry.GeometrySummary, lobe: str,
                        max_order: int) -> analytic.CumulantSet:
    if lobe == "main":
        return analytic.cumulants_main_lobe(s, geo, max_order)
    return analytic.cumulants_side_lobe(s, geo, max_order)


# --- subcommands ----------------------------------------------------------------

def cmd_geometry(args: argparse.Namespace) -> int:
    s = _resolve_scenario(args.scenario)
    _emit_json(_geometry_doc(geometry.derive_geometry(s)))
    return EXIT_OK


def cmd_analytic(args: argparse.Namespace) -> int:
    s = _resolve_scenario(args.scenario)
    geo = geometry.derive_geometry(s)
    reports = []
    for lobe in _lobes(args.lobe):
        cs = _analytic_cumulants(s, geo, lobe, args.max_order)
        reports.append(_cumulant_doc(cs, analytic.threshold_verdict(cs, s.rfi_threshold)))
    _emit_json({"max_order": args.max_order, "reports": reports})
    return EXIT_OK


def cmd_simulate(args: argparse.Namespace) -> int:
    s = _resolve_scenario(args.scenario)
    geo = geometry.derive_geometry(s)
    if args.trials < 2:
        raise DomainError("insufficient_trials_for_variance: need trials >= 2")
    cfg = montecarlo.McConfig(trials=args.trials, seed=args.seed, workers=args.workers)
    reports = [
        _estimate_doc(montecarlo.estimate(s, geo, lobe, cfg))
        for lobe in _lobes(args.lobe)
    ]
    _emit_json({"backend": montecarlo.active_backend(), "reports": reports})
    return EXIT_OK


def _load_sweep_spec(path: str | None) -> dict:
    spec: dict[str, Any] = {}
    if path:
        try:
            with open(path, "r", encoding="utf-8") as fh:
                loaded = yaml.safe_load(fh)
        except (OSError, yaml.YAMLError) as exc:
            raise ConfigError(f"cannot read sweep spec {path!r}: {exc}") from exc
        if loaded is None:
            loaded = {}
        if not isinstance(loaded, Mapping):
            raise ConfigError("sweep spec must be a mapping")
        spec = dict(loaded)

    known = {"alpha_grid", "alpha_bounds", "bs_intensities", "lobes", "with_mc", "mc"}
    bad = set(spec) - known
    if bad:
        raise ConfigError(f"unknown sweep spec keys: {sorted(bad)}")

    lo, hi = spec.get("alpha_bounds", (2.0, 2.2))
    grid = spec.get("alpha_grid")
    if grid is None:
        grid = np.linspace(2.005, 2.2, 40).tolist()
    grid = [float(a) for a in grid]
    if not grid:
        raise ConfigError("empty_grid: alpha_grid must be non-empty")
    for a in grid:
        if not lo < a <= hi:
            raise ConfigError(f"alpha {a} outside ({lo}, {hi}]")

    bs = [float(v) for v in spec.get("bs_intensities", DEFAULT_BS_INTENSITIES)]
    if not bs:
        raise ConfigError("bs_intensities must be non-empty")

    lobes = list(spec.get("lobes", ["main", "side"]))
    if not lobes or any(l not in ("main", "side") for l in lobes):
        raise ConfigError(f"lobes must be a non-empty subset of ['main', 'side'], got {lobes}")

    mc_spec = spec.get("mc", {}) or {}
    mc = montecarlo.McConfig(
        trials=int(mc_spec.get("trials", 100_000)),
        seed=int(mc_spec.get("seed", 0)),
        workers=int(mc_spec.get("workers", 1)),
    )
    return {
        "alpha_grid": grid,
        "bs_intensities": bs,
        "lobes": lobes,
        "with_mc": bool(spec.get("with_mc", False)),
        "mc": mc,
    }


def cmd_sweep(args: argparse.Namespace) -> int:
    s = _resolve_scenario(args.scenario)
    spec = _load_sweep_spec(args.sweep_spec)
    rows: list[dict[str, Any]] = []
    point_index = 0
    for lobe in spec["lobes"]:
        for lam_bs in spec["bs_intensities"]:
            for alpha in spec["alpha_grid"]:
                sp = with_overrides(s, path_loss_exponent=alpha, bs_intensity=lam_bs)
                geo = geometry.derive_geometry(sp)
                cs = _analytic_cumulants(sp, geo, lobe, 4)
                verdict = analytic.threshold_verdict(cs, sp.rfi_threshold)
                row: dict[str, Any] = {
                    "alpha": alpha, "lambda_bs": lam_bs, "lobe": lobe,
                    "mean_K": cs.mean, "std_K": cs.std, "skewness": cs.skewness,
                    "excess_kurtosis": cs.excess_kurtosis,
                    "exceeds_tau": verdict.mean_exceeds,
                    "mc_mean_K": math.nan, "mc_se_mean_K": math.nan, "mc_std_K": math.nan,
                }
                if spec["with_mc"]:
                    base = spec["mc"]
                    cfg = montecarlo.McConfig(
                        trials=base.trials,
                        seed=splitmix64((base.seed + 1_000_003 * point_index) & MASK64),
                        workers=base.workers,
                    )
                    est = montecarlo.estimate(sp, geo, lobe, cfg)
                    row["mc_mean_K"] = est.mean
                    row["mc_se_mean_K"] = est.se_mean
                    row["mc_std_K"] = math.sqrt(est.variance)
                rows.append(row)
                point_index += 1

    tmp = args.out + ".tmp"
    try:
        with open(tmp, "w", encoding="utf-8", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(SWEEP_CSV_HEADER)
            for row in rows:
                writer.writerow([
                    repr(row["alpha"]), repr(row["lambda_bs"]), row["lobe"],
                    _fmt_kelvin(row["mean_K"]), _fmt_kelvin(row["std_K"]),
                    _fmt_kelvin(row["skewness"]), _fmt_kelvin(row["excess_kurtosis"]),
                    "true" if row["exceeds_tau"] else "false",
                    _fmt_kelvin(row["mc_mean_K"]), _fmt_kelvin(row["mc_se_mean_K"]),
                    _fmt_kelvin(row["mc_std_K"]),
                ])
        os.replace(tmp, args.out)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise

    curves = []
    for lobe in spec["lobes"]:
        for lam_bs in spec["bs_intensities"]:
            means = [r["mean_K"] for r in rows
                     if r["lobe"] == lobe and r["lambda_bs"] == lam_bs]
            curves.append({
                "lobe": lobe, "lambda_bs": lam_bs,
                "mean_min_K": min(means), "mean_max_K": max(means),
            })
    _emit_json({"rows": len(rows), "out": args.out, "curves": curves})

    if args.svg:
        _render_svg(rows, spec, os.path.splitext(args.out)[0] + ".svg")
    return EXIT_OK


def _render_svg(rows: Sequence[Mapping[str, Any]], spec: Mapping[str, Any],
                path: str) -> None:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    panels = [(lobe, stat) for lobe in ("main", "side") for stat in ("mean_K", "std_K")]
    fig, axes = plt.subplots(2, 2, figsize=(10, 7))
    for ax, (lobe, stat) in zip(axes.ravel(), panels):
        for lam_bs in spec["bs_intensities"]:
            pts = [(r["alpha"], r[stat]) for r in rows
                   if r["lobe"] == lobe and r["lambda_bs"] == lam_bs]
            if pts:
                xs, ys = zip(*sorted(pts))
                ax.plot(xs, ys, label=f"lambda_bs={lam_bs:g}")
        ax.set_xlabel("path-loss exponent")
        ax.set_ylabel("K")
        ax.set_title(f"{lobe} lobe {'mean' if stat == 'mean_K' else 'STD'}")
        ax.legend()
    fig.tight_layout()
    fig.savefig(path, format="svg")
    plt.close(fig)


def _validate_checks(s: Scenario, trials: int, seed: int, workers: int) -> list[dict]:
    checks: list[dict] = []

    def add(name: str, passed: bool, detail: str) -> None:
        checks.append({"name": name, "passed": bool(passed), "detail": detail})

    geo = geometry.derive_geometry(s)
    r, h = s.earth_radius, s.sat_center_distance

    closed = math.pi * (r / h) * s.cluster_intensity * (geo.d_max**2 - geo.d_min**2)
    rel = abs(closed - geo.lambda_cap) / geo.lambda_cap
    add("geometry_cap_identity", rel < 1e-12, f"rel={rel:.3e}")

    theta_ml = math.asin(h * math.sin(s.incidence_angle) / r) - s.incidence_angle
    d_check = geometry.distance_from_polar_angle(s, theta_ml)
    rel = abs(d_check - geo.d_ml) / geo.d_ml
    add("geometry_dml_crosscheck", rel < 1e-9, f"rel={rel:.3e}")

    cs_ml = analytic.cumulants_main_lobe(s, geo)
    fd = analytic.cgf_numeric_cumulants(
        lambda t: analytic.mgf_main_lobe(s, geo, t), 2, abs(cs_ml.mean))
    for n, (got, want) in enumerate(zip(fd, cs_ml.k), start=1):
        rel = abs(got - want) / abs(want)
        add(f"cgf_main_k{n}", rel < 1e-5, f"rel={rel:.3e}")

    cs_sl = analytic.cumulants_side_lobe(s, geo)
    fd = analytic.cgf_numeric_cumulants(
        lambda t: analytic.mgf_side_lobe(s, geo, t), 2, abs(cs_sl.mean))
    for n, (got, want) in enumerate(zip(fd, cs_sl.k), start=1):
        rel = abs(got - want) / abs(want)
        add(f"cgf_side_k{n}", rel < 1e-5, f"rel={rel:.3e}")

    mc_checks = 0
    mc_passes = 0
    point = 0
    for lobe in ("main", "side"):
        for alpha in VALIDATE_ALPHA_GRID:
            for lam_bs in DEFAULT_BS_INTENSITIES:
                sp = with_overrides(s, path_loss_exponent=alpha, bs_intensity=lam_bs)
                geo_p = geometry.derive_geometry(sp)
                cs = _analytic_cumulants(sp, geo_p, lobe, 4)
                cfg = montecarlo.McConfig(
                    trials=trials,
                    seed=splitmix64((seed + 1_000_003 * point) & MASK64),
                    workers=workers,
                )
                est = montecarlo.estimate(sp, geo_p, lobe, cfg)
                mean_ok = abs(est.mean - cs.mean) < 3.0 * est.se_mean
                var_ok = abs(est.variance - cs.variance) < 3.0 * est.se_variance
                mc_checks += 2
                mc_passes += mean_ok + var_ok
                add(
                    f"mc_{lobe}_a{alpha:g}_l{lam_bs:g}",
                    mean_ok and var_ok,
                    f"dmean={abs(est.mean - cs.mean) / est.se_mean:.2f}se "
                    f"dvar={abs(est.variance - cs.variance) / est.se_variance:.2f}se",
                )
                point += 1
    frac = mc_passes / mc_checks
    add("mc_grid_pass_fraction", frac >= 0.99, f"{mc_passes}/{mc_checks} ({frac:.3f})")
    return checks


def cmd_validate(args: argparse.Namespace) -> int:
    s = _resolve_scenario(args.scenario)
    checks = _validate_checks(s, args.trials, args.seed, args.workers)
    # Individual MC grid cells may miss at 3 sigma; the grid fraction check
    # is the binding criterion for the MC block.
    binding = [c for c in checks if not c["name"].startswith("mc_") or
               c["name"] == "mc_grid_pass_fraction"]
    width = max(len(c["name"]) for c in checks)
    for c in checks:
        status = "PASS" if c["passed"] else "FAIL"
        print(f"{status}  {c['name']:<{width}}  {c['detail']}")
    all_ok = all(c["passed"] for c in binding)
    print(f"{'PASS' if all_ok else 'FAIL'}  overall")
    return EXIT_OK if all_ok else EXIT_VALIDATION


# --- argument parsing ------------------------------------------------------------

def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rfi-coexist",
        description="RFI brightness-temperature statistics of a clustered "
                    "terrestrial network at a scanning satellite radiometer",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--scenario", metavar="PATH", default=None,
                       help=f"scenario YAML (default: ${SCENARIO_ENV} or built-in defaults)")

    p = sub.add_parser("geometry", help="print derived cap geometry as JSON")
    add_common(p)
    p.set_defaults(func=cmd_geometry)

    p = sub.add_parser("analytic", help="closed-form cumulants and threshold verdict")
    add_common(p)
    p.add_argument("--lobe", choices=["main", "side", "both"], default="both")
    p.add_argument("--max-order", type=int, default=4)
    p.set_defaults(func=cmd_analytic)

    p = sub.add_parser("simulate", help="Monte Carlo estimate of the same statistics")
    add_common(p)
    p.add_argument("--lobe", choices=["main", "side", "both"], default="both")
    p.add_argument("--trials", type=int, default=100_000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("sweep", help="path-loss-exponent sweep to CSV")
    add_common(p)
    p.add_argument("--sweep-spec", metavar="PATH", default=None,
                   help="sweep spec YAML (default: built-in grid)")
    p.add_argument("--out", metavar="PATH", required=True, help="output CSV path")
    p.add_argument("--svg", action="store_true",
                   help="also render line charts next to the CSV")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("validate", help="analytic-vs-Monte-Carlo consistency report")
    add_common(p)
    p.add_argument("--trials", type=int, default=100_000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=cmd_validate)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except DomainError as exc:
        print(f"domain error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN


if __name__ == "__main__":
    sys.exit(main())
