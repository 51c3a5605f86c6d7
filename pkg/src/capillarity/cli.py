"""Command-line harness: reproducible runs, sweeps, and report emission.

One JSON config per run, selected by a ``command`` discriminator; command-line
flags override config keys.  Every run writes a manifest recording the toolkit
version, the fully resolved config, per-task status, residual summaries, and
wall-clock timings.  All physical quantities are in reduced van der Waals
units (critical point at rho = T = P = 1).

Exit codes: 0 all tasks succeeded, 1 any task failed, 2 invalid config.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time

from . import __version__
from . import droplet as droplet_mod
from . import planar as planar_mod
from . import sharp as sharp_mod
from .errors import DomainError, SupercriticalError

ENV_OUTDIR = "CAPILLARITY_OUT"

COMMANDS = ("coexist", "planar", "droplet", "laplace", "sharp", "distribution")


class ConfigError(ValueError):
    """The run configuration is malformed or inconsistent."""


def _fmt(value):
    """Scientific notation with 17 significant digits (round-trip exact)."""
    if isinstance(value, str):
        return value
    return "%.17g" % float(value)


def _write_table(outdir, stem, fmt, columns, rows):
    """Emit a table as CSV (default) or a JSON list of row objects."""
    if fmt == "json":
        path = os.path.join(outdir, stem + ".json")
        payload = [
            {c: (v if isinstance(v, str) else float(v)) for c, v in zip(columns, row)}
            for row in rows
        ]
        with open(path, "w") as fh:
            json.dump(payload, fh, indent=2)
            fh.write("\n")
    else:
        path = os.path.join(outdir, stem + ".csv")
        with open(path, "w") as fh:
            fh.write(",".join(columns) + "\n")
            for row in rows:
                fh.write(",".join(_fmt(v) for v in row) + "\n")
    return path


def _write_json(outdir, stem, obj):
    path = os.path.join(outdir, stem + ".json")
    with open(path, "w") as fh:
        json.dump(obj, fh, indent=2)
        fh.write("\n")
    return path


def _as_float_list(value, key):
    try:
        out = [float(v) for v in value]
    except (TypeError, ValueError) as err:
        raise ConfigError(f"{key} must be a list of numbers, got {value!r}") from err
    if not out:
        raise ConfigError(f"{key} must be non-empty")
    return out


def _require_increasing(values, key):
    if any(b <= a for a, b in zip(values, values[1:])):
        raise ConfigError(f"{key} must be strictly increasing, got {values}")
    return values


def _params_from(cfg):
    try:
        return planar_mod.CapillarityParams(
            lam=float(cfg.get("lam", 1.0)), T=float(cfg.get("T", 0.9))
        )
    except (DomainError, ValueError) as err:
        raise ConfigError(str(err)) from err


# ---------------------------------------------------------------------------
# commands: each returns (tasks, files); a task is (name, status, detail)


def cmd_coexist(cfg, outdir, fmt, threads):
    temps = cfg.get("T", [0.6, 0.7, 0.8, 0.9, 0.95])
    if isinstance(temps, (int, float)):
        temps = [temps]
    temps = _as_float_list(temps, "T")

    rows = []
    tasks = []
    for T in temps:
        try:
            st = planar_mod.coexistence(T)
            dP, dmu = st.residuals()
            rows.append((T, st.rho_v, st.rho_l, st.P_sat, st.mu_sat,
                         abs(dP), abs(dmu), "ok"))
            tasks.append((f"coexist T={T:g}", "ok",
                          {"resid_P": abs(dP), "resid_mu": abs(dmu)}))
        except (SupercriticalError, DomainError, RuntimeError) as err:
            rows.append((T, float("nan"), float("nan"), float("nan"),
                         float("nan"), float("nan"), float("nan"), "failed"))
            tasks.append((f"coexist T={T:g}", "failed", {"error": str(err)}))
    columns = ("T", "rho_v", "rho_l", "P_sat", "mu_sat",
               "resid_P", "resid_mu", "status")
    files = [_write_table(outdir, "coexist", fmt, columns, rows)]
    return tasks, files


def cmd_planar(cfg, outdir, fmt, threads):
    params = _params_from(cfg)
    n = int(cfg.get("n", 512))
    profile = planar_mod.planar_profile(params, n_points=n)
    report = planar_mod.surface_tension_report(params, n_points=n)
    thickness = planar_mod.interface_thickness(profile)
    stationarity = planar_mod.discrete_energy_stationarity(profile)

    files = [
        _write_table(outdir, "planar_profile", fmt, ("x", "rho"),
                     list(zip(profile.coordinate, profile.density))),
        _write_json(outdir, "planar_report", {
            "T": params.T,
            "lam": params.lam,
            "n": n,
            "sigma_integral": report.sigma_integral,
            "sigma_quadrature": report.sigma_quadrature,
            "rel_discrepancy": report.rel_discrepancy,
            "interface_thickness": thickness,
            "stationarity_residual": stationarity,
        }),
    ]
    tasks = [("planar profile+tension", "ok",
              {"rel_discrepancy": report.rel_discrepancy,
               "stationarity_residual": stationarity})]
    return tasks, files


def _droplet_record(sol):
    return {
        "kind": sol.kind,
        "R_div": sol.R_div,
        "H_s": sol.H_s,
        "P_in": sol.P_in,
        "P_out": sol.P_out,
        "delta_P": droplet_mod.pressure_jump(sol),
        "mu_b": sol.mu_b,
        "rho_center": sol.rho_center,
        "rho_inf": sol.rho_inf,
        "far_field_mismatch": sol.far_field_mismatch,
        "sigma_local_integral": droplet_mod.sigma_local(sol),
    }


def cmd_droplet(cfg, outdir, fmt, threads):
    params = _params_from(cfg)
    kind = cfg.get("kind", "droplet")
    if kind not in ("droplet", "bubble"):
        raise ConfigError(f"kind must be 'droplet' or 'bubble', got {kind!r}")
    if "rho_inf" in cfg and cfg["rho_inf"] is not None:
        sol = droplet_mod.solve_droplet(params, float(cfg["rho_inf"]), kind=kind)
    else:
        flat = planar_mod.planar_profile(params)
        w = planar_mod.interface_thickness(flat)
        R_target = float(cfg.get("radius_over_thickness", 15.0)) * w
        sol = droplet_mod.solve_droplet_at_radius(params, R_target, kind=kind)

    files = [
        _write_table(outdir, "droplet_profile", fmt, ("r", "rho"),
                     list(zip(sol.profile.coordinate, sol.profile.density))),
        _write_json(outdir, "droplet_report",
                    dict(_droplet_record(sol), T=params.T, lam=params.lam)),
    ]
    tasks = [(f"{kind} solve", "ok",
              {"far_field_mismatch": sol.far_field_mismatch,
               "radial_residual": droplet_mod.radial_residual(sol)})]
    return tasks, files


def cmd_laplace(cfg, outdir, fmt, threads):
    params = _params_from(cfg)
    kind = cfg.get("kind", "droplet")
    if kind not in ("droplet", "bubble"):
        raise ConfigError(f"kind must be 'droplet' or 'bubble', got {kind!r}")
    multiples = _require_increasing(
        _as_float_list(cfg.get("radii_over_thickness", [10, 20, 40, 80]),
                       "radii_over_thickness"),
        "radii_over_thickness",
    )
    flat = planar_mod.planar_profile(params)
    w = planar_mod.interface_thickness(flat)
    radii = [m * w for m in multiples]

    fit = droplet_mod.laplace_sweep(params, radii, kind=kind, threads=threads)
    columns = ("R_div", "H_s", "P_in", "P_out", "delta_P",
               "sigma_local_integral", "rho_inf")
    rows = [
        (p.R_div, p.H_s, p.P_in, p.P_out, p.delta_P,
         p.sigma_local_integral, p.rho_inf)
        for p in fit.points
    ]
    files = [
        _write_table(outdir, "laplace_sweep", fmt, columns, rows),
        _write_json(outdir, "laplace_fit", {
            "T": params.T,
            "lam": params.lam,
            "kind": kind,
            "interface_thickness": w,
            "sigma_fit": fit.sigma_fit,
            "sigma_planar": fit.sigma_planar,
            "rel_error": abs(fit.sigma_fit - fit.sigma_planar) / fit.sigma_planar,
            "consistency_errors": fit.consistency_errors,
            "failures": [{"R_target": R, "error": msg} for R, msg in fit.failures],
        }),
    ]
    status = "ok" if not fit.failures else "failed"
    tasks = [("laplace sweep", status,
              {"sigma_fit": fit.sigma_fit,
               "sigma_planar": fit.sigma_planar,
               "n_failures": len(fit.failures)})]
    return tasks, files


def _resolve_sharp_model(cfg, params):
    """Bulk densities from coexistence; mu either given or planar-calibrated."""
    coex = planar_mod.coexistence(params.T)
    if "mu" in cfg and cfg["mu"] is not None:
        mu = float(cfg["mu"])
        sigma_source = "config"
        sigma = 0.5 * mu * (coex.rho_l**2 - coex.rho_v**2)
    else:
        sigma = planar_mod.sigma_quadrature(params, coex=coex)
        mu = sharp_mod.calibrate_mu(sigma, coex.rho_v, coex.rho_l)
        sigma_source = "planar"
    model = sharp_mod.SharpModel(mu=mu, rho_v=coex.rho_v, rho_l=coex.rho_l)
    return model, sigma, sigma_source


def _family_template(cfg, coex):
    geometry = cfg.get("geometry", "planar")
    family = cfg.get("family", "tanh")
    center = float(cfg.get("center", 20.0 if geometry == "spherical" else 0.0))
    try:
        return sharp_mod.RegularizedFamily(
            epsilon=1.0, center=center, rho_v=coex.rho_v, rho_l=coex.rho_l,
            geometry=geometry, family=family,
        )
    except (DomainError, ValueError) as err:
        raise ConfigError(str(err)) from err


def _phi_from(cfg, template):
    spec = cfg.get("phi", "one")
    span = float(cfg.get("phi_halfwidth", 15.0))
    c = template.center
    if spec == "one":
        return sharp_mod.TestFunction.one(c - span, c + span)
    if spec == "bump":
        shift = float(cfg.get("phi_shift", 0.15 * span))
        return sharp_mod.TestFunction.bump(center=c + shift, halfwidth=span)
    if spec == "cosine":
        return sharp_mod.TestFunction.cosine(c - span, c + span)
    raise ConfigError(f"phi must be 'one', 'bump', or 'cosine', got {spec!r}")


def _convergence_rows(template, phi, epsilons):
    table = sharp_mod.convergence_table(template, phi, epsilons)
    return [(eps, pairing, exact, err, order)
            for eps, pairing, exact, err, order in table]


_CONV_COLUMNS = ("epsilon", "pairing", "surface_value", "abs_error",
                 "observed_order")


def cmd_sharp(cfg, outdir, fmt, threads):
    params = _params_from(cfg)
    model, sigma, sigma_source = _resolve_sharp_model(cfg, params)
    H_s = float(cfg.get("H_s", 0.1))
    epsilons = _as_float_list(cfg.get("epsilons", [0.2, 0.1, 0.05]), "epsilons")

    coex = planar_mod.coexistence(params.T)
    template = _family_template(cfg, coex)
    phi = _phi_from(cfg, template)
    rows = _convergence_rows(template, phi, epsilons)

    files = [
        _write_json(outdir, "sharp_calibration", {
            "T": params.T,
            "lam": params.lam,
            "sigma_source": sigma_source,
            "sigma": sigma,
            "mu": model.mu,
            "rho_v": model.rho_v,
            "rho_l": model.rho_l,
            "sigma_roundtrip": sharp_mod.sigma_sharp(model),
            "H_s": H_s,
            "pressure_jump": sharp_mod.pressure_jump_sharp(model, H_s),
        }),
        _write_table(outdir, "sharp_convergence", fmt, _CONV_COLUMNS, rows),
    ]
    roundtrip = abs(sharp_mod.sigma_sharp(model) - sigma)
    tasks = [("sharp calibration+limit", "ok",
              {"sigma_roundtrip_error": roundtrip,
               "final_abs_error": rows[-1][3]})]
    return tasks, files


def cmd_distribution(cfg, outdir, fmt, threads):
    params = _params_from(cfg)
    coex = planar_mod.coexistence(params.T)
    template = _family_template(cfg, coex)
    phi = _phi_from(cfg, template)
    epsilons = _as_float_list(cfg.get("epsilons", [0.2, 0.1, 0.05]), "epsilons")
    rows = _convergence_rows(template, phi, epsilons)
    files = [_write_table(outdir, "distribution", fmt, _CONV_COLUMNS, rows)]
    tasks = [("distribution pairing", "ok", {"final_abs_error": rows[-1][3]})]
    return tasks, files


_DISPATCH = {
    "coexist": cmd_coexist,
    "planar": cmd_planar,
    "droplet": cmd_droplet,
    "laplace": cmd_laplace,
    "sharp": cmd_sharp,
    "distribution": cmd_distribution,
}


# ---------------------------------------------------------------------------
# argument parsing and run orchestration


def build_parser():
    parser = argparse.ArgumentParser(
        prog="capillarity",
        description="Liquid-vapor interface equilibria: diffuse and sharp models.",
    )
    parser.add_argument("--version", action="version",
                        version=f"%(prog)s {__version__}")

    def common(p):
        p.add_argument("--config", help="JSON run config; flags override its keys")
        p.add_argument("--out", help=f"output directory (default ${ENV_OUTDIR} or cwd)")
        p.add_argument("--threads", type=int, help="parallel sweep workers")
        p.add_argument("--format", choices=("csv", "json"), dest="fmt",
                       help="table output format (default csv)")
        p.add_argument("--T", type=float, help="reduced temperature")
        p.add_argument("--lam", type=float, help="gradient-energy coefficient")

    common(parser)  # a config-only run needs the common flags at top level
    sub = parser.add_subparsers(dest="command")

    p = sub.add_parser("coexist", help="liquid-vapor coexistence table")
    common(p)
    p.add_argument("--T-list", type=float, nargs="+", dest="T_list",
                   help="temperatures to sweep")

    p = sub.add_parser("planar", help="flat-interface profile and surface tension")
    common(p)
    p.add_argument("--n", type=int, help="profile sample count")

    p = sub.add_parser("droplet", help="single spherical droplet/bubble solve")
    common(p)
    p.add_argument("--kind", choices=("droplet", "bubble"))
    p.add_argument("--rho-inf", type=float, dest="rho_inf",
                   help="far-field density on the metastable branch")
    p.add_argument("--radius-over-thickness", type=float,
                   dest="radius_over_thickness",
                   help="target dividing radius in interface thicknesses")

    p = sub.add_parser("laplace", help="pressure-jump vs curvature sweep")
    common(p)
    p.add_argument("--kind", choices=("droplet", "bubble"))
    p.add_argument("--radii-over-thickness", type=float, nargs="+",
                   dest="radii_over_thickness",
                   help="target radii in interface thicknesses")

    p = sub.add_parser("sharp", help="sharp-model calibration and limit check")
    common(p)
    p.add_argument("--mu", type=float, help="capillary coefficient (default: calibrate)")
    p.add_argument("--H-s", type=float, dest="H_s", help="curvature sum for the jump")
    p.add_argument("--epsilons", type=float, nargs="+")
    p.add_argument("--geometry", choices=("planar", "spherical"))
    p.add_argument("--family", choices=("tanh", "skew"))
    p.add_argument("--phi", choices=("one", "bump", "cosine"))

    p = sub.add_parser("distribution", help="regularized-interface pairing table")
    common(p)
    p.add_argument("--epsilons", type=float, nargs="+")
    p.add_argument("--geometry", choices=("planar", "spherical"))
    p.add_argument("--family", choices=("tanh", "skew"))
    p.add_argument("--phi", choices=("one", "bump", "cosine"))
    p.add_argument("--center", type=float, help="interface position (x0 or R)")
    p.add_argument("--phi-halfwidth", type=float, dest="phi_halfwidth")

    return parser


_META_KEYS = ("command", "config", "out", "threads", "fmt", "T_list")


def resolve_config(args):
    """Merge the JSON config document with command-line overrides."""
    cfg = {}
    if args.config:
        try:
            with open(args.config) as fh:
                cfg = json.load(fh)
        except (OSError, json.JSONDecodeError) as err:
            raise ConfigError(f"cannot read config {args.config}: {err}") from err
        if not isinstance(cfg, dict):
            raise ConfigError("config document must be a JSON object")

    file_command = cfg.pop("command", None)
    command = args.command or file_command
    if command is None:
        raise ConfigError("no command given (flag or config 'command' key)")
    if command not in COMMANDS:
        raise ConfigError(f"unknown command {command!r}")
    if args.command and file_command and args.command != file_command:
        raise ConfigError(
            f"command mismatch: flag says {args.command!r}, "
            f"config says {file_command!r}"
        )

    for key, value in vars(args).items():
        if key in _META_KEYS or value is None:
            continue
        cfg[key] = value
    if getattr(args, "T_list", None):
        cfg["T"] = list(args.T_list)

    outdir = args.out or cfg.pop("out", None) or os.environ.get(ENV_OUTDIR) or "."
    fmt = args.fmt or cfg.pop("format", None) or "csv"
    if fmt not in ("csv", "json"):
        raise ConfigError(f"format must be 'csv' or 'json', got {fmt!r}")
    threads = args.threads if args.threads is not None else cfg.pop("threads", None)
    if threads is not None:
        threads = int(threads)
        if threads < 1:
            raise ConfigError(f"threads must be >= 1, got {threads}")
    return command, cfg, outdir, fmt, threads


def run(command, cfg, outdir, fmt, threads):
    """Execute one command and write its outputs plus the run manifest."""
    os.makedirs(outdir, exist_ok=True)
    t0 = time.perf_counter()
    status = "ok"
    tasks = []
    files = []
    error = None
    try:
        tasks, files = _DISPATCH[command](cfg, outdir, fmt, threads)
        if any(s != "ok" for _, s, _ in tasks):
            status = "failed"
    except ConfigError:
        raise
    except Exception as err:  # noqa: BLE001 - reported in the manifest
        status = "failed"
        error = f"{type(err).__name__}: {err}"
    elapsed = time.perf_counter() - t0

    manifest = {
        "toolkit": "capillarity",
        "version": __version__,
        "units": "reduced van der Waals (critical point at rho = T = P = 1)",
        "command": command,
        "config": {**cfg, "out": outdir, "format": fmt, "threads": threads},
        "status": status,
        "tasks": [
            {"name": name, "status": st, "summary": detail}
            for name, st, detail in tasks
        ],
        "files": [os.path.basename(f) for f in files],
        "wall_time_s": elapsed,
    }
    if error is not None:
        manifest["error"] = error
    _write_json(outdir, "manifest", manifest)
    return status


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        command, cfg, outdir, fmt, threads = resolve_config(args)
        status = run(command, cfg, outdir, fmt, threads)
    except ConfigError as err:
        print(f"config error: {err}", file=sys.stderr)
        return 2
    if status != "ok":
        print(f"{command}: one or more tasks failed (see manifest)",
              file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
