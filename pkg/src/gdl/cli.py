"""Command-line front end: curves, field profiles, FE runs, verification.

Commands::

    gdl rod-curve     equilibrium curve of the damageable bar (CSV/JSON)
    gdl rod-profile   damage/traction/Y/Yc/gamma2 fields at bar stations
    gdl block-curve   four-phase delamination equilibrium path
    gdl block-profile interface fields at delamination stations
    gdl fem-run       staggered FE analysis of the bar
    gdl verify        oracle/closed-form verification report (JSON)

Every command accepts ``--config file.json`` (keys mirror the long flag
names, underscores for dashes); explicit flags override file values. CSV
files carry a single header row naming columns and units; floating values
are printed with 12 significant digits, and identical configurations produce
byte-identical files.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path
from typing import Optional

import numpy as np

from . import block, fem, material, rod, verify
from .errors import GdlError
from .material import MaterialSpec


def _fmt(value: float) -> str:
    return f"{value:.11e}"


def _round12(value: float) -> float:
    return float(_fmt(value))


def _write_table(path: Path, columns: list[str], rows: list[list], fmt: str) -> None:
    for row in rows:
        for v in row:
            if isinstance(v, float) and not math.isfinite(v):
                raise GdlError(f"non-finite value in output row: {row}")
    if fmt == "csv":
        lines = [",".join(columns)]
        for row in rows:
            lines.append(",".join(_fmt(v) if isinstance(v, float) else str(v)
                                  for v in row))
        path.write_text("\n".join(lines) + "\n")
    else:
        payload = {
            "columns": columns,
            "rows": [[_round12(v) if isinstance(v, float) else v for v in row]
                     for row in rows],
        }
        path.write_text(json.dumps(payload, indent=2) + "\n")


def _merge(args: argparse.Namespace, key: str, default):
    value = getattr(args, key, None)
    if value is not None:
        return value
    if args.config_data and key in args.config_data:
        return args.config_data[key]
    return default


def _rod_spec(args) -> tuple[MaterialSpec, material.ConstitutiveVariant]:
    lam = float(_merge(args, "lam", 0.4))
    beta = float(_merge(args, "beta", 0.5))
    E = float(_merge(args, "E", 1.0))
    L = float(_merge(args, "L", 1.0))
    sigma_c = float(_merge(args, "sigma_c", 1.0))
    variant = material.parse_variant(str(_merge(args, "variant", "i")))
    return MaterialSpec.from_lambda_beta(lam, beta, E=E, L=L, sigma_c=sigma_c), variant


def _block_spec(args) -> MaterialSpec:
    return MaterialSpec(
        E=1.0,
        L=float(_merge(args, "L", 2.0)),
        l_c=float(_merge(args, "lc", 6.0)),
        sigma_c=1.0,
        G_c=float(_merge(args, "Gc", 0.25)),
        k=float(_merge(args, "k", 800.0)),
        G_0=float(_merge(args, "G0", 0.025)),
    )


def _parse_stations(raw: str) -> list[tuple[str, float]]:
    stations = []
    for token in str(raw).split(","):
        token = token.strip()
        if not token:
            continue
        if token.startswith("elastic:"):
            stations.append(("elastic", float(token.split(":", 1)[1])))
        else:
            stations.append(("driving", float(token)))
    if not stations:
        raise ValueError("empty station list")
    return stations


def _profile_rows(bundle: dict) -> tuple[list[str], list[list]]:
    columns = ["x [length]", "traction [stress]", "Y [energy/volume]",
               "Yc [energy/volume]", "gamma2 [energy/area]", "d [-]"]
    x = bundle["damage"].x
    rows = []
    for i in range(x.size):
        rows.append([float(x[i]), float(bundle["traction"].values[i]),
                     float(bundle["Y"].values[i]), float(bundle["Yc"].values[i]),
                     float(bundle["gamma2"].values[i]),
                     float(bundle["damage"].values[i])])
    return columns, rows


# ---------------------------------------------------------------------------
# Command implementations
# ---------------------------------------------------------------------------

def cmd_rod_curve(args) -> int:
    spec, variant = _rod_spec(args)
    n = int(_merge(args, "samples", 101))
    states = rod.equilibrium_curve(spec, variant, n)
    scale_u = spec.E / (spec.sigma_c * spec.L)
    columns = ["d_m [-]", "sigma [sigma/sigma_c]", "u_star [u E/(sigma_c L)]",
               "w [w E/(sigma_c L)]"]
    rows = [[s.d_m, s.sigma / spec.sigma_c, s.u_star * scale_u, s.w * scale_u]
            for s in states]
    out = Path(_merge(args, "out", f"rod_curve.{args.format}"))
    _write_table(out, columns, rows, args.format)
    print(f"wrote {out} ({len(rows)} rows)")
    return 0


def cmd_rod_profile(args) -> int:
    spec, variant = _rod_spec(args)
    if variant.threshold is not material.ThresholdLaw.COHESIVE_EQUIVALENT:
        raise GdlError("rod-profile provides closed-form fields for variant i only")
    n = int(_merge(args, "samples", 201))
    stations = _parse_stations(_merge(args, "stations", "0.25,0.5,0.75"))
    out_dir = Path(_merge(args, "out", "rod_profiles"))
    out_dir.mkdir(parents=True, exist_ok=True)
    fmt = args.format
    for kind, value in stations:
        if kind == "elastic":
            label = f"elastic_{value:g}"
            bundle = _rod_elastic_bundle(spec, value * spec.sigma_c, n)
        else:
            label = f"dm_{value:g}"
            bundle = rod.profile_bundle(spec, value, n)
        columns, rows = _profile_rows(bundle)
        path = out_dir / f"rod_profile_{label}.{fmt}"
        _write_table(path, columns, rows, fmt)
        print(f"wrote {path}")
    return 0


def _rod_elastic_bundle(spec: MaterialSpec, sigma: float, n: int) -> dict:
    """Pre-onset fields: uniform stress, zero damage, inactive constraint."""
    x = rod.grid_with_breakpoints(0.0, spec.L, n)
    zeros = np.zeros_like(x)
    y_el = sigma * sigma / spec.E  # -omega'(0)/omega(0)^2 * sigma^2 / (2E)
    yc0 = material.y_c(material.case_i(), spec, 0.0)
    mk = rod.FieldProfile
    return {
        "damage": mk(x, zeros, rod.FieldKind.DAMAGE, 0.0),
        "traction": mk(x, np.full_like(x, sigma), rod.FieldKind.TRACTION, 0.0),
        "Y": mk(x, np.full_like(x, y_el), rod.FieldKind.Y, 0.0),
        "Yc": mk(x, np.full_like(x, yc0), rod.FieldKind.YC, 0.0),
        "gamma2": mk(x, zeros, rod.FieldKind.GAMMA2, 0.0),
    }


def cmd_block_curve(args) -> int:
    spec = _block_spec(args)
    n = int(_merge(args, "samples", 50))
    states = block.equilibrium_curve_block(spec, n)
    columns = ["phase [-]", "l_m_or_c [length]", "delta [length]", "P [force]"]
    rows = []
    for s in states:
        driving = s.c if s.phase is block.BlockPhase.PROPAGATION else s.l_m
        rows.append([s.phase.value, float(driving), float(s.delta), float(s.P)])
    out = Path(_merge(args, "out", f"block_curve.{args.format}"))
    _write_table(out, columns, rows, args.format)
    print(f"wrote {out} ({len(rows)} rows)")
    return 0


def cmd_block_profile(args) -> int:
    spec = _block_spec(args)
    n = int(_merge(args, "samples", 201))
    stations = _parse_stations(_merge(args, "stations", "1.2,4.0,6.8"))
    out_dir = Path(_merge(args, "out", "block_profiles"))
    out_dir.mkdir(parents=True, exist_ok=True)
    delta0, _, _ = block.phase1_limits(spec)
    for kind, value in stations:
        if kind == "elastic":
            state = block.state_elastic(spec, value * delta0)
            label = f"elastic_{value:g}"
        else:
            state = block.state_from_lm(spec, value)
            label = f"lm_{value:g}"
        bundle = block.profile_bundle(spec, state, n)
        columns, rows = _profile_rows(bundle)
        path = out_dir / f"block_profile_{label}.{args.format}"
        _write_table(path, columns, rows, args.format)
        print(f"wrote {path}")
    return 0


def cmd_fem_run(args) -> int:
    spec, variant = _rod_spec(args)
    n_el = int(_merge(args, "elements", 200))
    n_steps = int(_merge(args, "steps", 50))
    u_scale = spec.sigma_c * spec.L / spec.E
    u_end = float(_merge(args, "u_end", 1.249 * u_scale))
    u_el = rod.elastic_limit(spec, variant)
    mesh = fem.Mesh1D.uniform(n_el, -spec.L, spec.L)
    solver = fem.RodFem(mesh, spec, variant)
    ramp = list(np.linspace(0.0, 0.995 * u_el, 4))
    ramp += list(np.linspace(0.995 * u_el, u_end, n_steps + 1)[1:])
    records, _ = solver.run_load_path(ramp)
    columns = ["step [-]", "u_star [length]", "sigma [stress]", "d_max [-]",
               "band_halfwidth [length]", "dissipation [energy/area]"]
    rows = [[i, r.u_star, r.sigma, r.d_max, r.band_halfwidth, r.dissipation]
            for i, r in enumerate(records)]
    out = Path(_merge(args, "out", f"fem_run.{args.format}"))
    _write_table(out, columns, rows, args.format)
    print(f"wrote {out} ({len(rows)} rows)")
    return 0


def cmd_verify(args) -> int:
    rod_spec, _ = _rod_spec(args)
    block_spec = _block_spec(args)
    include_fem = not bool(_merge(args, "no_fem", False))
    report = verify.run_all(rod_spec=rod_spec, block_spec=block_spec,
                            include_fem=include_fem,
                            fem_elements=int(_merge(args, "fem_elements", 80)))
    text = json.dumps(report, indent=2) + "\n"
    out = _merge(args, "out", None)
    if out is None:
        sys.stdout.write(text)
    else:
        Path(out).write_text(text)
        print(f"wrote {out}")
    n_checks = sum(len(s["checks"]) for s in report["suites"])
    status = "PASS" if report["passed"] else "FAIL"
    print(f"verify: {status} ({n_checks} checks, "
          f"{len(report['warnings'])} warnings)")
    return 0 if report["passed"] else 1


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------

def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="JSON file with defaults for the flags below")
    p.add_argument("--out", help="output path (directory for profile commands)")
    p.add_argument("--format", choices=("csv", "json"),
                   help="output format (default csv)")
    p.add_argument("--samples", type=int, help="sample count")


def _add_rod_material(p: argparse.ArgumentParser) -> None:
    p.add_argument("--variant", choices=("i", "ii", "iii"),
                   help="constitutive variant (default i)")
    p.add_argument("--lambda", dest="lam", type=float,
                   help="l_c / l_coh (default 0.4)")
    p.add_argument("--beta", type=float, help="l_c / L (default 0.5)")
    p.add_argument("--E", type=float, help="elastic modulus (default 1)")
    p.add_argument("--L", type=float, help="bar half-length (default 1)")
    p.add_argument("--sigma-c", dest="sigma_c", type=float,
                   help="peak stress (default 1)")


def _add_block_material(p: argparse.ArgumentParser) -> None:
    p.add_argument("--L", type=float, help="block width (default 2)")
    p.add_argument("--k", type=float, help="interface stiffness (default 800)")
    p.add_argument("--Gc", type=float, help="interface toughness (default 0.25)")
    p.add_argument("--G0", type=float, help="initial threshold (default 0.025)")
    p.add_argument("--lc", type=float, help="gradient length scale (default 6)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gdl",
        description="Gradient-bounded damage laboratory: analytic 1D solvers, "
                    "quadrature oracles, and a constrained staggered FE solver.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("rod-curve", help="bar equilibrium curve")
    _add_common(p)
    _add_rod_material(p)
    p.set_defaults(func=cmd_rod_curve)

    p = sub.add_parser("rod-profile", help="bar field profiles at stations")
    _add_common(p)
    _add_rod_material(p)
    p.add_argument("--stations", help="comma list of d_m values or elastic:FRAC")
    p.set_defaults(func=cmd_rod_profile)

    p = sub.add_parser("block-curve", help="delamination equilibrium path")
    _add_common(p)
    _add_block_material(p)
    p.set_defaults(func=cmd_block_curve)

    p = sub.add_parser("block-profile", help="interface field profiles at stations")
    _add_common(p)
    _add_block_material(p)
    p.add_argument("--stations", help="comma list of l_m values or elastic:FRAC")
    p.set_defaults(func=cmd_block_profile)

    p = sub.add_parser("fem-run", help="staggered FE analysis of the bar")
    _add_common(p)
    _add_rod_material(p)
    p.add_argument("--elements", type=int, help="element count (default 200)")
    p.add_argument("--steps", type=int, help="inelastic step count (default 50)")
    p.add_argument("--u-end", dest="u_end", type=float,
                   help="final end displacement (default 1.249 sigma_c L / E)")
    p.set_defaults(func=cmd_fem_run)

    p = sub.add_parser("verify", help="run verification suites, emit JSON report")
    _add_common(p)
    _add_rod_material(p)
    p.add_argument("--lc", type=float, help="block gradient length (default 6)")
    p.add_argument("--k", type=float, help="block interface stiffness")
    p.add_argument("--Gc", type=float, help="block toughness")
    p.add_argument("--G0", type=float, help="block initial threshold")
    p.add_argument("--no-fem", dest="no_fem", action="store_true", default=None,
                   help="skip the FE smoke suite")
    p.add_argument("--fem-elements", dest="fem_elements", type=int,
                   help="element count of the FE smoke suite (default 80)")
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    args.config_data = {}
    if getattr(args, "config", None):
        try:
            args.config_data = json.loads(Path(args.config).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            parser.error(f"cannot read config file {args.config}: {exc}")
    args.format = _merge(args, "format", "csv")
    try:
        return args.func(args)
    except GdlError as exc:
        parser.error(str(exc))
    except ValueError as exc:
        parser.error(str(exc))
    return 2


if __name__ == "__main__":
    raise SystemExit(main())
