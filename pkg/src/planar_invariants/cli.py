"""Command-line front end.

    planar-invariants dist    --z 0.5 --punctures=-0.5 --r 0.25
    planar-invariants squeeze --z 0.3 --punctures 0.5,-0.5
    planar-invariants verify  prime-identities lemma-min-sqrt-r --seed 1
    planar-invariants ball    --punctures 0.5 --z 0 --tanh-radius 0.49
    planar-invariants sweep   squeezing-annulus --r 0.25 --lo 0.26 --hi 0.99

Exit status: 0 when every check passes, 1 when one fails, 2 on usage or
configuration errors.
"""
from __future__ import annotations

import argparse
import csv
import inspect
import io
import json
import math
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .annulus import caratheodory_annulus, tanh_c_minus_sqrt_r
from .errors import InvariantError
from .hyperbolic import mu
from .invariants import (
    PuncturedDomain,
    annulus_gap_report,
    annulus_metric,
    disc_metric,
    general_upper_bound,
    punctured_disc_report,
    squeezing_annulus,
)
from .suites import (
    SUITE_ORDER,
    SUITES,
    SuiteResult,
    disc_threshold_case,
    squeezing_annulus_sweep,
)
from .topology import GridSpec, classify, heatmap_svg, mask_svg, mask_to_rle, sample_metric_ball

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
DEFAULT_SEED = 42
SWEEPS = ("squeezing-annulus", "squeezing-annulus-2d", "slit-margin", "disc-threshold")


class ConfigError(ValueError):
    pass


@dataclass
class RunConfig:
    command: str
    r: float | None = None
    punctures: list[complex] = field(default_factory=list)
    z: complex | None = None
    radius: float | None = None
    tanh_radius: float | None = None
    grid: tuple[int, int] = (1024, 1024)
    tol: float | None = None
    seed: int = DEFAULT_SEED
    out: Path | None = None
    format: str = "csv"
    suites: list[str] = field(default_factory=list)
    quantity: str | None = None
    lo: float | None = None
    hi: float | None = None
    samples: int = 100
    raster: Path | None = None
    timing: bool = False

    def __post_init__(self):
        if self.tol is not None and not self.tol > 0:
            raise ConfigError(f"--tol must be positive, got {self.tol}")
        if self.samples < 1:
            raise ConfigError("--samples must be at least 1")


def parse_complex(text: str) -> complex:
    """Parse ``x+yi`` style coordinates (``i`` or ``j`` as imaginary unit)."""
    t = text.strip().replace(" ", "").replace("i", "j")
    try:
        return complex(t)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a complex number: {text!r}") from None


def parse_points(text: str) -> list[complex]:
    return [parse_complex(p) for p in text.split(",") if p.strip()]


def parse_grid(text: str) -> tuple[int, int]:
    try:
        nx, ny = (int(v) for v in text.lower().split("x"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"grid must look like 1024x1024, got {text!r}") from None
    return nx, ny


def fmt(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return format(value, ".17g")
    if isinstance(value, complex):
        return f"{value.real:.17g}{value.imag:+.17g}i"
    return str(value)


def _jsonable(value):
    if isinstance(value, complex):
        return [value.real, value.imag]
    if isinstance(value, dict):
        return {k: _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if isinstance(value, np.generic):
        return value.item()
    return value


def rows_to_csv(rows: list[dict]) -> str:
    buf = io.StringIO()
    if rows:
        writer = csv.writer(buf, lineterminator="\n")
        header = list(rows[0])
        writer.writerow(header)
        for row in rows:
            writer.writerow([fmt(row.get(k, "")) for k in header])
    return buf.getvalue()


def emit(cfg: RunConfig, text: str) -> None:
    if cfg.out is None:
        sys.stdout.write(text)
        return
    try:
        cfg.out.write_text(text, encoding="utf-8", newline="\n")
    except OSError as exc:
        raise ConfigError(f"cannot write {cfg.out}: {exc}") from None


def _suite_rows(results: list[SuiteResult], cfg: RunConfig) -> list[dict]:
    rows = []
    for res in results:
        row = {"suite": res.suite, "formula": res.formula, "tolerance": res.tolerance,
               "cases_run": res.cases_run, "cases_passed": res.cases_passed,
               "max_error": res.max_error, "passed": res.passed, "seed": cfg.seed}
        if cfg.timing:
            row["wall_time"] = res.wall_time
        rows.append(row)
    return rows


def _write_results(cfg: RunConfig, results: list[SuiteResult], extra: dict | None = None) -> None:
    if cfg.format == "json":
        doc = {"command": cfg.command, "seed": cfg.seed,
               "suites": [r.to_dict(cfg.timing) for r in results]}
        if extra:
            doc.update(extra)
        emit(cfg, json.dumps(_jsonable(doc), indent=2) + "\n")
    else:
        emit(cfg, rows_to_csv(_suite_rows(results, cfg)))


def _log(results: list[SuiteResult]) -> None:
    for res in results:
        mark = "PASS" if res.passed else "FAIL"
        print(f"[{mark}] {res.suite}: {res.cases_passed}/{res.cases_run} "
              f"max_error={res.max_error:.3g} tol={res.tolerance:g} ({res.wall_time:.2f}s)",
              file=sys.stderr)


def run_verify(cfg: RunConfig) -> list[SuiteResult]:
    """Run the named suites in declaration order with one seeded generator each."""
    names = cfg.suites or ["all"]
    if "all" in names:
        names = list(SUITE_ORDER)
    unknown = [n for n in names if n not in SUITES]
    if unknown:
        raise ConfigError(f"unknown suite(s): {', '.join(unknown)}; "
                          f"choose from {', '.join(SUITE_ORDER)} or all")
    results = []
    for name in SUITE_ORDER:
        if name not in names:
            continue
        rng = np.random.default_rng(cfg.seed)
        kwargs = {"tol": cfg.tol} if cfg.tol is not None and _accepts_tol(name) else {}
        try:
            results.extend(SUITES[name](rng, **kwargs))
        except InvariantError as exc:
            results.append(SuiteResult(name, 1, 0, math.nan, cfg.tol or 0.0, "crashed",
                                       details={"error": str(exc)}))
    return results


def _accepts_tol(name: str) -> bool:
    return "tol" in inspect.signature(SUITES[name]).parameters


def _domain(cfg: RunConfig) -> PuncturedDomain:
    if not cfg.punctures:
        raise ConfigError("--punctures is required")
    if cfg.r is not None:
        return PuncturedDomain.annulus(cfg.r, cfg.punctures)
    return PuncturedDomain.disc(cfg.punctures)


def _need_z(cfg: RunConfig) -> complex:
    if cfg.z is None:
        raise ConfigError("--z is required")
    return cfg.z


def run_dist(cfg: RunConfig) -> list[dict]:
    z = _need_z(cfg)
    if not cfg.punctures:
        raise ConfigError("--punctures lists the points to measure to")
    rows = []
    for w in cfg.punctures:
        if cfg.r is not None:
            d = caratheodory_annulus(cfg.r, z, w)
            base, formula = f"annulus r={fmt(cfg.r)}", "prime_function_caratheodory"
        else:
            d = disc_metric(z, w)
            base, formula = "unit disc", "pseudo_hyperbolic"
        rows.append({"z": z, "w": w, "base": base, "tanh_scale": d.tanh_scale,
                     "hyperbolic": d.hyperbolic, "formula": formula,
                     "tolerance": cfg.tol or 1e-12})
    return rows


def run_squeeze(cfg: RunConfig) -> list[dict]:
    z = _need_z(cfg)
    tol = cfg.tol or 1e-12
    rows = []
    if cfg.r is None:
        rep = punctured_disc_report(z, cfg.punctures, tol)
        for key, value in rep.values.items():
            rows.append({"z": z, "quantity": key, "value": value,
                         "formula": rep.formulas[key], "tolerance": tol})
        for w in rep.witnesses:
            rows.append({"z": z, "quantity": "nearest_puncture", "value": w,
                         "formula": "argmin_pseudo_hyperbolic", "tolerance": tol})
        return rows
    pts = cfg.punctures
    if (len(pts) == 1 and z.imag == 0 and pts[0].imag == 0
            and -1 < pts[0].real <= -math.sqrt(cfg.r)):
        rep = annulus_gap_report(cfg.r, z.real, pts[0].real, cfg.tol or 1e-10)
        for key, value in rep.values.items():
            rows.append({"z": z, "quantity": key, "value": value,
                         "formula": rep.formulas[key], "tolerance": rep.tolerance})
        return rows
    rows.append({"z": z, "quantity": "squeezing_annulus", "value": squeezing_annulus(cfg.r, z),
                 "formula": "max_modulus_or_r_over_modulus", "tolerance": tol})
    if pts:
        bound = general_upper_bound(z, pts, annulus_metric(cfg.r))
        rows.append({"z": z, "quantity": "upper_bound", "value": bound,
                     "formula": "min_tanh_caratheodory_annulus", "tolerance": tol})
    return rows


def _ball_radius(cfg: RunConfig) -> float:
    if (cfg.radius is None) == (cfg.tanh_radius is None):
        raise ConfigError("give exactly one of --radius and --tanh-radius")
    return cfg.radius if cfg.radius is not None else mu(cfg.tanh_radius)


def run_ball(cfg: RunConfig) -> SuiteResult:
    start = time.perf_counter()
    domain = _domain(cfg)
    z = _need_z(cfg)
    radius = _ball_radius(cfg)
    grid = GridSpec.around_unit_disc(*cfg.grid)
    mask = sample_metric_ball(domain, z, radius, grid)
    info = classify(mask)
    details = {"z": z, "radius": radius, "tanh_radius": math.tanh(radius),
               "grid": f"{grid.nx}x{grid.ny}", **info}
    if domain.is_annulus:
        details["contains_minus_sqrt_r"] = mask.contains_point(-math.sqrt(cfg.r))
    if cfg.raster is not None:
        try:
            cfg.raster.write_text(mask_to_rle(mask), encoding="utf-8", newline="\n")
        except OSError as exc:
            raise ConfigError(f"cannot write {cfg.raster}: {exc}") from None
    if cfg.format == "svg":
        emit(cfg, mask_svg(mask))
    elif cfg.format == "json":
        emit(cfg, json.dumps(_jsonable({"command": "ball", **details,
                                        "raster": mask_to_rle(mask)}), indent=2) + "\n")
    else:
        emit(cfg, rows_to_csv([{**details, "formula": "cell_center_sampling"}]))
    return SuiteResult("ball", 1, 1, 0.0, 0.0, "cell_center_sampling",
                       time.perf_counter() - start, details)


def run_sweep(cfg: RunConfig) -> SuiteResult:
    """Sample a quantity along a range and write one CSV row per sample."""
    start = time.perf_counter()
    q = cfg.quantity
    rng = np.random.default_rng(cfg.seed)
    if q not in SWEEPS:
        raise ConfigError(f"unknown sweep {q!r}; choose from {', '.join(SWEEPS)}")
    if cfg.lo is not None and cfg.hi is not None and not cfg.lo < cfg.hi:
        raise ConfigError("empty sweep range: need --lo < --hi")
    rows: list[dict] = []
    ok = True
    worst = 0.0
    tol = cfg.tol or 1e-12
    if q in ("squeezing-annulus", "squeezing-annulus-2d", "slit-margin") and cfg.r is None:
        raise ConfigError(f"sweep {q} needs --r")

    if q == "squeezing-annulus":
        r = cfg.r
        lo = cfg.lo if cfg.lo is not None else r + 0.01 * (1 - r)
        hi = cfg.hi if cfg.hi is not None else 1 - 0.01 * (1 - r)
        res = squeezing_annulus_sweep(r, lo, hi, cfg.samples, rng)
        for m, a, v in zip(res["moduli"], res["angles"], res["values"]):
            rows.append({"r": r, "modulus": float(m), "angle": float(a), "squeezing": float(v),
                         "closed_form": max(m, r / m), "formula": "max_modulus_or_r_over_modulus",
                         "tolerance": tol})
        at_root = squeezing_annulus(r, math.sqrt(r))
        worst = max(res["max_error"], abs(at_root - math.sqrt(r)))
        ok = res["v_shape"] and worst <= tol and res["min_value"] >= math.sqrt(r) - tol
    elif q == "squeezing-annulus-2d":
        r = cfg.r
        grid = GridSpec.around_unit_disc(*cfg.grid)
        pts = grid.centers()
        mod = np.abs(pts)
        vals = np.full(pts.shape, np.nan)
        inside = (mod > r) & (mod < 1)
        vals[inside] = np.maximum(mod[inside], r / mod[inside])
        worst = float(abs(np.nanmin(vals) - math.sqrt(r)))
        ok = bool(np.nanmin(vals) >= math.sqrt(r) - tol)
        if cfg.format == "svg":
            emit(cfg, heatmap_svg(vals, grid, 0.0, 1.0))
            return SuiteResult(f"sweep:{q}", 1, int(ok), worst, tol,
                               "max_modulus_or_r_over_modulus", time.perf_counter() - start)
        for j in range(0, grid.ny, max(1, grid.ny // cfg.samples)):
            for i in range(0, grid.nx, max(1, grid.nx // cfg.samples)):
                if inside[j, i]:
                    rows.append({"r": r, "x": float(pts[j, i].real), "y": float(pts[j, i].imag),
                                 "squeezing": float(vals[j, i]),
                                 "formula": "max_modulus_or_r_over_modulus", "tolerance": tol})
    elif q == "slit-margin":
        r = cfg.r
        s = math.sqrt(r)
        tol = cfg.tol or 1e-10
        lo = cfg.lo if cfg.lo is not None else r
        hi = cfg.hi if cfg.hi is not None else s
        for k in range(1, cfg.samples + 1):
            z = lo + k * (hi - lo) / (cfg.samples + 1)
            t = tanh_c_minus_sqrt_r(r, z)
            margin = t - r / z
            ok &= margin > tol
            rows.append({"r": r, "z": z, "tanh_c_minus_sqrt_r": t, "r_over_z": r / z,
                         "margin": margin, "formula": "slit_map_squared_over_z - r_over_z",
                         "tolerance": tol})
        worst = min(row["margin"] for row in rows)
    else:
        z = cfg.z if cfg.z is not None else 0j
        tol = 1.0  # threshold error measured in slack units
        grid = GridSpec.around_unit_disc(*cfg.grid)
        lo = cfg.lo if cfg.lo is not None else -0.8
        hi = cfg.hi if cfg.hi is not None else 0.8
        for w in np.linspace(lo, hi, cfg.samples):
            w = complex(w)
            if abs(w - z) < 0.05:
                continue
            case = disc_threshold_case(z, w, grid)
            within = case["error"] <= case["slack"]
            ok &= within
            worst = max(worst, case["error"] / case["slack"])
            rows.append({"z": z, "w": w, "threshold": case["threshold"], "exact": case["exact"],
                         "slack": case["slack"], "error": case["error"], "within": within,
                         "formula": "mu(pseudo_hyperbolic)", "tolerance": case["slack"]})
    if cfg.format == "json":
        emit(cfg, json.dumps(_jsonable({"command": "sweep", "quantity": q, "rows": rows}),
                             indent=2) + "\n")
    elif cfg.format == "svg":
        raise ConfigError(f"sweep {q} has no svg output; use squeezing-annulus-2d")
    else:
        emit(cfg, rows_to_csv(rows))
    if not rows:
        raise ConfigError("sweep produced no samples")
    return SuiteResult(f"sweep:{q}", len(rows), len(rows) if ok else 0, worst, tol,
                       rows[0]["formula"], time.perf_counter() - start)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="planar-invariants",
        description="Caratheodory distance, squeezing functions and Fridman invariants "
                    "of punctured discs and annuli.",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog=__doc__,
    )
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--r", type=float, help="annulus modulus; omit for the unit disc")
    common.add_argument("--punctures", type=parse_points, default=[],
                        help="comma-separated points, e.g. 0.5,-0.3+0.2i")
    common.add_argument("--z", type=parse_complex, help="query point / ball centre")
    common.add_argument("--tol", type=float)
    common.add_argument("--seed", type=int, default=DEFAULT_SEED)
    common.add_argument("--grid", type=parse_grid, default=(1024, 1024), help="NxM cells")
    common.add_argument("--out", type=Path, help="output file (default: stdout)")
    common.add_argument("--format", choices=("csv", "json", "svg"), default="csv")
    common.add_argument("--timing", action="store_true",
                        help="include wall-clock times in outputs (breaks byte-identity)")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("dist", parents=[common], help="Caratheodory distance from --z to each point")
    sub.add_parser("squeeze", parents=[common], help="squeezing function and related invariants")
    p = sub.add_parser("verify", parents=[common], help="run verification suites")
    p.add_argument("suites", nargs="*", metavar="SUITE",
                   help=f"one or more of: all, {', '.join(SUITE_ORDER)}")
    p = sub.add_parser("ball", parents=[common], help="sample a metric ball and classify it")
    p.add_argument("--radius", type=float, help="hyperbolic-scale radius")
    p.add_argument("--tanh-radius", type=float, help="tanh-scale radius")
    p.add_argument("--raster", type=Path, help="also write the run-length raster here")
    p = sub.add_parser("sweep", parents=[common], help="sample a quantity over a range")
    p.add_argument("quantity", choices=SWEEPS)
    p.add_argument("--lo", type=float)
    p.add_argument("--hi", type=float)
    p.add_argument("--samples", type=int, default=100)
    return parser


def config_from_args(args: argparse.Namespace) -> RunConfig:
    return RunConfig(
        command=args.command, r=args.r, punctures=args.punctures, z=args.z,
        radius=getattr(args, "radius", None), tanh_radius=getattr(args, "tanh_radius", None),
        grid=args.grid, tol=args.tol, seed=args.seed, out=args.out, format=args.format,
        suites=getattr(args, "suites", []), quantity=getattr(args, "quantity", None),
        lo=getattr(args, "lo", None), hi=getattr(args, "hi", None),
        samples=getattr(args, "samples", 100), raster=getattr(args, "raster", None),
        timing=args.timing,
    )


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = config_from_args(args)
        if cfg.command == "verify":
            if cfg.format == "svg":
                raise ConfigError("verify writes csv or json")
            results = run_verify(cfg)
            _write_results(cfg, results)
            _log(results)
            return EXIT_OK if all(r.passed for r in results) else EXIT_FAIL
        if cfg.command == "ball":
            run_ball(cfg)
            return EXIT_OK
        if cfg.command == "sweep":
            res = run_sweep(cfg)
            _log([res])
            return EXIT_OK if res.passed else EXIT_FAIL
        if cfg.format == "svg":
            raise ConfigError(f"{cfg.command} writes csv or json")
        rows = run_dist(cfg) if cfg.command == "dist" else run_squeeze(cfg)
        if cfg.format == "json":
            emit(cfg, json.dumps(_jsonable({"command": cfg.command, "rows": rows}), indent=2) + "\n")
        else:
            emit(cfg, rows_to_csv(rows))
        return EXIT_OK
    except (ConfigError, InvariantError, ValueError) as exc:
        print(f"planar-invariants: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
