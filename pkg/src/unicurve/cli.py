"""Command-line front end: build schedules, verify the construction's
inequalities, evaluate the curve, and sweep the growth report.

One TOML config file drives everything (no environment configuration); unknown
keys are rejected so a typo cannot silently change a run.  All outputs are
deterministic for a fixed config: the only randomness is seeded sampling.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

try:
    import tomllib  # py311+
except ModuleNotFoundError:  # pragma: no cover
    import tomli as tomllib

from . import nevanlinna
from .curve import UniversalCurve
from .nevanlinna import QuadConfig, characteristic_area, characteristic_fmt, growth_report, log_grid, nudge_radius, proximity
from .rcurve import RationalCurve
from .runge import EntireCurveSpec, component_from_spec, rationalize
from .scheduler import (
    MAGNITUDE_CAP,
    GrowthGauge,
    ScheduleError,
    audit_system13,
    build_schedule,
    dump_schedule,
    enumerate_R,
    load_schedule,
    resolve_all,
)


class ConfigError(ValueError):
    pass


_SCHEMA = {
    "run": {"dimension", "block_count", "seed", "magnitude_cap"},
    "gauge": {"kind", "c", "b", "alpha", "points"},
    "angles": None,
    "dictionary": {"curves", "targets", "enumerate"},
    "verify": {
        "quad_tol",
        "growth_points",
        "growth_rmin",
        "growth_rmax",
        "outside_samples",
        "error_grid",
        "lemma4_eps",
        "lemma4_radius",
        "enable_area",
        "area_radii",
        "lemma_slack",
    },
    "output": {"dir"},
}

_CURVE_KEYS = {"coefficients"}
_TARGET_KEYS = {"N", "eps", "sigma", "components"}
_ENUM_KEYS = {"max_degree", "max_height", "cap"}
_COMPONENT_KEYS = {"kind", "re", "im", "scale", "coefficients"}


@dataclass
class RunConfig:
    dimension: int
    block_count: int
    seed: int
    magnitude_cap: int
    gauge: GrowthGauge
    angles: list
    curves: list = field(default_factory=list)
    targets: list = field(default_factory=list)
    enumerate_bounds: dict = field(default_factory=dict)
    verify: dict = field(default_factory=dict)
    output_dir: str = "out"


def _reject_unknown(section: str, table: dict, allowed: set):
    extra = set(table) - allowed
    if extra:
        raise ConfigError(f"unknown keys in [{section}]: {sorted(extra)}")


def parse_config(text: str) -> RunConfig:
    data = tomllib.loads(text)
    _reject_unknown("<top>", data, set(_SCHEMA))
    run = data.get("run", {})
    _reject_unknown("run", run, _SCHEMA["run"])
    gauge_tbl = dict(data.get("gauge", {"kind": "scaled-log", "c": 1.0, "b": 1.0}))
    _reject_unknown("gauge", gauge_tbl, _SCHEMA["gauge"])
    kind = gauge_tbl.pop("kind")
    if kind == "samples":
        gauge = GrowthGauge.from_samples(gauge_tbl["points"])
    else:
        gauge = GrowthGauge(kind, gauge_tbl)

    angles = [float(a) for a in data.get("angles", [0.0])]
    for a in angles:
        if not 0.0 <= a < 2 * math.pi:
            raise ConfigError(f"angle {a} outside [0, 2*pi)")

    dictionary = data.get("dictionary", {})
    _reject_unknown("dictionary", dictionary, _SCHEMA["dictionary"])
    curves = []
    for entry in dictionary.get("curves", []):
        _reject_unknown("dictionary.curves", entry, _CURVE_KEYS)
        curves.append(entry["coefficients"])
    targets = []
    for entry in dictionary.get("targets", []):
        _reject_unknown("dictionary.targets", entry, _TARGET_KEYS)
        for comp in entry["components"]:
            _reject_unknown("components", comp, _COMPONENT_KEYS)
        targets.append(entry)
    enum = dictionary.get("enumerate", {})
    if enum:
        _reject_unknown("dictionary.enumerate", enum, _ENUM_KEYS)

    verify = dict(data.get("verify", {}))
    _reject_unknown("verify", verify, _SCHEMA["verify"])
    for key in ("quad_tol", "lemma4_eps", "lemma_slack"):
        if key in verify and not verify[key] > 0:
            raise ConfigError(f"verify.{key} must be positive")

    out = data.get("output", {})
    _reject_unknown("output", out, _SCHEMA["output"])

    K = int(run.get("block_count", 1))
    if K < 1:
        raise ConfigError("run.block_count must be >= 1")
    return RunConfig(
        dimension=int(run.get("dimension", 1)),
        block_count=K,
        seed=int(run.get("seed", 0)),
        magnitude_cap=int(run.get("magnitude_cap", MAGNITUDE_CAP)),
        gauge=gauge,
        angles=angles,
        curves=curves,
        targets=targets,
        enumerate_bounds=enum,
        verify=verify,
        output_dir=str(out.get("dir", "out")),
    )


def build_dictionary(cfg: RunConfig):
    """Inline curves, Runge-fitted targets, then the enumerated slice."""
    result = [RationalCurve.from_strings(c) for c in cfg.curves]
    for t in cfg.targets:
        comps = [component_from_spec(c) for c in t["components"]]
        spec = EntireCurveSpec(
            n=cfg.dimension, components=comps, sigma=float(t.get("sigma", 1.0))
        )
        result.append(rationalize(spec, float(t["N"]), float(t["eps"])))
    if cfg.enumerate_bounds:
        result.extend(
            enumerate_R(
                int(cfg.enumerate_bounds["max_degree"]),
                int(cfg.enumerate_bounds["max_height"]),
                cfg.dimension,
                cap=int(cfg.enumerate_bounds.get("cap", 200_000)),
            )
        )
    return result


# --- subcommands --------------------------------------------------------------

def cmd_schedule(args) -> int:
    cfg = parse_config(Path(args.config).read_text())
    if args.seed is not None:
        cfg.seed = args.seed
    outdir = Path(args.out or cfg.output_dir)
    outdir.mkdir(parents=True, exist_ok=True)
    try:
        dictionary = build_dictionary(cfg)
        sched = build_schedule(
            dictionary, cfg.angles, cfg.block_count, cfg.gauge, cfg.dimension
        )
        resolve_all(sched, cap=cfg.magnitude_cap)
        audit = audit_system13(sched)
    except ScheduleError as exc:
        ineq = getattr(exc, "inequality", None)
        suffix = f" (inequality {ineq})" if ineq else ""
        print(f"schedule failed: {exc}{suffix}", file=sys.stderr)
        return 2

    (outdir / "schedule.json").write_text(dump_schedule(sched))
    lines = [
        f"dimension n = {sched.n}",
        f"r0 = {sched.r0!r}  eps0 = {sched.eps0!r}",
        f"blocks = {len(sched.blocks)}",
    ]
    for row in audit["blocks"]:
        m = row["margins"]
        lines.append(
            f"block {row['k']}: |a| = {row['modulus']}  R = {row['R']!r}  "
            f"n_poles = {row['n_poles']}  margins: "
            f"i = {m['i']!r}  ii = {m['ii']!r}  iii = {m['iii']!r}  iv = {m['iv']!r}"
        )
    lines.append(f"system audit passed: {audit['passed']}")
    (outdir / "schedule_summary.txt").write_text("\n".join(lines) + "\n")
    print(f"wrote {outdir / 'schedule.json'}")
    return 0 if audit["passed"] else 1


def _default_verify_options(cfg_verify: dict) -> dict:
    opts = {
        "quad_tol": 1e-8,
        "growth_points": 200,
        "growth_rmin": 1.0,
        "growth_rmax": None,
        "outside_samples": 1000,
        "error_grid": 17,
        "lemma4_eps": 0.1,
        "lemma4_radius": 2.0,
        "enable_area": False,
        "area_radii": 10,
        "lemma_slack": 1e-6,
    }
    opts.update(cfg_verify)
    return opts


def outside_samples(u: UniversalCurve, count: int, seed: int):
    """Deterministic log-spaced radii x rotated angle fans, filtered to lie
    outside every disc, at least `count` survivors."""
    if u.centers.size:
        rmax = 2.0 * float(np.max(np.abs(u.centers)))
    else:
        rmax = 100.0
    rng = np.random.default_rng(seed)
    n_r = max(16, count // 12)
    while True:
        radii = np.geomspace(1.0, rmax, n_r)
        offs = rng.uniform(0, 2 * np.pi, n_r)
        th = 2 * np.pi * np.arange(16) / 16
        zs = (radii[:, None] * np.exp(1j * (th[None, :] + offs[:, None]))).ravel()
        zs = zs[~u.in_any_disc(zs)]
        if zs.size >= count:
            return zs[:count]
        n_r *= 2


def area_check_radii(u: UniversalCurve, count: int):
    """Log-spaced radii kept >= 1 away from every pole modulus."""
    rmax = 1.5 * float(np.max(np.abs(u.centers))) if u.centers.size else 50.0
    base = np.geomspace(2.0, rmax, count)
    mags = np.abs(u._pole_locs) if u.poles else np.zeros(0)
    out = []
    for r in base:
        r = float(r)
        while mags.size and np.min(np.abs(mags - r)) < 1.0:
            r *= 1.03
        out.append(r)
    return out


def run_suites(u: UniversalCurve, which: str, opts: dict, seed: int, jobs: int = 1):
    """Execute the requested verification suites; returns a JSON-able report."""
    quad = QuadConfig(tol=float(opts["quad_tol"]))
    report = {"suites": {}, "passed": True}
    wanted = {which} if which != "all" else {"separation", "approx", "growth", "fmt-consistency"}
    if which != "all" and which not in {"separation", "approx", "growth", "fmt-consistency"}:
        raise ConfigError(f"unknown suite {which!r}")

    if "separation" in wanted:
        if u.schedule.manual:
            sep = {"passed": False, "error": "manual schedule has no system audit"}
        else:
            audit = audit_system13(u.schedule)
            sep = {
                "passed": audit["passed"],
                "blocks": audit["blocks"],
                "separation": audit["separation"],
            }
        report["suites"]["separation"] = sep
        report["passed"] &= sep["passed"]

    if "approx" in wanted:
        zs = outside_samples(u, int(opts["outside_samples"]), seed)
        outside = u.outside_disc_bound_check(zs)
        eps_rows = u.error_term_bound_check(int(opts["error_grid"]))
        uni = u.universality_check(float(opts["lemma4_radius"]), float(opts["lemma4_eps"]))
        ok = outside.passed and all(r["ok"] for r in eps_rows) and (
            uni.passed or uni.needs_extension
        )
        report["suites"]["approx"] = {
            "passed": bool(ok),
            "outside": {
                "checked": outside.checked,
                "max_abs": outside.max_abs,
                "worst_point": [
                    outside.worst_point.real if outside.worst_point is not None else None,
                    outside.worst_point.imag if outside.worst_point is not None else None,
                ],
                "passed": outside.passed,
            },
            "error_terms": eps_rows,
            "universality": {
                "block": uni.block,
                "sup_distance": uni.sup_distance,
                "error_max": uni.error_max,
                "error_threshold": uni.error_threshold,
                "eps": uni.eps,
                "passed": uni.passed,
                "needs_extension": uni.needs_extension,
            },
        }
        report["passed"] &= ok

    if "growth" in wanted:
        rmax = opts["growth_rmax"]
        if rmax is None:
            rmax = (
                2.0 * float(np.max(np.abs(u.centers))) if u.centers.size else 100.0
            )
        grid = log_grid(float(opts["growth_rmin"]), float(rmax), int(opts["growth_points"]))
        rep = growth_report(
            u,
            grid,
            quad=quad,
            enable_area=bool(opts["enable_area"]),
            lemma_slack=float(opts["lemma_slack"]),
        )
        report["suites"]["growth"] = {
            "passed": rep.passed,
            "strict_ok": rep.strict_ok,
            "lemma_ok": rep.lemma_ok,
            "monotone_ok": rep.monotone_ok,
            "notes": rep.notes,
            "points": len(rep.rows),
        }
        report["_growth_rows"] = rep
        report["passed"] &= rep.passed

    if "fmt-consistency" in wanted:
        radii = area_check_radii(u, int(opts["area_radii"]))
        m1 = proximity(u, 1.0, quad)

        def one(r):
            r, _ = nudge_radius(u, r)
            t_fmt = characteristic_fmt(u, r, quad, m1=m1)
            t_area, t_err = characteristic_area(u, r, quad)
            tol = max(1e-2, 1e-2 * abs(t_fmt))
            return {
                "r": r,
                "T_fmt": t_fmt,
                "T_area": t_area,
                "quad_err": t_err,
                "difference": abs(t_area - t_fmt),
                "tolerance": tol,
                "ok": abs(t_area - t_fmt) <= tol,
            }

        if jobs > 1:
            with ThreadPoolExecutor(max_workers=jobs) as pool:
                rows = list(pool.map(one, radii))
        else:
            rows = [one(r) for r in radii]
        ok = all(r["ok"] for r in rows)
        report["suites"]["fmt-consistency"] = {"passed": ok, "rows": rows}
        report["passed"] &= ok

    report["passed"] = bool(report["passed"])
    return report


def cmd_verify(args) -> int:
    sched = load_schedule(Path(args.schedule).read_text())
    cfg_verify = {}
    seed = 0
    if args.config:
        cfg = parse_config(Path(args.config).read_text())
        cfg_verify = cfg.verify
        seed = cfg.seed
    if args.seed is not None:
        seed = args.seed
    opts = _default_verify_options(cfg_verify)
    if args.enable_area:
        opts["enable_area"] = True
    u = UniversalCurve(sched, root_seed=seed)
    outdir = Path(args.out or "out")
    outdir.mkdir(parents=True, exist_ok=True)
    report = run_suites(u, args.which, opts, seed, jobs=args.jobs)
    rep_growth = report.pop("_growth_rows", None)
    (outdir / "verify_report.json").write_text(
        json.dumps(report, indent=2, sort_keys=True) + "\n"
    )
    if rep_growth is not None:
        (outdir / "growth.csv").write_text("\n".join(rep_growth.csv_lines()) + "\n")
    status = "PASS" if report["passed"] else "FAIL"
    print(f"verify [{args.which}]: {status}")
    if not report["passed"]:
        for name, suite in report["suites"].items():
            if not suite.get("passed", True):
                print(f"  failing suite: {name}", file=sys.stderr)
    return 0 if report["passed"] else 1


def _parse_points(spec: str):
    pts = []
    for tok in spec.split(";"):
        tok = tok.strip()
        if not tok:
            continue
        re_s, im_s = (tok.split(",") + ["0"])[:2]
        pts.append(complex(float(re_s), float(im_s)))
    return np.array(pts, dtype=np.complex128)


def _parse_grid(spec: str):
    parts = [float(x) for x in spec.split(",")]
    if len(parts) != 5:
        raise ConfigError("grid spec is re0,re1,im0,im1,count")
    re0, re1, im0, im1, count = parts
    count = int(count)
    xs = np.linspace(re0, re1, count)
    ys = np.linspace(im0, im1, count)
    return (xs[None, :] + 1j * ys[:, None]).ravel()


def cmd_eval(args) -> int:
    sched = load_schedule(Path(args.schedule).read_text())
    u = UniversalCurve(sched, root_seed=args.seed or 0)
    if args.points:
        zs = _parse_points(args.points)
    elif args.grid:
        zs = _parse_grid(args.grid)
    else:
        print("need --points or --grid", file=sys.stderr)
        return 2
    in_disc = u.in_any_disc(zs)
    header = (
        "z_re,z_im,"
        + ",".join(f"abs_h_{j}" for j in range(1, u.n + 1))
        + ",in_disc_flag,nearest_block"
    )
    lines = [header]
    for z, flag in zip(zs, in_disc):
        pt = u.eval_proj(complex(z))
        v = pt.homog
        if v[0] != 0:
            mags = np.abs(v[1:] / v[0])
        else:
            mags = np.full(u.n, np.inf)
        mag_s = ",".join(repr(float(m)) for m in mags)
        lines.append(
            f"{float(z.real)!r},{float(z.imag)!r},{mag_s},{int(flag)},{u.nearest_block(complex(z))}"
        )
    text = "\n".join(lines) + "\n"
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return 0


def cmd_sweep(args) -> int:
    sched = load_schedule(Path(args.schedule).read_text())
    u = UniversalCurve(sched, root_seed=args.seed or 0)
    rmax = args.rmax
    if rmax is None:
        rmax = 2.0 * float(np.max(np.abs(u.centers))) if u.centers.size else 100.0
    grid = log_grid(args.rmin, rmax, args.count)
    rep = growth_report(
        u, grid, quad=QuadConfig(), enable_area=args.enable_area
    )
    text = "\n".join(rep.csv_lines()) + "\n"
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    print(f"growth sweep: {'PASS' if rep.passed else 'FAIL'}", file=sys.stderr)
    return 0 if rep.passed else 1


def cmd_runge_fit(args) -> int:
    cfg = parse_config(Path(args.config).read_text())
    if not cfg.targets:
        print("config has no [[dictionary.targets]] entry", file=sys.stderr)
        return 2
    t = cfg.targets[0]
    comps = [component_from_spec(c) for c in t["components"]]
    spec = EntireCurveSpec(n=cfg.dimension, components=comps, sigma=float(t.get("sigma", 1.0)))
    curve = rationalize(spec, float(t["N"]), float(t["eps"]))
    degs = [p.degree for p in curve.polys]
    print(f"fitted curve on closed disc N = {t['N']} with eps = {t['eps']}")
    print(f"component degrees: {degs}")
    for j, coeffs in enumerate(curve.to_strings()):
        print(f"p{j}: {coeffs}")
    if args.out:
        Path(args.out).write_text(
            json.dumps({"coefficients": curve.to_strings()}, indent=2, sort_keys=True) + "\n"
        )
    return 0


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="unicurve",
        description="universal entire curves with slow Nevanlinna growth: "
        "schedule construction and numerical verification",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("schedule", help="build and resolve a schedule from a config")
    p.add_argument("--config", required=True)
    p.add_argument("--out", default=None)
    p.add_argument("--seed", type=int, default=None)
    p.set_defaults(func=cmd_schedule)

    p = sub.add_parser("verify", help="run verification suites on a schedule")
    p.add_argument("--schedule", required=True)
    p.add_argument("--config", default=None)
    p.add_argument("--which", default="all",
                   choices=["growth", "separation", "approx", "fmt-consistency", "all"])
    p.add_argument("--out", default=None)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--enable-area", action="store_true")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("eval", help="evaluate the curve at points or on a grid")
    p.add_argument("--schedule", required=True)
    p.add_argument("--points", default=None, help="re,im;re,im;...")
    p.add_argument("--grid", default=None, help="re0,re1,im0,im1,count")
    p.add_argument("--out", default=None)
    p.add_argument("--seed", type=int, default=None)
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("sweep", help="growth report over a log-spaced radius grid")
    p.add_argument("--schedule", required=True)
    p.add_argument("--rmin", type=float, default=1.0)
    p.add_argument("--rmax", type=float, default=None)
    p.add_argument("--count", type=int, default=200)
    p.add_argument("--out", default=None)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--enable-area", action="store_true")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("runge-fit", help="fit the first config target and print the curve")
    p.add_argument("--config", required=True)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_runge_fit)

    args = parser.parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
