"""bandscan command line interface.

Subcommands: classify, gap, bands, face-map, global-scan, oracle-compare,
capacitance.  Exit codes: 0 success, 2 usage/config error, 3 numerical or
oracle failure.  All frequencies are emitted as omega/c; the --c flag only
rescales the console summary.  BANDSCAN_THREADS caps FFT worker threads
(pair it with OPENBLAS_NUM_THREADS / OMP_NUM_THREADS for bit-reproducible
runs); --seed fixes any randomized solver fallback.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys

import numpy as np

from . import __version__, dirichlet, lattice, transmission
from .compare import dirichlet_comparison_rows, transmission_comparison_rows
from .config import ScanConfig, build_config, parse_config_file
from .errors import (
    BandscanError,
    ConfigError,
    DomainError,
    MeshError,
    NumericalError,
)
from .globalscan import global_scan
from .meshes import read_off
from .oracle.gapscan import measure_gap_numeric
from .reports import (
    report_from_prediction,
    write_branch_csv,
    write_comparison_csv,
    write_face_map_csv,
    write_global_scan_csv,
)

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_NUMERICAL = 3


def _vec3f(s: str) -> tuple[float, float, float]:
    parts = [p for p in s.replace(",", " ").split() if p]
    if len(parts) != 3:
        raise argparse.ArgumentTypeError(f"expected 3 components, got {s!r}")
    return tuple(float(p) for p in parts)


def _vec3i(s: str) -> tuple[int, int, int]:
    parts = [p for p in s.replace(",", " ").split() if p]
    if len(parts) != 3:
        raise argparse.ArgumentTypeError(f"expected 3 integers, got {s!r}")
    return tuple(int(float(p)) for p in parts)


def _add_config_options(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--config", help="key = value config file; flags override it")
    sub.add_argument("--problem", choices=("dirichlet", "transmission"))
    sub.add_argument("--k0", type=_vec3f, metavar="X,Y,Z")
    sub.add_argument("--m0", type=_vec3i, metavar="I,J,K")
    sub.add_argument("--a", type=float, help="inclusion scale")
    sub.add_argument("--q", type=float, help="shape factor (sphere default 1)")
    sub.add_argument("--shape", choices=("sphere", "ellipsoid", "mesh"))
    sub.add_argument("--semiaxes", type=_vec3f, metavar="A1,A2,A3")
    sub.add_argument("--mesh", help="OFF mesh path for shape=mesh")
    sub.add_argument("--gamma-plus", dest="gamma_plus", type=float)
    sub.add_argument("--gamma-minus", dest="gamma_minus", type=float)
    sub.add_argument("--rho-plus", dest="rho_plus", type=float)
    sub.add_argument("--rho-minus", dest="rho_minus", type=float)
    sub.add_argument("--delta-tilde-min", dest="delta_tilde_min", type=float)
    sub.add_argument("--delta-tilde-max", dest="delta_tilde_max", type=float)
    sub.add_argument("--samples", type=int)
    sub.add_argument("--verify", action="store_const", const=True, default=None,
                     help="measure the gap with the numerical oracle too")
    sub.add_argument("--n", type=int, help="FD grid points per axis")
    sub.add_argument("--g-max", dest="g_max", type=int, help="PWE truncation")
    sub.add_argument("--count", type=int, help="eigenvalues per solve")
    sub.add_argument("--out", dest="out_dir", help="output directory")
    sub.add_argument("--seed", type=int)
    sub.add_argument("--exclusion-band", dest="exclusion_band", type=float)
    sub.add_argument("--tol", type=float)
    sub.add_argument("--c", type=float, help="wave speed scale for console output")


def _config_from_args(args) -> ScanConfig:
    file_values = parse_config_file(args.config) if args.config else None
    overrides = {
        key: getattr(args, key, None)
        for key in (
            "problem", "k0", "m0", "a", "q", "shape", "semiaxes", "mesh",
            "gamma_plus", "gamma_minus", "rho_plus", "rho_minus",
            "delta_tilde_min", "delta_tilde_max", "samples", "verify",
            "n", "g_max", "count", "out_dir", "seed", "exclusion_band",
            "tol", "c",
        )
    }
    return build_config(file_values, overrides)


def _materials(cfg: ScanConfig) -> transmission.MaterialSpec:
    return transmission.MaterialSpec(
        gamma_plus=cfg.gamma_plus,
        gamma_minus=cfg.gamma_minus,
        rho_plus=cfg.rho_plus,
        rho_minus=cfg.rho_minus,
    )


def cmd_classify(args) -> int:
    k = args.k
    cls = lattice.classify_wavevector(k, args.tol)
    print(f"k = ({k[0]}, {k[1]}, {k[2]})")
    print(f"order = {cls.order}" + ("  (non-exceptional)" if cls.order == 1 else ""))
    shifts_out = []
    for m in cls.shifts:
        nu_val = lattice.nu(k, m, args.tol)
        adm = lattice.gap_admissible(k, m, args.exclusion_band, args.tol)
        print(f"  shift m = {m}: nu = {nu_val:.12g}, ratio = {adm.ratio:.12g}, "
              f"{adm.verdict.value}")
        shifts_out.append(
            {"m": list(m), "nu": nu_val, "ratio": adm.ratio, "verdict": adm.verdict.value}
        )
    print(json.dumps({"k": list(k), "order": cls.order, "shifts": shifts_out}))
    return EXIT_OK


def _predict(cfg: ScanConfig):
    """Shared gap prediction for cmd_gap/cmd_bands: (report, curve)."""
    adm = lattice.gap_admissible(cfg.k0, cfg.m0, cfg.exclusion_band, cfg.tol)
    extra = {}
    if cfg.problem == "dirichlet":
        q = cfg.shape_factor()
        p = dirichlet.DirichletParams(a=cfg.a, q=q)
        status, interval = dirichlet.gap_with_status(
            cfg.k0, cfg.m0, p, cfg.exclusion_band, cfg.tol
        )
        curve = dirichlet.dispersion_scan(
            cfg.k0, cfg.m0, p,
            (cfg.delta_tilde_min, cfg.delta_tilde_max), cfg.samples,
        )
        extra.update(q=q, a_tilde=p.a_tilde)
        if adm.nu <= 1.0:
            s = math.sqrt(1.0 - adm.nu**2)
            extra.update(nu_minus=1.0 - s, nu_plus=1.0 + s)
    else:
        mats = _materials(cfg)
        params = transmission.TransmissionParams(materials=mats, a=cfg.a)
        status, interval = transmission.gap_with_status_transmission(
            cfg.k0, cfg.m0, params, cfg.exclusion_band, cfg.tol
        )
        curve = transmission.dispersion_scan_transmission(
            cfg.k0, cfg.m0, params,
            (cfg.delta_tilde_min, cfg.delta_tilde_max), cfg.samples,
        )
        knorm = float(np.linalg.norm(cfg.k0))
        extra.update(
            gamma_plus=mats.gamma_plus,
            gamma_minus=mats.gamma_minus,
            rho_plus=mats.rho_plus,
            rho_minus=mats.rho_minus,
            mu=transmission.coupling_mu(cfg.k0, cfg.m0, params, cfg.tol),
            k0_tilde_norm=knorm * (1.0 + 0.5 * (mats.alpha + mats.beta) * params.f),
        )
    report = report_from_prediction(
        cfg.problem, cfg.k0, cfg.m0, cfg.a, adm.verdict, status.value,
        adm.nu, adm.ratio, interval, **extra,
    )
    return report, curve, interval


def _summarize(report, cfg: ScanConfig) -> None:
    print(f"problem = {report.problem}, k0 = {report.k0}, m0 = {report.m0}")
    print(f"verdict = {report.verdict} (nu = {report.nu:.9g}, ratio = {report.ratio:.9g})")
    if report.predicted_lo_over_c is not None:
        lo, hi = report.predicted_lo_over_c, report.predicted_hi_over_c
        print(f"predicted gap: ({lo!r}, {hi!r}) * c")
        if cfg.c != 1.0:
            print(f"scaled by c = {cfg.c}: ({lo * cfg.c!r}, {hi * cfg.c!r})")
    else:
        print(f"no gap: {report.status}")
    if report.measured_lo_over_c is not None:
        print(
            f"measured gap: ({report.measured_lo_over_c!r}, "
            f"{report.measured_hi_over_c!r}) * c"
            + (f", rel discrepancy {report.rel_discrepancy:.3g}"
               if report.rel_discrepancy is not None else "")
        )


def cmd_gap(args) -> int:
    cfg = _config_from_args(args)
    report, curve, interval = _predict(cfg)
    os.makedirs(cfg.out_dir, exist_ok=True)
    csv_path = os.path.join(cfg.out_dir, "branches.csv")
    report_path = os.path.join(cfg.out_dir, "report.txt")
    write_branch_csv(curve, csv_path)

    exit_code = EXIT_OK
    if cfg.verify:
        try:
            measured = _measure(cfg)
        except NumericalError as exc:
            with open(report_path, "w", encoding="ascii") as fh:
                fh.write(report.to_text())
            _summarize(report, cfg)
            print(f"oracle failure: {exc}", file=sys.stderr)
            return EXIT_NUMERICAL
        if measured is not None and interval is not None:
            from dataclasses import replace

            rel = abs(
                (measured.hi_over_c - measured.lo_over_c) - interval.width_over_c
            ) / interval.width_over_c
            report = replace(
                report,
                measured_lo_over_c=measured.lo_over_c,
                measured_hi_over_c=measured.hi_over_c,
                rel_discrepancy=rel,
            )
        elif measured is not None:
            from dataclasses import replace

            report = replace(
                report,
                measured_lo_over_c=measured.lo_over_c,
                measured_hi_over_c=measured.hi_over_c,
            )
    with open(report_path, "w", encoding="ascii") as fh:
        fh.write(report.to_text())
    _summarize(report, cfg)
    print(f"wrote {report_path} and {csv_path}")
    return exit_code


def _measure(cfg: ScanConfig):
    if cfg.problem == "dirichlet":
        p = dirichlet.DirichletParams(a=cfg.a, q=cfg.shape_factor())
        return measure_gap_numeric(
            "dirichlet", cfg.k0, cfg.m0, dirichlet_params=p, n=cfg.n,
            count=cfg.count, tol=cfg.tol,
        )
    params = transmission.TransmissionParams(materials=_materials(cfg), a=cfg.a)
    return measure_gap_numeric(
        "transmission", cfg.k0, cfg.m0, transmission_params=params,
        g_max=cfg.g_max, count=cfg.count, tol=cfg.tol,
    )


def cmd_bands(args) -> int:
    cfg = _config_from_args(args)
    _, curve, _ = _predict(cfg)
    if args.out_file:
        write_branch_csv(curve, args.out_file)
        print(f"wrote {args.out_file}")
    else:
        sys.stdout.write("delta_tilde,omega_minus_over_c,omega_plus_over_c\n")
        for dt, lo, hi in curve.samples():
            sys.stdout.write(f"{dt!r},{lo!r},{hi!r}\n")
    return EXIT_OK


def cmd_face_map(args) -> int:
    fmap = lattice.face_gap_region(
        args.m0, samples=args.resolution, half_width=args.half_width,
        exclusion_band=args.exclusion_band, tol=args.tol,
    )
    write_face_map_csv(fmap, args.out)
    frac = fmap.flagged_fraction()
    print(f"face normal m0 = {fmap.m0}, window half-width {fmap.half_width}")
    print(f"flagged pixels: {int(fmap.flagged.sum())} of {fmap.flagged.size}")
    print(f"flagged area: {fmap.flagged_area():.6f} (expected pi/4 = {math.pi/4:.6f} "
          f"for m0 = (0,0,1))")
    print(f"flagged area per unit window area: {frac:.6f} "
          f"(pi/16 = {math.pi/16:.6f} at half-width 1)")
    print(f"wrote {args.out}")
    return EXIT_OK


def cmd_global_scan(args) -> int:
    p = dirichlet.DirichletParams(a=args.a, q=args.q)
    rows = global_scan(args.omega_lo, args.omega_hi, args.samples, p)
    worst = max(r.residual for r in rows)
    if args.out:
        write_global_scan_csv(
            [(r.omega_over_c, r.k, r.order, r.residual) for r in rows], args.out
        )
        print(f"wrote {args.out}")
    print(f"covered {len(rows)} frequencies in [{args.omega_lo}, {args.omega_hi}]")
    print(f"max residual = {worst:.3e}; all wave vectors non-exceptional")
    return EXIT_OK


def cmd_oracle_compare(args) -> int:
    cfg = _config_from_args(args)
    if cfg.problem == "dirichlet":
        p = dirichlet.DirichletParams(a=cfg.a, q=cfg.shape_factor())
        rows = dirichlet_comparison_rows(cfg.k0, p, n=cfg.n, tol=cfg.tol)
    else:
        params = transmission.TransmissionParams(materials=_materials(cfg), a=cfg.a)
        rows = transmission_comparison_rows(cfg.k0, params, g_max=cfg.g_max, tol=cfg.tol)
    os.makedirs(cfg.out_dir, exist_ok=True)
    path = os.path.join(cfg.out_dir, "oracle_compare.csv")
    write_comparison_csv(rows, path)
    print("quantity,asymptotic,numeric,rel_diff")
    for name, asym, num, rel in rows:
        print(f"{name},{asym!r},{num!r},{rel!r}")
    print(f"wrote {path}")
    return EXIT_OK


def cmd_capacitance(args) -> int:
    from .capacitance import capacitance_bem, capacitance_ellipsoid, capacitance_sphere

    if args.sphere:
        result = capacitance_sphere()
    elif args.ellipsoid is not None:
        a1, a2, a3 = args.ellipsoid
        result = capacitance_ellipsoid(a1, a2, a3)
    elif args.mesh_path:
        result = capacitance_bem(read_off(args.mesh_path), refine_check=args.refine_check)
    else:
        print("one of --sphere, --ellipsoid, --mesh is required", file=sys.stderr)
        return EXIT_USAGE
    err = result.estimated_error
    print(f"q = {result.q!r}")
    print(f"method = {result.method.value}")
    if result.mesh_size is not None:
        print(f"panels = {result.mesh_size}")
    print(f"estimated_error = {err!r}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="bandscan",
        description="Dispersion asymptotics and local band gaps for cubic "
        "lattices of small inclusions",
    )
    ap.add_argument("--version", action="version", version=f"bandscan {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("classify", help="classify a Bloch vector")
    p.add_argument("k", nargs=3, type=float, metavar="K")
    p.add_argument("--tol", type=float, default=lattice.DEFAULT_TOL)
    p.add_argument("--exclusion-band", dest="exclusion_band", type=float,
                   default=lattice.DEFAULT_EXCLUSION_BAND)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("gap", help="predict (and optionally measure) a local gap")
    _add_config_options(p)
    p.set_defaults(func=cmd_gap)

    p = sub.add_parser("bands", help="emit the two-branch dispersion CSV")
    _add_config_options(p)
    p.add_argument("--out-file", help="CSV destination (default: stdout)")
    p.set_defaults(func=cmd_bands)

    p = sub.add_parser("face-map", help="raster the gap region on a BZ face")
    p.add_argument("--m0", type=_vec3i, default=(0, 0, 1), metavar="I,J,K")
    p.add_argument("--resolution", type=int, default=101)
    p.add_argument("--half-width", dest="half_width", type=float, default=1.0)
    p.add_argument("--out", default="face_map.csv")
    p.add_argument("--tol", type=float, default=lattice.DEFAULT_TOL)
    p.add_argument("--exclusion-band", dest="exclusion_band", type=float,
                   default=lattice.DEFAULT_EXCLUSION_BAND)
    p.set_defaults(func=cmd_face_map)

    p = sub.add_parser("global-scan", help="show every omega is covered by a wave")
    p.add_argument("--omega-lo", dest="omega_lo", type=float, required=True)
    p.add_argument("--omega-hi", dest="omega_hi", type=float, required=True)
    p.add_argument("--samples", type=int, default=100)
    p.add_argument("--a", type=float, default=0.1)
    p.add_argument("--q", type=float, default=1.0)
    p.add_argument("--out", help="CSV destination")
    p.set_defaults(func=cmd_global_scan)

    p = sub.add_parser("oracle-compare", help="asymptotics vs numerics table")
    _add_config_options(p)
    p.set_defaults(func=cmd_oracle_compare)

    p = sub.add_parser("capacitance", help="shape factor q of an inclusion")
    p.add_argument("--sphere", action="store_true")
    p.add_argument("--ellipsoid", type=_vec3f, metavar="A1,A2,A3")
    p.add_argument("--mesh", dest="mesh_path")
    p.add_argument("--refine-check", dest="refine_check", action="store_true")
    p.set_defaults(func=cmd_capacitance)

    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, DomainError, MeshError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except NumericalError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except BandscanError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
