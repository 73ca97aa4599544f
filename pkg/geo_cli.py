#!/usr/bin/env python3
"""
Command-line entry point: build bodies, query positions and radii, run the
verification suites and plot planar bodies.

Exit codes: 0 all checks pass, 1 a check failed (or a geometric error),
2 bad input or file.
"""

import argparse
import json
import sys

import numpy as np

import config
from affine_ratios import jung_check, maximize_wR_affine, minimize_Dr_affine, radial_profile
from asymmetry import john_asymmetry, minkowski_asymmetry, verify_minkowski_center
from bodies import Subspace
from body_io import load_body, rows_frame, save_body, write_report
from constructions import FAMILIES, construct
from ellipsoid_engine import john_decomposition, john_verify, normalize_john, normalize_loewner
from errors import BodyFormatError, GeometryError, ParameterOutOfRange, RepresentationUnavailable
from plot_body import plot2d
from radii_bounds import inner_bound_report, outer_kradius, outer_kradius_search, search_inner_kball
from suites import SUITES, SuiteConfig, run_suite

log = config.get_logger("geo_cli")


def _floats(x):
    return np.asarray(x, float).tolist()


def _emit(data):
    print(json.dumps(data, indent=2))


def _index_list(text):
    try:
        return [int(part) for part in text.split(",") if part.strip()]
    except ValueError as e:
        raise ValueError(f"expected comma-separated integers, got {text!r}") from e


def _residuals(report):
    return {
        "sum": report.sum_residual, "identity": report.identity_residual,
        "support": report.support_residual, "norm": report.norm_residual,
        "trace": report.trace_residual, "passed": report.passed,
    }


# === Step 1: subcommands ===
def cmd_construct(args):
    J = None if args.J is None else tuple(_index_list(args.J))
    body = construct(args.family, args.n, k=args.k, s=args.s, t=args.t, tau_value=args.tau,
                     J=J, position=args.position)
    save_body(body, args.output)
    print(f"[INFO] {args.family} body (n={args.n}) written to {args.output}")
    return 0


def cmd_position(args):
    body = load_body(args.body)
    normalize = normalize_loewner if args.command == "loewner" else normalize_john
    image, cert = normalize(body)
    _emit({
        "position": cert.position,
        "linear": _floats(cert.map.linear),
        "translation": _floats(cert.map.translation),
        "contacts": _floats(cert.decomposition.contacts),
        "weights": _floats(cert.decomposition.weights),
        "residuals": _residuals(cert.residuals),
    })
    if args.output:
        save_body(image, args.output)
    return 0 if cert.residuals.passed else 1


def cmd_decomposition(args):
    body = load_body(args.body)
    decomp = john_decomposition(body)
    report = john_verify(decomp, body)
    _emit({"contacts": _floats(decomp.contacts), "weights": _floats(decomp.weights),
           "residuals": _residuals(report)})
    return 0 if report.passed else 1


def cmd_asymmetry(args):
    body = load_body(args.body)
    if args.measure == "john":
        report = john_asymmetry(body)
        _emit({"measure": "john", "value": report.value, "method": report.method})
        return 0
    report = minkowski_asymmetry(body)
    check = verify_minkowski_center(body, report.witness_center, report.value)
    _emit({"measure": "minkowski", "value": report.value, "method": report.method,
           "center": _floats(report.witness_center),
           "center_check": {"passed": check.passed, "max_violation": check.max_violation,
                            "positively_spanning": check.positively_spanning}})
    return 0 if check.passed else 1


def cmd_kradius(args):
    body = load_body(args.body)
    n = body.dim
    if not 1 <= args.k <= n - 1:
        raise ValueError(f"--k must lie in 1..{n - 1}")
    if args.mode == "outer":
        if args.subspace is None:
            found = outer_kradius_search(body, args.k, seed=args.seed)
            report = outer_kradius(body, found.subspace)
            extra = {"searched": True, "starts": found.starts}
        else:
            coords = _index_list(args.subspace)
            if len(coords) != args.k:
                raise ValueError(f"--subspace needs exactly {args.k} coordinates")
            report = outer_kradius(body, Subspace.coordinate(n, coords))
            extra = {"searched": False}
    else:
        cert = getattr(body, "certificate", None)
        if cert is not None and cert.kball is not None and cert.kball.k == args.k:
            E = cert.kball
        elif hasattr(body, "facets"):
            E = search_inner_kball(body, args.k, seed=args.seed)
        else:
            raise RepresentationUnavailable("inner k-ball search needs a polytope or a certified k-ball")
        report = inner_bound_report(body, john_asymmetry(body).value, E)
        extra = {"center": _floats(E.center), "basis": _floats(E.basis)}
    _emit({"mode": args.mode, "k": args.k, "measured": report.measured, "bound": report.bound,
           "slack": report.slack, "passed": report.passed, "method": report.method,
           "equality_certificate": report.equality_certificate, **extra})
    return 0 if report.passed else 1


def cmd_ratios(args):
    K = load_body(args.body)
    C = load_body(args.gauge) if args.gauge else None
    profile = radial_profile(K, C)
    out = {"w": profile.w, "D": profile.D, "R": profile.R, "r": profile.r, "method": profile.method,
           "D_over_2r": profile.D / (2 * profile.r), "w_over_2R": profile.w / (2 * profile.R)}
    ok = profile.consistent()
    if C is None:
        out["jung"] = jung_check(profile, K.dim)
        ok = ok and out["jung"]
    if args.optimize_affine:
        result = minimize_Dr_affine(K, C, seed=args.seed)
        out["min_D_over_2r"] = {"value": result.best_ratio, "start": result.start_ratio,
                                "method": result.method, "linear": _floats(result.best_map.linear)}
        if C is None:
            wide = maximize_wR_affine(K, seed=args.seed)
            out["max_w_over_2R"] = {"value": wide.best_ratio, "start": wide.start_ratio,
                                    "method": wide.method, "linear": _floats(wide.best_map.linear)}
            out["jung_max"] = max(result.jung_max, wide.jung_max)
    _emit(out)
    return 0 if ok else 1


def cmd_verify(args):
    bodies = tuple(load_body(path) for path in args.body)
    n_range = tuple(range(2, args.n_max + 1))
    cfg = SuiteConfig(args.suite, n_range=n_range, samples=args.samples, seed=args.seed,
                      tolerance=args.tol, output=args.output, restarts=args.restarts, bodies=bodies)
    rows = run_suite(cfg)
    df = write_report(rows, cfg.output) if cfg.output else rows_frame(rows)
    failed = df[~df["pass"].astype(bool)]
    print(f"[INFO] {cfg.name}: {len(df)} rows, {len(failed)} failed")
    for _, row in failed.head(20).iterrows():
        print(f"[FAIL] {row['case_id']} {row['quantity']}: measured={row['measured']!r} "
              f"bound={row['bound']!r} slack={row['slack']!r}")
    if cfg.output:
        print(f"[INFO] report written to {cfg.output}")
    return 0 if failed.empty else 1


def cmd_plot2d(args):
    plot2d(load_body(args.body), args.output)
    print(f"[INFO] plot written to {args.output}")
    return 0


# === Step 2: argument parsing ===
def build_parser():
    parser = argparse.ArgumentParser(prog="geo_cli", description="John and Loewner ellipsoid toolkit")
    parser.add_argument("-v", "--verbose", action="count", default=0, help="-v info, -vv debug")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("construct", help="build a named body and save it as JSON")
    p.add_argument("family", choices=FAMILIES)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, default=1)
    p.add_argument("--s", type=float, default=1.0)
    p.add_argument("--t", type=float, default=0.0)
    p.add_argument("--tau", type=float, default=None)
    p.add_argument("--J", default=None, help="comma-separated 0-based index set")
    p.add_argument("--position", choices=("john", "loewner"), default="john")
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(handler=cmd_construct)

    for name in ("loewner", "john"):
        p = sub.add_parser(name, help=f"map a body to {name.capitalize()} position")
        p.add_argument("body")
        p.add_argument("-o", "--output", default=None, help="save the normalized body")
        p.set_defaults(handler=cmd_position)

    p = sub.add_parser("decomposition", help="John decomposition of a body already in John position")
    p.add_argument("body")
    p.set_defaults(handler=cmd_decomposition)

    p = sub.add_parser("asymmetry", help="Minkowski or John asymmetry")
    p.add_argument("body")
    p.add_argument("--measure", choices=("minkowski", "john"), default="minkowski")
    p.set_defaults(handler=cmd_asymmetry)

    p = sub.add_parser("kradius", help="outer or inner k-radius against its bound")
    p.add_argument("body")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--mode", choices=("outer", "inner"), default="outer")
    p.add_argument("--subspace", default=None, help="comma-separated coordinate indices")
    p.add_argument("--seed", type=int, default=config.DEFAULT_SEED)
    p.set_defaults(handler=cmd_kradius)

    p = sub.add_parser("ratios", help="width, diameter and radii, optionally optimized over linear maps")
    p.add_argument("body")
    p.add_argument("--gauge", default=None)
    p.add_argument("--optimize-affine", action="store_true")
    p.add_argument("--seed", type=int, default=config.DEFAULT_SEED)
    p.set_defaults(handler=cmd_ratios)

    p = sub.add_parser("verify", help="run a verification suite")
    p.add_argument("suite", choices=SUITES)
    p.add_argument("--n-max", type=int, default=4)
    p.add_argument("--samples", type=int, default=20)
    p.add_argument("--seed", type=int, default=config.DEFAULT_SEED)
    p.add_argument("--tol", type=float, default=config.BOUND_TOL)
    p.add_argument("--restarts", type=int, default=6)
    p.add_argument("--body", action="append", default=[], help="check these bodies instead of the built-in grid")
    p.add_argument("-o", "--output", default=None)
    p.set_defaults(handler=cmd_verify)

    p = sub.add_parser("plot2d", help="SVG plot of a planar body")
    p.add_argument("body")
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(handler=cmd_plot2d)
    return parser


def cli(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    config.set_verbosity(args.verbose)
    if getattr(args, "n_max", 2) < 2:
        print("[ERROR] n-max: must be at least 2", file=sys.stderr)
        return 2
    try:
        return args.handler(args)
    except BodyFormatError as e:
        print(f"[ERROR] {e.field}: {e.message}", file=sys.stderr)
        return 2
    except json.JSONDecodeError as e:
        print(f"[ERROR] json: {e.msg}", file=sys.stderr)
        return 2
    except OSError as e:
        print(f"[ERROR] {e.filename or 'file'}: {e.strerror or e}", file=sys.stderr)
        return 2
    except (ValueError, ParameterOutOfRange) as e:
        print(f"[ERROR] {args.command}: {e}", file=sys.stderr)
        return 2
    except GeometryError as e:
        print(f"[ERROR] {type(e).__name__}: {e}", file=sys.stderr)
        return 1


def main():
    sys.exit(cli())


if __name__ == "__main__":
    main()
