"""Command-line entry point: ``ptorus <subcommand> ...``.

Exit codes: 0 success, 2 domain error, 3 solver or tolerance error,
64 unknown subcommand.  Data goes to stdout, diagnostics to stderr.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .errors import DomainError, SolverError
from .lamination import curve, lamination
from .mapping_class import parse_word
from .scalars import format_scalar, parse_scalar

EXIT_OK = 0
EXIT_DOMAIN = 2
EXIT_SOLVER = 3
EXIT_USAGE = 64

SUBCOMMANDS = ("classify", "rl-form", "length", "boundary-flow", "trichotomy",
               "solve", "ct-render", "oracle")


def _emit(obj) -> None:
    sys.stdout.write(json.dumps(obj, indent=2) + "\n")


def _pair(text: str, what: str):
    parts = [p for p in text.replace(";", ",").split(",") if p.strip()]
    if len(parts) != 2:
        raise DomainError(f"{what} must be two comma-separated integers, got {text!r}")
    try:
        return int(parts[0]), int(parts[1])
    except ValueError as exc:
        raise DomainError(f"{what} must be integers, got {text!r}") from exc


def _fricke(text: str):
    from .teich import FrickePoint, make_fricke

    try:
        vals = [parse_scalar(p) for p in text.split(",") if p.strip()]
    except ValueError as exc:
        raise DomainError(str(exc)) from exc
    if len(vals) == 2:
        return make_fricke(*vals)
    if len(vals) == 3:
        return FrickePoint(*vals)
    raise DomainError("--fricke takes x,y or x,y,z")


# --- subcommands -----------------------------------------------------------------------

def cmd_classify(args) -> int:
    from .report import classify_report

    _emit(classify_report(parse_word(args.word)))
    return EXIT_OK


def cmd_rl_form(args) -> int:
    from .report import rl_form_report

    _emit(rl_form_report(parse_word(args.word)))
    return EXIT_OK


def cmd_trichotomy(args) -> int:
    from .report import trichotomy_report

    _emit(trichotomy_report(parse_word(args.word)))
    return EXIT_OK


def cmd_length(args) -> int:
    from .report import fnum
    from .teich import length_of_curve, trace_of_slope

    g = _fricke(args.fricke)
    c = curve(*_pair(args.curve, "--curve"))
    out = {"fricke": g.to_json(), "curve": [c.a, c.b], "length": fnum(length_of_curve(g, c))}
    if g.exact and abs(c.a) + abs(c.b) <= 64:
        t = trace_of_slope(g, c)
        out["trace"] = format_scalar(t)
        out["trace_float"] = fnum(t)
    _emit(out)
    return EXIT_OK


def cmd_boundary_flow(args) -> int:
    from .teich import boundary_profile

    g0 = _fricke(args.fricke)
    phi = parse_word(args.word)
    probes = [lamination(*_pair(p, "--probes")) for p in args.probes.split(";") if p.strip()]
    if args.n < 0:
        raise DomainError("--n must be nonnegative")
    prof = boundary_profile(g0, phi, args.n, probes)
    sys.stdout.write(prof.to_csv())
    return EXIT_OK


def cmd_solve(args) -> int:
    from .report import solve_report

    _emit(solve_report(parse_word(args.word)))
    return EXIT_OK


def cmd_ct_render(args) -> int:
    from .bundle import Hyperbolic, layered_triangulation, trichotomy
    from .errors import ClassificationError
    from .geometry import solve_shapes
    from .holonomy import holonomy
    from .limitset import coverage, ct_polyline, cusp_projection, raster_hash, render_svg, to_csv
    from .report import fnum

    if args.depth < 1:
        raise DomainError("--depth must be positive")
    phi = parse_word(args.word)
    geo = trichotomy(phi)
    if not isinstance(geo, Hyperbolic):
        raise ClassificationError(f"{phi} gives a {geo.tag} mapping torus, not hyperbolic")
    tb = layered_triangulation(geo.rl)
    rep = holonomy(solve_shapes(tb), tb)
    poly = ct_polyline(rep, args.depth)
    proj = cusp_projection(rep, clip=args.clip)
    svg = render_svg(poly, proj, stroke_width=args.stroke_width)
    Path(args.out).write_bytes(svg)
    if args.csv:
        Path(args.csv).write_text(to_csv(poly))
    _emit({"word": phi.text(), "rl_word": str(geo.rl), "depth": args.depth,
           "points": len(poly), "coverage": fnum(coverage(poly, args.grid)),
           "grid": args.grid, "raster_hash": raster_hash(poly, proj), "out": str(args.out)})
    return EXIT_OK


def cmd_oracle(args) -> int:
    from .oracles import ORACLES

    if args.name not in ORACLES:
        raise DomainError(f"unknown oracle {args.name!r}; choose from {', '.join(ORACLES)}")
    res = ORACLES[args.name]()
    sys.stdout.write(res.table(args.limit) + "\n")
    return EXIT_OK if res.passed else EXIT_SOLVER


# --- parser ----------------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="ptorus",
        description="Mapping classes, Teichmueller traces and hyperbolic bundles "
                    "of the once-punctured torus.",
        epilog="Words look like \"R^4 L\" (product left to right). Exit codes: 0 ok, "
               "2 domain error, 3 solver/tolerance error, 64 unknown subcommand. "
               "MONODROMY_THREADS caps the threads used by ct-render enumeration.",
    )
    sub = p.add_subparsers(dest="cmd", metavar="SUBCOMMAND")

    s = sub.add_parser("classify", help="Nielsen-Thurston type as JSON")
    s.add_argument("word")
    s.set_defaults(func=cmd_classify)

    s = sub.add_parser("rl-form", help="conjugacy normal form as JSON")
    s.add_argument("word")
    s.set_defaults(func=cmd_rl_form)

    s = sub.add_parser("length", help="geodesic length of a curve at a Fricke point")
    s.add_argument("--fricke", required=True, help="x,y[,z]; z defaults to the larger root")
    s.add_argument("--curve", required=True, help="a,b")
    s.set_defaults(func=cmd_length)

    s = sub.add_parser("boundary-flow",
                       help="CSV of probe lengths along g_n = phi^n(g0); "
                            "columns n,probe_index,length,ratio_to_probe0")
    s.add_argument("--word", required=True)
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--probes", default="1,0;0,1", help="semicolon-separated a,b pairs")
    s.add_argument("--fricke", default="3,3,3")
    s.set_defaults(func=cmd_boundary_flow)

    s = sub.add_parser("trichotomy", help="geometric type of the mapping torus")
    s.add_argument("word")
    s.set_defaults(func=cmd_trichotomy)

    s = sub.add_parser("solve", help="shapes, volume and holonomy as JSON")
    s.add_argument("word")
    s.set_defaults(func=cmd_solve)

    s = sub.add_parser("ct-render", help="SVG of the Cannon-Thurston polyline")
    s.add_argument("word")
    s.add_argument("--depth", type=int, default=10)
    s.add_argument("--out", required=True)
    s.add_argument("--csv", help="also write anchor,re,im rows here")
    s.add_argument("--grid", type=int, default=50, help="coverage grid size")
    s.add_argument("--clip", type=float, default=30.0)
    s.add_argument("--stroke-width", type=float, default=0.002)
    s.set_defaults(func=cmd_ct_render)

    s = sub.add_parser("oracle", help="run a brute-force oracle and print its table")
    s.add_argument("name", help="intersection, alternation, rl-form or dilog")
    s.add_argument("--limit", type=int, default=20, help="rows to print")
    s.set_defaults(func=cmd_oracle)
    return p


def run(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    first = next((a for a in argv if not a.startswith("-")), None)
    if first is not None and first not in SUBCOMMANDS:
        parser.print_usage(sys.stderr)
        print(f"ptorus: unknown subcommand {first!r}", file=sys.stderr)
        return EXIT_USAGE
    if not argv:
        parser.print_usage(sys.stderr)
        return EXIT_USAGE
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_DOMAIN
    if args.cmd is None:
        parser.print_usage(sys.stderr)
        return EXIT_USAGE
    try:
        return args.func(args)
    except SolverError as exc:
        print(f"ptorus: solver error: {exc}", file=sys.stderr)
        return EXIT_SOLVER
    except (DomainError, ValueError) as exc:
        print(f"ptorus: {exc}", file=sys.stderr)
        return EXIT_DOMAIN


def main() -> None:
    sys.exit(run())

