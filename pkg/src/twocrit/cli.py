"""Command-line front end: rendering, classification and the verification suites.

Complex numbers are given as two reals (re im).  Reports go to stdout as
``key=value`` lines, or as one JSON record with ``--json``; diagnostics go
to stderr.  Exit codes: 0 success, 1 verification failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import math
import sys

from .errors import DynamicsError
from .family import FamilyParams
from .orbits import DEFAULT_BUDGET, ParamKind, PointKind, classify_parameter, iterate_orbit

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2

class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(f"{self.prog}: error: {message}")


def _fmt(value):
    if value is None:
        return "none"
    if isinstance(value, bool):
        return str(value).lower()
    if isinstance(value, float):
        return repr(value)
    if isinstance(value, complex):
        return f"{value.real!r},{value.imag!r}"
    if isinstance(value, tuple):
        return ",".join(_fmt(v) for v in value)
    return str(value)


def _jsonable(value):
    if isinstance(value, complex):
        return [value.real, value.imag]
    if isinstance(value, tuple):
        return [_jsonable(v) for v in value]
    if isinstance(value, float) and not math.isfinite(value):
        return str(value)
    return value


def emit(record: dict, as_json: bool, out=None) -> None:
    out = out or sys.stdout
    if as_json:
        out.write(json.dumps({k: _jsonable(v) for k, v in record.items()}) + "\n")
    else:
        for key, value in record.items():
            out.write(f"{key}={_fmt(value)}\n")


def _add_common(p, complex_args=()):
    p.add_argument("--m", type=int, default=2, help="exponent of z")
    p.add_argument("--n", type=int, default=1, help="exponent of (1-z)/(1+z)")
    p.add_argument("--budget", type=int, default=DEFAULT_BUDGET, help="iteration budget")
    for name, required, helptext in complex_args:
        p.add_argument(f"--{name}", type=float, nargs=2, metavar=("RE", "IM"),
                       required=required, help=helptext)
    p.add_argument("--json", action="store_true", help="print one JSON record instead of key=value lines")


def _add_render(p, default_px=400):
    p.add_argument("--view", type=float, nargs=4, metavar=("CRE", "CIM", "W", "H"),
                   help="window center and size; defaults: render-param 0 0 5 5, "
                   "render-pc -2 0 10 10 (with --t-plane 0.025 0 0.45 0.5), render-dyn 0 0 6 6")
    p.add_argument("--px", type=int, nargs="+", default=[default_px], metavar="N",
                   help="image size: N for square or W H")
    p.add_argument("--out", required=True, help="output PPM path")
    p.add_argument("--workers", type=int, default=None,
                   help="render threads (default: cpu count, capped by RENDER_THREADS)")


def build_parser() -> argparse.ArgumentParser:
    fmt = argparse.ArgumentDefaultsHelpFormatter
    parser = _Parser(prog="twocrit", description=__doc__.splitlines()[0], formatter_class=fmt)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("render-param", help="f_t parameter plane", formatter_class=fmt)
    _add_common(p)
    _add_render(p)
    p.add_argument("--unit-circle", action="store_true", help="overlay |t| = 1")

    p = sub.add_parser("render-pc", help="P_c parameter plane", formatter_class=fmt)
    _add_common(p)
    _add_render(p)
    p.add_argument("--t-plane", action="store_true",
                   help="window is in t and c = c_of_t(t); only (m, n) = (2, 1)")
    p.add_argument("--unit-circle", action="store_true", help="overlay |t| = 1 in the t-plane")

    p = sub.add_parser("render-dyn", help="dynamical plane of f_t", formatter_class=fmt)
    _add_common(p, [("t", True, "parameter t")])
    _add_render(p)

    p = sub.add_parser("classify", help="classify a parameter t", formatter_class=fmt)
    _add_common(p, [("t", True, "parameter t")])

    p = sub.add_parser("orbit", help="orbit of a point under f_t", formatter_class=fmt)
    _add_common(p, [("t", True, "parameter t"), ("z", True, "starting point")])
    p.add_argument("--show", type=int, default=0, help="also print the first N orbit points")

    p = sub.add_parser("boettcher", help="Green and Böttcher values at a point, or an E-map",
                       formatter_class=fmt)
    _add_common(p, [("t", True, "parameter t"), ("z", False, "point (omit with --e)")])
    p.add_argument("--e", choices=["E0", "Ek", "Eres"], default=None, help="evaluate an E-map at t")
    p.add_argument("--k", type=int, default=1, help="index for Ek")

    p = sub.add_parser("verify", help="run a verification suite", formatter_class=fmt)
    from .verify import SUITES
    p.add_argument("suite", choices=list(SUITES), help="suite name")
    p.add_argument("--json", action="store_true", help="print one JSON record")
    return parser


def _validate(parser, args):
    if args.command == "verify":
        return
    if args.m < 2:
        parser.error(f"--m must be >= 2, got {args.m}")
    if args.n < 1:
        parser.error(f"--n must be >= 1, got {args.n}")
    if args.budget < 1:
        parser.error(f"--budget must be >= 1, got {args.budget}")
    for name in ("t", "z"):
        value = getattr(args, name, None)
        if value is not None and not all(math.isfinite(v) for v in value):
            parser.error(f"--{name} must be finite")
    t = getattr(args, "t", None)
    if t is not None and t[0] == 0 and t[1] == 0:
        parser.error("--t must be nonzero")
    if hasattr(args, "px"):
        if len(args.px) not in (1, 2) or min(args.px) < 1:
            parser.error("--px takes one or two positive integers")
        if args.view is not None:
            if not (args.view[2] > 0 and args.view[3] > 0) or not all(
                    math.isfinite(v) for v in args.view):
                parser.error("--view width and height must be positive and finite")
        if args.workers is not None and args.workers < 1:
            parser.error("--workers must be >= 1")
    if getattr(args, "show", 0) < 0:
        parser.error("--show must be >= 0")
    if getattr(args, "e", None) is None and args.command == "boettcher" and args.z is None:
        parser.error("boettcher needs --z or --e")
    if getattr(args, "e", None) == "Ek" and args.k < 1:
        parser.error("--k must be >= 1")


def _cplx(pair):
    return complex(pair[0], pair[1])


def _render(args) -> int:
    from .render import (DYN_VIEW, PARAM_VIEW, PC_T_VIEW, PC_VIEW, ViewRect,
                         render_dynamical_plane, render_parameter_plane,
                         render_pc_parameter_plane, write_image)

    defaults = {"render-param": PARAM_VIEW, "render-pc": PC_VIEW, "render-dyn": DYN_VIEW}
    if args.view:
        view = ViewRect(complex(args.view[0], args.view[1]), args.view[2], args.view[3])
    elif getattr(args, "t_plane", False):
        view = PC_T_VIEW
    else:
        view = defaults[args.command]
    px = tuple(args.px) if len(args.px) == 2 else args.px[0]
    if args.command == "render-param":
        img, grid = render_parameter_plane(args.m, args.n, view, px, args.budget,
                                           unit_circle=args.unit_circle, workers=args.workers)
    elif args.command == "render-pc":
        img, grid = render_pc_parameter_plane(args.m, args.n, view, px, args.budget,
                                              t_plane=args.t_plane, unit_circle=args.unit_circle,
                                              workers=args.workers)
    else:
        p = FamilyParams(args.m, args.n, _cplx(args.t))
        img, grid = render_dynamical_plane(p, view, px, args.budget, workers=args.workers)
    write_image(img, args.out)
    undecided_kind = ParamKind.UNDECIDED if grid.plane == "parameter" else PointKind.UNDECIDED
    undecided = int((grid.codes == grid.code_of(undecided_kind)).sum())
    emit({"command": args.command, "m": args.m, "n": args.n, "width_px": img.width_px,
          "height_px": img.height_px, "undecided_pixels": undecided, "out": args.out}, args.json)
    return EXIT_OK


def _iterations(point, budget):
    return point.time if point.time is not None else budget


def _classify(args) -> int:
    t = _cplx(args.t)
    cls = classify_parameter(args.m, args.n, t, args.budget)
    emit({
        "m": args.m, "n": args.n, "t_re": t.real, "t_im": t.imag,
        "class": cls.kind.value,
        "level_or_period": cls.level_or_period(),
        "iterations": max(_iterations(cls.alpha, args.budget), _iterations(cls.beta, args.budget)),
        "alpha_outcome": str(cls.alpha),
        "beta_outcome": str(cls.beta),
    }, args.json)
    return EXIT_OK


def _orbit(args) -> int:
    p = FamilyParams(args.m, args.n, _cplx(args.t))
    rec = iterate_orbit(p, _cplx(args.z), args.budget)
    out = rec.outcome
    record = {
        "m": args.m, "n": args.n, "t_re": p.t.real, "t_im": p.t.imag,
        "z_re": args.z[0], "z_im": args.z[1],
        "outcome": out.kind.value, "time": out.time, "period": out.period,
        "multiplier": out.multiplier, "stored_points": len(rec.points),
    }
    if args.show:
        record["points"] = tuple(str(z) for z in rec.points[: args.show])
    emit(record, args.json)
    return EXIT_OK


def _boettcher(args) -> int:
    from .boettcher import (boettcher_coordinate, boundary_value, e_value, green_infinity,
                            green_zero)
    from .orbits import classify_point

    p = FamilyParams(args.m, args.n, _cplx(args.t))
    if args.e:
        ev = e_value(args.m, args.n, p.t, args.e, args.k if args.e == "Ek" else None, args.budget)
        emit({"m": args.m, "n": args.n, "t_re": p.t.real, "t_im": p.t.imag, "kind": ev.kind,
              "value": ev.value, "modulus": abs(ev.value), "branch": ev.branch,
              "branch_warnings": ev.branch_warnings}, args.json)
        return EXIT_OK
    z = _cplx(args.z)
    fate = classify_point(p, z, args.budget)
    record = {"m": args.m, "n": args.n, "t_re": p.t.real, "t_im": p.t.imag,
              "z_re": z.real, "z_im": z.imag, "basin": fate.kind.value,
              "boundary_value": boundary_value(p)}
    if fate.kind is PointKind.BASIN_ZERO:
        g = green_zero(p, z, budget=args.budget)
        phi = boettcher_coordinate(p, z, budget=args.budget)
        record.update(green=g.value, green_converged=g.converged, phi=phi.value,
                      branch_warnings=phi.branch_warnings)
    elif fate.kind is PointKind.BASIN_INFINITY:
        g = green_infinity(p, z, budget=args.budget)
        record.update(green=g.value, green_converged=g.converged)
    else:
        raise DynamicsError(f"z={z} lies in neither basin ({fate})")
    emit(record, args.json)
    return EXIT_OK


def _verify(args) -> int:
    from .verify import run_suite

    report = run_suite(args.suite)
    if args.json:
        emit({"suite": report.name, "passed": report.passed, "elapsed": report.elapsed,
              "checks": tuple(f"{'PASS' if c.passed else 'FAIL'} {c.name} {c.detail}".strip()
                              for c in report.checks), **report.extra}, True)
    else:
        for key, value in report.extra.items():
            print(f"{key}={_fmt(value)}")
        for line in report.lines():
            print(line)
    for check in report.failures():
        print(f"verification failed: {report.name}.{check.name} {check.detail}", file=sys.stderr)
    return EXIT_OK if report.passed else EXIT_FAILED


HANDLERS = {
    "render-param": _render,
    "render-pc": _render,
    "render-dyn": _render,
    "classify": _classify,
    "orbit": _orbit,
    "boettcher": _boettcher,
    "verify": _verify,
}


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        _validate(parser, args)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as exc:  # --help
        return exc.code if isinstance(exc.code, int) else EXIT_OK
    try:
        return HANDLERS[args.command](args)
    except (DynamicsError, ValueError) as exc:
        print(f"twocrit {args.command}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"twocrit {args.command}: {exc}", file=sys.stderr)
        return EXIT_FAILED


def main() -> None:
    sys.exit(run())
