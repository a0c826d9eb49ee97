"""Command line front end: ``llg analyze|cohomology|classes|deform|verify|examples``.

Exit codes: 0 ok, 2 parse error, 3 invariant violation (including failed
verification), 4 Jacobi identity fails, 5 not a local Lie group.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import io, library, reports, verify
from .deformation import GaugeJet, HypothesisError
from .lie_algebra import JacobiError, StructureConstants
from .parallelism import (
    FrameError,
    NotLocalLieError,
    connection_from_frame,
    curvature_hat,
    localize,
    torsion,
)
from .poly import ParseError, Poly
from .tensor import AntisymmetryError

EXIT_OK, EXIT_PARSE, EXIT_INVARIANT, EXIT_JACOBI, EXIT_NOT_LOCAL_LIE = 0, 2, 3, 4, 5


class CliError(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


def _resolve(source: str | None, example: str | None):
    """Load a positional file path or example name; returns (kind, object, example entry or None)."""
    name = example or source
    if name is None:
        raise CliError(EXIT_PARSE, "no input: give a file path or --example NAME")
    if example is None and Path(source).exists():
        kind, obj = io.load_any(source)
        return kind, obj, None
    try:
        ex = library.get(name)
    except KeyError:
        raise CliError(EXIT_PARSE, f"{name}: no such file or built-in example") from None
    payload = {"frame": ex.frame, "constants": ex.constants, "jet": ex.jet}[ex.kind]
    return ex.kind, payload, ex


def _point(args, n: int, ex) -> list:
    if args.point is not None:
        return io.parse_point(args.point, n)
    return ex.base_point() if ex is not None else [0] * n


def _in_chart(C, point) -> list:
    """The point must avoid the poles of every Laurent coefficient."""
    for v in C.gamma.comps.values():
        if any(e < 0 and not x for exp, _ in v.items() for e, x in zip(exp, point)):
            raise CliError(EXIT_INVARIANT, "point lies outside the chart (a coefficient has a pole there)")
    return point


def _connection(kind, obj) -> tuple:
    if kind == "frame":
        return connection_from_frame(obj), obj
    if kind == "connection":
        return obj, None
    raise CliError(EXIT_PARSE, f"expected a frame or connection file, got a {kind} file")


def cmd_analyze(args) -> dict:
    kind, obj, ex = _resolve(args.input, args.example)
    C, F = _connection(kind, obj)
    rep = reports.analyze(C, F, _in_chart(C, _point(args, C.n, ex)))
    if F is not None and not rep["verdict"]["tilde_flat"]:
        raise CliError(EXIT_INVARIANT, "frame-derived connection is not flat for nabla~")
    return rep


def _constants(args) -> StructureConstants:
    kind, obj, ex = _resolve(args.input, args.example)
    if kind == "constants":
        return obj
    C, _ = _connection(kind, obj)
    if ex is not None and ex.constants is not None and args.point is None:
        return ex.constants
    return localize(torsion(C), _in_chart(C, _point(args, C.n, ex)))


def cmd_cohomology(args) -> dict:
    g = _constants(args)
    g.require_jacobi()
    if args.max_degree is not None and not 0 <= args.max_degree <= g.n:
        raise CliError(EXIT_PARSE, f"--max-degree must lie in 0..{g.n}")
    return reports.cohomology_report(g, args.max_degree)


def cmd_classes(args) -> dict:
    kind, obj, ex = _resolve(args.input, args.example)
    if kind == "constants":
        obj.require_jacobi()
        return reports.classes_from_constants(obj)
    C, _ = _connection(kind, obj)
    return reports.classes_from_connection(C, _in_chart(C, _point(args, C.n, ex)))


def _fit_order(jet: GaugeJet, K: int) -> GaugeJet:
    if K <= jet.order:
        return jet.truncated(K)
    z = Poly.zero(jet.n)
    pad = [[[z] * jet.n for _ in range(jet.n)] for _ in range(K - jet.order)]
    return GaugeJet(jet.n, jet.F[1:] + pad)


def cmd_deform(args) -> dict:
    if args.example is not None:
        kind, jet, ex = _resolve(None, args.example)
        if kind != "jet":
            raise CliError(EXIT_PARSE, f"{args.example} is not a jet example")
        base = library.get(ex.base)
        C, point = connection_from_frame(base.frame), _point(args, base.n, base)
    else:
        if args.input is None or args.jet is None:
            raise CliError(EXIT_PARSE, "deform needs a frame (file or example) and a jet file")
        kind, obj, ex = _resolve(args.input, None)
        C, _ = _connection(kind, obj)
        jkind, jet, _ = _resolve(args.jet, None)
        if jkind != "jet":
            raise CliError(EXIT_PARSE, f"{args.jet}: expected a jet file")
        point = _point(args, C.n, ex)
    if jet.n != C.n:
        raise CliError(EXIT_PARSE, f"jet dimension {jet.n} differs from frame dimension {C.n}")
    if args.order is not None:
        jet = _fit_order(jet, args.order)
    if curvature_hat(C):
        raise NotLocalLieError("the base parallelism is not a local Lie group")
    return reports.deformation(jet, C, _in_chart(C, point))


def cmd_verify(args) -> dict:
    results = verify.run(args.suite, args.seed)
    out = verify.summary(results, args.suite, args.seed)
    if not out["passed"]:
        args._failed = True
    return out


def cmd_examples(args) -> dict:
    if args.example is not None or args.input is not None:
        name = args.example or args.input
        try:
            ex = library.get(name)
        except KeyError as exc:
            raise CliError(EXIT_PARSE, str(exc.args[0])) from None
        if ex.kind == "frame":
            return io.frame_to_dict(ex.frame)
        if ex.kind == "jet":
            return io.jet_to_dict(ex.jet)
        return io.constants_to_dict(ex.constants)
    return {"examples": [{"name": e.name, "kind": e.kind, "n": e.n, "base": e.base, "description": e.description}
                         for e in sorted(library.examples().values(), key=lambda e: e.name)]}


COMMANDS = {
    "analyze": cmd_analyze,
    "cohomology": cmd_cohomology,
    "classes": cmd_classes,
    "deform": cmd_deform,
    "verify": cmd_verify,
    "examples": cmd_examples,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "text"), default="json")
    common.add_argument("--example", metavar="NAME", help="use a built-in example instead of a file")
    common.add_argument("--point", help="comma-separated rational coordinates (default: the origin)")

    p = argparse.ArgumentParser(prog="llg", description="Exact computations for parallelisms and local Lie groups.")
    sub = p.add_subparsers(dest="command", required=True)
    for name in ("analyze", "classes", "examples"):
        s = sub.add_parser(name, parents=[common])
        s.add_argument("input", nargs="?", help="JSON file or example name")
    s = sub.add_parser("cohomology", parents=[common])
    s.add_argument("input", nargs="?")
    s.add_argument("--max-degree", type=int, default=None)
    s = sub.add_parser("deform", parents=[common])
    s.add_argument("input", nargs="?", help="frame file or example name")
    s.add_argument("jet", nargs="?", help="gauge jet file")
    s.add_argument("--order", type=int, default=None, help="truncate or zero-pad the jet to this order")
    s = sub.add_parser("verify", parents=[common])
    s.add_argument("--suite", choices=verify.SUITES + ("all",), default="all")
    s.add_argument("--seed", type=int, default=0)
    return p


def _emit(obj, fmt: str, out) -> None:
    out.write(io.dumps(obj) if fmt == "json" else reports.render_text(obj) + "\n")


def main(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_PARSE if exc.code else EXIT_OK
    if getattr(args, "order", None) is not None and args.order < 1:
        err.write("llg: --order must be at least 1\n")
        return EXIT_PARSE
    args._failed = False
    try:
        report = COMMANDS[args.command](args)
    except CliError as exc:
        err.write(f"llg: {exc}\n")
        return exc.code
    except ParseError as exc:
        err.write(f"llg: parse error: {exc}\n")
        return EXIT_PARSE
    except JacobiError as exc:
        i, j, k, l = (x + 1 for x in exc.triple)
        err.write(f"llg: Jacobi identity fails: J^{i}_({j},{k},{l}) = {exc.value} "
                  f"for the triple (e{j}, e{k}, e{l})\n")
        return EXIT_JACOBI
    except NotLocalLieError as exc:
        err.write(f"llg: not a local Lie group: {exc}\n")
        return EXIT_NOT_LOCAL_LIE
    except ZeroDivisionError:
        err.write("llg: invariant violated: a coefficient has a pole at the chosen point\n")
        return EXIT_INVARIANT
    except (FrameError, AntisymmetryError, HypothesisError) as exc:
        err.write(f"llg: invariant violated: {exc}\n")
        return EXIT_INVARIANT
    _emit(report, args.format, out)
    return EXIT_INVARIANT if args._failed else EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
