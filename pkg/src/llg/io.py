"""JSON file formats.  Indices are 1-based in files, 0-based in memory.

frame       {"n": 3, "frame": [[poly, ...], ...], "inverse": [[...]]}   (inverse optional)
connection  {"n": 3, "gamma": [{"i": 3, "k": 1, "j": 2, "val": poly}, ...]}
constants   {"n": 3, "c": [{"i": 3, "j": 1, "k": 2, "val": rational}, ...]}   (j < k)
jet         {"n": 3, "order": 2, "coeffs": [matrix of t^1, matrix of t^2, ...]}

A jet's coefficient list may also start with the identity matrix for t^0.
Polynomials are strings in the grammar of ``Poly.parse``; plain JSON
numbers are accepted wherever a polynomial or rational is expected.
"""

from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path

from .deformation import GaugeJet
from .lie_algebra import StructureConstants
from .parallelism import Connection, Frame, FrameError
from .poly import ParseError, Poly, format_poly
from .tensor import AntisymmetryError


def _poly(v, n: int, where: str) -> Poly:
    if isinstance(v, bool) or not isinstance(v, (str, int, float)):
        raise ParseError(f"{where}: expected a polynomial string, got {v!r}")
    if isinstance(v, float):
        if not v.is_integer():
            raise ParseError(f"{where}: write non-integer coefficients as fractions, got {v!r}")
        v = int(v)
    try:
        return Poly.parse(str(v), n)
    except ParseError as exc:
        raise ParseError(f"{where}: {exc}") from None


def parse_rational(v, where: str = "value") -> Fraction:
    if isinstance(v, bool):
        raise ParseError(f"{where}: expected a rational, got {v!r}")
    if isinstance(v, int):
        return Fraction(v)
    if isinstance(v, float) and v.is_integer():
        return Fraction(int(v))
    if isinstance(v, str):
        try:
            return Fraction(v.strip())
        except (ValueError, ZeroDivisionError):
            pass
    raise ParseError(f"{where}: expected a rational, got {v!r}")


def format_rational(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def parse_point(text: str, n: int) -> list:
    parts = [p for p in text.split(",") if p.strip()]
    if len(parts) != n:
        raise ParseError(f"point needs {n} coordinates, got {len(parts)}")
    return [parse_rational(p, "point") for p in parts]


def _dim(data: dict, kind: str) -> int:
    if not isinstance(data, dict):
        raise ParseError(f"{kind} file must hold a JSON object")
    n = data.get("n")
    if isinstance(n, bool) or not isinstance(n, int) or n < 1:
        raise ParseError(f"{kind} file: 'n' must be a positive integer")
    return n


def _index(entry: dict, key: str, n: int, where: str) -> int:
    v = entry.get(key)
    if isinstance(v, bool) or not isinstance(v, int) or not 1 <= v <= n:
        raise ParseError(f"{where}: index '{key}' must be an integer in 1..{n}")
    return v - 1


def _matrix(rows, n: int, where: str) -> list:
    if not isinstance(rows, list) or len(rows) != n or any(not isinstance(r, list) or len(r) != n for r in rows):
        raise ParseError(f"{where}: expected an {n}x{n} matrix")
    return [[_poly(v, n, f"{where}[{i + 1}][{j + 1}]") for j, v in enumerate(r)] for i, r in enumerate(rows)]


def frame_from_dict(data: dict) -> Frame:
    n = _dim(data, "frame")
    e = _matrix(data.get("frame"), n, "frame")
    w = _matrix(data["inverse"], n, "inverse") if data.get("inverse") is not None else None
    return Frame(e, w)


def connection_from_dict(data: dict) -> Connection:
    n = _dim(data, "connection")
    entries = data.get("gamma")
    if not isinstance(entries, list):
        raise ParseError("connection file: 'gamma' must be a list")
    comps = {}
    for pos, ent in enumerate(entries):
        where = f"gamma[{pos}]"
        if not isinstance(ent, dict):
            raise ParseError(f"{where}: expected an object")
        key = (_index(ent, "i", n, where), _index(ent, "k", n, where), _index(ent, "j", n, where))
        if key in comps:
            raise ParseError(f"{where}: duplicate component")
        comps[key] = _poly(ent.get("val"), n, where)
    return Connection.from_components(n, comps)


def constants_from_dict(data: dict) -> StructureConstants:
    n = _dim(data, "constants")
    entries = data.get("c")
    if not isinstance(entries, list):
        raise ParseError("constants file: 'c' must be a list")
    vals = {}
    for pos, ent in enumerate(entries):
        where = f"c[{pos}]"
        if not isinstance(ent, dict):
            raise ParseError(f"{where}: expected an object")
        key = (_index(ent, "i", n, where), _index(ent, "j", n, where), _index(ent, "k", n, where))
        if key in vals:
            raise ParseError(f"{where}: duplicate component")
        vals[key] = parse_rational(ent.get("val"), where)
    try:
        return StructureConstants(n, vals)
    except AntisymmetryError as exc:
        raise ParseError(f"constants file: {exc}") from None


def jet_from_dict(data: dict) -> GaugeJet:
    n = _dim(data, "jet")
    coeffs = data.get("coeffs")
    if not isinstance(coeffs, list):
        raise ParseError("jet file: 'coeffs' must be a list")
    mats = [_matrix(m, n, f"coeffs[{q}]") for q, m in enumerate(coeffs)]
    order = data.get("order", len(mats))
    if isinstance(order, bool) or not isinstance(order, int) or order < 1:
        raise ParseError("jet file: 'order' must be a positive integer")
    if len(mats) == order + 1:
        ident = [[Poly.const(n, 1 if i == j else 0) for j in range(n)] for i in range(n)]
        if mats[0] != ident:
            raise ParseError("jet file: the t^0 coefficient must be the identity")
        mats = mats[1:]
    if len(mats) > order:
        raise ParseError(f"jet file: {len(mats)} coefficients exceed order {order}")
    mats += [[[Poly.zero(n)] * n for _ in range(n)] for _ in range(order - len(mats))]
    return GaugeJet(n, mats)


def _fmt_matrix(M) -> list:
    return [[format_poly(v) for v in row] for row in M]


def frame_to_dict(F: Frame) -> dict:
    return {"n": F.n, "frame": _fmt_matrix(F.e), "inverse": _fmt_matrix(F.w)}


def connection_to_dict(C: Connection) -> dict:
    return {"n": C.n, "gamma": [{"i": i + 1, "k": k + 1, "j": j + 1, "val": format_poly(v)}
                               for (i, k, j), v in sorted(C.gamma.comps.items())]}


def constants_to_dict(g: StructureConstants) -> dict:
    return {"n": g.n, "c": [{"i": i + 1, "j": j + 1, "k": k + 1, "val": format_rational(v)}
                           for (i, j, k), v in sorted(g.c.items()) if j < k]}


def jet_to_dict(jet: GaugeJet) -> dict:
    return {"n": jet.n, "order": jet.order, "coeffs": [_fmt_matrix(jet.F[m]) for m in range(1, jet.order + 1)]}


def load_json(path) -> dict:
    try:
        return json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: invalid JSON ({exc.msg} at line {exc.lineno})") from None
    except OSError as exc:
        raise ParseError(f"{path}: {exc.strerror}") from None


def detect_kind(data: dict) -> str:
    for key, kind in (("frame", "frame"), ("gamma", "connection"), ("c", "constants"), ("coeffs", "jet")):
        if isinstance(data, dict) and key in data:
            return kind
    raise ParseError("unrecognized input file: expected one of 'frame', 'gamma', 'c' or 'coeffs'")


def load_any(path):
    """Parse a file of any supported kind; returns (kind, object)."""
    data = load_json(path)
    kind = detect_kind(data)
    reader = {"frame": frame_from_dict, "connection": connection_from_dict,
              "constants": constants_from_dict, "jet": jet_from_dict}[kind]
    return kind, reader(data)


def dumps(obj) -> str:
    """Canonical JSON: sorted keys, two-space indent, trailing newline."""
    return json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


__all__ = [
    "FrameError", "ParseError", "connection_from_dict", "connection_to_dict", "constants_from_dict",
    "constants_to_dict", "detect_kind", "dumps", "format_rational", "frame_from_dict", "frame_to_dict",
    "jet_from_dict", "jet_to_dict", "load_any", "load_json", "parse_point", "parse_rational",
]
