"""Plain-dict reports for the command line.  Indices are 1-based, values are strings."""

from __future__ import annotations

from fractions import Fraction

from .char_classes import class_is_exact, closedness, t_power, trace_map
from .deformation import DeformationReport, GaugeJet, deformation_report
from .identities import identity_suite
from .io import format_rational
from .jets import TJet
from .lie_algebra import (
    StructureConstants,
    cohomology,
    differential_D,
    differential_matrix,
)
from .parallelism import (
    Connection,
    Frame,
    curvature_hat,
    curvature_tilde,
    d_hat,
    is_local_lie_group,
    localize,
    torsion,
)
from .poly import Poly, format_poly
from .tensor import TensorField


def value_str(v) -> str | list:
    if isinstance(v, Poly):
        return format_poly(v)
    if isinstance(v, TJet):
        return [value_str(c) for c in v.coeffs]
    return format_rational(Fraction(v))


def components(T: TensorField) -> list:
    """Nonzero entries; inside the antisymmetric block only increasing indices are listed."""
    out = []
    lo = T.upper + T.lower - T.antisym
    for idx, v in sorted(T.comps.items()):
        block = idx[lo:]
        if T.antisym > 1 and any(a >= b for a, b in zip(block, block[1:])):
            continue
        out.append({"index": [i + 1 for i in idx], "value": value_str(v)})
    return out


def constants_table(g: StructureConstants) -> list:
    return [{"i": i + 1, "j": j + 1, "k": k + 1, "value": format_rational(v)}
            for (i, j, k), v in sorted(g.c.items()) if j < k]


def _jacobi(g: StructureConstants) -> dict:
    bad = g.jacobi_violation()
    if bad is None:
        return {"holds": True}
    idx, val = bad
    return {"holds": False, "component": [i + 1 for i in idx], "value": format_rational(val)}


def analyze(C: Connection, frame: Frame | None, point) -> dict:
    T = torsion(C)
    Rt, Rh = curvature_tilde(C), curvature_hat(C)
    verdict = is_local_lie_group(C)
    g = localize(T, point)
    return {
        "n": C.n,
        "source": "frame" if frame is not None else "connection",
        "point": [format_rational(Fraction(x)) for x in point],
        "gamma": components(C.gamma),
        "torsion": components(T.with_antisym(2)),
        "curvature_tilde": components(Rt),
        "curvature_hat": components(Rh),
        "verdict": {
            "tilde_flat": verdict.tilde_flat,
            "hat_flat": verdict.hat_flat,
            "nabla_torsion_zero": verdict.nabla_T_zero,
            "local_lie_group": verdict.is_local_lie_group,
        },
        "identities": {c.name: (c.holds if c.applicable else None) for c in identity_suite(C, frame=frame)},
        "structure_constants": constants_table(g),
        "jacobi_at_point": _jacobi(g),
    }


def cohomology_report(g: StructureConstants, max_degree: int | None) -> dict:
    rep = cohomology(g, max_degree)
    top = len(rep.degrees) - 1
    oracle = all(differential_matrix(g, k) == differential_matrix(g, k, "CE") for k in range(top + 1))
    out = {
        "n": g.n,
        "constants": constants_table(g),
        "degrees": [{"degree": d.degree, "cochain_dim": d.cochain_dim, "rank": d.rank,
                     "kernel_dim": d.kernel_dim, "cohomology_dim": d.cohomology_dim} for d in rep.degrees],
        "betti": rep.betti(),
        "center_dim": rep.center_dim,
        "derivation_dim": rep.derivation_dim,
        "inner_derivation_dim": rep.inner_dim,
        "checks": {
            "h0_equals_center": rep.betti()[0] == rep.center_dim,
            "h1_equals_outer_derivations": top < 1 or rep.betti()[1] == rep.derivation_dim - rep.inner_dim,
            "ce_oracle_agrees": oracle,
        },
    }
    if top == g.n:
        out["euler_characteristic"] = rep.euler_characteristic()
    return out


def _class_entry(g: StructureConstants, local: TensorField, k: int) -> dict:
    point_closed = not differential_D(g, local)
    entry = {"power": k, "degree": k + 1, "form": components(local), "closed": point_closed}
    if point_closed:
        ex = class_is_exact(g, local)
        entry["exact"] = ex.exact
        entry["primitive"] = components(ex.certificate) if ex.exact else None
    else:
        entry["exact"] = None
        entry["primitive"] = None
    entry["trace"] = components(trace_map(local))
    return entry


def classes_from_constants(g: StructureConstants) -> dict:
    T = g.as_tensor()
    entries = []
    for k in range(1, g.n, 2):
        entries.append(_class_entry(g, t_power(T, k), k))
    return {"n": g.n, "constants": constants_table(g), "classes": entries}


def classes_from_connection(C: Connection, point) -> dict:
    """Requires R^ = 0 (raises NotLocalLieError otherwise)."""
    T = torsion(C)
    g = localize(T, point)
    entries = []
    for k in range(1, C.n, 2):
        e = _class_entry(g, t_power(T, k).eval_at(point), k)
        e["field_closed"] = closedness(C, k)
        entries.append(e)
    return {"n": C.n, "point": [format_rational(Fraction(x)) for x in point],
            "torsion_closed": d_hat(C, T).is_zero(), "constants": constants_table(g), "classes": entries}


def deformation(jet: GaugeJet, C: Connection, point) -> dict:
    r: DeformationReport = deformation_report(jet, C, point)
    out = {
        "n": jet.n,
        "order": r.order,
        "point": [format_rational(Fraction(x)) for x in point],
        "validity_order": r.validity_order,
        "constancy_order": r.constancy_order,
        "tilde_flat_order": r.tilde_flat_order,
        "order_one_constraint": [{"order": c.order, "field_holds": c.field_holds, "point_holds": c.point_holds,
                                  "kills_derived_algebra": c.kills_derived} for c in r.constraint],
        "kappa_literal": components(r.kappa_literal),
        "kappa_conjugated": components(r.kappa_conjugated),
        "constancy_equivalences": None if r.constancy_table is None else {
            "through_order": min(r.validity_order, r.order),
            "constancy_defect_zero": r.constancy_table.constancy,
            "kappa_zero": r.constancy_table.kappa_zero,
            "kappa_zero_at_point": r.constancy_table.kappa_zero_at_p,
            "kappa_dot_zero": r.constancy_table.kappa_dot_zero,
            "kappa_dot_zero_at_point": r.constancy_table.kappa_dot_zero_at_p,
            "agree": r.constancy_table.agree,
        },
        "kappa_dot_parallel_order": r.kappa_dot_parallel_order,
        "kodaira_spencer": None,
        "notes": list(r.notes),
    }
    if r.ks is not None:
        ks = {"velocity": components(r.ks.mu), "closed": r.ks.is_cocycle, "parallel": r.ks.is_invariant}
        if r.ks_class is not None:
            ks["status"] = r.ks_class.status
            ks["coordinates"] = (None if r.ks_class.coordinates is None
                                 else [format_rational(c) for c in r.ks_class.coordinates])
        out["kodaira_spencer"] = ks
    return out


def render_text(obj, indent: int = 0) -> str:
    """Indented key: value rendering of a report."""
    pad = "  " * indent
    lines = []
    if isinstance(obj, dict):
        for k in sorted(obj):
            v = obj[k]
            if isinstance(v, (dict, list)) and v and not _flat(v):
                lines.append(f"{pad}{k}:")
                lines.append(render_text(v, indent + 1))
            else:
                lines.append(f"{pad}{k}: {_scalar(v)}")
    elif isinstance(obj, list):
        for v in obj:
            if isinstance(v, (dict, list)) and v and not _flat(v):
                lines.append(f"{pad}-")
                lines.append(render_text(v, indent + 1))
            else:
                lines.append(f"{pad}- {_scalar(v)}")
    else:
        lines.append(f"{pad}{_scalar(obj)}")
    return "\n".join(lines)


def _flat(v) -> bool:
    return isinstance(v, list) and not any(isinstance(x, (dict, list)) for x in v)


def _scalar(v) -> str:
    if v is None:
        return "none"
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, list):
        return "[" + ", ".join(_scalar(x) for x in v) + "]"
    if isinstance(v, dict):
        return "{}"
    return str(v)
