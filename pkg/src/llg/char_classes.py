"""Torsion powers, their closedness, and the trace to scalar cochains.

The k-th torsion power is the degree k+1 vector-valued form built by right
nesting with first-index alternation:

    (T^1) = T,   (T^k)^i_{j0..jk} = [T^i_{j0 a} (T^(k-1))^a_{j1..jk}]_alt.

T^2 coincides with the Jacobi form.  Tables may hold ``Poly`` (field level)
or ``Fraction`` (pointwise) entries.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

from .lie_algebra import StructureConstants, differential_D, solve_coboundary
from .parallelism import (
    Connection,
    NotLocalLieError,
    curvature_hat,
    d_hat,
    localize,
    lower_torsion_term,
    torsion,
)
from .tensor import TensorField, alternate_first, form_from_sorted


def _acc(out, key, val):
    out[key] = out[key] + val if key in out else val


def t_power(T: TensorField, k: int) -> TensorField:
    """Right-nested torsion power of degree k+1 (k >= 1)."""
    if k < 1:
        raise ValueError("power must be at least 1")
    if k + 1 > T.n:
        raise ValueError(f"degree {k + 1} exceeds dimension {T.n}")
    P = T.with_antisym(2)
    by_a = {}
    for (i, j0, a), t in T.comps.items():
        by_a.setdefault(a, []).append((i, j0, t))
    for m in range(2, k + 1):
        X: dict = {}
        for idx, v in P.comps.items():
            a, rest = idx[0], idx[1:]
            for i, j0, t in by_a.get(a, ()):
                _acc(X, (i, j0) + rest, t * v)
        P = alternate_first(TensorField(T.n, 1, m + 1, X, T.zero), check=False)
    return P


def trace_map(omega: TensorField) -> TensorField:
    """Contract the value index with the last lower index: (tr w)_J = w^a_{J a}."""
    if omega.upper != 1 or omega.lower < 1:
        raise ValueError("trace needs a vector-valued form of degree >= 1")
    out: dict = {}
    for idx, v in omega.comps.items():
        if idx[0] == idx[-1]:
            _acc(out, idx[1:-1], v)
    k = omega.lower - 1
    return TensorField(omega.n, 0, k, out, omega.zero, antisym=k)


def scalar_differential(g: StructureConstants, eta: TensorField) -> TensorField:
    """Trivial-coefficient differential: only the torsion terms from lower indices."""
    if eta.upper != 0:
        raise ValueError("expected a scalar cochain")
    return -lower_torsion_term(g.as_tensor(), eta)


def unimodular_character(g: StructureConstants) -> list:
    """theta_a = tr(ad e_a) = c^b_{ab}; zero exactly when g is unimodular."""
    theta = [Fraction(0)] * g.n
    for (b, a, c), v in g.c.items():
        if b == c:
            theta[a] += v
    return theta


def trace_defect(g: StructureConstants, omega: TensorField) -> TensorField:
    """tr(D w) - d(tr w) for a vector-valued k-cochain w.

    Equals (-1)^(k+1) theta_a w^a_J, so the trace commutes with the
    differentials exactly when g is unimodular.
    """
    return trace_map(differential_D(g, omega)) - scalar_differential(g, trace_map(omega))


def predicted_trace_defect(g: StructureConstants, omega: TensorField) -> TensorField:
    theta = unimodular_character(g)
    sign = (-1) ** (omega.lower + 1)
    out: dict = {}
    for idx, v in omega.comps.items():
        if theta[idx[0]]:
            _acc(out, idx[1:], sign * theta[idx[0]] * v)
    k = omega.lower
    return TensorField(g.n, 0, k, out, omega.zero, antisym=k)


def scalar_from_vector(n: int, k: int, vec) -> TensorField:
    vals = {J: Fraction(v) for J, v in zip(combinations(range(n), k), vec) if v}
    return form_from_sorted(n, 0, k, vals, Fraction(0))


@dataclass(frozen=True)
class ExactnessVerdict:
    exact: bool
    certificate: TensorField | None


def class_is_exact(g: StructureConstants, omega: TensorField) -> ExactnessVerdict:
    """Decide whether a closed cochain is a coboundary, with a primitive when it is."""
    if differential_D(g, omega):
        raise ValueError("cochain is not closed")
    eta = solve_coboundary(g, omega)
    return ExactnessVerdict(eta is not None, eta)


@dataclass(frozen=True)
class ClassEntry:
    power: int
    degree: int
    form: TensorField
    field_closed: bool
    point_closed: bool
    exact: bool
    certificate: TensorField | None
    trace: TensorField


def closedness(C: Connection, k: int) -> bool:
    """d^ (T^k) == 0 at field level; requires a local Lie group."""
    if curvature_hat(C):
        raise NotLocalLieError("curvature of nabla^ does not vanish")
    return d_hat(C, t_power(torsion(C), k)).is_zero()


def class_report(C: Connection, point) -> list:
    """Odd torsion powers T^1, T^3, ... with closedness, exactness and trace."""
    if curvature_hat(C):
        raise NotLocalLieError("curvature of nabla^ does not vanish")
    T = torsion(C)
    g = localize(T, point)
    out = []
    k = 1
    while k + 1 <= C.n:
        Tk = t_power(T, k)
        local = Tk.eval_at(point)
        point_closed = not differential_D(g, local)
        if point_closed:
            ex = class_is_exact(g, local)
            exact, cert = ex.exact, ex.certificate
        else:
            exact, cert = False, None
        out.append(ClassEntry(k, k + 1, local, d_hat(C, Tk).is_zero(), point_closed, exact, cert,
                              trace_map(local)))
        k += 2
    return out
