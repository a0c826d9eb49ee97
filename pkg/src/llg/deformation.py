"""Gauge jets acting on parallelisms, and the invariants of the resulting
one-parameter families.

A gauge jet is f(t, x) = F_0 + t F_1 + ... + t^K F_K with F_0 = I and
polynomial matrices F_m; its inverse g is computed as a truncated series.
The jet acts on a connection by

    (Gamma_t)^i_{kj} = d_k f^i_a g^a_j + f^i_b Gamma^b_{kc} g^c_j,

which is the connection of the frame f e.  Everything here is exact modulo
t^(K+1).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial
from typing import Sequence

from . import linalg
from .jets import TJet, mat_mul, mat_jet_mul, matrix_of_jets, tjet_invert
from .lie_algebra import (
    StructureConstants,
    cohomology,
    cochain_to_vector,
    derived_algebra,
    differential_D,
    differential_matrix,
)
from .parallelism import (
    Connection,
    Frame,
    NotLocalLieError,
    curvature_hat,
    curvature_tilde,
    d_hat,
    localize,
    nabla_tilde,
    splitting_eval,
    torsion,
)
from .poly import Poly
from .tensor import TensorField


class HypothesisError(ValueError):
    """An operation was called outside the hypothesis it needs."""


def _acc(out, key, val):
    out[key] = out[key] + val if key in out else val


# -- gauge jets -----------------------------------------------------------------


class GaugeJet:
    """f(t) = I + sum_m t^m F_m with polynomial matrices; g is its series inverse."""

    __slots__ = ("n", "order", "F", "G")

    def __init__(self, n: int, coeffs: Sequence):
        """``coeffs[m - 1]`` is the matrix multiplying t^m (m = 1..K)."""
        if not coeffs:
            raise ValueError("a gauge jet needs order at least 1")
        one, zero = Poly.const(n, 1), Poly.zero(n)
        I = [[one if i == j else zero for j in range(n)] for i in range(n)]
        F = [I] + [[[_as_poly(v, n) for v in row] for row in M] for M in coeffs]
        for M in F:
            if len(M) != n or any(len(row) != n for row in M):
                raise ValueError("coefficient matrices must be n x n")
        self.n = n
        self.order = len(F) - 1
        self.F = F
        self.G = tjet_invert(F)

    @classmethod
    def identity(cls, n: int, order: int) -> "GaugeJet":
        z = Poly.zero(n)
        return cls(n, [[[z] * n for _ in range(n)] for _ in range(order)])

    @classmethod
    def from_strings(cls, n: int, coeffs) -> "GaugeJet":
        return cls(n, [[[Poly.parse(s, n) for s in row] for row in M] for M in coeffs])

    @classmethod
    def exp(cls, A, order: int) -> "GaugeJet":
        """Truncated exp(tA) for a matrix A of polynomials or rationals."""
        n = len(A)
        A = [[_as_poly(v, n) for v in row] for row in A]
        coeffs, P = [], A
        for m in range(1, order + 1):
            coeffs.append([[v * Fraction(1, factorial(m)) for v in row] for row in P])
            P = mat_mul(P, A)
        return cls(n, coeffs)

    def truncated(self, order: int) -> "GaugeJet":
        return GaugeJet(self.n, self.F[1:order + 1])

    def f_matrix(self):
        return matrix_of_jets(self.F)

    def g_matrix(self):
        return matrix_of_jets(self.G)

    def coefficient_at(self, m: int, point):
        return [[v.eval(point) for v in row] for row in self.F[m]]

    def at(self, point):
        """Matrix jets (lists of rational matrices) of f and g at a point."""
        F = [[[v.eval(point) for v in row] for row in M] for M in self.F]
        G = [[[v.eval(point) for v in row] for row in M] for M in self.G]
        return F, G

    def __repr__(self):
        return f"GaugeJet(n={self.n}, order={self.order})"


def _as_poly(v, n):
    if isinstance(v, Poly):
        return v
    if isinstance(v, str):
        return Poly.parse(v, n)
    return Poly.const(n, v)


def _jet_zero(n, K):
    return TJet.constant(Poly.zero(n), K)


def _lift(T: TensorField, K: int) -> TensorField:
    n = T.n
    return TensorField(n, T.upper, T.lower, {k: TJet.constant(v, K) for k, v in T.comps.items()},
                       _jet_zero(n, K), T.antisym)


def jet_orders(T: TensorField, K: int) -> int:
    """Largest m <= K with T == 0 mod t^(m+1); -1 if some t^0 entry is nonzero."""
    m = K
    for v in T.comps.values():
        m = min(m, v.vanishing_order())
    return m


# -- actions ---------------------------------------------------------------------------


def act_on_connection(jet: GaugeJet, C: Connection) -> Connection:
    n, K = jet.n, jet.order
    if C.n != n:
        raise ValueError("dimension mismatch")
    f, g = jet.f_matrix(), jet.g_matrix()
    comps = {}
    for k in range(n):
        df = [[v.diff(k + 1) for v in row] for row in f]
        Gk = [[TJet.constant(C[(i, k, j)], K) for j in range(n)] for i in range(n)]
        M = mat_mul(df, g)
        M2 = mat_mul(mat_mul(f, Gk), g)
        for i in range(n):
            for j in range(n):
                v = M[i][j] + M2[i][j]
                if v:
                    comps[(i, k, j)] = v
    return Connection(TensorField(n, 1, 2, comps, _jet_zero(n, K)), frame_derived=C.frame_derived)


def act_on_frame(jet: GaugeJet, F: Frame):
    """Frame jets (f e, w g) as matrices of TJet entries."""
    K = jet.order
    e = [[TJet.constant(v, K) for v in row] for row in F.e]
    w = [[TJet.constant(v, K) for v in row] for row in F.w]
    return mat_mul(jet.f_matrix(), e), mat_mul(w, jet.g_matrix())


def connection_of_frame_jet(e, w, n: int, K: int) -> Connection:
    """Gamma^i_{kj} = (d_k e^i_a) w^a_j for a frame with jet entries."""
    comps = {}
    for k in range(n):
        de = [[v.diff(k + 1) for v in row] for row in e]
        M = mat_mul(de, w)
        for i in range(n):
            for j in range(n):
                if M[i][j]:
                    comps[(i, k, j)] = M[i][j]
    return Connection(TensorField(n, 1, 2, comps, _jet_zero(n, K)), frame_derived=True)


def act_on_splitting(jet: GaugeJet, F: Frame, x, y) -> list:
    """(f eps)(x, y) = f(y) eps(x, y) g(x) as a list of K+1 rational matrices."""
    if len(x) != F.n or len(y) != F.n:
        raise ValueError("point dimension mismatch")
    eps = splitting_eval(F, x, y)
    Fy, _ = jet.at(y)
    _, Gx = jet.at(x)
    E = [eps] + [[[Fraction(0)] * F.n for _ in range(F.n)] for _ in range(jet.order)]
    return mat_jet_mul(mat_jet_mul(Fy, E), Gx)


def gauge_between(F0: Frame, F1: Frame, point) -> list:
    """The section f(x) = e0(x) w0(p) e1(p) w1(x), so that eps0(p, x) = f(x) eps1(p, x)."""
    if F0.n != F1.n:
        raise ValueError("frames live on charts of different dimension")
    n = F0.n
    mid = mat_mul(F0.w_at(point), F1.e_at(point))
    midp = [[Poly.const(n, v) for v in row] for row in mid]
    return mat_mul(mat_mul(F0.e, midp), F1.w)


# -- tensors moved by the jet -------------------------------------------------------------


def push_forward(jet: GaugeJet, omega: TensorField) -> TensorField:
    """(f_* w)^i_{j1..jk} = f^i_a w^a_{b1..bk} g^{b1}_{j1} ... g^{bk}_{jk}."""
    n, K = jet.n, jet.order
    f, g = jet.f_matrix(), jet.g_matrix()
    cur = {}
    for idx, v in omega.comps.items():
        vj = v if isinstance(v, TJet) else TJet.constant(_as_poly(v, n), K)
        for i in range(n):
            if f[i][idx[0]]:
                _acc(cur, (i,) + idx[1:], f[i][idx[0]] * vj)
    for slot in range(1, omega.lower + 1):
        nxt = {}
        for idx, v in cur.items():
            b = idx[slot]
            for j in range(n):
                if g[b][j]:
                    _acc(nxt, idx[:slot] + (j,) + idx[slot + 1:], v * g[b][j])
        cur = nxt
    return TensorField(n, 1, omega.lower, cur, _jet_zero(n, K), omega.antisym)


def frame_extension(F: Frame, omega_p: TensorField, point) -> TensorField:
    """Exact invariant extension of a pointwise vector-valued form through the frame.

    w(x)^i_J = e^i_a(x) W^a_B w^B_J(x) with W the frame components of w at p;
    every such field is nabla~-parallel for the connection of F.
    """
    n = F.n
    ep, wp = F.e_at(point), F.w_at(point)
    # frame components at p: W^a_{b..} = w^a_i(p) w^i_{j..} e^j_b(p)
    W = {}
    for idx, v in omega_p.comps.items():
        for a in range(n):
            if wp[a][idx[0]]:
                _acc(W, (a,) + idx[1:], wp[a][idx[0]] * v)
    for slot in range(1, omega_p.lower + 1):
        nxt = {}
        for idx, v in W.items():
            j = idx[slot]
            for b in range(n):
                if ep[j][b]:
                    _acc(nxt, idx[:slot] + (b,) + idx[slot + 1:], v * ep[j][b])
        W = nxt
    cur = {}
    for idx, v in W.items():
        if not v:
            continue
        for i in range(n):
            if F.e[i][idx[0]]:
                _acc(cur, (i,) + idx[1:], F.e[i][idx[0]] * v)
    for slot in range(1, omega_p.lower + 1):
        nxt = {}
        for idx, v in cur.items():
            b = idx[slot]
            for j in range(n):
                if F.w[b][j]:
                    _acc(nxt, idx[:slot] + (j,) + idx[slot + 1:], v * F.w[b][j])
        cur = nxt
    return TensorField(n, 1, omega_p.lower, cur, Poly.zero(n), omega_p.antisym)


# -- deformation invariants -------------------------------------------------------------------


def deformed_torsion(jet: GaugeJet, C: Connection) -> TensorField:
    return torsion(act_on_connection(jet, C))


def constancy_defect(jet: GaugeJet, C: Connection) -> TensorField:
    """Delta^i_{jk} = f^i_a T0^a_{jk} - T_t^i_{ab} f^a_j f^b_k."""
    n, K = jet.n, jet.order
    T0 = torsion(C)
    Tt = deformed_torsion(jet, C)
    f = jet.f_matrix()
    left = {}
    for (a, j, k), v in T0.comps.items():
        for i in range(n):
            if f[i][a]:
                _acc(left, (i, j, k), f[i][a] * v)
    right = _transport_lower(Tt.comps, f, n)
    out = dict(left)
    for key, v in right.items():
        _acc(out, key, -v)
    return TensorField(n, 1, 2, out, _jet_zero(n, K), antisym=2)


def _transport_lower(comps: dict, M, n) -> dict:
    """X^i_{jk} -> X^i_{ab} M^a_j M^b_k."""
    cur = dict(comps)
    for slot in (1, 2):
        nxt = {}
        for idx, v in cur.items():
            a = idx[slot]
            for j in range(n):
                if M[a][j]:
                    _acc(nxt, idx[:slot] + (j,) + idx[slot + 1:], v * M[a][j])
        cur = nxt
    return cur


def kappa_literal(jet: GaugeJet, C: Connection) -> TensorField:
    """Bracket difference at fixed components: T_t - T_0."""
    return deformed_torsion(jet, C) - _lift(torsion(C), jet.order)


def kappa_conjugated(jet: GaugeJet, C: Connection) -> TensorField:
    """T_t - f_*(T_0); vanishes exactly when the constancy defect does."""
    return deformed_torsion(jet, C) - push_forward(jet, torsion(C))


def kappa(jet: GaugeJet, C: Connection):
    return kappa_literal(jet, C), kappa_conjugated(jet, C)


def _dt(T: TensorField) -> TensorField:
    return T.map(lambda v: v.dt())


def _eval(T: TensorField, point) -> TensorField:
    K = next(iter(T.comps.values())).order if T.comps else 0
    return T.map(lambda v: v.eval(point), zero=TJet.constant(Fraction(0), K))


@dataclass
class ConstancyTable:
    """Five formulations of constancy, each evaluated through order K."""

    constancy: bool
    kappa_zero: bool
    kappa_zero_at_p: bool
    kappa_dot_zero: bool
    kappa_dot_zero_at_p: bool

    def verdicts(self) -> list:
        return [self.constancy, self.kappa_zero, self.kappa_zero_at_p, self.kappa_dot_zero,
                self.kappa_dot_zero_at_p]

    @property
    def agree(self) -> bool:
        return len(set(self.verdicts())) == 1


def constancy_equivalences(jet: GaugeJet, C: Connection, point) -> ConstancyTable:
    K = jet.order
    k = kappa_conjugated(jet, C)
    kd = _dt(k)
    kp = _eval(k, point)
    kdp = _eval(kd, point)
    return ConstancyTable(
        constancy=jet_orders(constancy_defect(jet, C), K) >= K,
        kappa_zero=jet_orders(k, K) >= K,
        kappa_zero_at_p=jet_orders(kp, K) >= K,
        # d/dt drops the top coefficient, so its verdict is mod t^K
        kappa_dot_zero=jet_orders(kd, K) >= K - 1,
        kappa_dot_zero_at_p=jet_orders(kdp, K) >= K - 1,
    )


def kappa_dot_residual(jet: GaugeJet, C: Connection) -> TensorField:
    """nabla~_t (d kappa/dt) for the conjugated kappa; meaningful mod t^K."""
    Ct = act_on_connection(jet, C)
    return nabla_tilde(Ct, _dt(kappa_conjugated(jet, C)))


# -- order-one constraint and rigidity -----------------------------------------------------------


@dataclass
class ConstraintOrder:
    order: int
    field_holds: bool
    point_holds: bool
    kills_derived: bool


def derivative_constraint(jet: GaugeJet, C: Connection, point) -> list:
    """Per order m >= 1: F_m T_0 == 0 (field and at p), and F_m(p) kills [g, g]."""
    n = jet.n
    T0 = torsion(C)
    g = localize(T0, point)
    derived = derived_algebra(g)
    out = []
    columns = {}
    for (a, j, k), c in g.c.items():
        columns.setdefault((j, k), [Fraction(0)] * n)[a] = c
    for m in range(1, jet.order + 1):
        Fm = jet.F[m]
        prod = {}
        for (a, j, k), v in T0.comps.items():
            for i in range(n):
                if Fm[i][a]:
                    _acc(prod, (i, j, k), Fm[i][a] * v)
        field_ok = all(not v for v in prod.values())
        Fp = [[v.eval(point) for v in row] for row in Fm]
        point_ok = all(not any(linalg.matvec(Fp, col)) for col in columns.values())
        kills = all(not any(linalg.matvec(Fp, v)) for v in derived)
        out.append(ConstraintOrder(m, field_ok, point_ok, kills))
    return out


@dataclass
class RigidityVerdict:
    perfect: bool
    first_violation: int | None


def semisimple_rigidity(jet: GaugeJet, g: StructureConstants, point) -> RigidityVerdict:
    """First order whose coefficient at p fails to kill the derived algebra.

    When [g, g] = g this is the first order with F_m(p) != 0.
    """
    derived = derived_algebra(g)
    perfect = len(derived) == g.n
    for m in range(1, jet.order + 1):
        Fp = jet.coefficient_at(m, point)
        if any(any(linalg.matvec(Fp, v)) for v in derived):
            return RigidityVerdict(perfect, m)
    return RigidityVerdict(perfect, None)


# -- Kodaira-Spencer cocycle -------------------------------------------------------------------


def velocity_form(jet: GaugeJet) -> TensorField:
    """mu = (df/dt) at t = 0 as a (1,1) table."""
    n = jet.n
    F1 = jet.F[1]
    return TensorField(n, 1, 1, {(i, j): F1[i][j] for i in range(n) for j in range(n)},
                       Poly.zero(n), antisym=1)


@dataclass
class KSCocycle:
    mu: TensorField
    d_hat_mu: TensorField
    nabla_mu: TensorField

    @property
    def is_cocycle(self) -> bool:
        return self.d_hat_mu.is_zero()

    @property
    def is_invariant(self) -> bool:
        return self.nabla_mu.is_zero()


def ks_cocycle(jet: GaugeJet, C: Connection, check: bool = True) -> KSCocycle:
    if check and jet_orders(constancy_defect(jet.truncated(1), C), 1) < 1:
        raise HypothesisError("the jet is not constant through order 1")
    mu = velocity_form(jet)
    return KSCocycle(mu, d_hat(C, mu), nabla_tilde(C, mu))


@dataclass
class KSClass:
    status: str  # "class", "zero", "janet-cocycle-only"
    coordinates: list | None = None
    certificate: list | None = None


def ks_class(mu: TensorField, C: Connection, point) -> KSClass:
    """Coordinates of the class of an invariant cocycle in the degree-1 cohomology basis.

    Returns status ``janet-cocycle-only`` when mu is closed but not parallel,
    since it then has no pointwise representative in the invariant complex.
    """
    if d_hat(C, mu):
        raise HypothesisError("mu is not closed")
    if nabla_tilde(C, mu):
        return KSClass("janet-cocycle-only")
    g = localize(torsion(C), point)
    local = mu.eval_at(point)
    return class_coordinates(g, local)


def class_coordinates(g: StructureConstants, cocycle: TensorField) -> KSClass:
    """Solve cocycle = sum a_r rep_r + D(v) for the stored representatives."""
    if differential_D(g, cocycle):
        raise HypothesisError("cochain is not closed")
    rep = cohomology(g, 1).degrees[1].representatives
    reps = [cochain_to_vector(r) for r in rep]
    D0 = differential_matrix(g, 0)
    cols = reps + (linalg.transpose(D0) if D0 else [])
    b = cochain_to_vector(cocycle)
    x = linalg.solve(linalg.transpose(cols), b) if cols else None
    if x is None:
        raise AssertionError("closed cochain outside ker D")
    coords = x[:len(reps)]
    cert = x[len(reps):]
    return KSClass("zero" if not any(coords) else "class", coords, cert)


# -- validity and the full report ---------------------------------------------------------------


def validity(jet: GaugeJet, C: Connection) -> int:
    """Largest m <= K with the curvature of nabla^_t vanishing mod t^(m+1)."""
    if curvature_hat(C):
        raise NotLocalLieError("base connection has nonzero curvature for nabla^")
    return jet_orders(curvature_hat(act_on_connection(jet, C)), jet.order)


def diagram_check(jet: GaugeJet, C: Connection, omega: TensorField) -> bool:
    """f_*(d^_0 w) == d^_t(f_* w) mod t^(K+1)."""
    Ct = act_on_connection(jet, C)
    lhs = push_forward(jet, d_hat(C, omega))
    rhs = d_hat(Ct, push_forward(jet, omega), check=False)
    return (lhs - rhs).is_zero()


@dataclass
class DeformationReport:
    order: int
    validity_order: int
    constancy_order: int
    tilde_flat_order: int
    constraint: list
    kappa_literal: TensorField
    kappa_conjugated: TensorField
    constancy_table: ConstancyTable | None
    kappa_dot_parallel_order: int
    ks: KSCocycle | None
    ks_class: KSClass | None
    notes: list = field(default_factory=list)


def deformation_report(jet: GaugeJet, C: Connection, point) -> DeformationReport:
    K = jet.order
    v = validity(jet, C)
    Ct = act_on_connection(jet, C)
    delta = constancy_defect(jet, C)
    c_order = jet_orders(delta, K)
    notes = []
    ks = ksc = None
    if c_order >= 1:
        ks = ks_cocycle(jet, C, check=False)
        if ks.is_cocycle:
            ksc = ks_class(ks.mu, C, point)
        else:
            notes.append("velocity is not closed")
    else:
        notes.append("not constant through order 1: no Kodaira-Spencer class")
    if v >= 1:
        constancy_table = constancy_equivalences(jet.truncated(v), C, point)
        if v < K:
            notes.append(f"constancy equivalences evaluated through order {v}, where the family is valid")
    else:
        constancy_table = None
        notes.append("not a deformation at order 1: constancy equivalences do not apply")
    return DeformationReport(
        order=K,
        validity_order=v,
        constancy_order=c_order,
        tilde_flat_order=jet_orders(curvature_tilde(Ct), K),
        constraint=derivative_constraint(jet, C, point),
        kappa_literal=kappa_literal(jet, C),
        kappa_conjugated=kappa_conjugated(jet, C),
        constancy_table=constancy_table,
        kappa_dot_parallel_order=jet_orders(kappa_dot_residual(jet, C), K),
        ks=ks,
        ks_class=ksc,
        notes=notes,
    )
