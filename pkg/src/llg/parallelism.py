"""Field-level calculus of a parallelism on one coordinate chart.

A parallelism is given by a frame ``e`` (column ``a`` is the frame field
``e_a``) with polynomial inverse ``w``.  The connection it induces is

    Gamma^i_{kj} = (d_k e^i_a) w^a_j,

stored with 0-based index tuples ``(i, k, j)``.  In ``nabla_tilde`` the
differentiation index is the first lower slot of Gamma; ``nabla_hat`` uses
the second.  Covariant derivatives use the sign convention

    (nabla~_l xi)^{i..}_{j..} = d_l xi - Gamma^i_{la} xi^{a..} + Gamma^a_{lj} xi_{a..}

(opposite to the usual tensor-calculus sign on the contraction terms), and
the new lower index is always placed first among the lower indices.

Every function here is generic in the component ring: entries may be
``Poly`` (fields), ``TJet`` of ``Poly`` (deformations) or ``Fraction``
(pointwise data, where derivatives are not defined).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import TYPE_CHECKING, Sequence

from . import linalg
from .jets import mat_mul
from .poly import Poly
from .tensor import AntisymmetryError, TensorField, alternate_first, is_antisymmetric

if TYPE_CHECKING:
    from .lie_algebra import StructureConstants


class FrameError(ValueError):
    """Frame data that is not invertible over polynomials."""


class NotLocalLieError(ValueError):
    """The connection is not flat for nabla^ (not a local Lie group)."""


def _acc(out: dict, key, val):
    if key in out:
        out[key] = out[key] + val
    else:
        out[key] = val


# -- frames ---------------------------------------------------------------


class Frame:
    """Polynomial frame with verified polynomial (or Laurent) inverse."""

    __slots__ = ("n", "e", "w")

    def __init__(self, e: Sequence[Sequence[Poly]], w: Sequence[Sequence[Poly]] | None = None):
        n = len(e)
        if n < 1 or any(len(row) != n for row in e):
            raise FrameError("frame must be a square matrix")
        e = [list(row) for row in e]
        if w is None:
            d = linalg.det(e)
            if not d.is_unit():
                raise FrameError(f"det(e) = {d} is not a unit; supply the inverse explicitly")
            dinv = d.unit_inverse()
            w = [[v * dinv for v in row] for row in linalg.adjugate(e)]
        else:
            w = [list(row) for row in w]
            if len(w) != n or any(len(row) != n for row in w):
                raise FrameError("inverse has the wrong shape")
        one, zero = Poly.const(n, 1), Poly.zero(n)
        for M in (mat_mul(e, w), mat_mul(w, e)):
            for i in range(n):
                for j in range(n):
                    if M[i][j] != (one if i == j else zero):
                        raise FrameError("e and w are not inverse to each other")
        self.n = n
        self.e = e
        self.w = w

    @classmethod
    def from_strings(cls, rows, inverse=None) -> "Frame":
        n = len(rows)
        e = [[Poly.parse(s, n) for s in row] for row in rows]
        w = None if inverse is None else [[Poly.parse(s, n) for s in row] for row in inverse]
        return cls(e, w)

    @classmethod
    def identity(cls, n: int) -> "Frame":
        I = linalg.identity(n, Poly.const(n, 1), Poly.zero(n))
        return cls(I, [row[:] for row in I])

    def column(self, a: int) -> TensorField:
        """Frame field e_a as a vector field (0-based a)."""
        return TensorField(self.n, 1, 0, {(i,): self.e[i][a] for i in range(self.n)}, Poly.zero(self.n))

    def e_at(self, point):
        return [[v.eval(point) for v in row] for row in self.e]

    def w_at(self, point):
        return [[v.eval(point) for v in row] for row in self.w]

    def __eq__(self, other):
        return isinstance(other, Frame) and self.e == other.e and self.w == other.w

    def __repr__(self):
        return f"Frame(n={self.n})"


def splitting_eval(F: Frame, x, y):
    """epsilon(x, y) = e(y) w(x), the frame comparison map T_x -> T_y."""
    if len(x) != F.n or len(y) != F.n:
        raise ValueError("point dimension mismatch")
    return mat_mul(F.e_at(y), F.w_at(x))


# -- connections ------------------------------------------------------------


@dataclass(frozen=True)
class Connection:
    """Component table Gamma^i_{kj} at key ``(i, k, j)``.

    ``frame_derived`` is False for raw input; flatness of nabla~ is then a
    reported verdict (see :func:`is_local_lie_group`), not a guarantee.
    """

    gamma: TensorField
    frame_derived: bool = False

    @property
    def n(self) -> int:
        return self.gamma.n

    @property
    def zero(self):
        return self.gamma.zero

    def __getitem__(self, idx):
        return self.gamma[idx]

    @classmethod
    def from_components(cls, n: int, comps: dict, zero=None) -> "Connection":
        z = Poly.zero(n) if zero is None else zero
        return cls(TensorField(n, 1, 2, comps, z))


def connection_from_frame(F: Frame) -> Connection:
    n = F.n
    comps = {}
    for i in range(n):
        for k in range(n):
            de = [F.e[i][a].diff(k + 1) for a in range(n)]
            for j in range(n):
                acc = Poly.zero(n)
                for a in range(n):
                    if de[a] and F.w[a][j]:
                        acc = acc + de[a] * F.w[a][j]
                if acc:
                    comps[(i, k, j)] = acc
    return Connection(TensorField(n, 1, 2, comps, Poly.zero(n)), frame_derived=True)


def _by_slot(C: Connection, slot: int) -> dict:
    """Group the nonzero Gamma entries by the index in ``slot``."""
    groups: dict = {}
    for key, v in C.gamma.comps.items():
        groups.setdefault(key[slot], []).append((key, v))
    return groups


def _covariant(C: Connection, xi: TensorField, hat: bool) -> TensorField:
    n, u, s = xi.n, xi.upper, xi.lower
    out: dict = {}
    for idx, v in xi.comps.items():
        up, low = idx[:u], idx[u:]
        for l in range(n):
            d = v.diff(l + 1) if hasattr(v, "diff") else None
            if d:
                _acc(out, up + (l,) + low, d)
    # tilde: Gamma^i_{l a} (group by j-slot), hat: Gamma^i_{a l} (group by k-slot)
    by_a_up = _by_slot(C, 1 if hat else 2)
    by_i = _by_slot(C, 0)
    for idx, v in xi.comps.items():
        up, low = idx[:u], idx[u:]
        for p in range(u):
            for (i, k, j), g in by_a_up.get(up[p], ()):
                l = j if hat else k
                key = up[:p] + (i,) + up[p + 1:] + (l,) + low
                _acc(out, key, -(g * v))
        for q in range(s):
            # tilde: + Gamma^a_{l j} xi_{..a..}; hat: + Gamma^a_{j l} xi_{..a..}
            for (a, k, j), g in by_i.get(low[q], ()):
                l, jj = (j, k) if hat else (k, j)
                key = up + (l,) + low[:q] + (jj,) + low[q + 1:]
                _acc(out, key, g * v)
    return TensorField(n, u, s + 1, out, xi.zero, antisym=0)


def nabla_tilde(C: Connection, xi: TensorField) -> TensorField:
    return _covariant(C, xi, hat=False)


def nabla_hat(C: Connection, xi: TensorField) -> TensorField:
    return _covariant(C, xi, hat=True)


def torsion(C: Connection) -> TensorField:
    n = C.n
    out = {}
    for (i, k, j), v in C.gamma.comps.items():
        _acc(out, (i, k, j), v)
        _acc(out, (i, j, k), -v)
    return TensorField(n, 1, 2, out, C.zero, antisym=2)


def _curvature(C: Connection, hat: bool) -> TensorField:
    """Unalternated part X^i_{rjk}, then X_{rjk} - X_{jrk}."""
    n = C.n
    G = C.gamma
    X: dict = {}
    for (i, k, j), v in G.comps.items():
        for r in range(n):
            d = v.diff(r + 1)
            if d:
                # tilde: d_r Gamma^i_{jk}; hat: d_r Gamma^i_{kj}; stored key is (i, k, j)
                _acc(X, (i, r, k, j) if not hat else (i, r, j, k), d)
    for (a, k1, j1), g1 in G.comps.items():
        for (i, k2, j2), g2 in G.comps.items():
            if hat:
                # Gamma^a_{k r} Gamma^i_{a j}: g1 = Gamma^a_{k1 j1} (k=k1, r=j1), g2 with k2 == a
                if k2 == a:
                    _acc(X, (i, j1, j2, k1), g1 * g2)
            else:
                # Gamma^a_{r k} Gamma^i_{j a}: g1 = Gamma^a_{k1 j1} (r=k1, k=j1), g2 with j2 == a
                if j2 == a:
                    _acc(X, (i, k1, k2, j1), g1 * g2)
    out: dict = {}
    for (i, r, j, k), v in X.items():
        if r == j:
            continue
        _acc(out, (i, r, j, k), v)
        _acc(out, (i, j, r, k), -v)
    return TensorField(n, 1, 3, out, C.zero, antisym=0)


def curvature_tilde(C: Connection) -> TensorField:
    """R~^i_{rj,k} = [d_r Gamma^i_{jk} + Gamma^a_{rk} Gamma^i_{ja}]_{[rj]}."""
    return _curvature(C, hat=False)


def curvature_hat(C: Connection) -> TensorField:
    """R^^i_{rj,k} = [d_r Gamma^i_{kj} + Gamma^a_{kr} Gamma^i_{aj}]_{[rj]}."""
    return _curvature(C, hat=True)


# -- brackets -----------------------------------------------------------------


def contract(T: TensorField, vectors: Sequence[TensorField]) -> TensorField:
    """Feed one vector field into each lower slot of a valence (1, s) table."""
    if T.upper != 1 or len(vectors) != T.lower:
        raise ValueError("need one vector per lower slot of a vector-valued table")
    n = T.n
    out: dict = {}
    for idx, v in T.comps.items():
        acc = v
        for slot, X in zip(idx[1:], vectors):
            x = X[(slot,)]
            if not x:
                acc = None
                break
            acc = acc * x
        if acc is not None:
            _acc(out, (idx[0],), acc)
    return TensorField(n, 1, 0, out, T.zero)


def algebraic_bracket(T: TensorField, X: TensorField, Y: TensorField) -> TensorField:
    """T(X, Y)^i = T^i_{ab} X^a Y^b."""
    return contract(T, [X, Y])


def jacobi_form(T: TensorField) -> TensorField:
    """J(X,Y,Z) = T(X,T(Y,Z)) + T(Z,T(X,Y)) + T(Y,T(Z,X)), as a (1,3) table.

    J^i_{jkl} = T^i_{ja} T^a_{kl} + T^i_{la} T^a_{jk} + T^i_{ka} T^a_{lj}.
    """
    n = T.n
    by_lower2 = {}
    for (i, j, a), v in T.comps.items():
        by_lower2.setdefault(a, []).append((i, j, v))
    out: dict = {}
    for (a, k, l), t2 in T.comps.items():
        for (i, j, t1) in by_lower2.get(a, ()):
            p = t1 * t2
            # term T^i_{ja} T^a_{kl} contributes to (j,k,l) and its cyclic shifts
            _acc(out, (i, j, k, l), p)
            _acc(out, (i, k, l, j), p)
            _acc(out, (i, l, j, k), p)
    return TensorField(n, 1, 3, out, T.zero, antisym=3)


def lie_bracket_fields(X: TensorField, Y: TensorField) -> TensorField:
    """[X, Y]^i = X^a d_a Y^i - Y^a d_a X^i."""
    n = X.n
    out: dict = {}
    for a in range(n):
        xa, ya = X[(a,)], Y[(a,)]
        for i in range(n):
            if xa:
                d = Y[(i,)].diff(a + 1)
                if d:
                    _acc(out, (i,), xa * d)
            if ya:
                d = X[(i,)].diff(a + 1)
                if d:
                    _acc(out, (i,), -(ya * d))
    return TensorField(n, 1, 0, out, X.zero)


# -- complexes ------------------------------------------------------------------


def _require_form(omega: TensorField):
    if omega.upper != 1:
        raise ValueError("expected a vector-valued form")
    if not is_antisymmetric(omega, omega.lower):
        raise AntisymmetryError("form is not antisymmetric in its lower indices")


def d_hat(C: Connection, omega: TensorField, check: bool = True) -> TensorField:
    """Janet operator: (d_r omega^i_J - Gamma^i_{ar} omega^a_J), first-index alternated."""
    if check:
        _require_form(omega)
    n = omega.n
    X: dict = {}
    for idx, v in omega.comps.items():
        i, J = idx[0], idx[1:]
        for r in range(n):
            d = v.diff(r + 1)
            if d:
                _acc(X, (i, r) + J, d)
    by_a = _by_slot(C, 1)
    for idx, v in omega.comps.items():
        a, J = idx[0], idx[1:]
        for (i, _, r), g in by_a.get(a, ()):
            _acc(X, (i, r) + J, -(g * v))
    pre = TensorField(n, 1, omega.lower + 1, X, omega.zero)
    return alternate_first(pre, check=False)


def box_nabla(C: Connection, omega: TensorField, check: bool = True) -> TensorField:
    """Full nabla~ on every slot, then first-index alternation."""
    if check:
        _require_form(omega)
    return alternate_first(nabla_tilde(C, omega), check=False)


def value_torsion_term(T: TensorField, omega: TensorField) -> TensorField:
    """[T^i_{ar} omega^a_J]_{alt}: the value-index part of [nabla~] - d^."""
    n = T.n
    X: dict = {}
    by_a = {}
    for (i, a, r), t in T.comps.items():
        by_a.setdefault(a, []).append((i, r, t))
    for idx, v in omega.comps.items():
        a, J = idx[0], idx[1:]
        for i, r, t in by_a.get(a, ()):
            _acc(X, (i, r) + J, t * v)
    return alternate_first(TensorField(n, 1, omega.lower + 1, X, omega.zero), check=False)


def lower_torsion_term(T: TensorField, omega: TensorField) -> TensorField:
    """Alternation of sum_q Gamma^a_{r j_q} omega_{..a..}, written through torsion only.

    On lower indices (l_0, ..., l_k) the value is
    sum_{s<t} (-1)^(s+t+1) T^a_{l_s l_t} omega_{a, l_0..^l_s..^l_t..l_k}.
    ``omega`` may be vector valued (one upper index) or scalar.
    """
    n, u, k = omega.n, omega.upper, omega.lower
    out: dict = {}
    if k == 0:
        return TensorField(n, u, 1, out, omega.zero, antisym=1)
    by_a = {}
    for (a, x, y), t in T.comps.items():
        by_a.setdefault(a, []).append((x, y, t))
    for idx, v in omega.comps.items():
        up, a, rest = idx[:u], idx[u], idx[u + 1:]
        for x, y, t in by_a.get(a, ()):
            p = t * v
            for s in range(k + 1):
                for tt in range(s + 1, k + 1):
                    low = list(rest)
                    low.insert(s, x)
                    low.insert(tt, y)
                    _acc(out, up + tuple(low), p if (s + tt + 1) % 2 == 0 else -p)
    return TensorField(n, u, k + 1, out, omega.zero, antisym=k + 1)


def lower_gamma_term(C: Connection, omega: TensorField) -> TensorField:
    """[sum_q Gamma^a_{r j_q} omega^i_{..a..}] alternated, computed from Gamma directly."""
    n, k = omega.n, omega.lower
    by_i = _by_slot(C, 0)
    X: dict = {}
    for idx, v in omega.comps.items():
        i, low = idx[0], idx[1:]
        for q in range(k):
            for (_, r, j), g in by_i.get(low[q], ()):
                _acc(X, (i, r) + low[:q] + (j,) + low[q + 1:], g * v)
    return alternate_first(TensorField(n, 1, k + 1, X, omega.zero), check=False)


# -- verdicts ---------------------------------------------------------------------


@dataclass(frozen=True)
class LocalLieVerdict:
    tilde_flat: bool
    hat_flat: bool
    nabla_T_zero: bool

    @property
    def is_local_lie_group(self) -> bool:
        return self.tilde_flat and self.hat_flat and self.nabla_T_zero


def is_local_lie_group(C: Connection) -> LocalLieVerdict:
    T = torsion(C)
    return LocalLieVerdict(
        tilde_flat=curvature_tilde(C).is_zero(),
        hat_flat=curvature_hat(C).is_zero(),
        nabla_T_zero=nabla_tilde(C, T).is_zero(),
    )


def localize(T: TensorField, point) -> "StructureConstants":
    from .lie_algebra import StructureConstants

    vals = {}
    for (i, j, k), v in T.comps.items():
        x = v.eval(point) if hasattr(v, "eval") else Fraction(v)
        if x:
            vals[(i, j, k)] = x
    return StructureConstants(T.n, vals)


# -- invariant extension -------------------------------------------------------------


def invariant_jet(C: Connection, xi_p: TensorField, point=None, order: int = 4,
                  hat: bool = False) -> TensorField:
    """Taylor polynomial at ``point`` of the nabla~-parallel extension of ``xi_p``.

    Works degree by degree in u = x - p: the degree d+1 part h of each
    component solves d_l h = [Gamma-terms]_d, and is recovered through Euler's
    relation h = (1/(d+1)) sum_l u_l [Gamma-terms of slot l]_d.  When nabla~ is
    flat those right-hand sides are consistent, and the result satisfies
    nabla~ xi = 0 through degree ``order - 1`` at p.  With ``hat=True`` the
    same recursion runs for nabla^ (integrable when R^ = 0).
    """
    n = C.n
    p = [Fraction(0)] * n if point is None else [Fraction(v) for v in point]
    zero = Poly.zero(n)
    G = C.gamma.map(lambda v: v.taylor(p, order))
    Cu = Connection(G)
    u, s = xi_p.upper, xi_p.lower
    cur = TensorField(n, u, s, {k: Poly.const(n, v) for k, v in xi_p.comps.items()}, zero)
    U = [Poly.var(n, l + 1) for l in range(n)]
    for d in range(order):
        # nabla~ cur = d cur + Q(cur); want d(next part) = -Q(cur) in degree d
        Q = _covariant(Cu, cur, hat=hat) - _partials(cur)
        upd: dict = {}
        for idx, v in Q.comps.items():
            h = v.homogeneous_part(d)
            if not h:
                continue
            l = idx[u]
            key = idx[:u] + idx[u + 1:]
            _acc(upd, key, -(h * U[l]) * Fraction(1, d + 1))
        cur = cur + TensorField(n, u, s, upd, zero)
    return cur.map(lambda v: v.shift(p))


def _partials(xi: TensorField) -> TensorField:
    n, u = xi.n, xi.upper
    out: dict = {}
    for idx, v in xi.comps.items():
        for l in range(n):
            d = v.diff(l + 1)
            if d:
                _acc(out, idx[:u] + (l,) + idx[u:], d)
    return TensorField(n, u, xi.lower + 1, out, xi.zero)


def jet_residual(C: Connection, xi: TensorField, point, degree: int, hat: bool = False) -> TensorField:
    """Taylor part through ``degree`` at ``point`` of nabla~ xi (zero when xi is a valid jet)."""
    R = _covariant(C, xi, hat)
    return R.map(lambda v: v.taylor(point, degree))
