"""Pointwise algebra: structure constants, derivations and the cochain
complex with adjoint coefficients.

Structure constants ``c[(i, j, k)] = c^i_{jk}`` (0-based) define the bracket
[e_j, e_k] = c^i_{jk} e_i.  Cochains of degree k are vector-valued tables
of valence (1, k) with ``Fraction`` entries, fully skew in the lower indices.

Two differentials are provided:

* :func:`differential_D` is the pointwise shadow of the Janet operator on
  invariant forms,  D(w) = -[c^i_{ar} w^a_J]_alt - (torsion terms from the
  lower indices), written with the first-index alternation;
* :func:`ce_differential` is the textbook Chevalley-Eilenberg differential,
  evaluated by multilinear substitution.  It shares no code with ``D`` and
  serves as the oracle in the tests.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, product
from math import comb
from typing import Sequence

from . import linalg
from .parallelism import jacobi_form, lower_torsion_term, value_torsion_term
from .tensor import TensorField, form_from_sorted, is_antisymmetric, AntisymmetryError


class JacobiError(ValueError):
    """Raised when an operation needs a Lie algebra and the Jacobi identity fails."""

    def __init__(self, triple, value):
        self.triple = triple
        self.value = value
        i, j, k, l = triple
        super().__init__(
            f"Jacobi identity fails: J^{i + 1}_{{{j + 1}{k + 1}{l + 1}}} = {value}"
        )


class StructureConstants:
    """Antisymmetric table c^i_{jk} over Q with a stored Jacobi verdict."""

    __slots__ = ("n", "c", "_jacobi", "_matrices")

    def __init__(self, n: int, values: dict):
        if n < 2:
            raise ValueError("dimension must be at least 2")
        full: dict = {}
        for (i, j, k), v in values.items():
            v = Fraction(v)
            if not all(0 <= x < n for x in (i, j, k)):
                raise IndexError(f"index {(i, j, k)} out of range for n={n}")
            if j == k:
                if v:
                    raise AntisymmetryError(f"c^{i + 1}_{{{j + 1}{k + 1}}} must vanish")
                continue
            if (i, j, k) in full and full[(i, j, k)] != v:
                raise AntisymmetryError(f"inconsistent entries for c^{i + 1}_{{{j + 1}{k + 1}}}")
            full[(i, j, k)] = v
            full[(i, k, j)] = -v
            back = values.get((i, k, j))
            if back is not None and Fraction(back) != -v:
                raise AntisymmetryError(f"c^{i + 1}_{{{j + 1}{k + 1}}} is not antisymmetric")
        self.n = n
        self.c = {k: v for k, v in full.items() if v}
        self._jacobi = None
        self._matrices: dict = {}

    @classmethod
    def from_upper(cls, n: int, entries) -> "StructureConstants":
        """Build from 1-based ``(i, j, k, value)`` entries with j < k."""
        vals = {}
        for i, j, k, v in entries:
            if not j < k:
                raise ValueError("entries must satisfy j < k")
            vals[(i - 1, j - 1, k - 1)] = Fraction(v)
        return cls(n, vals)

    def __getitem__(self, idx) -> Fraction:
        return self.c.get(tuple(idx), Fraction(0))

    def __eq__(self, other):
        return isinstance(other, StructureConstants) and self.n == other.n and self.c == other.c

    def as_tensor(self) -> TensorField:
        return TensorField(self.n, 1, 2, self.c, Fraction(0), antisym=2)

    def bracket(self, x: Sequence, y: Sequence) -> list:
        out = [Fraction(0)] * self.n
        for (i, j, k), v in self.c.items():
            if x[j] and y[k]:
                out[i] += v * x[j] * y[k]
        return out

    def upper_entries(self):
        """1-based (i, j, k, value) with j < k, sorted."""
        return sorted((i + 1, j + 1, k + 1, v) for (i, j, k), v in self.c.items() if j < k)

    def jacobi_tensor(self) -> TensorField:
        return jacobi_form(self.as_tensor())

    def jacobi_violation(self):
        """First nonzero Jacobi component as ((i, j, k, l), value), or None."""
        if self._jacobi is None:
            J = self.jacobi_tensor()
            bad = sorted((k, v) for k, v in J.comps.items())
            self._jacobi = bad[0] if bad else False
        return self._jacobi or None

    @property
    def satisfies_jacobi(self) -> bool:
        return self.jacobi_violation() is None

    def require_jacobi(self):
        bad = self.jacobi_violation()
        if bad is not None:
            raise JacobiError(*bad)

    def transform(self, P, Pinv) -> "StructureConstants":
        """Constants in the basis f_a = P^i_a e_i (P invertible, Pinv its inverse)."""
        n = self.n
        vals = {}
        for a, b, d in product(range(n), repeat=3):
            if b >= d:
                continue
            acc = Fraction(0)
            for (i, j, k), v in self.c.items():
                if P[j][b] and P[k][d] and Pinv[a][i]:
                    acc += Pinv[a][i] * v * P[j][b] * P[k][d]
            if acc:
                vals[(a, b, d)] = acc
        return StructureConstants(n, vals)

    def __repr__(self):
        return f"StructureConstants(n={self.n}, nonzero={len(self.c) // 2})"


# -- subalgebras and derivations --------------------------------------------


def center(g: StructureConstants) -> list:
    """Basis of {v : [v, w] = 0 for all w}."""
    n = g.n
    rows = []
    for i in range(n):
        for j in range(n):
            row = [g[(i, a, j)] for a in range(n)]
            if any(row):
                rows.append(row)
    return linalg.nullspace(rows, n)


def derived_algebra(g: StructureConstants) -> list:
    """Reduced basis of [g, g]."""
    n = g.n
    vecs = [[g[(i, j, k)] for i in range(n)] for j, k in combinations(range(n), 2)]
    vecs = [v for v in vecs if any(v)]
    return linalg.row_space(vecs)


def _mat(vec, n):
    return [list(vec[i * n:(i + 1) * n]) for i in range(n)]


def derivations(g: StructureConstants) -> list:
    """Basis of Der(g) as n x n matrices D[i][a]."""
    n = g.n
    rows = []
    for i, r, j in product(range(n), repeat=3):
        row = [Fraction(0)] * (n * n)
        for a in range(n):
            row[i * n + a] += g[(a, r, j)]
            row[a * n + r] -= g[(i, a, j)]
            row[a * n + j] -= g[(i, r, a)]
        if any(row):
            rows.append(row)
    return [_mat(v, n) for v in linalg.nullspace(rows, n * n)]


def adjoint(g: StructureConstants, v: Sequence) -> list:
    """ad_v as a matrix: (ad_v)^i_b = c^i_{ab} v^a."""
    n = g.n
    M = [[Fraction(0)] * n for _ in range(n)]
    for (i, a, b), c in g.c.items():
        if v[a]:
            M[i][b] += c * v[a]
    return M


def inner_derivations(g: StructureConstants) -> list:
    n = g.n
    vecs = []
    for a in range(n):
        e = [Fraction(int(a == b)) for b in range(n)]
        M = adjoint(g, e)
        vecs.append([x for row in M for x in row])
    return [_mat(v, n) for v in linalg.row_space([v for v in vecs if any(v)])]


def is_derivation(g: StructureConstants, D) -> bool:
    n = g.n
    for r, j in product(range(n), repeat=2):
        er = [Fraction(int(r == b)) for b in range(n)]
        ej = [Fraction(int(j == b)) for b in range(n)]
        lhs = linalg.matvec(D, g.bracket(er, ej))
        rhs = [x + y for x, y in zip(g.bracket(linalg.matvec(D, er), ej), g.bracket(er, linalg.matvec(D, ej)))]
        if lhs != rhs:
            return False
    return True


# -- cochains -----------------------------------------------------------------


def cochain_basis(n: int, k: int) -> list:
    """Coordinates of the degree-k cochain space: (value index, increasing lower indices)."""
    return [(i,) + J for i in range(n) for J in combinations(range(n), k)]


def cochain_from_vector(n: int, k: int, vec: Sequence) -> TensorField:
    vals = {key: Fraction(v) for key, v in zip(cochain_basis(n, k), vec) if v}
    return form_from_sorted(n, 1, k, vals, Fraction(0))


def cochain_to_vector(omega: TensorField) -> list:
    return [omega[key] for key in cochain_basis(omega.n, omega.lower)]


def vector_cochain(v: Sequence) -> TensorField:
    return TensorField(len(v), 1, 0, {(i,): Fraction(x) for i, x in enumerate(v)}, Fraction(0))


def differential_D(g: StructureConstants, omega: TensorField, check: bool = True) -> TensorField:
    """Localized Janet differential on a degree-k cochain.

    Degree 0: (Dv)^i_r = c^i_{ra} v^a.  Degree 1 gives
    (D mu)^i_{rj} = c^i_{ra} mu^a_j - c^i_{ja} mu^a_r - c^a_{rj} mu^i_a,
    whose kernel is the space of derivations.
    """
    if check:
        g.require_jacobi()
        if omega.upper != 1 or not is_antisymmetric(omega, omega.lower):
            raise AntisymmetryError("cochain must be vector valued and skew")
    c = g.as_tensor()
    return -(value_torsion_term(c, omega) + lower_torsion_term(c, omega))


def _multilinear(omega: TensorField, args: Sequence[Sequence]) -> list:
    n = omega.n
    out = [Fraction(0)] * n
    for idx, v in omega.comps.items():
        p = v
        for a, x in zip(idx[1:], args):
            if not x[a]:
                p = 0
                break
            p = p * x[a]
        if p:
            out[idx[0]] += p
    return out


def ce_differential(g: StructureConstants, omega: TensorField, check: bool = True) -> TensorField:
    """Chevalley-Eilenberg differential with adjoint coefficients.

    (d w)(x_0..x_k) = sum_i (-1)^i [x_i, w(..^x_i..)]
                      + sum_{i<j} (-1)^(i+j) w([x_i, x_j], ..^x_i..^x_j..)
    evaluated on basis vectors.
    """
    if check:
        g.require_jacobi()
    n, k = g.n, omega.lower
    basis = [[Fraction(int(a == b)) for b in range(n)] for a in range(n)]
    vals = {}
    for J in combinations(range(n), k + 1):
        xs = [basis[j] for j in J]
        tot = [Fraction(0)] * n
        for i in range(k + 1):
            rest = xs[:i] + xs[i + 1:]
            w = _multilinear(omega, rest)
            br = g.bracket(xs[i], w)
            s = -1 if i % 2 else 1
            tot = [t + s * b for t, b in zip(tot, br)]
        for i in range(k + 1):
            for j in range(i + 1, k + 1):
                rest = [xs[m] for m in range(k + 1) if m not in (i, j)]
                w = _multilinear(omega, [g.bracket(xs[i], xs[j])] + rest)
                s = -1 if (i + j) % 2 else 1
                tot = [t + s * b for t, b in zip(tot, w)]
        for i, v in enumerate(tot):
            if v:
                vals[(i,) + J] = v
    return form_from_sorted(n, 1, k + 1, vals, Fraction(0))


def differential_matrix(g: StructureConstants, k: int, which: str = "D") -> list:
    """Matrix of the degree-k differential in the sorted-index coordinates.

    Rows index degree k+1 coordinates, columns degree k coordinates.
    """
    key = (k, which)
    if key not in g._matrices:
        g._matrices[key] = _build_differential_matrix(g, k, which)
    return [row[:] for row in g._matrices[key]]


def _build_differential_matrix(g: StructureConstants, k: int, which: str) -> list:
    n = g.n
    op = differential_D if which == "D" else ce_differential
    src = cochain_basis(n, k)
    dst = cochain_basis(n, k + 1) if k < n else []
    cols = []
    for m in range(len(src)):
        e = [0] * len(src)
        e[m] = 1
        img = op(g, cochain_from_vector(n, k, e), check=False)
        cols.append([img[key] for key in dst])
    if not dst:
        return []
    return linalg.transpose(cols)


# -- cohomology ---------------------------------------------------------------


@dataclass
class DegreeData:
    degree: int
    cochain_dim: int
    rank: int
    kernel_dim: int
    cohomology_dim: int
    representatives: list = field(default_factory=list)


@dataclass
class CohomologyReport:
    n: int
    degrees: list
    center_dim: int
    derivation_dim: int
    inner_dim: int

    def betti(self) -> list:
        return [d.cohomology_dim for d in self.degrees]

    def euler_characteristic(self) -> int:
        return sum((-1) ** d.degree * d.cohomology_dim for d in self.degrees)


def _rank(M) -> int:
    return linalg.rank(M) if M and M[0] else 0


def cohomology(g: StructureConstants, max_degree: int | None = None) -> CohomologyReport:
    g.require_jacobi()
    n = g.n
    top = n if max_degree is None else max_degree
    if not 0 <= top <= n:
        raise ValueError(f"max degree must lie in 0..{n}")
    mats = [differential_matrix(g, k) for k in range(top + 1)]
    degrees = []
    prev_image: list = []
    for k in range(top + 1):
        dim = n * comb(n, k)
        M = mats[k]
        r = _rank(M)
        kernel = linalg.nullspace(M, dim) if M else linalg.nullspace([], dim)
        h = len(kernel) - len(prev_image)
        reps = linalg.complement_basis(prev_image, kernel)
        degrees.append(DegreeData(k, dim, r, len(kernel), h, [cochain_from_vector(n, k, v) for v in reps]))
        if M:
            prev_image = linalg.row_space(linalg.transpose(M))
        else:
            prev_image = []
    report = CohomologyReport(
        n, degrees, len(center(g)), len(derivations(g)), len(inner_derivations(g))
    )
    if top >= 0 and degrees[0].cohomology_dim != report.center_dim:
        raise AssertionError("degree-0 cohomology disagrees with the center")
    if top >= 1 and degrees[1].cohomology_dim != report.derivation_dim - report.inner_dim:
        raise AssertionError("degree-1 cohomology disagrees with outer derivations")
    return report


def solve_coboundary(g: StructureConstants, omega: TensorField):
    """Return eta with D(eta) = omega, or None if omega is not a coboundary."""
    k = omega.lower
    if k == 0:
        return None if omega else vector_cochain([0] * g.n)
    M = differential_matrix(g, k - 1)
    b = cochain_to_vector(omega)
    x = linalg.solve(M, b) if M else None
    if x is None:
        return None
    return cochain_from_vector(g.n, k - 1, x)
