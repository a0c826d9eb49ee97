"""Seeded random inputs for the property suites.

Every generator takes a ``random.Random`` instance so that suites are
reproducible from one seed.
"""

from __future__ import annotations

import random
from fractions import Fraction
from itertools import product
from math import comb

from . import linalg
from .deformation import GaugeJet
from .jets import mat_mul
from .lie_algebra import StructureConstants, cochain_from_vector, derivations, derived_algebra
from .library import SL2_CONSTANTS
from .parallelism import Connection, Frame, connection_from_frame, torsion
from .poly import Poly


def random_poly(rng: random.Random, n: int, degree: int = 2, terms: int = 3, coeff: int = 3) -> Poly:
    t = {}
    for _ in range(terms):
        e = [0] * n
        for _ in range(rng.randint(0, degree)):
            e[rng.randrange(n)] += 1
        t[tuple(e)] = Fraction(rng.randint(-coeff, coeff))
    return Poly(n, t)


def random_connection(rng: random.Random, n: int, degree: int = 2, density: float = 0.4) -> Connection:
    """Raw Gamma with random polynomial entries (generally not flat for nabla~)."""
    comps = {}
    for idx in product(range(n), repeat=3):
        if rng.random() < density:
            p = random_poly(rng, n, degree)
            if p:
                comps[idx] = p
    return Connection.from_components(n, comps)


def _unitriangular(rng, n, lower: bool, degree: int):
    one, z = Poly.const(n, 1), Poly.zero(n)
    M = []
    for i in range(n):
        row = []
        for j in range(n):
            if i == j:
                row.append(one)
            elif (i > j) == lower and rng.random() < 0.6:
                row.append(random_poly(rng, n, degree, 2, 2))
            else:
                row.append(z)
        M.append(row)
    return M


def random_unimodular_frame(rng: random.Random, n: int, max_gamma_degree: int = 2) -> Frame:
    """Product of unitriangular polynomial matrices (det = 1), resampled until
    the induced connection has coefficient degree at most ``max_gamma_degree``."""
    while True:
        L = _unitriangular(rng, n, True, 1)
        U = _unitriangular(rng, n, False, 1)
        F = Frame(mat_mul(L, U))
        C = connection_from_frame(F)
        if all(v.degree() <= max_gamma_degree for v in C.gamma.comps.values()):
            return F


def random_nilpotent(rng: random.Random, m: int):
    """Strictly upper triangular integer matrix conjugated by a random permutation."""
    N = [[Fraction(rng.randint(-2, 2)) if j > i and rng.random() < 0.6 else Fraction(0) for j in range(m)]
         for i in range(m)]
    perm = list(range(m))
    rng.shuffle(perm)
    return [[N[perm[i]][perm[j]] for j in range(m)] for i in range(m)]


def local_lie_frame(A) -> Frame:
    """Frame of the semidirect product R x_A R^(n-1) for nilpotent A.

    e_1 = d_1 and e_k = exp(x1 A) applied to d_k, so [e_1, e_k] = A_{jk} e_j.
    """
    m = len(A)
    n = m + 1
    x1 = Poly.var(n, 1)
    one, z = Poly.const(n, 1), Poly.zero(n)
    Ap = [[Poly.const(n, v) for v in row] for row in A]
    E = [[one if i == j else z for j in range(m)] for i in range(m)]
    term = [row[:] for row in E]
    k = 1
    while True:
        term = [[v * x1 * Fraction(1, k) for v in row] for row in mat_mul(term, Ap)]
        if all(not v for row in term for v in row):
            break
        E = [[a + b for a, b in zip(r1, r2)] for r1, r2 in zip(E, term)]
        k += 1
    e = [[one] + [z] * m] + [[z] + E[i] for i in range(m)]
    return Frame(e)


def random_local_lie_frame(rng: random.Random, n: int) -> Frame:
    return local_lie_frame(random_nilpotent(rng, n - 1))


def semidirect_constants(A) -> StructureConstants:
    """[e_1, e_k] = sum_j A_{jk} e_j on R x R^(n-1); Jacobi holds for every A."""
    m = len(A)
    vals = {}
    for j in range(m):
        for k in range(m):
            if A[j][k]:
                vals[(j + 1, 0, k + 1)] = Fraction(A[j][k])
    return StructureConstants(m + 1, vals)


def _random_invertible(rng, n):
    while True:
        P = [[Fraction(rng.randint(-2, 2)) for _ in range(n)] for _ in range(n)]
        if linalg.rank(P) == n:
            return P, linalg.frac_inverse(P)


def _known_algebras(n: int) -> list:
    out = []
    if n == 3:
        out.append(StructureConstants.from_upper(3, [(3, 1, 2, 1)]))
        out.append(StructureConstants.from_upper(3, SL2_CONSTANTS))
    if n == 4:
        out.append(StructureConstants.from_upper(4, [(3, 1, 2, 1), (4, 1, 3, 1)]))
        sl2 = StructureConstants.from_upper(3, SL2_CONSTANTS)
        out.append(StructureConstants(4, sl2.c))  # sl2 + R
    return out


def random_jacobi_constants(rng: random.Random, n: int, unimodular: bool = False) -> StructureConstants:
    """A random Lie algebra: a semidirect product or a basis change of a known one."""
    known = _known_algebras(n)
    if known and rng.random() < 0.4:
        g = rng.choice(known)
    else:
        A = [[Fraction(rng.randint(-2, 2)) for _ in range(n - 1)] for _ in range(n - 1)]
        if unimodular:
            A[-1][-1] -= sum((A[i][i] for i in range(n - 1)), Fraction(0))
        g = semidirect_constants(A)
    P, Pinv = _random_invertible(rng, n)
    return g.transform(P, Pinv)


def random_constants(rng: random.Random, n: int) -> StructureConstants:
    """Arbitrary antisymmetric constants (Jacobi usually fails)."""
    vals = {}
    for i in range(n):
        for j in range(n):
            for k in range(j + 1, n):
                if rng.random() < 0.5:
                    vals[(i, j, k)] = Fraction(rng.randint(-2, 2))
    return StructureConstants(n, vals)


def random_cochain(rng: random.Random, n: int, k: int):
    return cochain_from_vector(n, k, [Fraction(rng.randint(-3, 3)) for _ in range(n * comb(n, k))])


# -- gauge jets ----------------------------------------------------------------------


def frame_constants(F: Frame) -> StructureConstants:
    """Constants of the frame fields: [e_a, e_b] = c^d_{ab} e_d (requires them constant)."""
    n = F.n
    T = torsion(connection_from_frame(F))
    vals = {}
    for d, a, b in product(range(n), repeat=3):
        if a >= b:
            continue
        acc = Poly.zero(n)
        for (i, j, k), v in T.comps.items():
            if F.w[d][i] and F.e[j][a] and F.e[k][b]:
                acc = acc + F.w[d][i] * v * F.e[j][a] * F.e[k][b]
        if not acc.is_constant():
            raise ValueError("frame fields do not close under the bracket with constant coefficients")
        if acc:
            vals[(d, a, b)] = acc.constant_term()
    return StructureConstants(n, vals)


def _small_matrix(rng, n, density=0.4):
    return [[Fraction(rng.randint(-1, 1)) if rng.random() < density else Fraction(0) for _ in range(n)]
            for _ in range(n)]


def conjugated_jet(F: Frame, M: GaugeJet) -> GaugeJet:
    """f = e M(t) w: moves the frame by constant combinations of its own fields."""
    return GaugeJet(F.n, [mat_mul(mat_mul(F.e, M.F[m]), F.w) for m in range(1, M.order + 1)])


def derived_projection(F: Frame):
    """Constant matrix pi with kernel [g, g] (in frame coordinates), identity on a complement."""
    g = frame_constants(F)
    n = F.n
    derived = derived_algebra(g)
    comp = linalg.complement_basis(derived, linalg.identity(n)) if derived else linalg.identity(n)
    B = linalg.transpose(derived + comp)
    P = [[Fraction(0)] * n for _ in range(n)]
    for q in range(len(derived), n):
        P[q][q] = Fraction(1)
    return mat_mul(mat_mul(B, P), linalg.frac_inverse(B))


JET_KINDS = ("raw", "annihilating", "constant-matrix", "conjugated", "automorphism")


def random_jet(rng: random.Random, F: Frame, order: int, kind: str) -> GaugeJet:
    """One gauge jet of the requested family.

    raw: random polynomial coefficients; annihilating: raw coefficients
    composed with e pi w, so each F_m kills the torsion values; constant-matrix: exp(tA) with A
    constant; conjugated: e exp(tA) w (a deformation, since the connection
    is unchanged); automorphism: e exp(tD) w with D a derivation of the frame
    constants (a constant deformation).
    """
    n = F.n
    if kind == "raw":
        coeffs = [[[random_poly(rng, n, 1, 2, 2) if rng.random() < 0.4 else Poly.zero(n) for _ in range(n)]
                   for _ in range(n)] for _ in range(order)]
        return GaugeJet(n, coeffs)
    if kind == "annihilating":
        pi = derived_projection(F)
        Q = mat_mul(mat_mul(F.e, [[Poly.const(n, v) for v in row] for row in pi]), F.w)
        raw = random_jet(rng, F, order, "raw")
        return GaugeJet(n, [mat_mul(raw.F[m], Q) for m in range(1, order + 1)])
    if kind == "constant-matrix":
        return GaugeJet.exp(_small_matrix(rng, n), order)
    if kind == "conjugated":
        return conjugated_jet(F, GaugeJet.exp(_small_matrix(rng, n), order))
    if kind == "automorphism":
        basis = derivations(frame_constants(F))
        D = [[Fraction(0)] * n for _ in range(n)]
        for B in basis:
            c = rng.randint(-1, 1)
            D = [[d + c * b for d, b in zip(r1, r2)] for r1, r2 in zip(D, B)]
        return conjugated_jet(F, GaugeJet.exp(D, order))
    raise ValueError(f"unknown jet kind {kind!r}")
