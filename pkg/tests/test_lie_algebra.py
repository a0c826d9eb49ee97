import random
from fractions import Fraction
from math import comb

import pytest

import oracle
from llg import generators as gen
from llg.library import SL2_CONSTANTS
from llg.lie_algebra import (
    JacobiError,
    StructureConstants,
    center,
    ce_differential,
    cochain_from_vector,
    cohomology,
    derivations,
    derived_algebra,
    differential_D,
    differential_matrix,
    inner_derivations,
    is_derivation,
    solve_coboundary,
    vector_cochain,
)
from llg.tensor import AntisymmetryError

HEIS = StructureConstants.from_upper(3, [(3, 1, 2, 1)])
SL2 = StructureConstants.from_upper(3, SL2_CONSTANTS)
AFF1 = StructureConstants.from_upper(2, [(2, 1, 2, 1)])
ENGEL = StructureConstants.from_upper(4, [(3, 1, 2, 1), (4, 1, 3, 1)])


def identity_matrix(n):
    return [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]


def test_constants_are_antisymmetrized():
    assert HEIS[(2, 0, 1)] == 1 and HEIS[(2, 1, 0)] == -1
    assert HEIS.upper_entries() == [(3, 1, 2, 1)]


def test_inconsistent_or_diagonal_entries_are_rejected():
    with pytest.raises(AntisymmetryError):
        StructureConstants(2, {(0, 0, 1): 1, (0, 1, 0): 1})
    with pytest.raises(AntisymmetryError):
        StructureConstants(2, {(0, 1, 1): 1})


def test_jacobi_failure_names_a_triple():
    bad = StructureConstants.from_upper(3, [(1, 1, 2, 1), (2, 2, 3, 1), (3, 1, 3, 1)])
    assert not bad.satisfies_jacobi
    with pytest.raises(JacobiError) as info:
        bad.require_jacobi()
    assert len(info.value.triple) == 4 and info.value.value != 0
    with pytest.raises(JacobiError):
        cohomology(bad)


def test_center_and_derived_algebra():
    assert center(HEIS) == [[0, 0, 1]]
    assert derived_algebra(HEIS) == [[0, 0, 1]]
    assert center(SL2) == []
    assert len(derived_algebra(SL2)) == 3
    assert center(AFF1) == [] and derived_algebra(AFF1) == [[0, 1]]


@pytest.mark.parametrize("g, der, inn", [(HEIS, 6, 2), (SL2, 3, 3), (AFF1, 2, 2), (ENGEL, 7, 3)])
def test_derivation_dimensions(g, der, inn):
    D = derivations(g)
    assert (len(D), len(inner_derivations(g))) == (der, inn)
    assert all(is_derivation(g, M) for M in D)


def test_kernel_of_degree_one_differential_is_derivations():
    rng = random.Random(3)
    for _ in range(6):
        g = gen.random_jacobi_constants(rng, 3)
        for M in derivations(g):
            mu = cochain_from_vector(3, 1, [M[i][j] for i in range(3) for j in range(3)])
            assert not differential_D(g, mu)


def test_identity_is_not_a_derivation_of_heisenberg():
    mu = cochain_from_vector(3, 1, [x for row in identity_matrix(3) for x in row])
    Dmu = differential_D(HEIS, mu)
    assert {k: v for k, v in Dmu.comps.items() if k[1] < k[2]} == {(2, 0, 1): Fraction(1)}


def test_degree_zero_differential_is_the_adjoint_action():
    v = vector_cochain([1, 0, 0])
    Dv = differential_D(HEIS, v)
    # (Dv)^i_r = c^i_{ra} v^a
    assert Dv.comps == {(2, 1): Fraction(-1)}


@pytest.mark.parametrize("g", [HEIS, SL2, AFF1, ENGEL])
def test_janet_and_ce_differentials_coincide(g):
    for k in range(g.n + 1):
        assert differential_matrix(g, k) == differential_matrix(g, k, "CE")


def test_ce_differential_of_random_cochain_matches():
    rng = random.Random(11)
    g = gen.random_jacobi_constants(rng, 4)
    for k in range(4):
        w = gen.random_cochain(rng, 4, k)
        assert differential_D(g, w) == ce_differential(g, w)


def test_d_squared_vanishes_on_random_algebras():
    rng = random.Random(5)
    for q in range(8):
        n = (2, 3, 4)[q % 3]
        g = gen.random_jacobi_constants(rng, n)
        for k in range(n - 1):
            w = gen.random_cochain(rng, n, k)
            assert not differential_D(g, differential_D(g, w))


def test_heisenberg_cohomology_matches_oracle():
    rep = cohomology(HEIS)
    assert rep.betti() == [1, 4, 5, 2]
    assert rep.betti() == oracle.adjoint_betti(HEIS.c, 3)
    assert rep.euler_characteristic() == 0


@pytest.mark.parametrize("n", [2, 3, 4])
def test_abelian_cohomology_is_every_cochain(n):
    rep = cohomology(StructureConstants(n, {}))
    assert rep.betti() == [n * comb(n, k) for k in range(n + 1)]


def test_sl2_and_aff1_have_no_cohomology():
    assert cohomology(SL2).betti() == [0, 0, 0, 0]
    assert cohomology(AFF1).betti() == [0, 0, 0]


def test_engel_cohomology_matches_oracle():
    assert cohomology(ENGEL).betti() == oracle.adjoint_betti(ENGEL.c, 4) == [1, 4, 6, 5, 2]


def test_ranks_match_sympy_on_random_algebras():
    rng = random.Random(19)
    for q in range(6):
        n = (2, 3, 4)[q % 3]
        g = gen.random_jacobi_constants(rng, n)
        for k in range(n):
            M = differential_matrix(g, k)
            assert oracle.matrix_rank(M) == cohomology(g).degrees[k].rank
            assert oracle.ce_matrix(g.c, n, k).rank() == cohomology(g).degrees[k].rank


def test_truncated_cohomology_and_degree_bounds():
    assert len(cohomology(HEIS, 1).degrees) == 2
    with pytest.raises(ValueError):
        cohomology(HEIS, 4)


def test_basis_change_preserves_betti_numbers():
    rng = random.Random(2)
    P, Pinv = gen._random_invertible(rng, 3)
    h = HEIS.transform(P, Pinv)
    assert h.satisfies_jacobi
    assert cohomology(h).betti() == [1, 4, 5, 2]


def test_solve_coboundary_returns_a_primitive():
    rng = random.Random(4)
    eta = gen.random_cochain(rng, 3, 1)
    omega = differential_D(SL2, eta)
    prim = solve_coboundary(SL2, omega)
    assert differential_D(SL2, prim) == omega
    # e_3 tensor e^2 ^ e^3 is closed on heisenberg but not a coboundary
    w = cochain_from_vector(3, 2, [0] * 6 + [0, 0, 1])
    assert not differential_D(HEIS, w) and solve_coboundary(HEIS, w) is None
