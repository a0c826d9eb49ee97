import random
from fractions import Fraction as Fr

import pytest
import sympy as sp

import oracle
from llg import generators as gen
from llg import library
from llg.identities import sample_fields
from llg.lie_algebra import StructureConstants, vector_cochain
from llg.parallelism import (
    Connection,
    Frame,
    FrameError,
    connection_from_frame,
    contract,
    curvature_hat,
    curvature_tilde,
    d_hat,
    invariant_jet,
    is_local_lie_group,
    jacobi_form,
    lie_bracket_fields,
    localize,
    nabla_hat,
    nabla_tilde,
    splitting_eval,
    torsion,
)
from llg.poly import Poly
from llg.tensor import TensorField


def frame(name):
    return library.get(name).frame


def conn(name):
    return connection_from_frame(frame(name))


def vec(n, *entries):
    return TensorField(n, 1, 0, {(i,): Poly.parse(s, n) for i, s in enumerate(entries)}, Poly.zero(n))


def as_strings(T):
    return {k: str(v) for k, v in T.comps.items()}


def test_heisenberg_gamma():
    assert as_strings(conn("heisenberg-3").gamma) == {(2, 0, 1): "1"}


def test_engel_gamma_matches_sympy():
    F = frame("engel-4")
    xs, G = oracle.frame_gamma(F.e, 4)
    assert G == {(2, 0, 1): 1, (3, 0, 2): 1}
    assert as_strings(connection_from_frame(F).gamma) == {(2, 0, 1): "1", (3, 0, 2): "1"}


@pytest.mark.parametrize("name", ["sl2-3", "aff1-2", "perturbed-3"])
def test_gamma_and_curvature_match_sympy(name):
    F = frame(name)
    xs, G = oracle.frame_gamma(F.e, F.n)
    C = connection_from_frame(F)
    assert {k: oracle.to_sympy(v, xs) for k, v in C.gamma.comps.items()} == G
    Rt, Rh = oracle.curvatures(G, F.n, xs)
    assert not Rt and curvature_tilde(C).is_zero()
    assert {k: sp.simplify(oracle.to_sympy(v, xs)) for k, v in curvature_hat(C).comps.items()} == Rh


def test_random_frames_match_sympy():
    rng = random.Random(11)
    for n in (2, 3):
        F = gen.random_unimodular_frame(rng, n)
        xs, G = oracle.frame_gamma(F.e, n)
        C = connection_from_frame(F)
        ours = {k: oracle.to_sympy(v, xs) for k, v in C.gamma.comps.items()}
        assert set(ours) == set(G)
        assert all(sp.expand(ours[k] - G[k]) == 0 for k in G)


def test_frame_inverse_is_checked():
    with pytest.raises(FrameError):
        Frame.from_strings([["1", "x1"], ["x2", "1"]])  # det = 1 - x1 x2 is not a unit
    with pytest.raises(FrameError):
        Frame.from_strings([["1", "0"], ["0", "1"]], [["1", "1"], ["0", "1"]])
    F = Frame.from_strings([["1", "x1"], ["0", "1"]])
    assert [[str(v) for v in row] for row in F.w] == [["1", "-x1"], ["0", "1"]]


def test_splitting_evaluation_and_composition():
    F = frame("heisenberg-3")
    y = [1, 0, 0]
    assert splitting_eval(F, [0, 0, 0], y) == F.e_at(y)
    rng = random.Random(2)
    pts = [[Fr(rng.randint(-5, 5), rng.randint(1, 4)) for _ in range(3)] for _ in range(3)]
    x, y, z = pts
    lhs = [[sum(a * b for a, b in zip(row, col)) for col in zip(*splitting_eval(F, x, y))]
           for row in splitting_eval(F, y, z)]
    assert lhs == splitting_eval(F, x, z)


def test_nabla_on_heisenberg_vectors():
    C = conn("heisenberg-3")
    assert nabla_tilde(C, vec(3, "0", "1", "x1")).is_zero()  # e2 is parallel
    assert as_strings(nabla_tilde(C, vec(3, "0", "1", "0"))) == {(2, 0): "-1"}
    assert as_strings(nabla_hat(C, vec(3, "1", "0", "0"))) == {(2, 1): "-1"}


def test_torsion_and_jacobi():
    C = conn("heisenberg-3")
    T = torsion(C)
    assert as_strings(T) == {(2, 0, 1): "1", (2, 1, 0): "-1"}
    assert jacobi_form(T).is_zero()
    aff = StructureConstants.from_upper(2, [(2, 1, 2, 1)]).as_tensor()
    assert jacobi_form(aff).is_zero()


def test_curvatures_of_raw_connections():
    n = 3
    x2 = Poly.var(n, 2)
    C = Connection.from_components(n, {(2, 0, 1): x2})
    assert as_strings(curvature_tilde(C)) == {(2, 1, 0, 1): "1", (2, 0, 1, 1): "-1"}
    assert curvature_hat(C).is_zero()
    C = Connection.from_components(n, {(2, 1, 0): x2})
    assert as_strings(curvature_hat(C)) == {(2, 1, 0, 1): "1", (2, 0, 1, 1): "-1"}
    xs = oracle.symbols(n)
    Rt, Rh = oracle.curvatures({(2, 1, 0): xs[1]}, n, xs)
    assert Rh == {(2, 1, 0, 1): 1, (2, 0, 1, 1): -1}


@pytest.mark.parametrize("name", ["heisenberg-3", "abelian-2", "engel-4", "sl2-3", "aff1-2"])
def test_local_lie_groups(name):
    v = is_local_lie_group(conn(name))
    assert (v.tilde_flat, v.hat_flat, v.nabla_T_zero) == (True, True, True)


def test_frame_with_x1_x2_coupling_is_not_local_lie():
    v = is_local_lie_group(conn("perturbed-3"))
    assert v.tilde_flat and not v.hat_flat and not v.nabla_T_zero


def test_frame_with_x2_shear_is_still_local_lie():
    # e2 = d2 + x2 d3 gives Gamma^3_22 = 1: constant, so every curvature term vanishes
    v = is_local_lie_group(connection_from_frame(Frame.from_strings([["1", "0", "0"], ["0", "1", "0"], ["0", "x2", "1"]])))
    assert v.is_local_lie_group


def test_torsion_is_closed_on_heisenberg():
    C = conn("heisenberg-3")
    assert d_hat(C, torsion(C)).is_zero()


def test_invariant_jets_on_heisenberg():
    C = conn("heisenberg-3")
    e2 = invariant_jet(C, vector_cochain([0, 1, 0]), [0, 0, 0], order=1)
    assert as_strings(e2) == {(1,): "1", (2,): "x1"}
    e1 = invariant_jet(C, vector_cochain([1, 0, 0]), [0, 0, 0], order=3)
    assert as_strings(e1) == {(0,): "1"}


def test_invariant_jet_away_from_origin_is_the_frame_column():
    C = conn("engel-4")
    p = [2, -1, 0, 3]
    e = frame("engel-4")
    xi = invariant_jet(C, vector_cochain([row[1] for row in e.e_at(p)]), p, order=3)
    # the parallel field through e_2(p) is e_2 itself
    assert xi == e.column(1)


@pytest.mark.parametrize("p", [[0, 0, 0, 0], [1, 2, 3, 4], [Fr(-1, 2), 0, 5, 1]])
def test_engel_localizes_to_the_same_algebra(p):
    g = localize(torsion(conn("engel-4")), p)
    assert sorted(g.upper_entries()) == [(3, 1, 2, 1), (4, 1, 3, 1)]


@pytest.mark.parametrize("name", ["heisenberg-3", "sl2-3", "aff1-2"])
def test_degree_zero_janet_operator_against_invariant_fields(name):
    # (d^ xi)(eta) = [eta, xi] when eta is nabla~-parallel
    ex = library.get(name)
    C, p, n = connection_from_frame(ex.frame), ex.base_point(), ex.n
    xi = sample_fields(n)[0]
    eta = invariant_jet(C, vector_cochain([1, 2, -1][:n]), p, order=4)
    residual = contract(d_hat(C, xi), [eta]) - lie_bracket_fields(eta, xi)
    assert residual.map(lambda v: v.taylor(p, 3)).is_zero()
