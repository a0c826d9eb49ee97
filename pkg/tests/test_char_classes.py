import random
from fractions import Fraction

import pytest

from llg import generators as gen
from llg import library
from llg.char_classes import (
    class_is_exact,
    class_report,
    closedness,
    predicted_trace_defect,
    t_power,
    trace_defect,
    trace_map,
    unimodular_character,
)
from llg.lie_algebra import StructureConstants, cochain_from_vector, differential_D
from llg.parallelism import NotLocalLieError, connection_from_frame, d_hat, jacobi_form, torsion

AFF1 = StructureConstants.from_upper(2, [(2, 1, 2, 1)])
HEIS = StructureConstants.from_upper(3, [(3, 1, 2, 1)])


def connection(name):
    return connection_from_frame(library.get(name).frame)


def test_first_power_is_the_torsion_itself():
    T = HEIS.as_tensor()
    assert t_power(T, 1) == T.with_antisym(2)


def test_square_is_the_jacobi_form_for_arbitrary_constants():
    rng = random.Random(8)
    for n in (3, 4):
        for _ in range(5):
            T = gen.random_constants(rng, n).as_tensor()
            assert t_power(T, 2) == jacobi_form(T)


def test_square_is_the_jacobi_form_at_field_level():
    T = torsion(connection("perturbed-3"))
    assert t_power(T, 2) == jacobi_form(T)


def test_higher_powers_vanish_under_jacobi():
    rng = random.Random(9)
    for _ in range(6):
        g = gen.random_jacobi_constants(rng, 4)
        assert t_power(g.as_tensor(), 2).is_zero()
        assert t_power(g.as_tensor(), 3).is_zero()


def test_power_degree_is_bounded_by_dimension():
    with pytest.raises(ValueError):
        t_power(HEIS.as_tensor(), 3)
    with pytest.raises(ValueError):
        t_power(HEIS.as_tensor(), 0)


@pytest.mark.parametrize("name", ["heisenberg-3", "engel-4", "aff1-2", "sl2-3"])
def test_torsion_is_closed_on_local_lie_frames(name):
    C = connection(name)
    assert d_hat(C, torsion(C)).is_zero()
    assert closedness(C, 1)


def test_aff1_torsion_trace():
    tr = trace_map(t_power(AFF1.as_tensor(), 1))
    assert [tr[(j,)] for j in range(2)] == [Fraction(1), Fraction(0)]
    assert unimodular_character(AFF1) == [Fraction(1), Fraction(0)]


def test_heisenberg_torsion_is_traceless():
    assert trace_map(HEIS.as_tensor()).is_zero()
    assert unimodular_character(HEIS) == [0, 0, 0]


def test_trace_commutes_with_differentials_on_unimodular_algebras():
    rng = random.Random(12)
    for q in range(12):
        n = (2, 3, 4)[q % 3]
        g = gen.random_jacobi_constants(rng, n, unimodular=True)
        assert not any(unimodular_character(g))
        for k in range(1, n + 1):
            assert trace_defect(g, gen.random_cochain(rng, n, k)).is_zero()


def test_trace_defect_formula_on_general_algebras():
    rng = random.Random(13)
    seen_nonzero = False
    for q in range(12):
        n = (2, 3, 4)[q % 3]
        g = gen.random_jacobi_constants(rng, n)
        for k in range(1, n + 1):
            w = gen.random_cochain(rng, n, k)
            d = trace_defect(g, w)
            assert d == predicted_trace_defect(g, w)
            seen_nonzero = seen_nonzero or not d.is_zero()
    assert seen_nonzero


def test_trace_defect_on_aff1_is_nonzero():
    # w = e_1 (x) e^2 has trace 0, but D w has a trace
    w = cochain_from_vector(2, 1, [0, 1, 0, 0])
    assert not trace_defect(AFF1, w).is_zero()


def test_torsion_class_is_always_exact():
    # D(identity) reproduces the constants, so the first class is trivial
    ident = cochain_from_vector(3, 1, [1, 0, 0, 0, 1, 0, 0, 0, 1])
    rng = random.Random(14)
    for g in (HEIS, gen.random_jacobi_constants(rng, 3), gen.random_jacobi_constants(rng, 3)):
        T = g.as_tensor()
        assert differential_D(g, ident) == T.with_antisym(2)
        ex = class_is_exact(g, T)
        assert ex.exact and differential_D(g, ex.certificate) == T.with_antisym(2)


def test_nonexact_closed_cochain():
    w = cochain_from_vector(3, 2, [0] * 8 + [1])
    assert not differential_D(HEIS, w)
    ex = class_is_exact(HEIS, w)
    assert not ex.exact and ex.certificate is None


def test_class_is_exact_rejects_open_cochains():
    with pytest.raises(ValueError):
        class_is_exact(HEIS, cochain_from_vector(3, 1, [1, 0, 0, 0, 0, 0, 0, 0, 0]))


def test_class_report_on_heisenberg():
    entries = class_report(connection("heisenberg-3"), [0, 0, 0])
    assert [(e.power, e.degree) for e in entries] == [(1, 2)]
    e = entries[0]
    assert e.field_closed and e.point_closed and e.exact and e.trace.is_zero()


def test_class_report_on_engel_has_a_cubic_term():
    entries = class_report(connection("engel-4"), [0, 0, 0, 0])
    assert [e.power for e in entries] == [1, 3]
    assert entries[1].form.is_zero()


def test_classes_need_a_local_lie_group():
    C = connection("perturbed-3")
    with pytest.raises(NotLocalLieError):
        class_report(C, [0, 0, 0])
    with pytest.raises(NotLocalLieError):
        closedness(C, 1)
