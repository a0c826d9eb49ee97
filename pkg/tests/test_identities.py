import random

import pytest

from llg import generators as gen
from llg import library
from llg.identities import IDENTITY_NAMES, identity_suite, sample_fields, suite_passes
from llg.parallelism import (
    Frame,
    algebraic_bracket,
    connection_from_frame,
    contract,
    jacobi_form,
    nabla_hat,
    nabla_tilde,
    torsion,
)


@pytest.mark.parametrize("name", ["heisenberg-3", "engel-4", "sl2-3", "aff1-2", "perturbed-3", "abelian-3"])
def test_suite_on_library_frames(name):
    F = library.get(name).frame
    checks = identity_suite(connection_from_frame(F), frame=F)
    assert [c.name for c in checks] == list(IDENTITY_NAMES)
    assert all(c.applicable and c.holds for c in checks), [c.name for c in checks if not c.holds]


def test_suite_on_random_raw_connections():
    rng = random.Random(7)
    for n in (2, 3, 4):
        checks = identity_suite(gen.random_connection(rng, n, degree=2))
        assert suite_passes(checks)
        assert not next(c for c in checks if c.name == "parallel-bracket").applicable


def test_difference_formula_uses_reversed_torsion_arguments():
    C = connection_from_frame(library.get("heisenberg-3").frame)
    T = torsion(C)
    X, Y = sample_fields(3)[:2]
    diff = contract(nabla_tilde(C, Y), [X]) - contract(nabla_hat(C, Y), [X])
    assert diff == algebraic_bracket(T, Y, X)
    assert diff != algebraic_bracket(T, X, Y)


def _cyclic_nabla_torsion(C):
    NT = nabla_tilde(C, torsion(C))
    return lambda x: NT[x] + NT[(x[0], x[3], x[1], x[2])] + NT[(x[0], x[2], x[3], x[1])]


def test_jacobi_enters_the_cyclic_identity_with_a_minus_sign():
    # frame-derived (so R~ = 0) with non-constant structure functions, hence J != 0
    F = Frame.from_strings([["1", "0", "0"], ["2*x2", "1", "-x3"], ["-2*x2 - 2", "-2", "2*x3 + 1"]])
    C = connection_from_frame(F)
    J = jacobi_form(torsion(C))
    assert J
    S = _cyclic_nabla_torsion(C)
    assert all(S(x) == -J[x] for x in J.indices())
    assert any(S(x) != J[x] for x in J.indices())
