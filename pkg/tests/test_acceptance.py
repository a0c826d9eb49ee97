"""Acceptance criteria 1-9.  Each test prints one PASS/FAIL line with its
tolerance (always exact equality of rationals or polynomials) and runtime."""

import json
import random
import shutil
import subprocess
import sys
import time
from fractions import Fraction
from math import comb

import pytest

import oracle
from llg import generators as gen
from llg import library, verify
from llg.char_classes import t_power, trace_map
from llg.deformation import class_coordinates, ks_cocycle
from llg.lie_algebra import StructureConstants, cohomology
from llg.parallelism import connection_from_frame, localize, torsion

SEED = 20240611


@pytest.fixture
def report(capsys):
    """Call with (criterion, ok, started, limit, detail); prints one line and asserts."""

    def emit(criterion, ok, started, limit, detail=""):
        elapsed = time.perf_counter() - started
        within = limit is None or elapsed < limit
        verdict = "PASS" if ok and within else "FAIL"
        budget = f"{elapsed:.1f}s" + (f" (limit {limit}s)" if limit is not None else "")
        with capsys.disabled():
            print(f"\ncriterion {criterion}: {verdict} tolerance=exact runtime={budget} {detail}".rstrip())
        assert ok, detail
        assert within, f"runtime {elapsed:.1f}s exceeds {limit}s"

    return emit


def failures(results):
    return [f"{r.name}:{x}" for r in results for x in r.failures]


def rng_for(label):
    return random.Random(f"{SEED}:{label}")


def test_criterion_1_identity_suite(report):
    t0 = time.perf_counter()
    res = verify.check_identity_suite(rng_for(1), count=25)
    ok = res.passed and {"heisenberg-3", "engel-4"} <= set(verify.LIBRARY_FRAMES)
    report(1, ok, t0, 30, f"cases={res.cases} failures={failures([res])[:3]}")


def test_criterion_2_frame_flatness(report):
    t0 = time.perf_counter()
    res = verify.check_frame_flatness(rng_for(2), count=25)
    report(2, res.passed and res.cases == len(verify.LIBRARY_FRAMES) + 25, t0, None,
           f"cases={res.cases} failures={failures([res])[:3]}")


def test_criterion_3_janet_property(report):
    t0 = time.perf_counter()
    res = verify.check_janet_complex(rng_for(3))
    report(3, res.passed, t0, None, f"cases={res.cases} failures={failures([res])[:3]}")


def _oracle_agrees(g):
    """Per-degree rank and kernel dimension against an independent sympy CE matrix."""
    n = g.n
    rep = cohomology(g)
    ranks = [oracle.ce_matrix(g.c, n, k).rank() for k in range(n)] + [0]
    kernels = [n * comb(n, k) - ranks[k] for k in range(n + 1)]
    betti = [kernels[k] - (ranks[k - 1] if k else 0) for k in range(n + 1)]
    return (ranks == [d.rank for d in rep.degrees] and kernels == [d.kernel_dim for d in rep.degrees]
            and betti == rep.betti())


def test_criterion_4_cohomology(report):
    t0 = time.perf_counter()
    rng = rng_for(4)
    res = verify.check_algebraic_complex(rng, count=20)
    heis = library.get("heisenberg-3").structure_constants()
    sl2 = library.get("sl2-3").structure_constants()
    fixed = (cohomology(heis).betti()[:2] == [1, 4] and cohomology(sl2).betti()[:2] == [0, 0]
             and all(cohomology(StructureConstants(n, {})).betti() == [n * comb(n, k) for k in range(n + 1)]
                     for n in (2, 3, 4)))
    randoms = [gen.random_jacobi_constants(rng, (2, 3, 4)[q % 3]) for q in range(20)]
    agree = sum(_oracle_agrees(g) for g in randoms)
    ok = res.passed and fixed and agree == 20
    report(4, ok, t0, 10, f"cases={res.cases} fixed_values={fixed} oracle_agree={agree}/20")


def test_criterion_5_localization(report):
    t0 = time.perf_counter()
    res = verify.check_localization(rng_for(5))
    report(5, res.passed and {"heisenberg-3", "engel-4"} <= set(verify.LOCAL_LIE_FRAMES), t0, None,
           f"cases={res.cases} failures={failures([res])[:3]}")


def test_criterion_6_characteristic_classes(report):
    t0 = time.perf_counter()
    powers = verify.check_torsion_powers(rng_for("6a"), count=20)
    trace = verify.check_trace(rng_for("6b"), count=20)
    aff1 = library.get("aff1-2").structure_constants()
    tr = trace_map(t_power(aff1.as_tensor(), 1))
    aff_ok = [tr[(0,)], tr[(1,)]] == [Fraction(1), Fraction(0)]
    ok = powers.passed and trace.passed and aff_ok
    report(6, ok, t0, None, f"cases={powers.cases + trace.cases} aff1_trace={aff_ok} "
                            f"failures={failures([powers, trace])[:3]}")


def test_criterion_7_deformation_logic(report):
    t0 = time.perf_counter()
    logic = verify.check_deformation_logic(rng_for("7a"), count=50)
    classes = verify.check_abelian_class(rng_for("7b"))
    ex = library.get("abelian-const-jet")
    C = connection_from_frame(library.get(ex.base).frame)
    mu = ks_cocycle(ex.jet, C).mu.eval_at([0, 0])
    cls = class_coordinates(localize(torsion(C), [0, 0]), mu)
    example_ok = cls.status == "class" and cls.coordinates == [1, 2, 3, 4]
    ok = logic.passed and classes.passed and example_ok
    report(7, ok, t0, 60, f"cases={logic.cases + classes.cases} example_class={example_ok} "
                          f"failures={failures([logic, classes])[:3]}")


def test_criterion_8_diagram(report):
    t0 = time.perf_counter()
    res = verify.check_diagram(rng_for(8))
    report(8, res.passed and res.cases > 0, t0, None, f"cases={res.cases} failures={failures([res])[:3]}")


def _llg():
    exe = shutil.which("llg")
    return [exe] if exe else [sys.executable, "-m", "llg.cli"]


def test_criterion_9_determinism(report):
    t0 = time.perf_counter()
    cmd = _llg() + ["verify", "--suite", "all", "--seed", "7"]
    a = subprocess.run(cmd, capture_output=True, check=False)
    b = subprocess.run(cmd, capture_output=True, check=False)
    same = a.stdout == b.stdout and a.returncode == b.returncode
    passed = a.returncode == 0 and json.loads(a.stdout)["passed"]
    report(9, same and passed and len(a.stdout) > 0, t0, None,
           f"bytes={len(a.stdout)} identical={same} exit={a.returncode}")
