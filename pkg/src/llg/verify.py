"""Randomized property suites behind ``llg verify``.

Each check runs a fixed number of seeded cases and counts failures.  The
summary holds counts only (no timings), so it is byte-stable per seed.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction

from . import generators as gen
from . import library
from .char_classes import predicted_trace_defect, t_power, trace_defect, unimodular_character
from .deformation import (
    GaugeJet,
    act_on_connection,
    connection_of_frame_jet,
    act_on_frame,
    class_coordinates,
    constancy_defect,
    derivative_constraint,
    diagram_check,
    frame_extension,
    jet_orders,
    kappa_conjugated,
    ks_cocycle,
    kappa_dot_residual,
    constancy_equivalences,
    semisimple_rigidity,
    validity,
)
from .identities import identity_suite, sample_fields
from .lie_algebra import (
    center,
    cohomology,
    derivations,
    differential_D,
    differential_matrix,
    inner_derivations,
    vector_cochain,
)
from .parallelism import (
    box_nabla,
    connection_from_frame,
    contract,
    curvature_tilde,
    d_hat,
    invariant_jet,
    is_local_lie_group,
    jacobi_form,
    lie_bracket_fields,
    localize,
    lower_gamma_term,
    lower_torsion_term,
    nabla_tilde,
    torsion,
    value_torsion_term,
)
from .poly import Poly
from .tensor import TensorField, form_from_sorted, sorted_index_sets

SUITES = ("identities", "complexes", "deformations")
LOCAL_LIE_FRAMES = ("abelian-2", "abelian-3", "heisenberg-3", "engel-4", "aff1-2", "sl2-3")
LIBRARY_FRAMES = LOCAL_LIE_FRAMES + ("abelian-4", "perturbed-3")
DEFORMATION_BASES = ("abelian-2", "heisenberg-3", "sl2-3")


@dataclass
class CheckResult:
    suite: str
    name: str
    cases: int = 0
    failures: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures

    def record(self, ok: bool, label: str):
        self.cases += 1
        if not ok:
            self.failures.append(label)

    def as_dict(self) -> dict:
        return {"check": self.name, "cases": self.cases, "passed": self.passed,
                "failures": self.failures[:10]}


def _frame(name):
    ex = library.get(name)
    return ex, ex.frame, connection_from_frame(ex.frame)


def random_form(rng: random.Random, n: int, k: int, degree: int = 1) -> TensorField:
    """Vector-valued k-form with random polynomial components."""
    vals = {(i,) + J: gen.random_poly(rng, n, degree, 2) for J in sorted_index_sets(n, k) for i in range(n)}
    return form_from_sorted(n, 1, k, vals, Poly.zero(n))


# -- identities ---------------------------------------------------------------------------


def check_identity_suite(rng, count: int = 25) -> CheckResult:
    res = CheckResult("identities", "identity-suite")
    for name in LIBRARY_FRAMES:
        ex, F, C = _frame(name)
        for chk in identity_suite(C, frame=F):
            res.record(not chk.applicable or chk.holds, f"{name}:{chk.name}")
    for q in range(count):
        n = (2, 3, 4)[q % 3]
        C = gen.random_connection(rng, n, degree=2)
        for chk in identity_suite(C):
            res.record(not chk.applicable or chk.holds, f"random-connection-{q}:{chk.name}")
    return res


def check_frame_flatness(rng, count: int = 25) -> CheckResult:
    res = CheckResult("identities", "frame-tilde-flat")
    for name in LIBRARY_FRAMES:
        res.record(curvature_tilde(_frame(name)[2]).is_zero(), name)
    for q in range(count):
        F = gen.random_unimodular_frame(rng, (2, 3, 4)[q % 3])
        res.record(curvature_tilde(connection_from_frame(F)).is_zero(), f"random-frame-{q}")
    return res


def check_local_lie_verdicts(rng, count: int = 10) -> CheckResult:
    """For frame-derived connections, R^ = 0 exactly when nabla~ T = 0."""
    res = CheckResult("identities", "local-lie-verdict")
    for name in LIBRARY_FRAMES:
        v = is_local_lie_group(_frame(name)[2])
        res.record(v.hat_flat == v.nabla_T_zero and v.is_local_lie_group == (name != "perturbed-3"), name)
    for q in range(count):
        n = (2, 3, 4)[q % 3]
        v = is_local_lie_group(connection_from_frame(gen.random_local_lie_frame(rng, n)))
        res.record(v.is_local_lie_group, f"semidirect-frame-{q}")
        v = is_local_lie_group(connection_from_frame(gen.random_unimodular_frame(rng, n)))
        res.record(v.tilde_flat and v.hat_flat == v.nabla_T_zero, f"random-frame-{q}")
    return res


def check_lie_derivative(rng, order: int = 3) -> CheckResult:
    """For nabla^-parallel X, [X, eta] = nabla~_X eta through degree K-1 at p."""
    res = CheckResult("identities", "lie-derivative-of-hat-parallel")
    for name in LOCAL_LIE_FRAMES:
        ex, F, C = _frame(name)
        p = ex.base_point()
        X = invariant_jet(C, vector_cochain([Fraction(rng.randint(-2, 2)) for _ in range(C.n)]), p,
                          order=order, hat=True)
        eta = sample_fields(C.n)[1]
        r = lie_bracket_fields(X, eta) - contract(nabla_tilde(C, eta), [X])
        res.record(r.map(lambda v: v.taylor(p, order - 1)).is_zero(), name)
    return res


# -- complexes ---------------------------------------------------------------------------


def _algebras(rng, count):
    out = [(name, library.get(name).structure_constants()) for name in LOCAL_LIE_FRAMES]
    for q in range(count):
        out.append((f"random-{q}", gen.random_jacobi_constants(rng, (2, 3, 4)[q % 3])))
    return out


def check_algebraic_complex(rng, count: int = 20) -> CheckResult:
    """D o D = 0, D equals the CE oracle, low-degree cross-checks, Euler characteristic 0."""
    res = CheckResult("complexes", "algebraic-complex")
    for label, g in _algebras(rng, count):
        n = g.n
        mats = [differential_matrix(g, k) for k in range(n + 1)]
        ce = [differential_matrix(g, k, "CE") for k in range(n + 1)]
        res.record(mats == ce, f"{label}:oracle")
        for k in range(n - 1):
            A, B = mats[k + 1], mats[k]
            prod = [[sum((A[i][m] * B[m][j] for m in range(len(B))), Fraction(0)) for j in range(len(B[0]))]
                    for i in range(len(A))]
            res.record(not any(any(r) for r in prod), f"{label}:D^2 degree {k}")
        rep = cohomology(g)
        b = rep.betti()
        res.record(b[0] == len(center(g)), f"{label}:H0")
        res.record(b[1] == len(derivations(g)) - len(inner_derivations(g)), f"{label}:H1")
        res.record(rep.euler_characteristic() == 0, f"{label}:euler")
    return res


def check_janet_complex(rng, degree: int = 1) -> CheckResult:
    """d^ o d^ = 0 (degrees 0-2) and the comparison formula (degrees 1-3) on local-Lie frames."""
    res = CheckResult("complexes", "janet-complex")
    for name in LOCAL_LIE_FRAMES:
        ex, F, C = _frame(name)
        T = torsion(C)
        for k in range(0, min(3, C.n - 1)):
            w = random_form(rng, C.n, k, degree)
            res.record(d_hat(C, d_hat(C, w)).is_zero(), f"{name}:d^2 degree {k}")
        for k in range(1, min(3, C.n) + 1):
            w = random_form(rng, C.n, k, degree)
            gap = box_nabla(C, w) - d_hat(C, w)
            res.record((gap - value_torsion_term(T, w) - lower_torsion_term(T, w)).is_zero(),
                       f"{name}:comparison degree {k}")
            res.record((lower_gamma_term(C, w) - lower_torsion_term(T, w)).is_zero(),
                       f"{name}:gamma reduction degree {k}")
    return res


def check_localization(rng) -> CheckResult:
    """d^ of the invariant extension, evaluated at p, equals D of the pointwise cochain."""
    res = CheckResult("complexes", "localization")
    for name in LOCAL_LIE_FRAMES:
        ex, F, C = _frame(name)
        p = ex.base_point()
        g = localize(torsion(C), p)
        for k in range(0, min(2, C.n - 1) + 1):
            w = gen.random_cochain(rng, C.n, k)
            jet = invariant_jet(C, w, p, order=2)
            res.record(d_hat(C, jet).eval_at(p) == differential_D(g, w), f"{name}:degree {k}")
    return res


def check_torsion_powers(rng, count: int = 20) -> CheckResult:
    res = CheckResult("complexes", "torsion-powers")
    for q in range(count):
        n = (3, 4)[q % 2]
        g = gen.random_constants(rng, n)
        T = g.as_tensor()
        res.record(t_power(T, 2) == jacobi_form(T), f"random-constants-{q}:T^2=J")
        h = gen.random_jacobi_constants(rng, n)
        for k in range(2, n):
            res.record(t_power(h.as_tensor(), k).is_zero(), f"random-jacobi-{q}:T^{k}=0")
    for name in LOCAL_LIE_FRAMES:
        C = _frame(name)[2]
        res.record(d_hat(C, torsion(C)).is_zero(), f"{name}:dT=0")
    return res


def check_trace(rng, count: int = 20) -> CheckResult:
    """tr commutes with the differentials up to the unimodular character (exactly when unimodular)."""
    res = CheckResult("complexes", "trace-chain-map")
    for q in range(count):
        n = (2, 3, 4)[q % 3]
        for unimodular in (True, False):
            g = gen.random_jacobi_constants(rng, n, unimodular=unimodular)
            k = rng.randint(1, n)
            w = gen.random_cochain(rng, n, k)
            d = trace_defect(g, w)
            ok = d == predicted_trace_defect(g, w)
            if not any(unimodular_character(g)):
                ok = ok and d.is_zero()
            res.record(ok, f"{'unimodular' if unimodular else 'general'}-{q}")
    return res


# -- deformations ------------------------------------------------------------------------


def generated_jets(rng, F, count: int, order: int):
    kinds = gen.JET_KINDS
    return [(kinds[q % len(kinds)], gen.random_jet(rng, F, order, kinds[q % len(kinds)])) for q in range(count)]


def check_deformation_logic(rng, count: int = 50, order: int = 2) -> CheckResult:
    res = CheckResult("deformations", "deformation-logic")
    for name in DEFORMATION_BASES:
        ex, F, C = _frame(name)
        p = ex.base_point()
        g = localize(torsion(C), p)
        for q, (kind, jet) in enumerate(generated_jets(rng, F, count, order)):
            label = f"{name}:{kind}-{q}"
            cons = derivative_constraint(jet, C, p)
            res.record(all(c.point_holds == c.kills_derived for c in cons), label + ":order-one-constraint")
            v = validity(jet, C)
            if v >= 1:
                # the equivalences presuppose a deformation, so compare within the valid range
                res.record(constancy_equivalences(jet.truncated(v), C, p).agree, label + ":constancy-equivalences")
            rig = semisimple_rigidity(jet, g, p)
            if rig.perfect:
                nontrivial = any(any(v for row in jet.coefficient_at(m, p) for v in row)
                                 for m in range(1, order + 1))
                res.record((rig.first_violation is not None) == nontrivial, label + ":rigidity")
            if jet_orders(constancy_defect(jet.truncated(1), C), 1) >= 1:
                res.record(ks_cocycle(jet, C, check=False).is_cocycle, label + ":velocity-closed")
            Ct = act_on_connection(jet, C)
            if v >= order:
                # kappa_t is nabla~_t-parallel; its t-derivative only at t = 0 unless kappa vanishes
                res.record(jet_orders(nabla_tilde(Ct, kappa_conjugated(jet, C)), order) >= order,
                           label + ":parallel-kappa")
                need = order - 1 if jet_orders(constancy_defect(jet, C), order) >= order else 0
                res.record(jet_orders(kappa_dot_residual(jet, C), order) >= need, label + ":parallel-kappa-dot")
            e_t, w_t = act_on_frame(jet, F)
            res.record(connection_of_frame_jet(e_t, w_t, F.n, order).gamma == Ct.gamma, label + ":frame-route")
    return res


def check_abelian_class(rng, count: int = 5) -> CheckResult:
    """f = exp(tA) on R^n: constant, and the class coordinates are the entries of A."""
    res = CheckResult("deformations", "abelian-class")
    for q in range(count):
        n = (2, 3)[q % 2]
        F = library.abelian_frame(n)
        C = connection_from_frame(F)
        A = [[Fraction(rng.randint(-3, 3)) for _ in range(n)] for _ in range(n)]
        jet = GaugeJet.exp(A, 2)
        ks = ks_cocycle(jet, C)
        cls = class_coordinates(localize(torsion(C), [0] * n), ks.mu.eval_at([0] * n))
        expect = [A[i][j] for i in range(n) for j in range(n)]
        res.record(cls.coordinates == expect and (cls.status == "class") == any(expect), f"abelian-{n}-{q}")
    return res


def check_diagram(rng, count: int = 10, order: int = 2) -> CheckResult:
    """f_* d^_0 = d^_t f_* on invariant forms, for every constant jet generated."""
    res = CheckResult("deformations", "pushforward-diagram")
    for name in DEFORMATION_BASES:
        ex, F, C = _frame(name)
        p = ex.base_point()
        for q, (kind, jet) in enumerate(generated_jets(rng, F, count, order)):
            if jet_orders(constancy_defect(jet, C), order) < order:
                continue
            for k in range(0, min(2, F.n - 1) + 1):
                w = frame_extension(F, gen.random_cochain(rng, F.n, k), p)
                res.record(diagram_check(jet, C, w), f"{name}:{kind}-{q}:degree {k}")
    return res


CHECKS: dict = {
    "identities": (check_identity_suite, check_frame_flatness, check_local_lie_verdicts, check_lie_derivative),
    "complexes": (check_algebraic_complex, check_janet_complex, check_localization, check_torsion_powers,
                  check_trace),
    "deformations": (check_deformation_logic, check_abelian_class, check_diagram),
}


def run(suite: str = "all", seed: int = 0) -> list:
    names = SUITES if suite == "all" else (suite,)
    if any(s not in CHECKS for s in names):
        raise ValueError(f"unknown suite {suite!r}")
    out = []
    for s in names:
        for q, fn in enumerate(CHECKS[s]):
            # one stream per check keeps checks independent of each other's draw counts
            rng = random.Random(f"{seed}:{s}:{q}")
            out.append(fn(rng))
    return out


def summary(results: list, suite: str, seed: int) -> dict:
    return {
        "seed": seed,
        "suite": suite,
        "passed": all(r.passed for r in results),
        "cases": sum(r.cases for r in results),
        "checks": {s: [r.as_dict() for r in results if r.suite == s]
                   for s in SUITES if any(r.suite == s for r in results)},
    }
