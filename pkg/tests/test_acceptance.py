"""Acceptance gate: one test per criterion, each with its runtime budget.

Each test records a PASS/FAIL line that the terminal summary prints.
"""

import time
from contextlib import contextmanager

import numpy as np

from conftest import ACCEPTANCE_RESULTS
from modular_double import (
    ModularParameter,
    PhaseCoefficient,
    build_sl2,
    build_sl3,
    check_defining_relations,
    cross_commutation_check,
    dual_rep,
    ft_gb_check,
    lusztig_T,
    numeric_relation_check,
    qbinom_operator_check,
    substitute_dual,
)
from modular_double.dilog import DEFAULT_QUAD
from modular_double.gaussian import cross_validate_products
from modular_double.suites import (
    _asymptotics,
    _conjugation,
    _functional_equation,
    _reflection,
    _unitarity,
    _wavepacket_delta,
    _wavepacket_step,
    _wavepacket_unitarity,
)

B_SWEEP = (0.55, 0.7, 0.85)


@contextmanager
def criterion(num: int, title: str, budget: float):
    """Collect (ok, detail) pairs; fail if any is false or the budget is exceeded."""
    parts: list[tuple[bool, str]] = []
    start = time.perf_counter()
    try:
        yield parts
    except Exception as exc:
        parts.append((False, f"raised {type(exc).__name__}: {exc}"))
    elapsed = time.perf_counter() - start
    parts.append((elapsed < budget, f"{elapsed:.2f}s < {budget:g}s"))
    ok = all(p for p, _ in parts)
    detail = "; ".join(d for _, d in parts)
    ACCEPTANCE_RESULTS.append((num, title, ok, detail))
    assert ok, detail


def within(value: float, tol: float, label: str) -> tuple[bool, str]:
    return value < tol, f"{label} {value:.2e} < {tol:g}"


def test_c01_functional_equations():
    with criterion(1, "functional equations in b and 1/b", 10) as out:
        worst = 0.0
        for b in B_SWEEP:
            p = ModularParameter(b)
            rng = np.random.default_rng(1)
            worst = max(worst, _functional_equation(p, DEFAULT_QUAD, rng, b, 100),
                        _functional_equation(p, DEFAULT_QUAD, rng, 1 / b, 100))
        out.append(within(worst, 1e-8, "max rel residual"))


def test_c02_reflection_conjugation_unitarity():
    with criterion(2, "reflection, conjugation, critical-line unitarity", 10) as out:
        refl = conj = unit = 0.0
        for b in B_SWEEP:
            p = ModularParameter(b)
            rng = np.random.default_rng(2)
            refl = max(refl, _reflection(p, DEFAULT_QUAD, rng, 50))
            conj = max(conj, _conjugation(p, DEFAULT_QUAD, rng, 50))
            unit = max(unit, _unitarity(p, DEFAULT_QUAD))
        out += [within(refl, 1e-8, "reflection"), within(conj, 1e-8, "conjugation"),
                within(unit, 1e-9, "unitarity")]


def test_c03_asymptotics():
    with criterion(3, "asymptotics in both half planes", 2) as out:
        top, violation, low = _asymptotics(ModularParameter(0.7), DEFAULT_QUAD)
        out += [within(top, 1e-4, "|G(Q/2+12i) - conj zeta|"), within(low, 1e-4, "lower half"),
                (violation == 0.0, f"monotone (violation {violation:.1e})")]


def test_c04_fourier_identity():
    with criterion(4, "Fourier transform identity", 10) as out:
        worst = max(ft_gb_check(ModularParameter(b), x).residual for b in (0.6, 0.8) for x in (0.5, 1.0, 2.0))
        out.append(within(worst, 1e-6, "max rel residual"))


def test_c05_exact_relation_suites():
    with criterion(5, "exact sl2/sl3 relation suites, both builds", 5) as out:
        for build in (build_sl2, build_sl3):
            for dual in (False, True):
                rep = build(dual=dual)
                report = check_defining_relations(rep)
                bad = [e.relation for e in report.entries if not e.passed]
                out.append((not bad, f"{rep.name}{'~' if dual else ''} {len(report.entries)} relations"
                            + (f" failing {bad}" if bad else " zero")))


def test_c06_lusztig_root_vector():
    with criterion(6, "Lusztig eps12 divisibility, positivity, duality", 1) as out:
        rep = build_sl3()
        e12 = lusztig_T(rep, 1, 2)
        q = PhaseCoefficient.q
        num = q(0.5) * (rep.E(2) * rep.E(1)) - q(-0.5) * (rep.E(1) * rep.E(2))
        out.append(((q(1) - q(-1)) * e12 == num, "exact quotient by q - q^-1"))
        out.append((all(m.coeff.is_unit_phase() for m in e12), f"{len(e12)} unit-phase monomials"))
        out.append((substitute_dual(e12) == lusztig_T(dual_rep(rep), 1, 2), "dual substitution matches"))


def test_c07_cross_commutation():
    with criterion(7, "b and 1/b halves commute up to sign", 1) as out:
        for build in (build_sl2, build_sl3):
            rep = build()
            report = cross_commutation_check(rep, dual_rep(rep))
            out.append((report.passed, f"{rep.name} {len(report.entries)} generator pairs"))


def test_c08_symbolic_analytic_crossval():
    with criterion(8, "symbolic products vs Gaussian action", 20) as out:
        out.append(within(cross_validate_products(seed=8, pairs=200), 1e-10, "200 pairs"))
        worst = max(numeric_relation_check(build_sl2(), n, 0.7) for n in ("KE", "KF", "KK", "EF"))
        out.append(within(worst, 1e-9, "sl2 relations"))


def test_c09_qbinomial():
    with criterion(9, "q-binomial vs q-beta continuation", 20) as out:
        worst = max(max(qbinom_operator_check(0.7, n).values()) for n in range(1, 6))
        out.append(within(worst, 1e-5, "n<=5 all k"))


def test_c10_wavepacket():
    with criterion(10, "wavepacket coefficient", 20) as out:
        p = ModularParameter(0.7)
        out += [within(_wavepacket_unitarity(p, DEFAULT_QUAD), 1e-9, "unit modulus"),
                within(_wavepacket_step(p, DEFAULT_QUAD), 1e-8, "step consistency"),
                within(_wavepacket_delta(p, DEFAULT_QUAD), 1e-6, "delta limit at t=-ib")]


def test_c11_negative_controls():
    with criterion(11, "negative controls detected", 2) as out:
        for build in (build_sl2, build_sl3):
            rep = build()
            for mutation in ("serre", "kexchange"):
                if mutation == "serre" and rep.rank == 1:
                    continue  # rank one has no Serre relation
                caught = not check_defining_relations(rep, mutation).passed
                out.append((caught, f"{rep.name} {mutation} {'caught' if caught else 'MISSED'}"))
        wrong = numeric_relation_check(build_sl2(), "KE_wrong", 0.7)
        out.append((wrong > 1e-2, f"numeric wrong K power residual {wrong:.2f}"))
