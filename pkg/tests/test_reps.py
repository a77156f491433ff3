import pytest

from modular_double import (
    OperatorElement,
    PhaseCoefficient,
    build_sl2,
    build_sl3,
    check_defining_relations,
    commutator,
    cross_commutation_check,
    dual_rep,
    lusztig_T,
    substitute_dual,
)
from modular_double.reps import MUTATIONS, cross_phases, lambda_centrality

BUILDERS = [build_sl2, build_sl3]
q = PhaseCoefficient.q


@pytest.mark.parametrize("build", BUILDERS)
@pytest.mark.parametrize("dual", [False, True])
def test_relations_exact(build, dual):
    rep = build(dual=dual)
    report = check_defining_relations(rep)
    assert report.passed, [e.to_json() for e in report.entries if not e.passed]
    assert all(e.difference.is_zero() for e in report.entries)


def test_relation_counts():
    assert len(check_defining_relations(build_sl2()).entries) == 4
    assert len(check_defining_relations(build_sl3()).entries) == 20


@pytest.mark.parametrize("build", BUILDERS)
def test_dual_build_is_substitution(build):
    assert dual_rep(build()).gens == build(dual=True).gens
    assert dual_rep(dual_rep(build())).gens == build().gens


@pytest.mark.parametrize("mutation", MUTATIONS)
def test_mutations_detected_sl3(mutation):
    report = check_defining_relations(build_sl3(), mutation)
    assert not report.passed
    failed = [e for e in report.to_json() if not e["pass"]]
    assert failed and all(e["residual_monomial_count"] > 0 and e["residual_preview"] for e in failed)


def test_unknown_mutation():
    with pytest.raises(ValueError):
        check_defining_relations(build_sl2(), "nonsense")


def test_sl2_rescaled_commutator():
    rep = build_sl2()
    E, F, K = rep.E(1), rep.F(1), rep.K(1)
    assert commutator(E, F) == (q(1) - q(-1)) * (K.inverse() - K)


def test_serre_homogeneity():
    rep = build_sl3()
    E1, E2 = rep.E(1), rep.E(2)
    deg = lambda e: {m.momentum_degree() for m in e}  # noqa: E731
    (d1,), (d2,) = deg(E1), deg(E2)
    for word in (E1 * E1 * E2, E1 * E2 * E1, E2 * E1 * E1):
        assert deg(word) == {2 * d1 + d2}


@pytest.mark.parametrize("build", BUILDERS)
def test_cross_commutation_signs(build):
    rep = build()
    assert cross_commutation_check(rep, dual_rep(rep)).passed
    for _, _, (a, c, d) in cross_phases(rep, dual_rep(rep)):
        assert a == 0 and c == 0 and d % 4 == 0


@pytest.mark.parametrize("build", BUILDERS)
def test_lambda_central(build):
    assert lambda_centrality(build()).passed


def test_lusztig_eps12():
    rep = build_sl3()
    e12 = lusztig_T(rep, 1, 2)
    assert len(e12) == 4
    assert all(m.coeff.is_unit_phase() for m in e12)
    assert substitute_dual(e12) == lusztig_T(dual_rep(rep), 1, 2)
    # the numerator is (q - q^-1) times e12
    num = q(0.5) * (rep.E(2) * rep.E(1)) - q(-0.5) * (rep.E(1) * rep.E(2))
    assert (q(1) - q(-1)) * e12 == num


def test_lusztig_simple_reflection():
    rep = build_sl2()
    t = lusztig_T(rep, 1, 1)
    assert t == q(1) * (rep.F(1) * rep.K(1).inverse())


def test_relation_check_json():
    entry = check_defining_relations(build_sl2(), "kexchange").to_json()[0]
    assert set(entry) == {"relation", "pass", "residual_monomial_count", "residual_preview"}


def test_k_must_be_unit_monomial():
    rep = build_sl2()
    gens = dict(rep.gens)
    gens[("K", 1)] = rep.K(1) + rep.K(1).inverse()
    with pytest.raises(ValueError):
        type(rep)(rep.name, rep.cartan, rep.space, gens)
    with pytest.raises(ValueError):
        type(rep)(rep.name, ((2, -2), (-2, 2)), rep.space, rep.gens)
    assert isinstance(rep.E(1), OperatorElement)
