from pathlib import Path

import numpy as np

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from modular_double import (
    DimensionMismatch,
    GaussianWave,
    apply_monomial,
    NotDivisible,
    OperatorElement,
    PhaseCoefficient,
    WeylMonomial,
    WeylSpace,
    build_sl2,
    build_sl3,
    divide_exact,
    lusztig_T,
    mono_mul,
    substitute_dual,
    symplectic_pairing,
)
from modular_double.gaussian import grid
from modular_double.qweyl import exchange_grading

GOLDEN = Path(__file__).parent / "golden"
N_VARS, N_PARAMS = 2, 1
q = PhaseCoefficient.q

exps = lambda n, span=4: st.lists(st.integers(-span, span), min_size=n, max_size=n)  # noqa: E731
phases = st.builds(
    PhaseCoefficient.phase,
    st.integers(-8, 8), st.integers(-8, 8), st.integers(-7, 7), st.integers(-3, 3).filter(bool),
)
monomials = st.builds(
    WeylMonomial,
    exps(N_VARS), exps(N_VARS), exps(N_PARAMS), exps(N_VARS), exps(N_VARS), exps(N_PARAMS), phases,
)
elements = st.lists(monomials, min_size=0, max_size=4).map(lambda ms: OperatorElement(ms, (N_VARS, N_PARAMS)))
divisors = st.sampled_from([q(1) - q(-1), q(2) - q(-2), q(1, dual=True) - q(-1, dual=True), q(1) + q(-1), q(3)])


@settings(max_examples=500, deadline=None)
@given(monomials, monomials, monomials)
def test_associativity(m1, m2, m3):
    assert mono_mul(mono_mul(m1, m2), m3) == mono_mul(m1, mono_mul(m2, m3))


@settings(max_examples=200, deadline=None)
@given(monomials, monomials)
def test_phase_antisymmetry(m1, m2):
    a, c, d = exchange_grading(m1, m2)
    s_bb, s_tt, s_cross = symplectic_pairing(m1, m2)
    assert (a, c, d) == (2 * s_bb, 2 * s_tt, 2 * s_cross)
    forward, backward = mono_mul(m1, m2), mono_mul(m2, m1)
    assert forward.key == backward.key
    assert forward.coeff == backward.coeff * PhaseCoefficient.phase(a, c, d)


@settings(max_examples=200, deadline=None)
@given(elements)
def test_canonical_idempotence(e):
    assert OperatorElement(e.monomials, e.dims) == e
    assert OperatorElement(reversed(e.monomials), e.dims) == e
    assert OperatorElement(e.monomials, e.dims).text() == e.text()


@settings(max_examples=200, deadline=None)
@given(elements, divisors)
def test_divide_roundtrip(e, delta):
    assert divide_exact(delta * e, delta) == e


@settings(max_examples=100, deadline=None)
@given(elements)
def test_dual_involution(e):
    assert substitute_dual(substitute_dual(e)) == e


@settings(max_examples=100, deadline=None)
@given(elements, elements, elements)
def test_distributivity(x, y, z):
    assert x * (y + z) == x * y + x * z


def test_grading_canonical_d():
    # i^k is absorbed into the scalar: e^{i pi 4/4} = -1
    assert PhaseCoefficient.phase(0, 0, 4) == PhaseCoefficient.phase(scalar=-1)
    assert PhaseCoefficient.phase(0, 0, 2) == PhaseCoefficient.phase(scalar=1j)
    assert PhaseCoefficient.phase(0, 0, 8) == PhaseCoefficient.one()


def test_q_grading_and_dual():
    assert q(1).terms[0][0] == (4, 0, 0)
    assert q(1).dual() == q(1, dual=True)
    assert q(0.5) * q(0.5) == q(1)
    with pytest.raises(ValueError):
        q(1 / 3)


def test_evaluate_matches_numeric():
    import cmath
    import math

    b = 0.7
    c = q(1) - q(-1) + PhaseCoefficient.phase(1, 2, 3, 2 + 1j)
    expected = (
        cmath.exp(1j * math.pi * b * b) - cmath.exp(-1j * math.pi * b * b)
        + (2 + 1j) * cmath.exp(1j * math.pi * (b * b + 2 / b**2 + 3) / 4)
    )
    assert c.evaluate(b) == pytest.approx(expected, abs=1e-14)


def test_not_divisible():
    with pytest.raises(NotDivisible):
        (q(1) + q(0)).exact_divide(q(1) - q(-1))
    with pytest.raises(ZeroDivisionError):
        q(1).exact_divide(PhaseCoefficient.zero())


def test_dimension_mismatch():
    S1, S2 = WeylSpace(["u"]), WeylSpace(["u", "v"])
    with pytest.raises(DimensionMismatch):
        mono_mul(S1.monomial({"u": 1}), S2.monomial({"u": 1}))
    with pytest.raises(DimensionMismatch):
        S1.element({"u": 1}) + S2.element({"u": 1})


def test_heisenberg_phase():
    # e^{2 pi b u} e^{2 pi b p} = q^2 e^{2 pi b p} e^{2 pi b u}
    S = WeylSpace(["u"])
    U, V = S.element({"u": 2}), S.element({"p": 2})
    assert U * V == q(2) * (V * U)
    # BCH half phase: e^{pi b u} e^{pi b p} = q^{1/4} e^{pi b (u+p)}
    assert S.element({"u": 1}) * S.element({"p": 1}) == q(0.25) * S.element({"u": 1, "p": 1})


def test_cross_phase_examples():
    S = WeylSpace(["u"], ["lam"])
    eps = S.monomial({"u": -1, "lam": 1, "p": -2})
    phi_plus = S.monomial({"u": 1, "lam": 1, "p": 2}, dual=True)
    phi_minus = S.monomial({"u": -1, "lam": -1, "p": 2}, dual=True)
    assert symplectic_pairing(eps, phi_plus)[2] == 0
    assert symplectic_pairing(eps, phi_minus)[2] == -4
    # exchange phase is e^{i pi sigma_cross / 2}, so sigma_cross = -4 gives +1
    for phi in (phi_plus, phi_minus):
        a, c, d = exchange_grading(eps, phi)
        assert PhaseCoefficient.phase(a, c, d) == PhaseCoefficient.one()
        f = GaussianWave((1.3,), (0.2 + 0.1j,))
        lam, pts = [0.4], grid(1)
        ab = apply_monomial(eps, apply_monomial(phi, f, 0.7, lam), 0.7, lam)(pts)
        ba = apply_monomial(phi, apply_monomial(eps, f, 0.7, lam), 0.7, lam)(pts)
        assert np.allclose(ab / ba, 1, atol=1e-12)


def _golden(name: str, text: str) -> None:
    path = GOLDEN / name
    assert path.read_text() == text + "\n", f"golden mismatch for {name}"


def test_golden_sl2_generators():
    rep = build_sl2()
    text = "\n".join(f"{k[0]}{k[1]}:\n{rep.gens[k].text()}" for k in sorted(rep.gens))
    _golden("sl2_generators.txt", text)


def test_golden_sl3_eps12():
    _golden("sl3_eps12.txt", lusztig_T(build_sl3(), 1, 2).text())
