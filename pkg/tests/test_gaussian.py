import cmath
import math

import numpy as np
import pytest

from modular_double import (
    GaussianWave,
    WeylSpace,
    build_sl2,
    build_sl3,
    dual_rep,
    numeric_relation_check,
    qbinom_operator_check,
    wavepacket_coeff,
)
from modular_double.gaussian import (
    CSV_HEADER,
    apply_monomial,
    binomial_expansion,
    cross_validate_products,
    delta_limit_coefficient,
    grid,
    richardson,
    wavepacket_step_factor,
)
from modular_double.qweyl import PhaseCoefficient


def test_wave_integral_and_shift():
    f = GaussianWave((2.0,), (0.3 + 0.1j,))
    x = np.linspace(-12, 12, 20001)
    numeric = np.trapezoid(f(x[:, None]), x)
    assert f.integral() == pytest.approx(numeric, rel=1e-10)
    g = f.shifted(0, 0.4)
    assert g(np.array([[1.0]]))[0] == pytest.approx(f(np.array([[0.6]]))[0], rel=1e-13)


def test_narrow_shift_does_not_overflow():
    f = GaussianWave((1e4,), (0j,), 0.5 * math.log(1e4 / math.pi))
    g = f.shifted(0, -0.7j)
    assert g.integral() == pytest.approx(1.0, rel=1e-10)


def test_position_and_momentum_action():
    S = WeylSpace(["u"])
    f = GaussianWave((1.0,), (0j,))
    pts = grid(1)
    b = 0.7
    u = pts[:, 0]
    got = apply_monomial(S.monomial({"u": 1}), f, b, [])(pts)
    assert np.allclose(got, np.exp(math.pi * b * u) * f(pts))
    # e^{pi b p} f(u) = f(u - i b / 2) for p = (1/2 pi i) d/du
    got = apply_monomial(S.monomial({"p": 1}), f, b, [])(pts)
    assert np.allclose(got, np.exp(-(u - 0.5j * b) ** 2))


@pytest.mark.parametrize("name", ["KE", "KF", "KK", "EF"])
def test_sl2_relations_numeric(name):
    assert numeric_relation_check(build_sl2(), name, 0.7) < 1e-9
    assert numeric_relation_check(dual_rep(build_sl2()), name, 0.7) < 1e-9


@pytest.mark.parametrize("name,i,j", [("SerreE", 1, 2), ("SerreF", 2, 1), ("EF", 1, 2), ("KE", 2, 1)])
def test_sl3_relations_numeric(name, i, j):
    assert numeric_relation_check(build_sl3(), name, 0.7, i=i, j=j) < 1e-9


def test_wrong_relation_detected():
    assert numeric_relation_check(build_sl2(), "KE_wrong", 0.7) > 1e-2


def test_residual_rows():
    rows = []
    numeric_relation_check(build_sl2(), "KE", 0.7, rows=rows)
    assert len(rows) == 2 * 7
    assert len(rows[0].csv_row()) == len(CSV_HEADER)


def test_cross_validation():
    assert cross_validate_products(seed=3, pairs=50) < 1e-10


def test_wavepacket():
    b, lam = 0.7, 0.5
    assert wavepacket_coeff(b, lam, 0).value == pytest.approx(1)
    for t in (-2.0, 0.4, 2.5):
        assert abs(wavepacket_coeff(b, lam, t).value) == pytest.approx(1, abs=1e-9)
        step = wavepacket_coeff(b, lam, t - 1j * b).value
        assert step == pytest.approx(wavepacket_coeff(b, lam, t).value * wavepacket_step_factor(b, lam, t), rel=1e-8)
    q = cmath.exp(1j * math.pi * b * b)
    closed = q**-0.5 * math.exp(-math.pi * b * lam) + q**0.5 * math.exp(math.pi * b * lam)
    assert wavepacket_coeff(b, lam, -1j * b).value == pytest.approx(closed, rel=1e-9)
    with pytest.raises(ValueError):
        wavepacket_coeff(b, -1.0, 0)


def test_delta_limit():
    b, lam = 0.7, 0.5
    est, raw = delta_limit_coefficient(build_sl2(), b, [lam])
    exact = wavepacket_coeff(b, lam, -1j * b).value
    assert abs(est - exact) / abs(exact) < 1e-6
    # extrapolation improves on the narrowest raw width
    assert abs(est - exact) < abs(raw[-1] - exact)


def test_richardson_exact_on_polynomials():
    widths = [10.0, 20.0, 40.0]
    vals = [3 + 2 / a - 5 / a**2 for a in widths]
    assert richardson(widths, vals) == pytest.approx(3)


def test_binomial_expansion_small():
    _, coeffs = binomial_expansion(2)
    q = PhaseCoefficient.q
    assert coeffs[0] == PhaseCoefficient.one() and coeffs[2] == PhaseCoefficient.one()
    assert coeffs[1] == q(0) + q(2)


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
def test_qbinom(n):
    assert max(qbinom_operator_check(0.7, n).values()) < 1e-5
