import math
import warnings

import pytest

from modular_double import ModularParameter, ParameterError, QuadratureSpec, ResonanceWarning


def test_q_and_Q():
    p = ModularParameter(0.7)
    assert p.Q == pytest.approx(0.7 + 1 / 0.7)
    assert abs(p.q) == pytest.approx(1.0)
    assert p.dual().base == pytest.approx(1 / 0.7)
    assert p.dual().Q == p.Q
    assert p.dual().q == pytest.approx(p.q_dual)


@pytest.mark.parametrize("b", [0.0, 1.0, -0.3, 1.5, math.nan])
def test_rejects_out_of_range(b):
    with pytest.raises(ParameterError):
        ModularParameter(b)


@pytest.mark.parametrize("b", [0.05, 0.97])
def test_validated_range(b):
    with pytest.raises(ParameterError):
        ModularParameter.validated(b)


def test_resonance_is_a_warning():
    with pytest.warns(ResonanceWarning):
        ModularParameter.validated(0.5)
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        ModularParameter.validated(0.7)


def test_quadrature_parse():
    q = QuadratureSpec.parse("40,auto,64,1e-10")
    assert q.indent_radius is None
    assert q.radius_for(ModularParameter(0.7)) == pytest.approx(0.35)
    q = QuadratureSpec.parse("30,0.2,32,1e-8")
    assert (q.truncation, q.indent_radius, q.panel_count, q.target_abs_error) == (30, 0.2, 32, 1e-8)
    assert q.refined().panel_count == 64
    for bad in ("1,2,3", "a,b,c,d", "40,50,64,1e-10", "40,auto,0,1e-10", "40,auto,64,-1"):
        with pytest.raises(ParameterError):
            QuadratureSpec.parse(bad)
