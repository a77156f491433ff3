"""Numerical and exact-symbolic toolkit for the modular double of U_q(sl_n).

* :mod:`.dilog`: the quantum dilogarithm G_b, g_b, q-beta and the Fourier identity.
* :mod:`.qweyl`: exact q-Weyl monomials with symbolic phases.
* :mod:`.reps`: positive representations of sl2 and sl3 and their relation suites.
* :mod:`.gaussian`: operators acting on Gaussian test functions; wavepackets.
* :mod:`.suites`: named verification checks used by the ``mdverify`` CLI.
"""

from .dilog import (
    FourierCheck,
    GbValue,
    ft_gb_check,
    gb_eval,
    gb_eval_many,
    gb_strip,
    is_pole,
    is_zero,
    little_gb,
    qbeta,
    zeta_b,
)
from .errors import (
    DimensionMismatch,
    MarginViolation,
    ModularDoubleError,
    NonConvergence,
    NotDivisible,
    ParameterError,
    PoleEvaluation,
    ResonanceWarning,
    UnresolvablePole,
)
from .gaussian import (
    GaussianWave,
    WavepacketCoeff,
    apply_monomial,
    numeric_relation_check,
    qbinom_operator_check,
    wavepacket_coeff,
)
from .params import ModularParameter, QuadratureSpec
from .qweyl import (
    OperatorElement,
    PhaseCoefficient,
    WeylMonomial,
    WeylSpace,
    commutator,
    divide_exact,
    mono_mul,
    substitute_dual,
    symplectic_pairing,
)
from .reps import (
    PositiveRep,
    build_sl2,
    build_sl3,
    check_defining_relations,
    cross_commutation_check,
    dual_rep,
    lusztig_T,
)
from .suites import Check, SuiteConfig, run_suite

__all__ = [name for name in dir() if not name.startswith("_")]
