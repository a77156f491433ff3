"""Verification suites: named checks with residuals and tolerances.

Each suite returns a list of :class:`Check`.  Randomised sweeps draw from
``numpy.random.default_rng(seed)`` so a fixed seed gives identical reports.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import dilog
from .dilog import DEFAULT_QUAD, _strip_values, ft_gb_check, gb_eval, zeta_b
from .errors import ModularDoubleError
from .gaussian import (
    cross_validate_products,
    delta_limit_coefficient,
    numeric_relation_check,
    qbinom_operator_check,
    random_monomial,
    wavepacket_coeff,
    wavepacket_step_factor,
)
from .params import ModularParameter, QuadratureSpec
from .qweyl import (
    OperatorElement,
    PhaseCoefficient,
    divide_exact,
    exchange_grading,
    mono_mul,
    substitute_dual,
)
from .reps import (
    build_sl2,
    build_sl3,
    check_defining_relations,
    cross_commutation_check,
    dual_rep,
    lambda_centrality,
    lusztig_T,
)

SUITES = ("dilog", "qweyl", "sl2", "sl3", "duality", "crosscheck", "all")

# Tolerance families; ``--tol family=value`` overrides a whole family.
DEFAULT_TOLERANCES: dict[str, float] = {
    "functional_equation": 1e-8,
    "reflection": 1e-8,
    "conjugation": 1e-8,
    "unitarity": 1e-9,
    "asymptotic": 1e-4,
    "fourier": 1e-6,
    "error_honesty": 0.05,
    "exact": 0.0,
    "gaussian_relation": 1e-9,
    "product_crossval": 1e-10,
    "qbinom": 1e-5,
    "wavepacket_unitarity": 1e-9,
    "wavepacket_step": 1e-8,
    "wavepacket_delta": 1e-6,
}


@dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    residual: float
    tolerance: float
    paper_ref: str

    def to_json(self) -> dict:
        residual = self.residual if math.isfinite(self.residual) else None
        return {
            "name": self.name,
            "pass": self.passed,
            "residual": residual,
            "tolerance": self.tolerance,
            "paper_ref": self.paper_ref,
        }


@dataclass
class SuiteConfig:
    b: float = 0.7
    seed: int = 0
    quad: QuadratureSpec = DEFAULT_QUAD
    tolerances: dict[str, float] = field(default_factory=dict)
    mutate: str | None = None

    def __post_init__(self) -> None:
        unknown = set(self.tolerances) - set(DEFAULT_TOLERANCES)
        if unknown:
            raise ValueError(f"unknown tolerance names {sorted(unknown)}; known: {sorted(DEFAULT_TOLERANCES)}")
        self.param = ModularParameter.validated(self.b)

    def tol(self, family: str) -> float:
        return self.tolerances.get(family, DEFAULT_TOLERANCES[family])

    def to_json(self) -> dict:
        q = self.quad
        return {
            "b": self.b,
            "seed": self.seed,
            "quad": {
                "truncation": q.truncation,
                "indent_radius": q.radius_for(self.param),
                "panel_count": q.panel_count,
                "target_abs_error": q.target_abs_error,
            },
            "tolerances": {k: self.tol(k) for k in sorted(DEFAULT_TOLERANCES)},
            "mutate": self.mutate,
        }


class _Collector:
    def __init__(self, cfg: SuiteConfig):
        self.cfg = cfg
        self.checks: list[Check] = []

    def add(self, name: str, family: str, residual: float, ref: str) -> None:
        tol = self.cfg.tol(family)
        residual = float(residual)
        ok = math.isfinite(residual) and residual <= tol
        self.checks.append(Check(name, ok, residual, tol, ref))

    def guarded(self, name: str, family: str, ref: str, fn: Callable[[], float]) -> None:
        """Record ``fn()`` as a residual; library errors become a failed check."""
        try:
            residual = fn()
        except ModularDoubleError:
            residual = math.inf
        self.add(name, family, residual, ref)


# ---------------------------------------------------------------- dilog


def _strip(param: ModularParameter, z, quad: QuadratureSpec) -> np.ndarray:
    vals, _ = _strip_values(param, np.asarray(z, dtype=complex), quad)
    return vals


def _strip_points(rng, lo: float, hi: float, n: int, im: float = 3.0) -> np.ndarray:
    return rng.uniform(lo, hi, n) + 1j * rng.uniform(-im, im, n)


def _functional_equation(param, quad, rng, shift: float, n: int = 100) -> float:
    """Both z and z + shift are evaluated straight from the integral, no reduction.

    The residual is relative to the larger of |G(z)| and |G(z + shift)|: for
    Im z < 0 the step factor grows like e^{2 pi shift |Im z|} and dividing by
    |G(z)| alone would amplify ordinary relative error by that factor.
    """
    Q = param.Q
    m = dilog.STRIP_MARGIN * Q
    z = _strip_points(rng, m, Q - m - shift, n)
    g0 = _strip(param, z, quad)
    g1 = _strip(param, z + shift, quad)
    pred = (1 - np.exp(2j * math.pi * shift * z)) * g0
    return float((np.abs(g1 - pred) / np.maximum(np.abs(g0), np.abs(g1))).max())


def _reflection(param, quad, rng, n: int = 50) -> float:
    Q = param.Q
    z = _strip_points(rng, 0.1 * Q, 0.9 * Q, n)
    target = np.exp(1j * math.pi * z * (z - Q))
    prod = _strip(param, z, quad) * _strip(param, Q - z, quad)
    return float((np.abs(prod - target) / np.abs(target)).max())


def _conjugation(param, quad, rng, n: int = 50) -> float:
    Q = param.Q
    z = _strip_points(rng, 0.1 * Q, 0.9 * Q, n)
    prod = np.conj(_strip(param, z, quad)) * _strip(param, Q - np.conj(z), quad)
    return float(np.abs(prod - 1).max())


def _unitarity(param, quad) -> float:
    x = np.linspace(-3, 3, 25)
    return float(np.abs(np.abs(_strip(param, param.Q / 2 + 1j * x, quad)) - 1).max())


def _asymptotics(param, quad) -> tuple[float, float, float]:
    """(deviation at y = 12, worst monotonicity violation, worst lower-half deviation)."""
    Q = param.Q
    zeta = zeta_b(param)
    up = []
    for y in (5.0, 8.0, 12.0):
        g = gb_eval(param, Q / 2 + 1j * y, quad)
        up.append((abs(g.value - zeta.conjugate()), g.abs_error_estimate))
    # decreasing up to the combined error estimates (roundoff floor at large y)
    violation = max(
        0.0, *(up[k + 1][0] - up[k][0] - up[k][1] - up[k + 1][1] for k in range(len(up) - 1))
    )
    low = 0.0
    for y in (-5.0, -8.0):
        z = Q / 2 + 1j * y
        ref = zeta * np.exp(1j * math.pi * z * (z - Q))
        low = max(low, abs(gb_eval(param, z, quad).value - ref) / abs(ref))
    return up[-1][0], violation, low


def _error_honesty(param, quad, rng, n: int = 40) -> float:
    """Fraction of samples whose drift under panel doubling exceeds the estimate."""
    Q = param.Q
    m = dilog.STRIP_MARGIN * Q
    z = _strip_points(rng, m, Q - m, n)
    v1, e1 = _strip_values(param, z, quad)
    v2, _ = _strip_values(param, z, quad.refined())
    return float(np.mean(np.abs(v1 - v2) > e1))


def dilog_suite(cfg: SuiteConfig) -> list[Check]:
    c = _Collector(cfg)
    param, quad = cfg.param, cfg.quad
    rng = np.random.default_rng(cfg.seed)
    b = param.b
    c.guarded("dilog.functional_equation.b_shift", "functional_equation",
              "shift equation G(z+b) = (1 - e^{2 pi i b z}) G(z)",
              lambda: _functional_equation(param, quad, rng, b))
    c.guarded("dilog.functional_equation.inv_b_shift", "functional_equation",
              "shift equation G(z+1/b) = (1 - e^{2 pi i z/b}) G(z)",
              lambda: _functional_equation(param, quad, rng, 1 / b))
    c.guarded("dilog.reflection", "reflection",
              "reflection G(z) G(Q-z) = e^{pi i z(z-Q)}",
              lambda: _reflection(param, quad, rng))
    c.guarded("dilog.conjugation", "conjugation",
              "conjugation conj G(z) = 1/G(Q - conj z)",
              lambda: _conjugation(param, quad, rng))
    c.guarded("dilog.unitarity.critical_line", "unitarity",
              "unit modulus on Re z = Q/2", lambda: _unitarity(param, quad))
    try:
        top, violation, low = _asymptotics(param, quad)
    except ModularDoubleError:
        top = violation = low = math.inf
    c.add("dilog.asymptotic.upper_y12", "asymptotic", top, "G -> conj(zeta_b) as Im z -> +inf")
    c.add("dilog.asymptotic.upper_monotone", "exact", violation,
          "deviation from conj(zeta_b) decreasing in Im z (within error estimates)")
    c.add("dilog.asymptotic.lower", "asymptotic", low, "G -> zeta_b e^{pi i z(z-Q)} as Im z -> -inf")
    for x in (0.5, 1.0, 2.0):
        c.guarded(f"dilog.fourier.x={x:g}", "fourier",
                  "Fourier transform of e^{-pi i t^2}/G(Q+it) equals g_b(x)",
                  lambda x=x: ft_gb_check(param, x, quad).residual)
    c.guarded("dilog.error_honesty", "error_honesty",
              "error estimate bounds drift under panel doubling",
              lambda: _error_honesty(param, quad, rng))
    return c.checks


# ---------------------------------------------------------------- qweyl


def _random_element(rng, n_vars: int, n_params: int, terms: int) -> OperatorElement:
    monos = []
    for _ in range(terms):
        m = random_monomial(rng, n_vars, n_params, 2)
        a, cc, d = (int(v) for v in rng.integers(-4, 5, size=3))
        monos.append(m.with_coeff(PhaseCoefficient.phase(a, cc, d, int(rng.integers(1, 4)))))
    return OperatorElement(monos, (n_vars, n_params))


def qweyl_suite(cfg: SuiteConfig) -> list[Check]:
    c = _Collector(cfg)
    rng = np.random.default_rng(cfg.seed)
    n_vars, n_params = 2, 1
    assoc = antisym = 0
    for _ in range(500):
        m1, m2, m3 = (random_monomial(rng, n_vars, n_params, 4) for _ in range(3))
        assoc += mono_mul(mono_mul(m1, m2), m3) != mono_mul(m1, mono_mul(m2, m3))
        a, cc, d = exchange_grading(m1, m2)
        swapped = mono_mul(m2, m1)
        expected = swapped.with_coeff(swapped.coeff * PhaseCoefficient.phase(a, cc, d))
        antisym += mono_mul(m1, m2) != expected
    c.add("qweyl.associativity", "exact", assoc, "associativity of the q-Weyl product")
    c.add("qweyl.phase_antisymmetry", "exact", antisym, "m1 m2 = (exchange phase) m2 m1")
    idem = div = invol = 0
    q = PhaseCoefficient.q
    divisors = [q(1) - q(-1), q(2) - q(-2), q(1, dual=True) - q(-1, dual=True), q(1) + q(-1)]
    for _ in range(50):
        e = _random_element(rng, n_vars, n_params, 3)
        idem += OperatorElement(e.monomials, e.dims) != e
        delta = divisors[int(rng.integers(len(divisors)))]
        try:
            div += divide_exact(delta * e, delta) != e
        except ModularDoubleError:
            div += 1
        invol += substitute_dual(substitute_dual(e)) != e
    c.add("qweyl.canonical_idempotence", "exact", idem, "canonical form is a fixed point")
    c.add("qweyl.divide_roundtrip", "exact", div, "exact division inverts multiplication")
    c.add("qweyl.dual_involution", "exact", invol, "b <-> 1/b substitution is an involution")
    return c.checks


# ---------------------------------------------------------------- representations

_REL_REF = "defining relation of the rescaled quantum group"


def _exact_relations(c: _Collector, rep, prefix: str, mutate: str | None) -> None:
    for e in check_defining_relations(rep, mutate).entries:
        c.add(f"{prefix}.{e.relation}", "exact", len(e.difference), _REL_REF)


def _numeric_relations(c: _Collector, rep, prefix: str, b: float) -> None:
    pairs = [(i, j) for i in range(1, rep.rank + 1) for j in range(1, rep.rank + 1)]
    for name in ("KE", "KF", "KK", "EF"):
        for i, j in pairs:
            c.guarded(f"{prefix}.gaussian.{name}[{i},{j}]", "gaussian_relation",
                      "relation evaluated on Gaussian test functions",
                      lambda name=name, i=i, j=j: numeric_relation_check(rep, name, b, i=i, j=j))
    for name in ("SerreE", "SerreF"):
        for i, j in pairs:
            if i != j:
                c.guarded(f"{prefix}.gaussian.{name}[{i},{j}]", "gaussian_relation",
                          "Serre relation evaluated on Gaussian test functions",
                          lambda name=name, i=i, j=j: numeric_relation_check(rep, name, b, i=i, j=j))


def _rep_suite(cfg: SuiteConfig, build) -> list[Check]:
    c = _Collector(cfg)
    rep = build()
    _exact_relations(c, rep, rep.name, cfg.mutate)
    for e in lambda_centrality(rep).entries:
        c.add(f"{rep.name}.lambda_central.{e.relation}", "exact", len(e.difference),
              "spectral parameters are central")
    _numeric_relations(c, rep, rep.name, cfg.param.b)
    if rep.rank > 1:
        _lusztig_checks(c, rep)
    return c.checks


def _lusztig_checks(c: _Collector, rep) -> None:
    ref = "Lusztig non-simple root vector"
    try:
        e12 = lusztig_T(rep, 1, 2)
    except ModularDoubleError:
        c.add(f"{rep.name}.lusztig.eps12_divisible", "exact", math.inf, ref)
        return
    c.add(f"{rep.name}.lusztig.eps12_divisible", "exact", 0, ref)
    bad = sum(not m.coeff.is_unit_phase() for m in e12)
    c.add(f"{rep.name}.lusztig.eps12_unit_phases", "exact", bad, ref + " is positive")
    diff = substitute_dual(e12) - lusztig_T(dual_rep(rep), 1, 2)
    c.add(f"{rep.name}.lusztig.eps12_dual_match", "exact", len(diff), ref + " under b <-> 1/b")


def sl2_suite(cfg: SuiteConfig) -> list[Check]:
    return _rep_suite(cfg, build_sl2)


def sl3_suite(cfg: SuiteConfig) -> list[Check]:
    return _rep_suite(cfg, build_sl3)


def duality_suite(cfg: SuiteConfig) -> list[Check]:
    c = _Collector(cfg)
    for build in (build_sl2, build_sl3):
        rep = build()
        dual = dual_rep(rep)
        prefix = f"{rep.name}.dual"
        _exact_relations(c, dual, prefix, cfg.mutate)
        direct = build(dual=True)
        mismatch = sum(len(dual.gens[k] - direct.gens[k]) for k in sorted(rep.gens))
        c.add(f"{prefix}.substitution_matches_build", "exact", mismatch,
              "dual generators are the b <-> 1/b images")
        for e in cross_commutation_check(rep, dual).entries:
            c.add(f"{rep.name}.cross.{e.relation}", "exact", len(e.difference),
                  "b and 1/b halves commute up to sign")
        c.guarded(f"{prefix}.gaussian.EF[1,1]", "gaussian_relation",
                  "dual relation evaluated on Gaussian test functions",
                  lambda dual=dual: numeric_relation_check(dual, "EF", cfg.param.b))
    return c.checks


# ---------------------------------------------------------------- crosscheck


def _wavepacket_unitarity(param, quad) -> float:
    worst = 0.0
    for lam in (0.3, 1.0):
        for t in np.linspace(-3, 3, 13):
            worst = max(worst, abs(abs(wavepacket_coeff(param, lam, t, quad).value) - 1))
    return worst


def _wavepacket_step(param, quad) -> float:
    worst = 0.0
    for lam in (0.3, 1.0):
        for t in (-1.5, 0.3, 1.1, 2.4):
            w0 = wavepacket_coeff(param, lam, t, quad).value
            w1 = wavepacket_coeff(param, lam, t - 1j * param.b, quad).value
            worst = max(worst, abs(w1 - w0 * wavepacket_step_factor(param, lam, t)) / abs(w1))
    return worst


def _wavepacket_delta(param, quad, lam: float = 0.5) -> float:
    exact = wavepacket_coeff(param, lam, -1j * param.b, quad).value
    est, _ = delta_limit_coefficient(build_sl2(), param.b, [lam])
    return abs(est - exact) / abs(exact)


def crosscheck_suite(cfg: SuiteConfig) -> list[Check]:
    c = _Collector(cfg)
    param, quad = cfg.param, cfg.quad
    c.add("crosscheck.monomial_products", "product_crossval",
          cross_validate_products(cfg.seed, 200, param.b),
          "symbolic product equals sequential action on Gaussians")
    _numeric_relations(c, build_sl2(), "crosscheck.sl2", param.b)
    for n in range(1, 6):
        c.guarded(f"crosscheck.qbinom.n={n}", "qbinom",
                  "q-binomial expansion equals q-beta at integer points",
                  lambda n=n: max(qbinom_operator_check(param, n, quad).values()))
    c.guarded("crosscheck.wavepacket.unitarity", "wavepacket_unitarity",
              "wavepacket coefficient has unit modulus for real t",
              lambda: _wavepacket_unitarity(param, quad))
    c.guarded("crosscheck.wavepacket.step", "wavepacket_step",
              "wavepacket coefficient obeys one shift step",
              lambda: _wavepacket_step(param, quad))
    c.guarded("crosscheck.wavepacket.delta_limit", "wavepacket_delta",
              "narrow-Gaussian limit of eps action equals coefficient at t = -ib",
              lambda: _wavepacket_delta(param, quad))
    return c.checks


SUITE_FUNCS: dict[str, Callable[[SuiteConfig], list[Check]]] = {
    "dilog": dilog_suite,
    "qweyl": qweyl_suite,
    "sl2": sl2_suite,
    "sl3": sl3_suite,
    "duality": duality_suite,
    "crosscheck": crosscheck_suite,
}


def run_suite(name: str, cfg: SuiteConfig) -> list[Check]:
    """Run one suite (or ``all``) and return its checks sorted by name."""
    if name not in SUITES:
        raise ValueError(f"unknown suite {name!r}; choose from {SUITES}")
    names = list(SUITE_FUNCS) if name == "all" else [name]
    checks = [chk for n in names for chk in SUITE_FUNCS[n](cfg)]
    return sorted(checks, key=lambda chk: chk.name)


def build_report(suite: str, cfg: SuiteConfig, checks: list[Check]) -> dict:
    return {
        "schema": 1,
        "config": {"suite": suite, **cfg.to_json()},
        "checks": [chk.to_json() for chk in sorted(checks, key=lambda chk: chk.name)],
    }


def summary_line(checks: list[Check]) -> str:
    failed = sum(not chk.passed for chk in checks)
    total = len(checks)
    return f"PASS {total}/{total}" if failed == 0 else f"FAIL {failed}/{total}"
