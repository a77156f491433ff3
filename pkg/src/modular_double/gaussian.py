"""Closed-form action of Weyl monomials on Gaussian test functions.

This is the analytic counterpart of :mod:`modular_double.qweyl`: a monomial
``exp(pi (X u + Y p))`` with ``p = (2 pi i)^-1 d/du`` acts as
``exp(-i pi X Y / 4) * exp(pi X u) * f(u - i Y / 2)``, which maps a Gaussian
``C exp(-a u^2 + beta u)`` to another Gaussian.  Products are evaluated by
applying factors one after another, never by multiplying symbolically.
"""

from __future__ import annotations

import cmath
import itertools
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .dilog import DEFAULT_QUAD, gb_eval, qbeta
from .params import ModularParameter, QuadratureSpec
from .qweyl import OperatorElement, PhaseCoefficient, WeylMonomial, WeylSpace, mono_mul
from .reps import PositiveRep

GRID_1D = (-2.0, -1.0, -0.5, 0.0, 0.5, 1.0, 2.0)
TEST_WIDTHS = (1.0, 2.0)
DELTA_WIDTHS = (1e2, 1e3, 1e4)


@dataclass(frozen=True)
class GaussianWave:
    """``C * exp(sum_k (-a_k u_k^2 + beta_k u_k))`` with ``C = exp(log_amp)``.

    The amplitude is kept as a logarithm: imaginary shifts of narrow
    Gaussians produce factors like exp(a b^2) that overflow doubles.
    """

    a: tuple[float, ...]
    beta: tuple[complex, ...]
    log_amp: complex = 0j

    def __post_init__(self) -> None:
        if len(self.a) != len(self.beta):
            raise ValueError("width and linear coefficient vectors differ in length")
        if any(not ak > 0 for ak in self.a):
            raise ValueError("Gaussian widths must be positive")

    @classmethod
    def standard(cls, n: int, width: float = 1.0, beta: Sequence[complex] | None = None) -> "GaussianWave":
        return cls((width,) * n, tuple(beta) if beta is not None else (0j,) * n)

    @classmethod
    def with_amplitude(cls, a, beta, C: complex) -> "GaussianWave":
        return cls(tuple(a), tuple(beta), cmath.log(C))

    @property
    def C(self) -> complex:
        return cmath.exp(self.log_amp)

    @property
    def n(self) -> int:
        return len(self.a)

    def shifted(self, k: int, s: complex) -> "GaussianWave":
        """u_k -> u_k - s."""
        a, bk = self.a[k], self.beta[k]
        beta = list(self.beta)
        beta[k] = bk + 2 * a * s
        return GaussianWave(self.a, tuple(beta), self.log_amp - a * s * s - bk * s)

    def times_exp(self, k: int, s: complex) -> "GaussianWave":
        """Multiply by exp(s u_k)."""
        beta = list(self.beta)
        beta[k] += s
        return GaussianWave(self.a, tuple(beta), self.log_amp)

    def scaled(self, c: complex) -> "GaussianWave":
        return GaussianWave(self.a, self.beta, self.log_amp + cmath.log(c))

    def __call__(self, points) -> np.ndarray:
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        a = np.asarray(self.a)
        beta = np.asarray(self.beta, dtype=complex)
        return np.exp(self.log_amp + (-a * pts**2 + beta * pts).sum(axis=-1))

    def integral(self) -> complex:
        log = self.log_amp
        for a, bk in zip(self.a, self.beta):
            log += 0.5 * math.log(math.pi / a) + bk * bk / (4 * a)
        return cmath.exp(log)


def monomial_factors(m: WeylMonomial, b: float) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Real multiplication and shift rates (X, Y) and parameter rates for base b."""
    X = b * np.asarray(m.xi, float) + np.asarray(m.xi_t, float) / b
    Y = b * np.asarray(m.eta, float) + np.asarray(m.eta_t, float) / b
    L = b * np.asarray(m.nu, float) + np.asarray(m.nu_t, float) / b
    return X, Y, L


def apply_monomial(
    m: WeylMonomial, f: GaussianWave, b_value: float, lam: Sequence[float] = ()
) -> GaussianWave:
    X, Y, L = monomial_factors(m, b_value)
    if len(lam) != len(L):
        raise ValueError(f"need {len(L)} parameter values, got {len(lam)}")
    g = f
    for k in range(f.n):
        if Y[k]:
            g = g.shifted(k, 0.5j * Y[k])
        if X[k]:
            g = g.times_exp(k, math.pi * X[k])
    log_const = -0.25j * math.pi * float(X @ Y) + math.pi * float(L @ np.asarray(lam, float))
    return GaussianWave(g.a, g.beta, g.log_amp + log_const).scaled(m.coeff.evaluate(b_value))


def apply_element(
    e: OperatorElement, waves: Sequence[GaussianWave], b_value: float, lam: Sequence[float] = ()
) -> list[GaussianWave]:
    return [apply_monomial(m, f, b_value, lam) for f in waves for m in e]


def apply_word(
    word: Sequence[OperatorElement], f: GaussianWave, b_value: float, lam: Sequence[float] = ()
) -> list[GaussianWave]:
    """Apply ``word[0] * word[1] * ... * word[-1]`` to f (rightmost first)."""
    waves = [f]
    for e in reversed(word):
        waves = apply_element(e, waves, b_value, lam)
    return waves


def evaluate_sum(waves: Sequence[GaussianWave], points) -> np.ndarray:
    total = np.zeros(np.atleast_2d(points).shape[0], dtype=complex)
    for w in waves:
        total += w(points)
    return total


def grid(n: int, axis: Sequence[float] = GRID_1D) -> np.ndarray:
    return np.array(list(itertools.product(axis, repeat=n)))


@dataclass
class ResidualRow:
    relation: str
    b: float
    wave_id: str
    gridpoint: tuple[float, ...]
    residual: float

    def csv_row(self) -> list:
        return [self.relation, self.b, self.wave_id, " ".join(f"{x:g}" for x in self.gridpoint), self.residual]


CSV_HEADER = ("relation", "b", "wave_id", "gridpoint", "residual")


def relation_sides(
    rep: PositiveRep, name: str, q_value: complex, i: int = 1, j: int = 1
) -> tuple[list[tuple[complex, list[OperatorElement]]], list[tuple[complex, list[OperatorElement]]]]:
    """Left and right sides of a named relation as weighted words."""
    E, F, K = rep.E, rep.F, rep.K
    a = rep.cartan[i - 1][j - 1]
    q = q_value
    if name == "KE":
        return [(1, [K(i), E(j)])], [(q**a, [E(j), K(i)])]
    if name == "KE_wrong":
        return [(1, [K(i), E(j)])], [(q ** (a - 1), [E(j), K(i)])]
    if name == "KF":
        return [(1, [K(i), F(j)])], [(q ** (-a), [F(j), K(i)])]
    if name == "KK":
        return [(1, [K(i), K(j)])], [(1, [K(j), K(i)])]
    if name == "EF":
        lhs = [(1, [E(i), F(j)]), (-1, [F(j), E(i)])]
        if i != j:
            return lhs, []
        c = q - 1 / q
        return lhs, [(c, [K(i).inverse()]), (-c, [K(i)])]
    if name in ("SerreE", "SerreF"):
        if i == j:
            raise ValueError("Serre relations need i != j")
        X, Y = (E(i), E(j)) if name == "SerreE" else (F(i), F(j))
        return [(1, [X, X, Y]), (-(q + 1 / q), [X, Y, X]), (1, [Y, X, X])], []
    raise ValueError(f"unsupported relation {name!r}")


RELATIONS = ("KE", "KF", "KK", "EF", "SerreE", "SerreF", "KE_wrong")


def _side_values(side, f, b, lam, pts) -> tuple[np.ndarray, np.ndarray]:
    """Sum of the weighted words and the sum of their magnitudes."""
    total = np.zeros(pts.shape[0], dtype=complex)
    mags = np.zeros(pts.shape[0])
    for c, word in side:
        vals = c * evaluate_sum(apply_word(word, f, b, lam), pts)
        total += vals
        mags += np.abs(vals)
    return total, mags


def numeric_relation_check(
    rep: PositiveRep,
    relation_name: str,
    b_value: float,
    waves: Sequence[GaussianWave] | None = None,
    gridpoints: np.ndarray | None = None,
    *,
    i: int = 1,
    j: int = 1,
    lam: Sequence[float] | None = None,
    rows: list[ResidualRow] | None = None,
) -> float:
    """Max normwise-relative residual of a relation evaluated on Gaussians.

    For each wave the residual is ``|L - R|`` over the grid divided by the
    largest summed magnitude of the individual words, so relations whose
    right side is zero (Serre) are measured against the size of their terms.
    """
    n = rep.n_vars
    waves = waves if waves is not None else [GaussianWave.standard(n, w) for w in TEST_WIDTHS]
    pts = gridpoints if gridpoints is not None else grid(n)
    lam = lam if lam is not None else [0.5 + 0.25 * k for k in range(rep.n_params)]
    q_value = cmath.exp(1j * math.pi * (1 / b_value**2 if rep.dual_flag else b_value**2))
    lhs, rhs = relation_sides(rep, relation_name, q_value, i, j)
    worst = 0.0
    for w_id, f in enumerate(waves):
        L, Lmag = _side_values(lhs, f, b_value, lam, pts)
        R, Rmag = _side_values(rhs, f, b_value, lam, pts)
        scale = max(Lmag.max(), Rmag.max(), np.finfo(float).tiny)
        res = np.abs(L - R) / scale
        worst = max(worst, float(res.max()))
        if rows is not None:
            for p, r in zip(pts, res):
                rows.append(ResidualRow(f"{relation_name}[{i},{j}]", b_value, f"wave{w_id}", tuple(p), float(r)))
    return worst


@dataclass(frozen=True)
class WavepacketCoeff:
    b: float
    lam: float
    t: complex
    value: complex


def wavepacket_coeff(
    b: ModularParameter | float, lam: float, t: complex, quad: QuadratureSpec = DEFAULT_QUAD
) -> WavepacketCoeff:
    """Coefficient of eps^{i t / b} on a delta state:
    ``exp(i pi (t - 2 lam) t / 2) G_b(Q/2 - i lam + i t) / G_b(Q/2 - i lam)``."""
    param = b if isinstance(b, ModularParameter) else ModularParameter(float(b))
    if not lam > 0:
        raise ValueError("lambda must be positive")
    t = complex(t)
    z0 = 0.5 * param.Q - 1j * lam
    num = gb_eval(param, z0 + 1j * t, quad, strict=True)
    den = gb_eval(param, z0, quad, strict=True)
    pref = cmath.exp(0.5j * math.pi * (t - 2 * lam) * t)
    return WavepacketCoeff(param.b, lam, t, pref * num.value / den.value)


def wavepacket_step_factor(b: ModularParameter | float, lam: float, t: complex) -> complex:
    """W(t - i b) / W(t) from one b-step of the functional equation."""
    param = b if isinstance(b, ModularParameter) else ModularParameter(float(b))
    bb = param.base
    t = complex(t)
    s = t - 1j * bb
    pref = cmath.exp(0.5j * math.pi * ((s - 2 * lam) * s - (t - 2 * lam) * t))
    z = 0.5 * param.Q - 1j * lam + 1j * t
    return pref * (1 - cmath.exp(2j * math.pi * bb * z))


def richardson(widths: Sequence[float], values: Sequence[complex]) -> complex:
    """Extrapolate M(a) = M_inf + c_1/a + ... + c_{k-1}/a^{k-1} to a -> infinity."""
    h = 1.0 / np.asarray(widths, float)
    V = np.vander(h, len(h), increasing=True)
    return complex(np.linalg.solve(V.astype(complex), np.asarray(values, complex))[0])


def delta_limit_coefficient(
    rep: PositiveRep, b_value: float, lam: Sequence[float], widths: Sequence[float] = DELTA_WIDTHS
) -> tuple[complex, list[complex]]:
    """Total mass of eps applied to normalised Gaussians sqrt(a/pi) exp(-a u^2), extrapolated in 1/a."""
    vals = []
    for a in widths:
        f = GaussianWave((a,), (0j,), 0.5 * math.log(a / math.pi))
        vals.append(sum(w.integral() for w in apply_element(rep.E(1), [f], b_value, lam)))
    return richardson(widths, vals), vals


def ordered_coefficient_shift(n: int, k: int) -> PhaseCoefficient:
    """q^{k(n-k)}: converts the Weyl-symmetric coefficient of U^k V^{n-k} to the V^{n-k} U^k order."""
    return PhaseCoefficient.q(k * (n - k))


def binomial_expansion(n: int) -> tuple[WeylSpace, dict[int, PhaseCoefficient]]:
    """Exact (V + U)^n with U = exp(2 pi b u), V = exp(2 pi b p), so that U V = q^2 V U.

    Returns the V^{n-k} U^k-ordered coefficient for each k.
    """
    S = WeylSpace(["u"])
    U = S.element({"u": 2})
    V = S.element({"p": 2})
    power = (V + U) ** n
    coeffs = {}
    for m in power:
        k = m.xi[0] // 2
        coeffs[k] = m.coeff * ordered_coefficient_shift(n, k)
    return S, coeffs


def qbinom_operator_check(
    b: ModularParameter | float, n: int, quad: QuadratureSpec = DEFAULT_QUAD
) -> dict[int, float]:
    """Relative deviation, per k, between exact expansion and the q-beta continuation at (n b, k b)."""
    if not 1 <= n <= 6:
        raise ValueError("n must be between 1 and 6")
    param = b if isinstance(b, ModularParameter) else ModularParameter(float(b))
    _, coeffs = binomial_expansion(n)
    out = {}
    for k in range(n + 1):
        exact = coeffs.get(k, PhaseCoefficient.zero()).evaluate(param.base)
        cont = qbeta(param, n * param.base, k * param.base, quad)
        out[k] = abs(exact - cont) / max(abs(cont), np.finfo(float).tiny)
    return out


def random_monomial(rng: np.random.Generator, n_vars: int, n_params: int, span: int = 4) -> WeylMonomial:
    draw = lambda k: tuple(int(x) for x in rng.integers(-span, span + 1, size=k))  # noqa: E731
    return WeylMonomial(
        draw(n_vars), draw(n_vars), draw(n_params), draw(n_vars), draw(n_vars), draw(n_params)
    )


def cross_validate_products(
    seed: int = 0, pairs: int = 200, b_value: float = 0.7, n_vars: int = 2, n_params: int = 1
) -> float:
    """Max relative gap between ``mono_mul(m1, m2)`` and applying m2 then m1 to a random Gaussian.

    Exponents (including the 1/b halves) are drawn from [-2, 2]; three grid
    points per variable.
    """
    rng = np.random.default_rng(seed)
    pts = grid(n_vars, (-0.5, 0.0, 0.5))
    worst = 0.0
    for _ in range(pairs):
        m1 = random_monomial(rng, n_vars, n_params, 2)
        m2 = random_monomial(rng, n_vars, n_params, 2)
        f = GaussianWave(
            tuple(rng.uniform(1.0, 2.0, n_vars)),
            tuple(rng.normal(size=n_vars) + 1j * rng.normal(size=n_vars)),
        )
        lam = rng.uniform(0.1, 1.0, n_params)
        direct = apply_monomial(mono_mul(m1, m2), f, b_value, lam)(pts)
        seq = apply_monomial(m1, apply_monomial(m2, f, b_value, lam), b_value, lam)(pts)
        worst = max(worst, float((np.abs(direct - seq) / np.abs(seq)).max()))
    return worst
