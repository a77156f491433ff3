"""Numerical evaluation of the quantum dilogarithm G_b and its relatives.

G_b is computed from its integral representation on the strip
``0 < Re z < Q`` and continued to the plane with the b-step functional
equation ``G_b(z + b) = (1 - exp(2 pi i b z)) G_b(z)``.  The b**-1 step
equation is never used internally so it stays available as an
independent check.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.special import erfc

from .errors import MarginViolation, NonConvergence, PoleEvaluation, UnresolvablePole
from .params import ModularParameter, QuadratureSpec

GL_ORDER = 16
LATTICE_TOL = 1e-9
STRIP_MARGIN = 0.05
MAX_REFINEMENTS = 3
# oscillation budget per panel: |omega| * panel_length
PHASE_PER_PANEL = 10.0
_CHUNK = 2_000_000

DEFAULT_QUAD = QuadratureSpec()


@dataclass(frozen=True)
class GbValue:
    value: complex | None
    abs_error_estimate: float
    at_pole: bool = False
    at_zero: bool = False

    def __post_init__(self) -> None:
        if self.at_pole and self.at_zero:
            raise ValueError("a point cannot be both a pole and a zero")

    def to_json(self) -> dict:
        val = self.value
        return {
            "re": None if val is None else val.real,
            "im": None if val is None else val.imag,
            "abs_err": self.abs_error_estimate,
            "at_pole": self.at_pole,
            "at_zero": self.at_zero,
        }


def _as_param(param: ModularParameter | float) -> ModularParameter:
    return param if isinstance(param, ModularParameter) else ModularParameter(float(param))


def zeta_b(param: ModularParameter | float) -> complex:
    """exp(i pi/2 ((b^2 + b^-2)/6 + 1/2)); symmetric under b -> 1/b.

    A bare float is accepted for any ``b > 0`` (including ``b = 1``).
    """
    b = param.b if isinstance(param, ModularParameter) else float(param)
    if not b > 0:
        raise ValueError("b must be positive")
    return cmath.exp(0.5j * math.pi * ((b * b + 1.0 / (b * b)) / 6.0 + 0.5))


@lru_cache(maxsize=None)
def _gauss_legendre(order: int) -> tuple[np.ndarray, np.ndarray]:
    return np.polynomial.legendre.leggauss(order)


def _panels(a: float, c: float, n: int) -> tuple[np.ndarray, np.ndarray]:
    x, w = _gauss_legendre(GL_ORDER)
    edges = np.linspace(a, c, n + 1)
    half = 0.5 * np.diff(edges)
    mid = 0.5 * (edges[1:] + edges[:-1])
    nodes = (mid[:, None] + half[:, None] * x[None, :]).ravel()
    weights = (half[:, None] * w[None, :]).ravel()
    return nodes, weights


def _indented_line(
    left: float, right: float, radius: float, n_left: int, n_right: int, n_arc: int
) -> tuple[np.ndarray, np.ndarray]:
    """Nodes and complex weights on [-left, -r] + upper semicircle + [r, right]."""
    tl, wl = _panels(-left, -radius, n_left)
    tr, wr = _panels(radius, right, n_right)
    th, wth = _panels(math.pi, 0.0, n_arc)
    ta = radius * np.exp(1j * th)
    wa = 1j * ta * wth
    nodes = np.concatenate([tl.astype(complex), ta, tr.astype(complex)])
    weights = np.concatenate([wl.astype(complex), wa, wr.astype(complex)])
    return nodes, weights


def _integrand(t: np.ndarray, z: np.ndarray, b: float) -> np.ndarray:
    """exp(pi t z) / ((e^{pi b t} - 1)(e^{pi t/b} - 1) t) on a (z, t) grid."""
    Q = b + 1.0 / b
    tt = t[None, :]
    zz = z[:, None]
    out = np.empty((z.size, t.size), dtype=complex)
    pos = t.real > 0
    if pos.any():
        tp = tt[:, pos]
        den = np.expm1(-math.pi * b * tp) * np.expm1(-math.pi * tp / b) * tp
        out[:, pos] = np.exp(math.pi * tp * (zz - Q)) / den
    neg = ~pos
    if neg.any():
        tn = tt[:, neg]
        den = np.expm1(math.pi * b * tn) * np.expm1(math.pi * tn / b) * tn
        out[:, neg] = np.exp(math.pi * tn * zz) / den
    return out


def _tail_bound(T: float, rate: np.ndarray, b: float) -> np.ndarray:
    den = (-math.expm1(-math.pi * b * T)) * (-math.expm1(-math.pi * T / b)) * T
    return np.exp(-math.pi * T * rate) / (math.pi * rate * den)


def _strip_integral(
    b: float, z: np.ndarray, quad: QuadratureSpec, radius: float
) -> tuple[np.ndarray, np.ndarray]:
    """Contour integral and its error bound for a batch of strip points."""
    Q = b + 1.0 / b
    eps = quad.target_abs_error
    left_rate = np.maximum(z.real, 1e-3)
    right_rate = np.maximum(Q - z.real, 1e-3)
    decay = math.log(10.0 / eps) / math.pi
    # segment lengths come from the decay bound, even past quad.truncation
    T_left = max(decay / left_rate.min(), 2 * radius)
    T_right = max(decay / right_rate.min(), 2 * radius)
    im_max = float(np.abs(z.imag).max()) if z.size else 0.0
    base_len = max(quad.truncation - radius, 1e-12)

    def counts(T: float, panels: int) -> int:
        length = T - radius
        by_density = math.ceil(panels * length / base_len)
        by_phase = math.ceil(length * math.pi * im_max / PHASE_PER_PANEL)
        return max(4, by_density, by_phase)

    def integrate(panels: int) -> tuple[np.ndarray, np.ndarray]:
        t, w = _indented_line(
            T_left, T_right, radius,
            counts(T_left, panels), counts(T_right, panels), max(4, panels // 8),
        )
        vals = np.empty(z.size, dtype=complex)
        mags = np.empty(z.size)
        step = max(1, _CHUNK // t.size)
        for s in range(0, z.size, step):
            f = _integrand(t, z[s:s + step], b) * w[None, :]
            vals[s:s + step] = f.sum(axis=1)
            mags[s:s + step] = np.abs(f).sum(axis=1)
        return vals, mags

    tails = _tail_bound(T_left, left_rate, b) + _tail_bound(T_right, right_rate, b)
    panels = quad.panel_count
    coarse, _ = integrate(panels)
    for _ in range(MAX_REFINEMENTS + 1):
        fine, mags = integrate(2 * panels)
        err = np.abs(fine - coarse) + tails + 16 * np.finfo(float).eps * mags
        if np.all(err <= eps):
            break
        panels *= 2
        coarse = fine
    return fine, err


def _strip_values(
    param: ModularParameter, z: np.ndarray, quad: QuadratureSpec, strict: bool = True
) -> tuple[np.ndarray, np.ndarray]:
    b = param.base
    integral, err = _strip_integral(b, z, quad, quad.radius_for(param))
    if strict and np.any(err > quad.target_abs_error):
        raise NonConvergence(
            f"log G_b error estimate {err.max():.3e} exceeds target {quad.target_abs_error:.1e}"
        )
    values = np.exp(-integral) / zeta_b(param)
    # err bounds the log, so |dG| <= |G| (e^err - 1)
    return values, np.abs(values) * np.expm1(err)


def _check_margin(param: ModularParameter, z: complex) -> None:
    Q = param.Q
    m = STRIP_MARGIN * Q
    if not m <= z.real <= Q - m:
        raise MarginViolation(f"Re z = {z.real} outside [{m:.4g}, {Q - m:.4g}]")


def gb_strip(
    param: ModularParameter | float, z: complex, quad: QuadratureSpec = DEFAULT_QUAD
) -> GbValue:
    """G_b(z) straight from the contour integral, for z inside the strip."""
    param = _as_param(param)
    z = complex(z)
    _check_margin(param, z)
    vals, errs = _strip_values(param, np.array([z]), quad)
    return GbValue(complex(vals[0]), float(errs[0]))


def _on_lattice(x: float, im: float, b: float) -> bool:
    """Is x + i*im within tolerance of n*b + m/b with n, m >= 0?"""
    if abs(im) > LATTICE_TOL or x < -LATTICE_TOL:
        return False
    for m in range(int(math.floor((x + LATTICE_TOL) * b)) + 1):
        n = (x - m / b) / b
        if n < -LATTICE_TOL:
            break
        if abs(n - round(n)) * b <= LATTICE_TOL:
            return True
    return False


def is_pole(param: ModularParameter | float, z: complex) -> bool:
    param = _as_param(param)
    z = complex(z)
    return _on_lattice(-z.real, z.imag, param.b)


def is_zero(param: ModularParameter | float, z: complex) -> bool:
    param = _as_param(param)
    z = complex(z)
    return _on_lattice(z.real - param.Q, z.imag, param.b)


def _reduce(param: ModularParameter, z: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Shift into the strip by b-steps; returns (w, factor) with G(z) = factor * G(w)."""
    b = param.base
    Q = param.Q
    k = np.rint((0.5 * Q - z.real) / b).astype(int)
    factor = np.ones(z.shape, dtype=complex)
    for j in range(int(k.max(initial=0))):
        sel = k > j
        factor[sel] /= 1.0 - np.exp(2j * math.pi * b * (z[sel] + j * b))
    for j in range(1, int(-k.min(initial=0)) + 1):
        sel = -k >= j
        factor[sel] *= 1.0 - np.exp(2j * math.pi * b * (z[sel] - j * b))
    return z + k * b, factor


def gb_eval_many(
    param: ModularParameter | float, z, quad: QuadratureSpec = DEFAULT_QUAD
) -> tuple[np.ndarray, np.ndarray]:
    """Vectorised G_b on arbitrary points that are not on the pole/zero lattice."""
    param = _as_param(param)
    z = np.asarray(z, dtype=complex).ravel()
    w, factor = _reduce(param, z)
    vals, errs = _strip_values(param, w, quad)
    return factor * vals, np.abs(factor) * errs


def gb_eval(
    param: ModularParameter | float,
    z: complex,
    quad: QuadratureSpec = DEFAULT_QUAD,
    *,
    strict: bool = False,
) -> GbValue:
    """G_b(z) anywhere in the plane, flagging the pole and zero lattices."""
    param = _as_param(param)
    z = complex(z)
    if is_pole(param, z):
        if strict:
            raise PoleEvaluation(f"G_b has a pole at z = {z}")
        return GbValue(None, math.inf, at_pole=True)
    if is_zero(param, z):
        return GbValue(0j, 0.0, at_zero=True)
    vals, errs = gb_eval_many(param, [z], quad)
    return GbValue(complex(vals[0]), float(errs[0]))


def little_gb(
    param: ModularParameter | float, x: float, quad: QuadratureSpec = DEFAULT_QUAD
) -> complex:
    """g_b(x) = conj(zeta_b) / G_b(Q/2 + log(x) / (2 pi i b)) for x > 0."""
    param = _as_param(param)
    if not x > 0:
        raise ValueError("g_b is defined for x > 0")
    z = 0.5 * param.Q + math.log(x) / (2j * math.pi * param.base)
    g = gb_eval(param, z, quad, strict=True)
    return zeta_b(param).conjugate() / g.value


def _zero_coords(param: ModularParameter, z: complex) -> tuple[int, int]:
    """(n, m) with z = Q + n*b + m/b, assuming z is on the zero lattice."""
    b = param.b
    x = z.real - param.Q
    for m in range(int(math.floor((x + LATTICE_TOL) * b)) + 1):
        n = (x - m / b) / b
        if abs(n - round(n)) * b <= LATTICE_TOL and n > -LATTICE_TOL:
            return int(round(n)), m
    raise ValueError("point is not on the lattice")


def zero_cofactor(param: ModularParameter | float, z: complex) -> complex:
    """G_b(z) / G_b(Q) for z = Q + n b + m/b, from the functional equations.

    Both zero-lattice values carry the same simple zero at Q, so the ratio is
    the finite product of the intermediate step factors.
    """
    param = _as_param(param)
    b = param.b
    Q = param.Q
    n, m = _zero_coords(param, complex(z))
    out = 1.0 + 0j
    for j in range(n):
        out *= 1.0 - cmath.exp(2j * math.pi * b * (Q + j * b))
    for ell in range(m):
        out *= 1.0 - cmath.exp(2j * math.pi / b * (Q + n * b + ell / b))
    return out


def qbeta(
    param: ModularParameter | float,
    t: complex,
    tau: complex,
    quad: QuadratureSpec = DEFAULT_QUAD,
) -> complex:
    """q-beta function G_b(Q+t) / (G_b(Q+tau) G_b(Q+t-tau)).

    When all three arguments lie on the zero lattice (integer continuation),
    the common zero G_b(Q) is divided out of every factor and the finite
    ratio of cofactors is returned; for t = n b, tau = k b this is the
    Gaussian binomial coefficient in q**2.
    """
    param = _as_param(param)
    Q = param.Q
    args = [Q + complex(t), Q + complex(tau), Q + complex(t) - complex(tau)]
    zeros = [is_zero(param, a) for a in args]
    poles = [is_pole(param, a) for a in args]
    if all(zeros):
        num, d1, d2 = (zero_cofactor(param, a) for a in args)
        return num / (d1 * d2)
    if any(zeros) or any(poles):
        raise UnresolvablePole(f"singular q-beta arguments {args}")
    vals, _ = gb_eval_many(param, args, quad)
    return complex(vals[0] / (vals[1] * vals[2]))


def _fresnel_tail(T: float, omega: float) -> complex:
    """Integral over [T, inf) of exp(-i pi t^2 + i omega t)."""
    c = omega / (2 * math.pi)
    root = cmath.exp(0.25j * math.pi)
    s = root * math.sqrt(math.pi) * (T - c)
    return (
        cmath.exp(1j * omega * omega / (4 * math.pi))
        * 0.5
        / root
        * complex(erfc(s))
    )


@dataclass(frozen=True)
class FourierCheck:
    lhs: complex
    rhs: complex
    residual: float
    abs_error_estimate: float


def _ft_integral(param: ModularParameter, x: float, quad: QuadratureSpec, density: int):
    b = param.base
    small = min(b, 1.0 / b)
    Q = param.Q
    omega = math.log(x) / b
    radius = quad.radius_for(param)
    c = omega / (2 * math.pi)
    # 1/G_b(Q+it) -> zeta_b with relative error ~ exp(-2 pi min(b,1/b) t)
    T_right = max(math.log(1e14) / (2 * math.pi * small), c + 4.0, 2 * radius)
    T_left = max(math.log(1e14) / (math.pi * Q), 2 * radius)
    h_right = min(0.25, PHASE_PER_PANEL / (2 * math.pi * T_right + abs(omega)))
    h_left = min(0.25, PHASE_PER_PANEL / (2 * math.pi * T_left + abs(omega)))
    n_right = density * math.ceil((T_right - radius) / h_right)
    n_left = density * math.ceil((T_left - radius) / h_left)
    t, w = _indented_line(T_left, T_right, radius, n_left, n_right, 8 * density)
    g, gerr = gb_eval_many(param, Q + 1j * t, quad)
    f = np.exp(-1j * math.pi * t * t + 1j * omega * t) / g
    body = complex(np.sum(f * w))
    # |d(1/G)| = |dG| / |G|^2
    err = float(np.sum(np.abs(w) * np.abs(f) * gerr / np.abs(g)))
    tail = zeta_b(param) * _fresnel_tail(T_right, omega)
    return body + tail, err


def ft_gb_check(
    param: ModularParameter | float, x: float, quad: QuadratureSpec = DEFAULT_QUAD
) -> FourierCheck:
    """Compare the Fourier integral of e^{-i pi t^2}/G_b(Q+it) with g_b(x)."""
    param = _as_param(param)
    if not x > 0:
        raise ValueError("x must be positive")
    coarse, err1 = _ft_integral(param, x, quad, 1)
    lhs, err2 = _ft_integral(param, x, quad, 2)
    err = abs(lhs - coarse) + err2
    if err > 1e3 * quad.target_abs_error and err > 1e-7:
        raise NonConvergence(f"Fourier integral error estimate {err:.3e}")
    rhs = little_gb(param, x, quad)
    return FourierCheck(lhs, rhs, abs(lhs - rhs) / abs(rhs), err)
