"""Exact algebra of Weyl-type exponential monomials.

A monomial is ``coeff * exp(pi b (xi.u + eta.p + nu.lam) + pi/b (xi~.u + eta~.p + nu~.lam))``
with integer exponent vectors and ``[u_k, p_k] = i/(2 pi)``.  Products of
such symmetric exponentials pick up a pure phase from the
Baker-Campbell-Hausdorff formula ``e^A e^B = e^{[A,B]/2} e^{A+B}``.

Coefficients live in the ring of finite sums
``s * exp(i pi (a b^2 + c b^-2 + d) / 4)`` with Gaussian-rational ``s``.
Everything here is exact; no floating point is involved except in
:meth:`PhaseCoefficient.evaluate`.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping

from sympy import QQ_I

from .errors import DimensionMismatch, NotDivisible

Grading = tuple[int, int, int]
_I_POWERS = (QQ_I(1, 0), QQ_I(0, 1), QQ_I(-1, 0), QQ_I(0, -1))


def gaussian(value) -> "QQ_I.dtype":
    """Coerce int, Fraction-like, complex-with-integer-parts or (re, im) into QQ_I."""
    if isinstance(value, tuple):
        return QQ_I(*value)
    if isinstance(value, complex):
        if value.real != int(value.real) or value.imag != int(value.imag):
            raise TypeError("only integral complex literals are accepted; use (re, im)")
        return QQ_I(int(value.real), int(value.imag))
    return QQ_I.convert(value)


def _format_scalar(s) -> str:
    re, im = s.x, s.y
    if im == 0:
        return str(re)
    if re == 0:
        return f"{im}i"
    sign = "+" if im > 0 else "-"
    return f"{re}{sign}{abs(im)}i"


def _canonical_grading(g: Grading, s):
    """Fold the d slot to {0, 1}: e^{i pi d/4} = e^{i pi (d mod 2)/4} * i^{d div 2}."""
    a, c, d = g
    d0 = d % 2
    k = ((d - d0) // 2) % 4
    return (a, c, d0), s * _I_POWERS[k]


class PhaseCoefficient:
    """Exact element of Q(i)[x^{+-1}, y^{+-1}, zeta_8] with x = e^{i pi b^2/4}, y = e^{i pi b^-2/4}."""

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[Grading, object] | Iterable[tuple[Grading, object]] = ()):
        acc: dict[Grading, object] = {}
        items = terms.items() if isinstance(terms, Mapping) else terms
        for g, s in items:
            g, s = _canonical_grading(tuple(int(v) for v in g), gaussian(s))
            acc[g] = acc.get(g, QQ_I.zero) + s
        self._terms = tuple(sorted((g, s) for g, s in acc.items() if s.x or s.y))
        self._hash = None

    @classmethod
    def one(cls) -> "PhaseCoefficient":
        return cls({(0, 0, 0): 1})

    @classmethod
    def zero(cls) -> "PhaseCoefficient":
        return cls()

    @classmethod
    def phase(cls, a: int = 0, c: int = 0, d: int = 0, scalar=1) -> "PhaseCoefficient":
        return cls({(a, c, d): scalar})

    @classmethod
    def q(cls, power: int | float = 1, dual: bool = False) -> "PhaseCoefficient":
        """q**power (or q~**power); power must be a multiple of 1/4."""
        quarter = power * 4
        if quarter != int(quarter):
            raise ValueError("q powers must be multiples of 1/4")
        quarter = int(quarter)
        return cls.phase(0, quarter) if dual else cls.phase(quarter)

    @property
    def terms(self) -> tuple[tuple[Grading, object], ...]:
        return self._terms

    def is_zero(self) -> bool:
        return not self._terms

    def is_unit_phase(self) -> bool:
        """A single pure phase with scalar exactly +1."""
        return len(self._terms) == 1 and self._terms[0][1] == QQ_I.one

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, complex, tuple)):
            other = PhaseCoefficient.phase(scalar=other)
        if not isinstance(other, PhaseCoefficient):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(tuple((g, (s.x, s.y)) for g, s in self._terms))
        return self._hash

    def __add__(self, other: "PhaseCoefficient") -> "PhaseCoefficient":
        return PhaseCoefficient(list(self._terms) + list(_coerce(other)._terms))

    __radd__ = __add__

    def __neg__(self) -> "PhaseCoefficient":
        return PhaseCoefficient([(g, -s) for g, s in self._terms])

    def __sub__(self, other: "PhaseCoefficient") -> "PhaseCoefficient":
        return self + (-_coerce(other))

    def __rsub__(self, other) -> "PhaseCoefficient":
        return _coerce(other) - self

    def __mul__(self, other) -> "PhaseCoefficient":
        if isinstance(other, OperatorElement):
            return NotImplemented
        other = _coerce(other)
        return PhaseCoefficient(
            ((g1[0] + g2[0], g1[1] + g2[1], g1[2] + g2[2]), s1 * s2)
            for g1, s1 in self._terms
            for g2, s2 in other._terms
        )

    __rmul__ = __mul__

    def unit_inverse(self) -> "PhaseCoefficient":
        if len(self._terms) != 1:
            raise NotDivisible(f"{self} is not a unit")
        (a, c, d), s = self._terms[0]
        return PhaseCoefficient({(-a, -c, -d): QQ_I.one / s})

    def dual(self) -> "PhaseCoefficient":
        return PhaseCoefficient(((c, a, d), s) for (a, c, d), s in self._terms)

    def evaluate(self, b: float) -> complex:
        total = 0j
        for (a, c, d), s in self._terms:
            phase = cmath.exp(1j * math.pi * (a * b * b + c / (b * b) + d) / 4)
            total += complex(float(s.x), float(s.y)) * phase
        return total

    def exact_divide(self, divisor: "PhaseCoefficient") -> "PhaseCoefficient":
        """Exact quotient by ``divisor`` (long division in the q or q~ slot)."""
        divisor = _coerce(divisor)
        if divisor.is_zero():
            raise ZeroDivisionError("division by the zero coefficient")
        if self.is_zero():
            return PhaseCoefficient.zero()
        if len(divisor._terms) == 1:
            return self * divisor.unit_inverse()
        for slot in (0, 1):
            lead = _leading(divisor, slot)
            if len(lead) == 1:
                return _long_divide(self, divisor, slot)
        raise NotDivisible(f"divisor {divisor} has no unit leading coefficient in q or q~")

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        return " + ".join(f"({_format_scalar(s)})[{a},{c},{d}]" for (a, c, d), s in self._terms)

    def __repr__(self) -> str:
        return f"PhaseCoefficient({self})"


def _coerce(x) -> PhaseCoefficient:
    if isinstance(x, PhaseCoefficient):
        return x
    return PhaseCoefficient.phase(scalar=x)


def _leading(p: PhaseCoefficient, slot: int) -> list[tuple[Grading, object]]:
    hi = max(g[slot] for g, _ in p.terms)
    return [(g, s) for g, s in p.terms if g[slot] == hi]


def _span(p: PhaseCoefficient, slot: int) -> int:
    vals = [g[slot] for g, _ in p.terms]
    return max(vals) - min(vals)


def _long_divide(num: PhaseCoefficient, den: PhaseCoefficient, slot: int) -> PhaseCoefficient:
    # den's leading coefficient in `slot` is a unit, so ordinary long division
    # terminates; the remainder is zero iff the quotient is exact.
    lead_inv = PhaseCoefficient(_leading(den, slot)).unit_inverse()
    den_span = _span(den, slot)
    rem = num
    quotient = PhaseCoefficient.zero()
    while not rem.is_zero():
        if _span(rem, slot) < den_span:
            raise NotDivisible(f"{num} is not divisible by {den}")
        step = PhaseCoefficient(_leading(rem, slot)) * lead_inv
        quotient = quotient + step
        rem = rem - step * den
    return quotient


@dataclass(frozen=True)
class WeylMonomial:
    """``coeff * exp(pi b (xi.u + eta.p + nu.lam) + pi b^-1 (xi_t.u + eta_t.p + nu_t.lam))``."""

    xi: tuple[int, ...]
    eta: tuple[int, ...]
    nu: tuple[int, ...]
    xi_t: tuple[int, ...]
    eta_t: tuple[int, ...]
    nu_t: tuple[int, ...]
    coeff: PhaseCoefficient = PhaseCoefficient.one()

    def __post_init__(self) -> None:
        for name in ("xi", "eta", "nu", "xi_t", "eta_t", "nu_t"):
            object.__setattr__(self, name, tuple(int(v) for v in getattr(self, name)))
        n = len(self.xi)
        if not (len(self.eta) == len(self.xi_t) == len(self.eta_t) == n):
            raise DimensionMismatch("variable exponent vectors differ in length")
        if len(self.nu) != len(self.nu_t):
            raise DimensionMismatch("parameter exponent vectors differ in length")

    @classmethod
    def identity(cls, n_vars: int, n_params: int = 0) -> "WeylMonomial":
        z, zp = (0,) * n_vars, (0,) * n_params
        return cls(z, z, zp, z, z, zp)

    @property
    def dims(self) -> tuple[int, int]:
        return len(self.xi), len(self.nu)

    @property
    def key(self) -> tuple[int, ...]:
        return self.xi + self.eta + self.nu + self.xi_t + self.eta_t + self.nu_t

    def with_coeff(self, coeff: PhaseCoefficient) -> "WeylMonomial":
        return WeylMonomial(self.xi, self.eta, self.nu, self.xi_t, self.eta_t, self.nu_t, coeff)

    def inverse(self) -> "WeylMonomial":
        neg = lambda v: tuple(-x for x in v)  # noqa: E731
        return WeylMonomial(
            neg(self.xi), neg(self.eta), neg(self.nu),
            neg(self.xi_t), neg(self.eta_t), neg(self.nu_t),
            self.coeff.unit_inverse(),
        )

    def dual(self) -> "WeylMonomial":
        return WeylMonomial(
            self.xi_t, self.eta_t, self.nu_t, self.xi, self.eta, self.nu, self.coeff.dual()
        )

    def momentum_degree(self) -> int:
        return sum(self.eta) + sum(self.eta_t)

    def text(self) -> str:
        def vec(v):
            return "[" + ",".join(str(x) for x in v) + "]"

        return (
            f"{self.coeff} * u{vec(self.xi)} p{vec(self.eta)} l{vec(self.nu)}"
            f" ~u{vec(self.xi_t)} ~p{vec(self.eta_t)} ~l{vec(self.nu_t)}"
        )


def symplectic_pairing(m1: WeylMonomial, m2: WeylMonomial) -> Grading:
    """(sigma_bb, sigma_tt, sigma_cross) for the ordered pair (m1, m2)."""
    if m1.dims != m2.dims:
        raise DimensionMismatch(f"{m1.dims} vs {m2.dims}")
    s_bb = sum(x1 * e2 - e1 * x2 for x1, e1, x2, e2 in zip(m1.xi, m1.eta, m2.xi, m2.eta))
    s_tt = sum(
        x1 * e2 - e1 * x2 for x1, e1, x2, e2 in zip(m1.xi_t, m1.eta_t, m2.xi_t, m2.eta_t)
    )
    s_cross = sum(
        m1.xi[k] * m2.eta_t[k] - m1.eta[k] * m2.xi_t[k]
        + m1.xi_t[k] * m2.eta[k] - m1.eta_t[k] * m2.xi[k]
        for k in range(len(m1.xi))
    )
    return s_bb, s_tt, s_cross


def exchange_grading(m1: WeylMonomial, m2: WeylMonomial) -> Grading:
    """Grading g with m1*m2 = e^{i pi (g . (b^2, b^-2, 1))/4} * m2*m1."""
    s_bb, s_tt, s_cross = symplectic_pairing(m1, m2)
    return 2 * s_bb, 2 * s_tt, 2 * s_cross


def mono_mul(m1: WeylMonomial, m2: WeylMonomial) -> WeylMonomial:
    s_bb, s_tt, s_cross = symplectic_pairing(m1, m2)
    add = lambda v, w: tuple(x + y for x, y in zip(v, w))  # noqa: E731
    coeff = m1.coeff * m2.coeff * PhaseCoefficient.phase(s_bb, s_tt, s_cross)
    return WeylMonomial(
        add(m1.xi, m2.xi), add(m1.eta, m2.eta), add(m1.nu, m2.nu),
        add(m1.xi_t, m2.xi_t), add(m1.eta_t, m2.eta_t), add(m1.nu_t, m2.nu_t),
        coeff,
    )


class OperatorElement:
    """Finite sum of Weyl monomials with distinct exponent keys."""

    __slots__ = ("dims", "_terms")

    def __init__(self, monomials: Iterable[WeylMonomial] = (), dims: tuple[int, int] | None = None):
        acc: dict[tuple[int, ...], list] = {}
        for m in monomials:
            if dims is None:
                dims = m.dims
            elif m.dims != dims:
                raise DimensionMismatch(f"{m.dims} vs {dims}")
            if m.key in acc:
                acc[m.key][1] = acc[m.key][1] + m.coeff
            else:
                acc[m.key] = [m, m.coeff]
        if dims is None:
            raise ValueError("dimensions are required for an empty element")
        self.dims = dims
        self._terms = tuple(
            m.with_coeff(c) for _, (m, c) in sorted(acc.items()) if not c.is_zero()
        )

    @classmethod
    def from_monomial(cls, m: WeylMonomial) -> "OperatorElement":
        return cls([m])

    @classmethod
    def zero(cls, dims: tuple[int, int]) -> "OperatorElement":
        return cls((), dims)

    @classmethod
    def scalar(cls, coeff, dims: tuple[int, int]) -> "OperatorElement":
        return cls([WeylMonomial.identity(*dims).with_coeff(_coerce(coeff))])

    @property
    def monomials(self) -> tuple[WeylMonomial, ...]:
        return self._terms

    def __iter__(self) -> Iterator[WeylMonomial]:
        return iter(self._terms)

    def __len__(self) -> int:
        return len(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def _check(self, other: "OperatorElement") -> None:
        if self.dims != other.dims:
            raise DimensionMismatch(f"{self.dims} vs {other.dims}")

    def __add__(self, other: "OperatorElement") -> "OperatorElement":
        self._check(other)
        return OperatorElement(self._terms + other._terms, self.dims)

    def __neg__(self) -> "OperatorElement":
        return OperatorElement((m.with_coeff(-m.coeff) for m in self._terms), self.dims)

    def __sub__(self, other: "OperatorElement") -> "OperatorElement":
        return self + (-other)

    def __mul__(self, other) -> "OperatorElement":
        if isinstance(other, OperatorElement):
            self._check(other)
            return OperatorElement(
                (mono_mul(m1, m2) for m1 in self._terms for m2 in other._terms), self.dims
            )
        c = _coerce(other)
        return OperatorElement((m.with_coeff(m.coeff * c) for m in self._terms), self.dims)

    def __rmul__(self, other) -> "OperatorElement":
        # scalars are central
        return self * other

    def __pow__(self, n: int) -> "OperatorElement":
        if n < 0:
            return self.inverse() ** (-n)
        out = OperatorElement.scalar(1, self.dims)
        for _ in range(n):
            out = out * self
        return out

    def inverse(self) -> "OperatorElement":
        if len(self._terms) != 1:
            raise ValueError("only single-monomial elements are invertible")
        return OperatorElement([self._terms[0].inverse()])

    def __eq__(self, other) -> bool:
        if not isinstance(other, OperatorElement):
            return NotImplemented
        return self.dims == other.dims and self._terms == other._terms

    def __hash__(self) -> int:
        return hash((self.dims, self._terms))

    def text(self) -> str:
        if not self._terms:
            return "0"
        return "\n".join(m.text() for m in self._terms)

    def __repr__(self) -> str:
        return f"OperatorElement(<{len(self._terms)} monomials over {self.dims}>)"


def elem_mul(e1: OperatorElement, e2: OperatorElement) -> OperatorElement:
    return e1 * e2


def elem_add(e1: OperatorElement, e2: OperatorElement) -> OperatorElement:
    return e1 + e2


def elem_sub(e1: OperatorElement, e2: OperatorElement) -> OperatorElement:
    return e1 - e2


def commutator(e1: OperatorElement, e2: OperatorElement) -> OperatorElement:
    return e1 * e2 - e2 * e1


def divide_exact(e: OperatorElement, divisor: PhaseCoefficient) -> OperatorElement:
    """The element f with f * divisor == e, or NotDivisible."""
    return OperatorElement(
        (m.with_coeff(m.coeff.exact_divide(divisor)) for m in e), e.dims
    )


def substitute_dual(e: OperatorElement) -> OperatorElement:
    """Swap the b and b^-1 halves of every monomial and coefficient (b -> 1/b)."""
    return OperatorElement((m.dual() for m in e), e.dims)


class WeylSpace:
    """Named variables and central parameters for building monomials by hand.

    Variables ``x`` come with momenta named ``p_x``; parameters are central.
    """

    def __init__(self, variables: Iterable[str], params: Iterable[str] = ()):
        self.variables = tuple(variables)
        self.params = tuple(params)
        self._var = {v: i for i, v in enumerate(self.variables)}
        self._mom = {f"p_{v}": i for i, v in enumerate(self.variables)}
        self._par = {v: i for i, v in enumerate(self.params)}
        if len(self.variables) == 1:
            self._mom["p"] = 0

    @property
    def dims(self) -> tuple[int, int]:
        return len(self.variables), len(self.params)

    def monomial(
        self, form: Mapping[str, int], *, dual: bool = False, coeff=None
    ) -> WeylMonomial:
        """exp(pi b * form) (or pi/b when ``dual``) for a linear form in names."""
        n, k = self.dims
        xi, eta, nu = [0] * n, [0] * n, [0] * k
        for name, c in form.items():
            if name in self._var:
                xi[self._var[name]] += c
            elif name in self._mom:
                eta[self._mom[name]] += c
            elif name in self._par:
                nu[self._par[name]] += c
            else:
                raise KeyError(f"unknown symbol {name!r}")
        zero, zp = [0] * n, [0] * k
        coeff = PhaseCoefficient.one() if coeff is None else _coerce(coeff)
        if dual:
            return WeylMonomial(zero, zero, zp, xi, eta, nu, coeff)
        return WeylMonomial(xi, eta, nu, zero, zero, zp, coeff)

    def element(self, *forms: Mapping[str, int], dual: bool = False) -> OperatorElement:
        return OperatorElement([self.monomial(f, dual=dual) for f in forms], self.dims)

    def bracket(
        self, position: Mapping[str, int], momentum: Mapping[str, int], *, dual: bool = False
    ) -> OperatorElement:
        """``[X]e(Y) = exp(pi b(-X + 2Y)) + exp(pi b(X + 2Y))``."""
        def combine(sign: int) -> dict[str, int]:
            out = {k: sign * v for k, v in position.items()}
            for k, v in momentum.items():
                out[k] = out.get(k, 0) + 2 * v
            return out

        return self.element(combine(-1), combine(1), dual=dual)
