"""Explicit positive representations of U_q(sl2) and U_q(sl3) and their relation suites.

Generators are stored in rescaled form ``eps_i = 2 sin(pi b^2) E_i``,
``phi_i = 2 sin(pi b^2) F_i``.  Since ``2 sin(pi b^2) = -i (q - q^-1)`` the
cross relation becomes ``[eps_i, phi_j] = delta_ij (q - q^-1)(K_i^-1 - K_i)``
and every coefficient stays exact.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

from .qweyl import (
    OperatorElement,
    PhaseCoefficient,
    WeylSpace,
    commutator,
    divide_exact,
    exchange_grading,
    substitute_dual,
)

PREVIEW_LINES = 3
MUTATIONS = ("serre", "kexchange", "commutator")


@dataclass
class PositiveRep:
    name: str
    cartan: tuple[tuple[int, ...], ...]
    space: WeylSpace
    gens: dict[tuple[str, int], OperatorElement]
    dual_flag: bool = False

    def __post_init__(self) -> None:
        n = len(self.cartan)
        for i in range(n):
            if self.cartan[i][i] != 2:
                raise ValueError("Cartan diagonal must be 2")
            for j in range(n):
                if i != j and (self.cartan[i][j] not in (0, -1) or self.cartan[i][j] != self.cartan[j][i]):
                    raise ValueError("only simply-laced Cartan matrices are supported")
        for i in range(1, n + 1):
            K = self.gens[("K", i)]
            if len(K) != 1 or not K.monomials[0].coeff.is_unit_phase():
                raise ValueError(f"K_{i} must be a single unit-coefficient monomial")

    @property
    def rank(self) -> int:
        return len(self.cartan)

    @property
    def n_vars(self) -> int:
        return self.space.dims[0]

    @property
    def n_params(self) -> int:
        return self.space.dims[1]

    def E(self, i: int) -> OperatorElement:
        return self.gens[("E", i)]

    def F(self, i: int) -> OperatorElement:
        return self.gens[("F", i)]

    def K(self, i: int) -> OperatorElement:
        return self.gens[("K", i)]

    def q(self, power: int | float = 1) -> PhaseCoefficient:
        return PhaseCoefficient.q(power, dual=self.dual_flag)


def build_sl2(dual: bool = False) -> PositiveRep:
    """eps = [u - lam]e(-p), phi = [-u - lam]e(p), K = exp(-2 pi b u)."""
    S = WeylSpace(["u"], ["lam"])
    gens = {
        ("E", 1): S.bracket({"u": 1, "lam": -1}, {"p": -1}, dual=dual),
        ("F", 1): S.bracket({"u": -1, "lam": -1}, {"p": 1}, dual=dual),
        ("K", 1): S.element({"u": -2}, dual=dual),
    }
    return PositiveRep("sl2", ((2,),), S, gens, dual)


def build_sl3(dual: bool = False) -> PositiveRep:
    """Positive representation for the reduced word s2 s1 s2 on L^2(R^3)."""
    S = WeylSpace(["u", "v", "w"], ["lam1", "lam2"])
    br = lambda x, y: S.bracket(x, y, dual=dual)  # noqa: E731
    gens = {
        ("E", 1): br({"v": 1, "w": -1}, {"p_v": -1})
        + br({"u": 1}, {"p_v": -1, "p_w": 1, "p_u": -1}),
        ("E", 2): br({"w": 1}, {"p_w": -1}),
        ("F", 1): br({"v": -1, "u": 1, "lam1": -2}, {"p_v": 1}),
        ("F", 2): br({"u": -2, "v": 1, "w": -1, "lam2": -2}, {"p_w": 1})
        + br({"u": -1, "lam2": -2}, {"p_u": 1}),
        ("K", 1): S.element({"u": 1, "v": -2, "w": 1, "lam1": -2}, dual=dual),
        ("K", 2): S.element({"u": -2, "v": 1, "w": -2, "lam2": -2}, dual=dual),
    }
    return PositiveRep("sl3", ((2, -1), (-1, 2)), S, gens, dual)


def dual_rep(rep: PositiveRep) -> PositiveRep:
    """Replace b by 1/b in every generator."""
    gens = {k: substitute_dual(v) for k, v in rep.gens.items()}
    return PositiveRep(rep.name, rep.cartan, rep.space, gens, not rep.dual_flag)


@dataclass
class RelationCheck:
    relation: str
    difference: OperatorElement

    @property
    def passed(self) -> bool:
        return self.difference.is_zero()

    def to_json(self) -> dict:
        lines = self.difference.text().splitlines() if not self.passed else []
        return {
            "relation": self.relation,
            "pass": self.passed,
            "residual_monomial_count": len(self.difference),
            "residual_preview": lines[:PREVIEW_LINES],
        }


@dataclass
class RelationReport:
    entries: list[RelationCheck] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(e.passed for e in self.entries)

    def add(self, relation: str, difference: OperatorElement) -> None:
        self.entries.append(RelationCheck(relation, difference))

    def to_json(self) -> list[dict]:
        return [e.to_json() for e in sorted(self.entries, key=lambda e: e.relation)]


def serre(x: OperatorElement, y: OperatorElement, q_plus: PhaseCoefficient) -> OperatorElement:
    """x^2 y - [2]_q x y x + y x^2."""
    return x * x * y - q_plus * (x * y * x) + y * x * x


def check_defining_relations(rep: PositiveRep, mutate: str | None = None) -> RelationReport:
    """Exact check of the full relation suite in rescaled generators.

    ``mutate`` injects a deliberate error as a negative control:
    ``serre`` uses q^2 + q^-2 in place of q + q^-1, ``kexchange`` lowers the
    K-exchange power by one, ``commutator`` doubles the first monomial of eps_1.
    """
    if mutate is not None and mutate not in MUTATIONS:
        raise ValueError(f"unknown mutation {mutate!r}; choose from {MUTATIONS}")
    q = rep.q
    idx = range(1, rep.rank + 1)
    E = {i: rep.E(i) for i in idx}
    if mutate == "commutator":
        first, *rest = E[1].monomials
        E[1] = OperatorElement([first.with_coeff(first.coeff * 2), *rest], E[1].dims)
    F = {i: rep.F(i) for i in idx}
    K = {i: rep.K(i) for i in idx}
    shift = 1 if mutate == "kexchange" else 0
    q_plus = q(2) + q(-2) if mutate == "serre" else q(1) + q(-1)
    s = "q~" if rep.dual_flag else "q"
    report = RelationReport()
    for i in idx:
        for j in idx:
            a = rep.cartan[i - 1][j - 1]
            report.add(f"K{i} E{j} = {s}^{a} E{j} K{i}", K[i] * E[j] - q(a - shift) * (E[j] * K[i]))
            report.add(f"K{i} F{j} = {s}^{-a} F{j} K{i}", K[i] * F[j] - q(-a) * (F[j] * K[i]))
            report.add(f"K{i} K{j} = K{j} K{i}", commutator(K[i], K[j]))
            target = (
                (q(1) - q(-1)) * (K[i].inverse() - K[i])
                if i == j
                else OperatorElement.zero(rep.space.dims)
            )
            report.add(f"[E{i}, F{j}] = d{i}{j} ({s} - {s}^-1)(K{i}^-1 - K{i})", commutator(E[i], F[j]) - target)
            if i != j:
                report.add(f"Serre E{i}^2 E{j}", serre(E[i], E[j], q_plus))
                report.add(f"Serre F{i}^2 F{j}", serre(F[i], F[j], q_plus))
    return report


def lusztig_T(rep: PositiveRep, i: int, j: int) -> OperatorElement:
    """Image of eps_i under the modified Lusztig map T_j.

    ``T_i(eps_i) = q phi_i K_i^-1`` and, for a_ij = -1,
    ``T_j(eps_i) = (q^{1/2} eps_j eps_i - q^{-1/2} eps_i eps_j) / (q - q^-1)``.
    """
    q = rep.q
    if i == j:
        return q(1) * (rep.F(i) * rep.K(i).inverse())
    if rep.cartan[i - 1][j - 1] != -1:
        raise ValueError("the two-index formula needs a_ij = -1")
    num = q(0.5) * (rep.E(j) * rep.E(i)) - q(-0.5) * (rep.E(i) * rep.E(j))
    return divide_exact(num, q(1) - q(-1))


def cross_commutation_check(rep: PositiveRep, dual: PositiveRep) -> RelationReport:
    """Every b-monomial exchanges with every 1/b-monomial up to a sign.

    For each generator pair the exchange grading must be (0, 0, d) with
    d = 0 mod 4, and the engine must confirm m1 m2 = (+-1) m2 m1 exactly.
    """
    report = RelationReport()
    for k1, g1 in sorted(rep.gens.items()):
        for k2, g2 in sorted(dual.gens.items()):
            worst = OperatorElement.zero(rep.space.dims)
            for m1 in g1:
                for m2 in g2:
                    a, c, d = exchange_grading(m1, m2)
                    e1 = OperatorElement.from_monomial(m1)
                    e2 = OperatorElement.from_monomial(m2)
                    if a == 0 and c == 0 and d % 4 == 0:
                        diff = e1 * e2 - PhaseCoefficient.phase(0, 0, d) * (e2 * e1)
                    else:
                        # not a sign: record the plain commutator as the residual
                        diff = commutator(e1, e2)
                    if worst.is_zero():
                        worst = diff
            report.add(f"{k1[0]}{k1[1]} vs ~{k2[0]}{k2[1]}", worst)
    return report


def cross_phases(rep: PositiveRep, dual: PositiveRep) -> list[tuple[str, str, int]]:
    """All (generator, dual generator, d) exchange phases as gradings e^{i pi d/4}."""
    out = []
    for k1, g1 in sorted(rep.gens.items()):
        for k2, g2 in sorted(dual.gens.items()):
            for m1 in g1:
                for m2 in g2:
                    out.append((f"{k1[0]}{k1[1]}", f"{k2[0]}{k2[1]}", exchange_grading(m1, m2)))
    return out


def lambda_centrality(rep: PositiveRep) -> RelationReport:
    report = RelationReport()
    n, k = rep.space.dims
    for p in range(k):
        for dual in (False, True):
            lam = rep.space.element({rep.space.params[p]: 1}, dual=dual)
            for key, g in sorted(rep.gens.items()):
                report.add(f"[{key[0]}{key[1]}, {'~' if dual else ''}{rep.space.params[p]}]", commutator(g, lam))
    return report


SUITE_BUILDERS: dict[str, Callable[..., PositiveRep]] = {"sl2": build_sl2, "sl3": build_sl3}
