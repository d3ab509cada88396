"""The conditional ``psi => phi`` ("if psi, normally phi") and its bridge to ``>>``.

Two readings of the conditional are provided and cross-checked in the tests:
the domination reading (:func:`sat_arrow`) and the best-worlds reading
(:func:`sat_arrow_best`). :func:`desugar_arrow_prime` rewrites a conditional
as a likelihood formula; :func:`translate_gg` goes the other way.
"""

from __future__ import annotations

from .errors import ForeignWorld
from .formulas import (
    CONDITIONAL,
    FALSE,
    LIKELIHOOD,
    And,
    Cond,
    Formula,
    Likelier,
    Not,
    Or,
    evaluate,
    kind,
    substitute,
)
from .lifting import dominates
from .preorders import StrictOrder
from .semantics import K, PreferentialStructure, truth_set

VARIANTS = ("prime", "dprime", "tprime")


def best(s: StrictOrder, V) -> frozenset:
    """Members of V with nothing in V strictly above them."""
    V = frozenset(V)
    stray = V - s.worlds
    if stray:
        raise ForeignWorld(f"worlds {sorted(map(str, stray))} are not in the order")
    return frozenset(v for v in V if not (s.above(v) & V))


def sat_arrow(M: PreferentialStructure, psi: Formula, phi: Formula) -> bool:
    """Every psi-and-not-phi world is beaten by a psi-and-phi world dominating them all."""
    s = M.order.strict
    bad = truth_set(M, And(Not(phi), psi))
    good = truth_set(M, And(phi, psi))
    return all(any(s.gt(v, u) and dominates(s, v, bad) for v in good) for u in bad)


def sat_arrow_best(M: PreferentialStructure, psi: Formula, phi: Formula) -> bool:
    return best(M.order.strict, truth_set(M, psi)) <= truth_set(M, phi)


def sat_cond(M: PreferentialStructure, f: Formula, use_best: bool = False) -> bool:
    """Evaluate a Boolean combination of ``=>`` atoms."""
    if kind(f) != CONDITIONAL:
        raise ValueError("sat_cond expects a conditional formula (Boolean combination of '=>' atoms)")
    arrow = sat_arrow_best if use_best else sat_arrow
    return evaluate(f, lambda c: arrow(M, c.antecedent, c.consequent))


def desugar_arrow_prime(psi: Formula, phi: Formula) -> Formula:
    """``psi => phi`` as ``K(!psi) | ((phi & psi) >> (!phi & psi))``."""
    return Or(K(Not(psi)), Likelier(And(phi, psi), And(Not(phi), psi)))


def translate_gg(variant: str, phi: Formula, psi: Formula) -> Formula:
    """``phi >> psi`` written with ``=>`` only."""
    either = Or(phi, psi)
    if variant == "prime":
        return And(Cond(either, And(phi, Not(psi))), Not(Cond(either, psi)))
    if variant == "dprime":
        return And(Not(Cond(phi, psi)), Cond(either, Not(psi)))
    if variant == "tprime":
        return And(Not(Cond(phi, FALSE)), Cond(either, And(phi, Not(psi))))
    raise ValueError(f"unknown variant {variant!r}; expected one of {', '.join(VARIANTS)}")


def to_arrow(f: Formula, variant: str = "prime") -> Formula:
    """Rewrite every ``>>`` atom of a likelihood formula with :func:`translate_gg`."""
    if kind(f) != LIKELIHOOD:
        raise ValueError("expected a likelihood formula")
    return substitute(f, lambda b: translate_gg(variant, b.lhs, b.rhs))


def to_likelihood(f: Formula) -> Formula:
    """Rewrite every ``=>`` atom of a conditional formula with :func:`desugar_arrow_prime`."""
    if kind(f) != CONDITIONAL:
        raise ValueError("expected a conditional formula")
    return substitute(f, lambda c: desugar_arrow_prime(c.antecedent, c.consequent))
