"""Shared builders for the test suite: fixed example structures and random generators."""

import itertools

from relik.formulas import FALSE, TRUE, And, Likelier, Not, Or, Var
from relik.preorders import (
    Preorder,
    preorders_on,
    random_preorder,
    random_strict_order,
    random_total_preorder,
)
from relik.semantics import PreferentialStructure

TWO_COVER_TEXT = "(p >> (!p & q)) & !((p & q) >> (!p & q)) & !((p & !q) >> (!p & q))"


def incomparable_order():
    return Preorder.discrete(["w1", "w2"])


def two_cover_structure():
    order = Preorder.closure(["w1", "w2", "w3", "w4"], [("w1", "w3"), ("w2", "w4")])
    val = {"w1": {"p", "q"}, "w2": {"p"}, "w3": {"q"}, "w4": {"q"}}
    return PreferentialStructure(("p", "q"), order, val)


def worlds(n):
    return [f"w{i + 1}" for i in range(n)]


def random_order(rng, n, kind="partial"):
    ws = worlds(n)
    if kind == "total":
        return random_total_preorder(ws, rng)
    if kind == "strict":
        return random_strict_order(ws, rng).reflexive_closure()
    return random_preorder(ws, rng, density=rng.choice([0.15, 0.3, 0.5]))


def random_structure(rng, n, props=("p", "q"), kind="partial"):
    order = random_order(rng, n, kind)
    val = {w: {p for p in props if rng.random() < 0.5} for w in order.worlds}
    return PreferentialStructure(tuple(props), order, val)


def random_prop(rng, props, depth=2):
    if depth == 0 or rng.random() < 0.3:
        r = rng.random()
        if r < 0.08:
            return TRUE
        if r < 0.16:
            return FALSE
        return Var(rng.choice(props))
    op = rng.choice("!&|")
    if op == "!":
        return Not(random_prop(rng, props, depth - 1))
    cls = And if op == "&" else Or
    return cls(random_prop(rng, props, depth - 1), random_prop(rng, props, depth - 1))


def random_skeleton(rng, leaves, depth=3):
    """Random Boolean combination over the given leaf formulas."""
    if depth == 0 or rng.random() < 0.3:
        return rng.choice(leaves)
    op = rng.choice("!&|")
    if op == "!":
        return Not(random_skeleton(rng, leaves, depth - 1))
    cls = And if op == "&" else Or
    return cls(random_skeleton(rng, leaves, depth - 1), random_skeleton(rng, leaves, depth - 1))


def random_l_formula(rng, props=("p", "q"), max_basics=3, depth=3):
    k = rng.randint(1, max_basics)
    basics = [Likelier(random_prop(rng, props, 2), random_prop(rng, props, 2)) for _ in range(k)]
    return random_skeleton(rng, basics, depth)


def all_structures(max_worlds, props=("p", "q")):
    """Every preorder on up to ``max_worlds`` worlds with every valuation."""
    assignments = [frozenset(c) for r in range(len(props) + 1) for c in itertools.combinations(props, r)]
    for n in range(max_worlds + 1):
        ws = worlds(n)
        orders = list(preorders_on(ws))
        for vals in itertools.product(assignments, repeat=n):
            valuation = dict(zip(ws, vals))
            for order in orders:
                yield PreferentialStructure(tuple(props), order, valuation)


def l_implies(a, b):
    return Or(Not(a), b)
