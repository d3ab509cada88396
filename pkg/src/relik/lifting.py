"""Lifting a world order to orderings on sets of worlds.

The three relations used throughout the package are

* :func:`geq_s`      -- U >=s V: every v in V has some u in U with u >= v;
* :func:`succ_prime` -- U >' V: U >=s V and not V >=s U;
* :func:`succ_s`     -- U >s V: U nonempty and every v in V has some u in U
  with u > v that also dominates V.

The numbered variants ``lift_k`` (k = 1..6) are the classical alternatives,
kept for comparison. ``lift_3`` and ``lift_6`` require U to be nonempty so
that both are genuine strict orders.
"""

from __future__ import annotations

from typing import Iterable, Union

from .errors import ForeignWorld
from .preorders import Preorder, StrictOrder

Order = Union[Preorder, StrictOrder]


def _strict(order: Order) -> StrictOrder:
    return order.strict if isinstance(order, Preorder) else order


def _within(order: Order, *sets: Iterable) -> list:
    out = []
    for s in sets:
        s = frozenset(s)
        stray = s - order.worlds
        if stray:
            raise ForeignWorld(f"worlds {sorted(map(str, stray))} are not in the order")
        out.append(s)
    return out


def geq_s(p: Preorder, U, V) -> bool:
    U, V = _within(p, U, V)
    return all(any(p.geq(u, v) for u in U) for v in V)


def dominates(order: Order, w, V) -> bool:
    """True when no member of V is strictly above w."""
    s = _strict(order)
    (V,) = _within(s, V)
    if w not in s.worlds:
        raise ForeignWorld(f"world {w!r} is not in the order")
    return not (s.above(w) & V)


def succ_s(order: Order, U, V) -> bool:
    s = _strict(order)
    U, V = _within(s, U, V)
    if not U:
        return False
    # worlds of U that no member of V beats
    dominators = [u for u in U if not (s.above(u) & V)]
    return all(any(s.gt(u, v) for u in dominators) for v in V)


def succ_s_naive(order: Order, U, V) -> bool:
    """The finite-set form of >s, without the domination clause."""
    s = _strict(order)
    U, V = _within(s, U, V)
    return bool(U) and all(any(s.gt(u, v) for u in U) for v in V)


def succ_prime(p: Preorder, U, V) -> bool:
    return geq_s(p, U, V) and not geq_s(p, V, U)


def lift_k(k: int, p: Preorder, U, V) -> bool:
    U, V = _within(p, U, V)
    if k == 1:
        return _lift1(p, U, V)
    if k == 2:
        return _lift1(p, U, V) and not _lift1(p, V, U)
    if k == 3:
        return bool(U) and all(p.gt(u, v) for u in U for v in V)
    if k == 4:
        return _lift4(p, U, V)
    if k == 5:
        return _lift4(p, U, V) and not _lift4(p, V, U)
    if k == 6:
        return bool(U) and all(any(p.gt(u, v) for u in U - V) for v in V - U)
    raise ValueError(f"lift index must be in 1..6, got {k}")


def _lift1(p, U, V):
    return all(p.geq(u, v) for u in U for v in V)


def _lift4(p, U, V):
    return all(any(p.geq(u, v) for u in U - V) for v in V - U)


RELATIONS = {
    "geq_s": geq_s,
    "succ_s": succ_s,
    "succ_s_naive": succ_s_naive,
    "succ_prime": succ_prime,
    **{f"lift{k}": (lambda k: lambda p, U, V: lift_k(k, p, U, V))(k) for k in range(1, 7)},
}
