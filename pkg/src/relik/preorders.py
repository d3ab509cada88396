"""Finite preorders over opaque world identifiers.

Relations are stored extensionally as frozensets of ``(u, v)`` pairs. For a
:class:`Preorder` the pair ``(u, v)`` reads "u is at least as likely as v";
for a :class:`StrictOrder` it reads "u is strictly more likely than v".
Constructors validate and never repair; use :meth:`Preorder.closure` to build
a preorder from generator pairs.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property
from typing import Hashable, Iterable, Iterator

from .errors import InvalidOrder, NotModular, NotStrict

World = Hashable


def world_key(w):
    # worlds are opaque; sort by type name then text so mixed ids stay deterministic
    return (type(w).__name__, str(w))


def sorted_worlds(ws: Iterable[World]) -> list:
    return sorted(ws, key=world_key)


def _check_carrier(worlds, rel):
    for u, v in rel:
        if u not in worlds or v not in worlds:
            raise InvalidOrder(f"pair ({u!r}, {v!r}) mentions a world outside the carrier")


def transitivity_violation(worlds, rel):
    """Return a triple (a, b, c) with aRb, bRc but not aRc, or None."""
    succ = {w: set() for w in worlds}
    for u, v in rel:
        succ[u].add(v)
    for a in sorted_worlds(worlds):
        for b in sorted(succ[a], key=world_key):
            for c in sorted(succ[b], key=world_key):
                if c not in succ[a]:
                    return (a, b, c)
    return None


@dataclass(frozen=True)
class Preorder:
    worlds: frozenset
    rel: frozenset

    def __post_init__(self):
        object.__setattr__(self, "worlds", frozenset(self.worlds))
        object.__setattr__(self, "rel", frozenset(self.rel))
        _check_carrier(self.worlds, self.rel)
        for w in self.worlds:
            if (w, w) not in self.rel:
                raise InvalidOrder(f"not reflexive at {w!r}")
        bad = transitivity_violation(self.worlds, self.rel)
        if bad:
            raise InvalidOrder("not transitive: ({0!r},{1!r}) and ({1!r},{2!r}) but not ({0!r},{2!r})".format(*bad))

    @classmethod
    def closure(cls, worlds: Iterable[World], generators: Iterable[tuple] = ()) -> "Preorder":
        """Reflexive-transitive closure of ``generators`` over ``worlds``."""
        worlds = frozenset(worlds)
        rel = {(w, w) for w in worlds} | set(generators)
        _check_carrier(worlds, rel)
        return cls(worlds, _transitive_closure(worlds, rel))

    @classmethod
    def discrete(cls, worlds: Iterable[World]) -> "Preorder":
        worlds = frozenset(worlds)
        return cls(worlds, {(w, w) for w in worlds})

    @classmethod
    def chain(cls, *worlds: World) -> "Preorder":
        """Total order with ``worlds[0]`` most likely."""
        return cls.closure(worlds, zip(worlds, worlds[1:]))

    def geq(self, u, v) -> bool:
        return (u, v) in self.rel

    def gt(self, u, v) -> bool:
        return (u, v) in self.rel and (v, u) not in self.rel

    @cached_property
    def strict(self) -> "StrictOrder":
        return strict_of(self)


@dataclass(frozen=True)
class StrictOrder:
    worlds: frozenset
    rel: frozenset
    _above: dict = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        object.__setattr__(self, "worlds", frozenset(self.worlds))
        object.__setattr__(self, "rel", frozenset(self.rel))
        _check_carrier(self.worlds, self.rel)
        for u, v in self.rel:
            if u == v:
                raise NotStrict(f"reflexive at {u!r}")
        bad = transitivity_violation(self.worlds, self.rel)
        if bad:
            raise NotStrict("not transitive: ({0!r},{1!r}) and ({1!r},{2!r}) but not ({0!r},{2!r})".format(*bad))
        above = {w: set() for w in self.worlds}
        for u, v in self.rel:
            above[v].add(u)
        object.__setattr__(self, "_above", {w: frozenset(s) for w, s in above.items()})

    @classmethod
    def closure(cls, worlds: Iterable[World], generators: Iterable[tuple] = ()) -> "StrictOrder":
        worlds = frozenset(worlds)
        rel = set(generators)
        _check_carrier(worlds, rel)
        return cls(worlds, _transitive_closure(worlds, rel))

    def gt(self, u, v) -> bool:
        return (u, v) in self.rel

    def above(self, w) -> frozenset:
        """Worlds strictly more likely than ``w``."""
        return self._above[w]

    def reflexive_closure(self) -> Preorder:
        return Preorder(self.worlds, self.rel | {(w, w) for w in self.worlds})


def _transitive_closure(worlds, rel) -> frozenset:
    succ = {w: set() for w in worlds}
    for u, v in rel:
        succ[u].add(v)
    # Warshall over an adjacency-set view
    for k in worlds:
        for i in worlds:
            if k in succ[i]:
                succ[i] |= succ[k]
    return frozenset((u, v) for u in worlds for v in succ[u])


def strict_of(p: Preorder) -> StrictOrder:
    """The strict order determined by ``p``: u > v iff u >= v and not v >= u."""
    return StrictOrder(p.worlds, {(u, v) for (u, v) in p.rel if (v, u) not in p.rel})


def is_total(p: Preorder) -> bool:
    return all(p.geq(u, v) or p.geq(v, u) for u, v in itertools.combinations(p.worlds, 2))


def modularity_violation(rel, carrier):
    """First triple (a, b, c) with a R b but neither c R b nor a R c."""
    rel = frozenset(rel)
    ordered = sorted_worlds(carrier)
    for a, b in sorted(rel, key=lambda pr: (world_key(pr[0]), world_key(pr[1]))):
        for c in ordered:
            if (c, b) not in rel and (a, c) not in rel:
                return (a, b, c)
    return None


def is_modular(rel, carrier=None) -> bool:
    """Modularity of a binary relation over a finite carrier.

    ``rel`` may be a :class:`StrictOrder`/:class:`Preorder` (the carrier is
    then taken from it) or a raw set of pairs with an explicit ``carrier``.
    """
    if isinstance(rel, (StrictOrder, Preorder)):
        carrier = rel.worlds if carrier is None else carrier
        rel = rel.rel
    if carrier is None:
        carrier = {x for pair in rel for x in pair}
    return modularity_violation(rel, carrier) is None


def total_from_modular(s: StrictOrder) -> Preorder:
    """Total preorder whose strict part is the modular order ``s``.

    w >= v iff w > v, or w and v are incomparable under ``s``.
    """
    if not isinstance(s, StrictOrder):
        raise NotStrict("expected a StrictOrder")
    bad = modularity_violation(s.rel, s.worlds)
    if bad:
        raise NotModular("{0!r} > {1!r} but neither {2!r} > {1!r} nor {0!r} > {2!r}".format(*bad))
    rel = {
        (w, v)
        for w in s.worlds
        for v in s.worlds
        if s.gt(w, v) or not (s.gt(w, v) or s.gt(v, w))
    }
    return Preorder(s.worlds, rel)


# -- exhaustive enumeration ---------------------------------------------------

def _subsets_of(mask: int) -> Iterator[int]:
    sub = mask
    while True:
        yield sub
        if sub == 0:
            return
        sub = (sub - 1) & mask


def relation_masks(n: int, strict: bool = False) -> Iterator[tuple]:
    """Every labeled preorder (or strict partial order) on ``range(n)``.

    Yields tuples ``above`` where bit j of ``above[i]`` is set iff j R i with
    j != i. Each relation is produced exactly once: elements are added one
    at a time together with an up-closed set of elements above them and a
    down-closed set below them, every member of the former related to every
    member of the latter.
    """

    def grow(k, above, below):
        if k == n:
            yield tuple(above)
            return
        full = (1 << k) - 1
        ups = [a for a in _subsets_of(full) if all(above[i] & ~a == 0 for i in _bits(a))]
        downs = [b for b in _subsets_of(full) if all(below[i] & ~b == 0 for i in _bits(b))]
        for a in ups:
            allowed = full
            for i in _bits(a):
                allowed &= below[i] if strict else (below[i] | (1 << i))
            for b in downs:
                if b & ~allowed:
                    continue
                if strict and a & b:
                    continue
                new_above = list(above)
                new_below = list(below)
                bit = 1 << k
                for i in _bits(a):
                    new_below[i] |= bit
                for i in _bits(b):
                    new_above[i] |= bit
                new_above.append(a)
                new_below.append(b)
                yield from grow(k + 1, new_above, new_below)

    yield from grow(0, [], [])


def _bits(mask: int) -> Iterator[int]:
    i = 0
    while mask:
        if mask & 1:
            yield i
        mask >>= 1
        i += 1


def preorders_on(worlds: Iterable[World]) -> Iterator[Preorder]:
    ws = sorted_worlds(set(worlds))
    for above in relation_masks(len(ws)):
        rel = {(w, w) for w in ws}
        rel |= {(ws[j], ws[i]) for i, m in enumerate(above) for j in _bits(m)}
        yield Preorder(frozenset(ws), rel)


def strict_orders_on(worlds: Iterable[World]) -> Iterator[StrictOrder]:
    ws = sorted_worlds(set(worlds))
    for above in relation_masks(len(ws), strict=True):
        rel = {(ws[j], ws[i]) for i, m in enumerate(above) for j in _bits(m)}
        yield StrictOrder(frozenset(ws), rel)


def ordered_partitions(items: list) -> Iterator[list]:
    """Ordered set partitions (blocks listed most likely first)."""
    if not items:
        yield []
        return
    n = len(items)
    for size in range(1, n + 1):
        for first in itertools.combinations(range(n), size):
            block = [items[i] for i in first]
            rest = [items[i] for i in range(n) if i not in first]
            for tail in ordered_partitions(rest):
                yield [block] + tail


def total_preorders_on(worlds: Iterable[World]) -> Iterator[Preorder]:
    ws = sorted_worlds(set(worlds))
    for blocks in ordered_partitions(ws):
        rel = set()
        for i, hi in enumerate(blocks):
            for lo in blocks[i:]:
                rel.update((u, v) for u in hi for v in lo)
        yield Preorder(frozenset(ws), rel)


def random_preorder(worlds: Iterable[World], rng, density: float = 0.35) -> Preorder:
    ws = sorted_worlds(set(worlds))
    gens = [(u, v) for u in ws for v in ws if u != v and rng.random() < density]
    return Preorder.closure(ws, gens)


def random_strict_order(worlds: Iterable[World], rng, density: float = 0.4) -> StrictOrder:
    ws = sorted_worlds(set(worlds))
    perm = list(ws)
    rng.shuffle(perm)
    # edges only go "down" a random linear order, so the closure stays acyclic
    gens = [(perm[i], perm[j]) for i in range(len(perm)) for j in range(i + 1, len(perm)) if rng.random() < density]
    return StrictOrder.closure(ws, gens)


def random_total_preorder(worlds: Iterable[World], rng) -> Preorder:
    ws = sorted_worlds(set(worlds))
    rank = {w: rng.randrange(len(ws) or 1) for w in ws}
    return Preorder(frozenset(ws), {(u, v) for u in ws for v in ws if rank[u] >= rank[v]})
