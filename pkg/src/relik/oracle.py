"""Brute-force satisfiability by enumerating small structures.

Every structure with up to ``max_copies`` worlds per truth assignment (and
at most ``max_worlds`` worlds overall) is visited, paired with every strict
partial order on its worlds (or every weak order, for ``total_only``).

To keep this tractable the oracle works per *count vector* (how many
worlds each assignment gets). For a count vector it tabulates, for each
order, the strict lifting between every pair of assignment-class unions,
and keeps one representative per distinct table. A formula is then
evaluated on the distinct tables only. The tables depend on nothing but the
count vector, so they are cached across calls.

The lifting is computed here with its own bit-level code rather than
through :mod:`relik.lifting`, so the two can be cross-checked.
"""

from __future__ import annotations

import itertools
from functools import lru_cache

import numpy as np

from .errors import ResourceLimit
from .formulas import LIKELIHOOD, And, Const, Formula, Not, Or, holds_in, kind, variables
from .preorders import Preorder, ordered_partitions, relation_masks
from .prover import SatResult, Verdict, assignment_label, assignments, basic_subformulas
from .semantics import PreferentialStructure, sat

DEFAULT_MAX_WORLDS = 6
DEFAULT_MAX_PROPS = 2


def _orders(n: int, total_only: bool) -> np.ndarray:
    """Rows ``above`` (bit j of row[i] set iff j > i) for every order on n labeled worlds."""
    if total_only:
        rows = []
        for blocks in ordered_partitions(list(range(n))):
            rank = {w: -i for i, block in enumerate(blocks) for w in block}
            rows.append([sum(1 << j for j in range(n) if rank[j] > rank[i]) for i in range(n)])
        # distinct partitions can share a strict part only if they are equal, so rows are unique
        return np.array(rows, dtype=np.int64).reshape(len(rows), n)
    rows = list(relation_masks(n, strict=True))
    return np.array(rows, dtype=np.int64).reshape(len(rows), n)


def _beats(above: np.ndarray, U: int, V: int) -> np.ndarray:
    """U >s V for every order row at once (U, V are world masks)."""
    P, n = above.shape
    if U == 0:
        return np.zeros(P, dtype=bool)
    vs = [v for v in range(n) if V >> v & 1]
    # worlds of U with something in V above them
    beaten = np.zeros(P, dtype=np.int64)
    for u in range(n):
        if U >> u & 1:
            beaten |= np.where(above[:, u] & V != 0, 1 << u, 0)
    dominators = U & ~beaten
    ok = np.ones(P, dtype=bool)
    for v in vs:
        ok &= (above[:, v] & dominators) != 0
    return ok


@lru_cache(maxsize=None)
def signature_table(counts: tuple, total_only: bool = False):
    """Distinct lifting tables for structures with ``counts[c]`` worlds in class c.

    Returns ``(tables, reps)``: ``tables[i, S, T]`` says whether the union of
    classes S beats the union of classes T; ``reps[i]`` is an ``above`` row
    realizing table i.
    """
    k = len(counts)
    n = sum(counts)
    cls_of = [c for c, m in enumerate(counts) for _ in range(m)]
    wmask = [sum(1 << w for w in range(n) if S >> cls_of[w] & 1) for S in range(1 << k)]
    above = _orders(n, total_only)
    size = 1 << k
    bits = np.zeros((len(above), size, size), dtype=bool)
    for S in range(size):
        for T in range(size):
            bits[:, S, T] = _beats(above, wmask[S], wmask[T])
    flat = bits.reshape(len(above), -1)
    _, first = np.unique(np.packbits(flat, axis=1), axis=0, return_index=True)
    first = np.sort(first)
    return bits[first], above[first]


def _eval_array(f: Formula, leaf) -> np.ndarray:
    if isinstance(f, Const):
        return np.asarray(f.value)
    if isinstance(f, Not):
        return ~_eval_array(f.arg, leaf)
    if isinstance(f, And):
        return _eval_array(f.left, leaf) & _eval_array(f.right, leaf)
    if isinstance(f, Or):
        return _eval_array(f.left, leaf) | _eval_array(f.right, leaf)
    return leaf(f)


def count_vectors(n_assign: int, max_copies: int, max_worlds: int, caps=None):
    """Count vectors in a fixed order: fewer worlds first, then lexicographic."""
    limits = [max_copies if caps is None else min(max_copies, caps.get(a, max_copies)) for a in range(n_assign)]
    vecs = [v for v in itertools.product(*(range(m + 1) for m in limits)) if sum(v) <= max_worlds]
    vecs.sort(key=lambda v: (sum(v), v))
    return vecs


def brute_force_sat(
    f: Formula,
    max_copies: int = 2,
    props=None,
    max_worlds: int = DEFAULT_MAX_WORLDS,
    caps=None,
    total_only: bool = False,
    max_props: int = DEFAULT_MAX_PROPS,
) -> SatResult:
    """Exhaustive search over small structures.

    ``caps`` maps an assignment (frozenset of true propositions) to its own
    copy limit, e.g. to allow at most one world of a given kind. UNSAT means
    no structure within the bounds satisfies ``f``.
    """
    if kind(f) != LIKELIHOOD:
        raise ValueError("expected a likelihood formula")
    names = tuple(sorted(variables(f) if props is None else set(props)))
    if len(names) > max_props:
        raise ResourceLimit(f"{len(names)} propositions exceeds the oracle cap of {max_props}")
    table = assignments(names)
    index = {a: i for i, a in enumerate(table)}
    cap_idx = None if caps is None else {index[frozenset(a)]: c for a, c in caps.items()}
    basics = basic_subformulas(f)
    truth = {b: ([holds_in(b.lhs, a) for a in table], [holds_in(b.rhs, a) for a in table]) for b in basics}
    checked = 0
    for counts in count_vectors(len(table), max_copies, max_worlds, cap_idx):
        present = [a for a, c in enumerate(counts) if c]
        tables, reps = signature_table(tuple(counts[a] for a in present), total_only)
        checked += len(tables)

        def leaf(b, present=present, tables=tables):
            lhs, rhs = truth[b]
            S = sum(1 << i for i, a in enumerate(present) if lhs[a])
            T = sum(1 << i for i, a in enumerate(present) if rhs[a])
            return tables[:, S, T]

        hits = np.broadcast_to(_eval_array(f, leaf), (len(tables),))
        good = np.nonzero(hits)[0]
        if len(good):
            model = _structure(names, table, counts, reps[good[0]])
            if not sat(model, f):
                raise AssertionError("oracle table disagrees with the model checker")
            return SatResult(Verdict.SAT, model, {"counts": list(counts), "tables_checked": checked})
    return SatResult(Verdict.UNSAT, None, {"tables_checked": checked, "max_copies": max_copies, "max_worlds": max_worlds})


def _structure(names, table, counts, above_row) -> PreferentialStructure:
    worlds, valuation = [], {}
    for a, c in enumerate(counts):
        for copy in range(c):
            w = f"{assignment_label(names, table[a])}_{copy + 1}"
            worlds.append(w)
            valuation[w] = table[a]
    n = len(worlds)
    rel = {(worlds[j], worlds[i]) for i in range(n) for j in range(n) if int(above_row[i]) >> j & 1}
    rel |= {(w, w) for w in worlds}
    return PreferentialStructure(names, Preorder(frozenset(worlds), rel), valuation)
