"""Satisfiability for likelihood formulas by model construction.

Partial structures (:func:`check_satisfiable`): for every sign vector over
the basic ``>>`` subformulas that makes the goal true, and every choice of
which truth assignments are populated, close the positive basics under the
orderliness and qualitative rules. Branches whose closure becomes reflexive
or contains a negated basic are dropped. Otherwise the closure is realized
as a world order and the resulting structure is model-checked against the
goal.

Total structures (:func:`check_satisfiable_total`): one world per populated
assignment suffices, so every weak order on every populated set is tried.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import ResourceLimit
from .formulas import LIKELIHOOD, Formula, Likelier, evaluate, holds_in, kind, modal_leaves, to_text, variables
from .preorders import Preorder, ordered_partitions
from .realization import realize_partial
from .relations import FiniteAlgebra, SetRelation
from .semantics import PreferentialStructure, sat

DEFAULT_MAX_PROPS = 3
DEFAULT_MAX_BRANCHES = 200_000
DEFAULT_MAX_TOTAL_BRANCHES = 2_000_000
CLOSURE_MAX_ATOMS = 8


class Verdict(str, enum.Enum):
    SAT = "SAT"
    UNSAT = "UNSAT"
    RESOURCE_LIMIT = "RESOURCE_LIMIT"


@dataclass
class SatResult:
    verdict: Verdict
    model: Optional[PreferentialStructure] = None
    certificate: dict = field(default_factory=dict)

    @property
    def is_sat(self) -> bool:
        return self.verdict is Verdict.SAT


def basic_subformulas(f: Formula) -> list:
    return [b for b in modal_leaves(f) if isinstance(b, Likelier)]


def _vocabulary(f, props):
    names = tuple(sorted(variables(f) if props is None else set(props)))
    missing = variables(f) - set(names)
    if missing:
        raise ValueError(f"formula uses propositions {sorted(missing)} outside the vocabulary")
    return names


def assignments(props) -> list:
    """Every truth assignment over ``props`` as a frozenset of true names, in binary order."""
    n = len(props)
    return [frozenset(p for j, p in enumerate(props) if code >> (n - 1 - j) & 1) for code in range(1 << n)]


def assignment_label(props, a) -> str:
    # binary string, one digit per proposition; sorts in the same order as assignments()
    return "a" + "".join("1" if p in a else "0" for p in props)


def _gray_signs(m):
    for i in range(1 << m):
        g = i ^ (i >> 1)
        yield tuple(bool(g >> j & 1) for j in range(m))


def _populated_sets(n_assign):
    """Index subsets of the assignments, largest first, the empty set last."""
    subsets = list(range(1 << n_assign))
    subsets.sort(key=lambda m: (-bin(m).count("1"), m))
    return [[i for i in range(n_assign) if m >> i & 1] for m in subsets]


# -- closure -----------------------------------------------------------------------

def closure(positives, k: int, max_atoms: int = CLOSURE_MAX_ATOMS) -> np.ndarray:
    """Least relation on subsets of ``k`` atoms containing ``positives`` and every (V, empty), V nonempty,
    closed under enlarging the left side, shrinking the right side, and the qualitative rule.

    ``positives`` are pairs of atom masks. Returns a boolean matrix indexed by masks.
    """
    if k > max_atoms:
        raise ResourceLimit(f"{k} populated assignments exceeds the closure cap of {max_atoms}")
    size = 1 << k
    R = np.zeros((size, size), dtype=bool)
    R[1:, 0] = True
    for U, V in positives:
        R[U, V] = True
    idx = np.arange(size)
    union = idx[:, None] | idx[None, :]
    while True:
        before = R.copy()
        for b in range(k):
            bit = 1 << b
            hi = idx[idx & bit != 0]
            # left side may grow, right side may shrink
            R[hi] |= R[hi ^ bit]
            R[:, hi ^ bit] |= R[:, hi]
        for v1 in range(size):
            M = R[v1 | idx]
            hits = M & M.T
            if hits.any():
                R[v1, union[hits]] = True
        if np.array_equal(before, R):
            return R


def closure_relation(positives, labels) -> SetRelation:
    """:func:`closure` packaged as a SetRelation over the powerset of ``labels``."""
    F = FiniteAlgebra.powerset(labels, max_atoms=max(len(labels), 1))
    order = [F.atom_index(x) for x in labels]
    # positives are given in label order; the algebra orders atoms by its own key
    if order != list(range(len(labels))):
        raise ValueError("labels must already be in the algebra's atom order")
    return SetRelation(F, closure(positives, len(labels)))


# -- partial structures -----------------------------------------------------------------

def _rel_mask(phi, chosen, table):
    m = 0
    for i, a in enumerate(chosen):
        if holds_in(phi, table[a]):
            m |= 1 << i
    return m


def check_satisfiable(
    f: Formula,
    props=None,
    max_props: int = DEFAULT_MAX_PROPS,
    max_branches: int = DEFAULT_MAX_BRANCHES,
    max_atoms: int = CLOSURE_MAX_ATOMS,
    max_trees: int = 20_000,
) -> SatResult:
    if kind(f) != LIKELIHOOD:
        raise ValueError("expected a likelihood formula")
    names = _vocabulary(f, props)
    if len(names) > max_props:
        raise ResourceLimit(f"{len(names)} propositions exceeds the cap of {max_props}")
    basics = basic_subformulas(f)
    table = assignments(names)
    populated = _populated_sets(len(table))
    branches = 0
    rejected = {"reflexive": 0, "negative": 0, "model_check": 0}
    limited = []
    for signs in _gray_signs(len(basics)):
        value = dict(zip(basics, signs))
        if not evaluate(f, value.__getitem__):
            continue
        for chosen in populated:
            branches += 1
            if branches > max_branches:
                return _limit(f"branch budget of {max_branches} exhausted", branches, rejected, limited)
            labels = [assignment_label(names, table[a]) for a in chosen]
            pos, neg = [], []
            for b, s in zip(basics, signs):
                pair = (_rel_mask(b.lhs, chosen, table), _rel_mask(b.rhs, chosen, table))
                (pos if s else neg).append(pair)
            try:
                R = closure(pos, len(chosen), max_atoms=max_atoms)
            except ResourceLimit as e:
                limited.append(str(e))
                continue
            if R.diagonal().any():
                rejected["reflexive"] += 1
                continue
            if any(R[u, v] for u, v in neg):
                rejected["negative"] += 1
                continue
            F = FiniteAlgebra.powerset(labels, max_atoms=max(max_atoms, 1))
            try:
                real = realize_partial(SetRelation(F, R), max_atoms=max_atoms, max_trees=max_trees)
            except ResourceLimit as e:
                limited.append(str(e))
                continue
            by_label = dict(zip(labels, chosen))
            valuation = {w: table[by_label[next(iter(F.atoms[i]))]] for w, i in real.atom_of_world.items()}
            model = PreferentialStructure(names, real.preorder, valuation)
            if not sat(model, f):
                rejected["model_check"] += 1
                continue
            cert = {
                "basics": [to_text(b) for b in basics],
                "signs": list(signs),
                "populated": labels,
                "closure_pairs": int(R.sum()),
                "branches": branches,
                "rejected": rejected,
            }
            return SatResult(Verdict.SAT, model, cert)
    if limited:
        return _limit(limited[0], branches, rejected, limited)
    return SatResult(Verdict.UNSAT, None, {"basics": [to_text(b) for b in basics], "branches": branches, "rejected": rejected})


def _limit(reason, branches, rejected, limited):
    return SatResult(
        Verdict.RESOURCE_LIMIT,
        None,
        {"reason": reason, "branches": branches, "rejected": rejected, "limited_branches": len(limited)},
    )


# -- total structures ---------------------------------------------------------------------

def _beats_total(rank, U, V):
    # in a weak order U >s V iff U is nonempty and its best rank beats V's best
    if not U:
        return False
    return max(rank[a] for a in U) > max((rank[a] for a in V), default=-1)


def check_satisfiable_total(
    f: Formula,
    props=None,
    max_props: int = DEFAULT_MAX_PROPS,
    max_branches: int = DEFAULT_MAX_TOTAL_BRANCHES,
) -> SatResult:
    if kind(f) != LIKELIHOOD:
        raise ValueError("expected a likelihood formula")
    names = _vocabulary(f, props)
    if len(names) > max_props:
        raise ResourceLimit(f"{len(names)} propositions exceeds the cap of {max_props}")
    basics = basic_subformulas(f)
    table = assignments(names)
    sides = [
        (
            frozenset(a for a in range(len(table)) if holds_in(b.lhs, table[a])),
            frozenset(a for a in range(len(table)) if holds_in(b.rhs, table[a])),
        )
        for b in basics
    ]
    branches = 0
    for chosen in _populated_sets(len(table)):
        present = frozenset(chosen)
        rel_sides = [(U & present, V & present) for U, V in sides]
        for blocks in ordered_partitions(chosen):
            branches += 1
            if branches > max_branches:
                return SatResult(Verdict.RESOURCE_LIMIT, None, {"reason": f"branch budget of {max_branches} exhausted", "branches": branches})
            rank = {a: len(blocks) - i for i, block in enumerate(blocks) for a in block}
            value = {b: _beats_total(rank, U, V) for b, (U, V) in zip(basics, rel_sides)}
            if not evaluate(f, value.__getitem__):
                continue
            worlds = [assignment_label(names, table[a]) for a in chosen]
            by_world = dict(zip(worlds, chosen))
            order = Preorder(
                frozenset(worlds), {(u, v) for u in worlds for v in worlds if rank[by_world[u]] >= rank[by_world[v]]}
            )
            model = PreferentialStructure(names, order, {w: table[a] for w, a in by_world.items()})
            if not sat(model, f):
                raise AssertionError("total search found an assignment the model checker rejects")
            cert = {"basics": [to_text(b) for b in basics], "populated": worlds, "branches": branches}
            return SatResult(Verdict.SAT, model, cert)
    return SatResult(Verdict.UNSAT, None, {"basics": [to_text(b) for b in basics], "branches": branches})
