"""Realizing a set relation on a finite algebra as an order on worlds.

Given a relation R on the members of a finite algebra, build worlds and an
order on them so that the lifted order agrees with R on every pair of
members:

* :func:`realize_total` handles total preorders, using one world per ground
  element and comparing worlds by the atoms that contain them;
* :func:`realize_partial` handles orderly, qualitative strict partial
  orders. Each world is labeled by a *minimal-pair tree* (an atom-labeled
  tree recording one consistent way that world can be beaten), and
  ``u > w`` iff the label of ``u`` is a proper subtree of the label of ``w``.
  Exactly one world is allocated per (atom, tree) pair.

Atoms are referred to by index and family members by atom bitmask, as in
:mod:`relik.relations`.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property
from typing import Optional

import numpy as np

from .errors import AgreementFailure, InvalidRelation, NotTotalPreorder, ResourceLimit
from .preorders import Preorder, StrictOrder, sorted_worlds
from .relations import (
    FiniteAlgebra,
    SetRelation,
    has_union_property,
    irreflexive_violation,
    orderly_violation,
    qualitative_violation,
    reflexive_violation,
    total_violation,
    transitive_violation,
)

DEFAULT_MAX_ATOMS = 5
DEFAULT_MAX_TREES = 20_000
DEFAULT_MAX_NODES = 200_000


def atoms(F: FiniteAlgebra) -> list:
    return list(F.atoms)


def _bits(mask: int) -> list:
    return [i for i in range(mask.bit_length()) if mask >> i & 1]


# -- minimal pairs ----------------------------------------------------------------

@dataclass(frozen=True, order=True)
class MinimalPair:
    """``support`` R ``atom`` with no smaller support; atom index, support mask."""

    atom: int
    support: int

    def as_sets(self, F: FiniteAlgebra) -> tuple:
        return F.atoms[self.atom], F.member(self.support)


def check_strict_hypotheses(r: SetRelation):
    """Raise InvalidRelation unless r is orderly, qualitative and irreflexive."""
    member = r.algebra.member
    for name, check in (
        ("irreflexive", irreflexive_violation),
        ("orderly", orderly_violation),
        ("qualitative", qualitative_violation),
    ):
        w = check(r)
        if w is not None:
            sets = [sorted_worlds(member(m)) for m in w]
            raise InvalidRelation(f"relation is not {name}; witness {sets}")


def minimal_pairs(r: SetRelation, validate: bool = True) -> list:
    if validate:
        check_strict_hypotheses(r)
    R = r.matrix
    out = []
    for i in range(len(r.algebra.atoms)):
        a = 1 << i
        supports = [int(x) for x in np.nonzero(R[:, a])[0]]
        sup_set = set(supports)
        for x in supports:
            # proper submasks of x
            sub = (x - 1) & x
            smaller = False
            while True:
                if sub != x and sub in sup_set:
                    smaller = True
                    break
                if sub == 0:
                    break
                sub = (sub - 1) & x
            if smaller:
                continue
            if x & a:
                raise InvalidRelation(
                    f"minimal support {sorted_worlds(r.algebra.member(x))} overlaps the atom it beats"
                )
            out.append(MinimalPair(i, x))
    return sorted(out)


def _supports_by_atom(pairs, n_atoms) -> list:
    by_atom = [[] for _ in range(n_atoms)]
    for p in pairs:
        by_atom[p.atom].append(p.support)
    return by_atom


# -- minimal-pair trees -------------------------------------------------------------

@dataclass(frozen=True)
class MPTree:
    """Atom-labeled tree; children are kept in canonical order so equality is structural."""

    label: int
    children: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "children", tuple(sorted(self.children, key=lambda t: t.key)))

    @cached_property
    def key(self) -> tuple:
        return (self.label, tuple(c.key for c in self.children))

    def nodes(self):
        yield self
        for c in self.children:
            yield from c.nodes()

    def proper_subtrees(self) -> frozenset:
        return frozenset(t for c in self.children for t in c.nodes())

    def labels(self) -> frozenset:
        return frozenset(t.label for t in self.nodes())

    def depth(self) -> int:
        return 1 + max((c.depth() for c in self.children), default=0)

    def render(self, names=None) -> str:
        name = names[self.label] if names else str(self.label)
        if not self.children:
            return name
        return f"{name}-{{{','.join(c.render(names) for c in self.children)}}}"

    def __lt__(self, other):
        return self.key < other.key


def mp_tree_violation(t: MPTree, pairs) -> Optional[str]:
    """First of the four tree conditions that ``t`` breaks, or None."""
    supports = {}
    for p in pairs:
        supports.setdefault(p.atom, []).append(p.support)

    def visit(node, path):
        if node.label in path:
            return f"label {node.label} repeats along a path"
        kids = [c.label for c in node.children]
        if len(set(kids)) != len(kids):
            return f"node {node.label} has two children with the same label"
        mine = supports.get(node.label, [])
        for k in kids:
            if not any(x >> k & 1 for x in mine):
                return f"child {k} of {node.label} lies in no minimal support"
        for x in mine:
            if not any(x >> k & 1 for k in kids):
                return f"minimal support {x:#b} of {node.label} is hit by no child"
        for c in node.children:
            bad = visit(c, path | {node.label})
            if bad:
                return bad
        return None

    return visit(t, frozenset())


def enum_mp_trees(r: SetRelation, A: int, pairs=None, max_trees: int = DEFAULT_MAX_TREES, _memo=None) -> list:
    """Every minimal-pair tree rooted at atom index ``A``, in canonical order."""
    if pairs is None:
        pairs = minimal_pairs(r)
    by_atom = _supports_by_atom(pairs, len(r.algebra.atoms))
    memo = {} if _memo is None else _memo

    def trees(label, banned):
        # banned: bitmask of ancestor labels, including ``label`` itself
        key = (label, banned)
        if key in memo:
            return memo[key]
        sups = by_atom[label]
        if not sups:
            memo[key] = [MPTree(label)]
            return memo[key]
        cand_mask = 0
        for x in sups:
            cand_mask |= x
        cand_mask &= ~banned
        cands = _bits(cand_mask)
        sub_options = {c: trees(c, banned | 1 << c) for c in cands}
        out = []
        for size in range(1, len(cands) + 1):
            for chosen in itertools.combinations(cands, size):
                cm = sum(1 << c for c in chosen)
                if any(not (x & cm) for x in sups):
                    continue
                options = [sub_options[c] for c in chosen]
                count = 1
                for o in options:
                    count *= len(o)
                if count == 0:
                    continue
                if len(out) + count > max_trees:
                    raise ResourceLimit(f"more than {max_trees} minimal-pair trees rooted at atom {label}")
                out.extend(MPTree(label, combo) for combo in itertools.product(*options))
        out.sort()
        memo[key] = out
        return out

    return trees(A, 1 << A)


# -- realizations -------------------------------------------------------------------

@dataclass(frozen=True)
class Realization:
    """Worlds and order built for a set relation.

    ``atom_of_world`` maps each world to an atom index of ``algebra``;
    ``tree_of_world`` is filled in by the partial construction only. ``kind``
    selects the lifted order used for agreement: ``"total"`` compares with
    the weak lifting, ``"partial"`` with the strict one.
    """

    algebra: FiniteAlgebra
    preorder: Preorder
    atom_of_world: dict
    kind: str
    tree_of_world: Optional[dict] = None
    _cells: list = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        n = len(self.algebra.atoms)
        cells = [[] for _ in range(n)]
        for w in sorted_worlds(self.atom_of_world):
            cells[self.atom_of_world[w]].append(w)
        object.__setattr__(self, "_cells", cells)

    def worlds_of(self, mask: int) -> list:
        return [w for i in _bits(mask) for w in self._cells[i]]

    def worlds_in_atom(self, i: int) -> list:
        return list(self._cells[i])


def _lifted_matrix(real: Realization) -> np.ndarray:
    """The lifted order of the realization, tabulated over the algebra."""
    ws = sorted_worlds(real.preorder.worlds)
    pos = {w: i for i, w in enumerate(ws)}
    n = len(ws)
    size = real.algebra.size
    members = np.zeros((size, n), dtype=bool)
    for m in range(size):
        members[m, [pos[w] for w in real.worlds_of(m)]] = True
    out = np.zeros((size, size), dtype=bool)
    if real.kind == "total":
        P = np.zeros((n, n), dtype=bool)
        for u, v in real.preorder.rel:
            P[pos[u], pos[v]] = True
        for V in range(size):
            vs = members[V]
            out[:, V] = ((members.astype(np.int64) @ P[:, vs].astype(np.int64)) > 0).all(axis=1)
        return out
    G = np.zeros((n, n), dtype=bool)
    for u, v in real.preorder.strict.rel:
        G[pos[u], pos[v]] = True
    nonempty = members.any(axis=1)
    for V in range(size):
        vs = members[V]
        beaten = G[vs].any(axis=0)
        dominators = members & ~beaten
        covered = (dominators.astype(np.int64) @ G[:, vs].astype(np.int64)) > 0
        out[:, V] = nonempty & covered.all(axis=1)
    return out


def agreement(r: SetRelation, real: Realization):
    """(True, None) when the lifted order equals r, else (False, (U, V)) at the first mismatch."""
    if r.algebra != real.algebra:
        raise InvalidRelation("realization was built for a different algebra")
    bad = np.argwhere(_lifted_matrix(real) != r.matrix)
    if not len(bad):
        return True, None
    u, v = (int(x) for x in bad[0])
    return False, (r.algebra.member(u), r.algebra.member(v))


def _require_agreement(r, real):
    ok, witness = agreement(r, real)
    if not ok:
        U, V = witness
        side = "holds" if r.matrix[r.algebra.mask_of(U), r.algebra.mask_of(V)] else "fails"
        err = AgreementFailure(
            f"relation {side} at ({sorted_worlds(U)}, {sorted_worlds(V)}) but the realization disagrees",
            witness,
        )
        err.realization = real
        raise err
    return real


def realize_total(r: SetRelation, check: bool = True) -> Realization:
    """One world per ground element; v >= w iff atom(v) R atom(w)."""
    member = r.algebra.member
    for name, viol in (("reflexive", reflexive_violation), ("transitive", transitive_violation), ("total", total_violation)):
        w = viol(r)
        if w is not None:
            raise NotTotalPreorder(f"relation is not {name}; witness {[sorted_worlds(member(m)) for m in w]}")
    w = orderly_violation(r)
    if w is not None:
        raise InvalidRelation(f"relation is not orderly; witness {[sorted_worlds(member(m)) for m in w]}")
    if not has_union_property(r):
        raise InvalidRelation("relation lacks the union property")
    if r.matrix[0, 1:].any():
        raise InvalidRelation("the empty set is ranked at or above a nonempty member")
    F = r.algebra
    atom_of = {x: F.atom_index(x) for x in F.ground}
    R = r.matrix
    rel = {(v, w) for v in F.ground for w in F.ground if R[1 << atom_of[v], 1 << atom_of[w]]}
    real = Realization(F, Preorder(F.ground, rel), atom_of, "total")
    return _require_agreement(r, real) if check else real


def realize_partial(
    r: SetRelation,
    max_atoms: int = DEFAULT_MAX_ATOMS,
    max_trees: int = DEFAULT_MAX_TREES,
    check: bool = True,
) -> Realization:
    """One fresh world per (atom, minimal-pair tree); u > w iff tree(u) is a proper subtree of tree(w)."""
    n_atoms = len(r.algebra.atoms)
    if n_atoms > max_atoms:
        raise ResourceLimit(f"{n_atoms} atoms exceeds the realization cap of {max_atoms}")
    pairs = minimal_pairs(r)
    memo = {}
    world_of_tree = {}
    atom_of = {}
    tree_of = {}
    total = 0
    for i in range(n_atoms):
        ts = enum_mp_trees(r, i, pairs, max_trees=max_trees, _memo=memo)
        if not ts:
            raise AgreementFailure(f"atom {sorted_worlds(r.algebra.atoms[i])} admits no minimal-pair tree")
        total += len(ts)
        if total > max_trees:
            raise ResourceLimit(f"more than {max_trees} minimal-pair trees in total")
        for t in ts:
            w = f"w{len(world_of_tree) + 1}"
            world_of_tree[t] = w
            atom_of[w] = i
            tree_of[w] = t
    rel = set()
    for w, t in tree_of.items():
        for sub in t.proper_subtrees():
            rel.add((world_of_tree[sub], w))
    strict = StrictOrder(frozenset(tree_of), rel)
    real = Realization(r.algebra, strict.reflexive_closure(), atom_of, "partial", tree_of)
    return _require_agreement(r, real) if check else real


# -- full tree and marking ------------------------------------------------------------

class FullNode:
    """Node of a full tree; identity is by object, since labels may repeat."""

    __slots__ = ("label", "children", "parent")

    def __init__(self, label, parent=None):
        self.label = label
        self.children = []
        self.parent = parent

    def walk(self):
        yield self
        for c in self.children:
            yield from c.walk()

    def ancestors(self):
        p = self.parent
        while p is not None:
            yield p
            p = p.parent

    def __repr__(self):
        return f"FullNode({self.label}, {len(self.children)} children)"


def full_tree(r: SetRelation, A: int, pairs=None, max_nodes: int = DEFAULT_MAX_NODES) -> FullNode:
    """Expand from a root labeled A for as many stages as there are atoms.

    At each stage every leaf labeled B gains one child per atom lying in the
    support of some minimal pair of B. Labels may repeat along a path.
    """
    if pairs is None:
        pairs = minimal_pairs(r)
    by_atom = _supports_by_atom(pairs, len(r.algebra.atoms))
    kids_of = []
    for sups in by_atom:
        m = 0
        for x in sups:
            m |= x
        kids_of.append(_bits(m))
    root = FullNode(A)
    leaves = [root]
    count = 1
    for _ in range(len(r.algebra.atoms)):
        new_leaves = []
        for leaf in leaves:
            if not kids_of[leaf.label]:
                continue
            for c in kids_of[leaf.label]:
                leaf.children.append(FullNode(c, leaf))
            new_leaves.extend(leaf.children)
            count += len(kids_of[leaf.label])
            if count > max_nodes:
                raise ResourceLimit(f"full tree exceeds {max_nodes} nodes")
        leaves = new_leaves
    return root


def mark(r: SetRelation, root: FullNode, X: int, pairs=None):
    """Run the marking stages for member mask ``X``.

    A node labeled B is marked when B lies inside X, when an ancestor has the
    same label, or when some minimal pair (B, Y) has every child labeled
    inside Y already marked at an earlier stage. Returns
    ``(marked_nodes, root_unmarked)``.
    """
    if pairs is None:
        pairs = minimal_pairs(r)
    by_atom = _supports_by_atom(pairs, len(r.algebra.atoms))
    nodes = list(root.walk())
    marked = set()
    while True:
        stage = []
        for t in nodes:
            if id(t) in marked:
                continue
            if X >> t.label & 1:
                stage.append(t)
            elif any(a.label == t.label for a in t.ancestors()):
                stage.append(t)
            elif any(
                all(id(c) in marked for c in t.children if y >> c.label & 1) for y in by_atom[t.label]
            ):
                stage.append(t)
        if not stage:
            break
        marked.update(id(t) for t in stage)
    marked_nodes = [t for t in nodes if id(t) in marked]
    return marked_nodes, id(root) not in marked


def unmarked_subtree(root: FullNode, marked_nodes) -> Optional[MPTree]:
    """The unmarked nodes whose ancestors are all unmarked, as an MPTree."""
    marked = {id(t) for t in marked_nodes}

    def build(t):
        return MPTree(t.label, tuple(build(c) for c in t.children if id(c) not in marked))

    return None if id(root) in marked else build(root)
