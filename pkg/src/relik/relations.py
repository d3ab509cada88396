"""Relations over a finite algebra of sets, and exhaustive property checks.

Members of a :class:`FiniteAlgebra` are addressed by *atom masks*: bit ``i``
of the mask is set when atom ``i`` is part of the member. Union is bitwise
or, inclusion is bitwise containment, and the family order used by the
relation file format is the numeric order of masks.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Callable, Iterable, Optional

import numpy as np

from .errors import InvalidAlgebra, InvalidRelation, ResourceLimit
from .preorders import sorted_worlds, world_key

MAX_ATOMS = 8


def _atom_key(atom):
    return tuple(sorted(world_key(x) for x in atom))


@dataclass(frozen=True, eq=False)
class FiniteAlgebra:
    """A finite algebra of subsets of ``ground``.

    Members are addressed by atom bitmasks: bit i set means atom i is part of
    the member. Build with :meth:`powerset`, :meth:`from_atoms`,
    :meth:`generated`, or :meth:`from_family` for an explicit family (checked
    for closure under union and complement).
    """

    ground: frozenset
    atoms: tuple
    max_atoms: int = MAX_ATOMS

    def __post_init__(self):
        ground = frozenset(self.ground)
        atoms = tuple(sorted((frozenset(a) for a in self.atoms), key=_atom_key))
        object.__setattr__(self, "ground", ground)
        object.__setattr__(self, "atoms", atoms)
        if any(not a for a in atoms):
            raise InvalidAlgebra("atoms must be nonempty")
        seen = set()
        for a in atoms:
            if seen & a:
                raise InvalidAlgebra("atoms overlap")
            seen |= a
        if seen != ground:
            raise InvalidAlgebra("atoms do not cover the ground set")
        if len(atoms) > self.max_atoms:
            raise ResourceLimit(f"{len(atoms)} atoms exceeds the cap of {self.max_atoms}")
        object.__setattr__(self, "_atom_of", {x: i for i, a in enumerate(atoms) for x in a})

    @classmethod
    def powerset(cls, ground: Iterable, **kw) -> "FiniteAlgebra":
        ground = frozenset(ground)
        return cls(ground, tuple(frozenset([x]) for x in ground), **kw)

    @classmethod
    def from_atoms(cls, atoms: Iterable[Iterable], **kw) -> "FiniteAlgebra":
        atoms = [frozenset(a) for a in atoms]
        return cls(frozenset().union(*atoms), tuple(atoms), **kw)

    @classmethod
    def generated(cls, ground: Iterable, generators: Iterable[Iterable] = (), **kw) -> "FiniteAlgebra":
        """Smallest algebra over ``ground`` containing ``generators``."""
        ground = frozenset(ground)
        blocks = {ground} if ground else set()
        for g in generators:
            g = frozenset(g)
            if not g <= ground:
                raise InvalidAlgebra("generator is not a subset of the ground set")
            blocks = {piece for b in blocks for piece in (b & g, b - g) if piece}
        return cls(ground, tuple(blocks), **kw)

    @classmethod
    def from_family(cls, ground: Iterable, family: Iterable[Iterable], **kw) -> "FiniteAlgebra":
        ground = frozenset(ground)
        fam = {frozenset(s) for s in family}
        if ground not in fam:
            raise InvalidAlgebra("family does not contain the ground set")
        for s in fam:
            if not s <= ground:
                raise InvalidAlgebra("family member is not a subset of the ground set")
            if ground - s not in fam:
                raise InvalidAlgebra(f"family not closed under complement: {sorted_worlds(s)}")
            for t in fam:
                if s | t not in fam:
                    raise InvalidAlgebra("family not closed under union")
        nonempty = [s for s in fam if s]
        atoms = [s for s in nonempty if not any(t < s for t in nonempty)]
        alg = cls(ground, tuple(atoms), **kw)
        if len(fam) != alg.size:
            raise InvalidAlgebra("family members are not all unions of atoms")
        return alg

    @property
    def size(self) -> int:
        return 1 << len(self.atoms)

    def member(self, mask: int) -> frozenset:
        return frozenset().union(*(a for i, a in enumerate(self.atoms) if mask >> i & 1))

    def members(self) -> list:
        return [self.member(m) for m in range(self.size)]

    def mask_of(self, s: Iterable) -> int:
        s = frozenset(s)
        mask = 0
        for x in s:
            if x not in self._atom_of:
                raise InvalidAlgebra(f"{x!r} is not in the ground set")
            mask |= 1 << self._atom_of[x]
        if self.member(mask) != s:
            raise InvalidAlgebra(f"{sorted_worlds(s)} is not a member of the algebra")
        return mask

    def atom_index(self, x) -> int:
        return self._atom_of[x]

    def __eq__(self, other):
        return isinstance(other, FiniteAlgebra) and (self.ground, self.atoms) == (other.ground, other.atoms)

    def __hash__(self):
        return hash((self.ground, self.atoms))


def _union_table(size: int) -> np.ndarray:
    idx = np.arange(size)
    return idx[:, None] | idx[None, :]


def _subset_table(size: int) -> np.ndarray:
    idx = np.arange(size)
    # sub[a, b] is True when a is contained in b
    return (idx[:, None] & idx[None, :]) == idx[:, None]


@dataclass(frozen=True, eq=False)
class SetRelation:
    """A binary relation on the members of a finite algebra."""

    algebra: FiniteAlgebra
    matrix: np.ndarray = field(repr=False)

    def __post_init__(self):
        m = np.array(self.matrix, dtype=bool)
        n = self.algebra.size
        if m.shape != (n, n):
            raise InvalidRelation(f"matrix shape {m.shape} does not match family size {n}")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @classmethod
    def from_pairs(cls, algebra: FiniteAlgebra, pairs: Iterable[tuple]) -> "SetRelation":
        m = np.zeros((algebra.size, algebra.size), dtype=bool)
        for U, V in pairs:
            m[algebra.mask_of(U), algebra.mask_of(V)] = True
        return cls(algebra, m)

    @classmethod
    def from_mask_pairs(cls, algebra: FiniteAlgebra, pairs: Iterable[tuple]) -> "SetRelation":
        m = np.zeros((algebra.size, algebra.size), dtype=bool)
        for a, b in pairs:
            m[a, b] = True
        return cls(algebra, m)

    def holds(self, U, V) -> bool:
        return bool(self.matrix[self.algebra.mask_of(U), self.algebra.mask_of(V)])

    def mask_pairs(self) -> list:
        return [(int(a), int(b)) for a, b in zip(*np.nonzero(self.matrix))]

    @property
    def pairs(self) -> frozenset:
        member = self.algebra.member
        return frozenset((member(a), member(b)) for a, b in self.mask_pairs())

    def __len__(self):
        return int(self.matrix.sum())

    def __eq__(self, other):
        return (
            isinstance(other, SetRelation)
            and self.algebra == other.algebra
            and np.array_equal(self.matrix, other.matrix)
        )

    def __hash__(self):
        return hash((self.algebra, self.matrix.tobytes()))


def materialize(pred: Callable, order, algebra: Optional[FiniteAlgebra] = None) -> SetRelation:
    """Tabulate ``pred(order, U, V)`` over every pair of algebra members."""
    if algebra is None:
        algebra = FiniteAlgebra.powerset(order.worlds)
    members = algebra.members()
    m = np.array([[pred(order, U, V) for V in members] for U in members], dtype=bool)
    return SetRelation(algebra, m)


# -- property checks ------------------------------------------------------------
#
# Each ``*_violation`` function returns None when the property holds and
# otherwise the first counterexample in mask order, as a tuple of masks.


def reflexive_violation(r: SetRelation):
    bad = np.nonzero(~np.diag(r.matrix))[0]
    return (int(bad[0]),) if len(bad) else None


def irreflexive_violation(r: SetRelation):
    bad = np.nonzero(np.diag(r.matrix))[0]
    return (int(bad[0]),) if len(bad) else None


def transitive_violation(r: SetRelation):
    R = r.matrix
    comp = (R.astype(np.int64) @ R.astype(np.int64)) > 0
    bad = np.argwhere(comp & ~R)
    if not len(bad):
        return None
    a, c = (int(x) for x in bad[0])
    b = int(np.nonzero(R[a] & R[:, c])[0][0])
    return (a, b, c)


def total_violation(r: SetRelation):
    R = r.matrix
    n = len(R)
    bad = np.argwhere(~(R | R.T | np.eye(n, dtype=bool)))
    return tuple(int(x) for x in bad[0]) if len(bad) else None


def modular_violation(r: SetRelation):
    R = r.matrix
    notR = (~R).astype(np.int64)
    for a in range(len(R)):
        # b with a R b such that some c has neither c R b nor a R c
        reach = (notR[a] @ notR) > 0
        bs = np.nonzero(R[a] & reach)[0]
        if len(bs):
            b = int(bs[0])
            c = int(np.nonzero(~R[:, b] & ~R[a])[0][0])
            return (a, b, c)
    return None


def orderly_violation(r: SetRelation):
    """Witness (U, V, U2, V2): U R V, U2 contains U, V2 inside V, not U2 R V2."""
    R = r.matrix
    sub = _subset_table(len(R)).astype(np.int64)
    closed = (sub.T @ R.astype(np.int64) @ sub.T) > 0
    bad = np.argwhere(closed & ~R)
    if not len(bad):
        return None
    u2, v2 = (int(x) for x in bad[0])
    sub_b = sub.astype(bool)
    for u in range(len(R)):
        if not sub_b[u, u2]:
            continue
        vs = np.nonzero(R[u] & sub_b[v2])[0]
        if len(vs):
            return (u, int(vs[0]), u2, v2)
    raise AssertionError("unreachable: orderly closure produced an unsupported pair")


def union_violation(r: SetRelation):
    """Witness (V1, V2, V3): V1 R V2, V1 R V3, not V1 R (V2 | V3)."""
    R = r.matrix
    for v1 in range(len(R)):
        idx = np.nonzero(R[v1])[0]
        if not len(idx):
            continue
        targets = idx[:, None] | idx[None, :]
        bad = np.argwhere(~R[v1][targets])
        if len(bad):
            i, j = bad[0]
            return (v1, int(idx[i]), int(idx[j]))
    return None


def qualitative_violation(r: SetRelation):
    """Witness (V1, V2, V3): (V1|V2) R V3, (V1|V3) R V2, not V1 R (V2|V3)."""
    R = r.matrix
    n = len(R)
    union = _union_table(n)
    for v1 in range(n):
        M = R[v1 | np.arange(n)]
        hits = M & M.T
        bad = np.argwhere(hits & ~R[v1][union])
        if len(bad):
            v2, v3 = bad[0]
            return (v1, int(v2), int(v3))
    return None


CHECKS = {
    "reflexive": reflexive_violation,
    "irreflexive": irreflexive_violation,
    "transitive": transitive_violation,
    "total": total_violation,
    "modular": modular_violation,
    "orderly": orderly_violation,
    "union": union_violation,
    "qualitative": qualitative_violation,
}


def is_reflexive(r): return reflexive_violation(r) is None
def is_irreflexive(r): return irreflexive_violation(r) is None
def is_transitive(r): return transitive_violation(r) is None
def is_total(r): return total_violation(r) is None
def is_modular(r): return modular_violation(r) is None
def is_orderly(r): return orderly_violation(r) is None
def has_union_property(r): return union_violation(r) is None
def is_qualitative(r): return qualitative_violation(r) is None


def is_strict_partial_order(r):
    return is_irreflexive(r) and is_transitive(r)


def is_preorder(r):
    return is_reflexive(r) and is_transitive(r)


def witness_refutes(r: SetRelation, prop: str, w: tuple) -> bool:
    """Independently confirm that ``w`` is a genuine counterexample to ``prop``."""
    R = r.matrix
    if prop == "reflexive":
        return not R[w[0], w[0]]
    if prop == "irreflexive":
        return bool(R[w[0], w[0]])
    if prop == "transitive":
        a, b, c = w
        return R[a, b] and R[b, c] and not R[a, c]
    if prop == "total":
        a, b = w
        return a != b and not R[a, b] and not R[b, a]
    if prop == "modular":
        a, b, c = w
        return R[a, b] and not R[c, b] and not R[a, c]
    if prop == "orderly":
        u, v, u2, v2 = w
        return R[u, v] and u & u2 == u and v2 & v == v2 and not R[u2, v2]
    if prop == "union":
        v1, v2, v3 = w
        return R[v1, v2] and R[v1, v3] and not R[v1, v2 | v3]
    if prop == "qualitative":
        v1, v2, v3 = w
        return R[v1 | v2, v3] and R[v1 | v3, v2] and not R[v1, v2 | v3]
    raise KeyError(prop)


@dataclass(frozen=True)
class PropertyResult:
    holds: bool
    witness: Optional[tuple] = None  # masks; see PropertyReport.witness_sets


@dataclass(frozen=True)
class PropertyReport:
    relation: SetRelation
    results: dict

    def __getitem__(self, name) -> PropertyResult:
        return self.results[name]

    def witness_sets(self, name) -> Optional[tuple]:
        w = self.results[name].witness
        return None if w is None else tuple(self.relation.algebra.member(m) for m in w)

    def as_dict(self) -> dict:
        out = {}
        for name, res in self.results.items():
            entry = {"holds": res.holds}
            if res.witness is not None:
                entry["witness"] = [sorted_worlds(s) for s in self.witness_sets(name)]
            out[name] = entry
        return out


def audit(r: SetRelation) -> PropertyReport:
    results = {}
    for name, check in CHECKS.items():
        w = check(r)
        results[name] = PropertyResult(w is None, w)
    results["preorder"] = PropertyResult(results["reflexive"].holds and results["transitive"].holds)
    results["strict_partial_order"] = PropertyResult(
        results["irreflexive"].holds and results["transitive"].holds
    )
    return PropertyReport(r, results)


# -- relation file format -----------------------------------------------------------
#
#   # comment
#   ground: a b c
#   set: a b          (one line per family member; index = order of appearance)
#   family: powerset  (alternative to set lines: all subsets, index = mask)
#   pair: 3 4         (family[3] R family[4])

_TOKEN = re.compile(r"^[A-Za-z0-9_]+$")


def parse_relation_file(text: str) -> SetRelation:
    ground = None
    sets: list = []
    powerset = False
    pairs: list = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, rest = line.partition(":")
        if not sep:
            raise InvalidRelation(f"line {lineno}: expected 'key: value'")
        key, toks = key.strip(), rest.split()
        for t in toks:
            if not _TOKEN.match(t):
                raise InvalidRelation(f"line {lineno}: bad token {t!r}")
        if key == "ground":
            ground = toks
        elif key == "set":
            sets.append(frozenset(toks))
        elif key == "family":
            if toks != ["powerset"]:
                raise InvalidRelation(f"line {lineno}: only 'family: powerset' is supported")
            powerset = True
        elif key == "pair":
            if len(toks) != 2 or not all(t.isdigit() for t in toks):
                raise InvalidRelation(f"line {lineno}: pair needs two family indices")
            pairs.append((int(toks[0]), int(toks[1])))
        else:
            raise InvalidRelation(f"line {lineno}: unknown key {key!r}")
    if ground is None:
        raise InvalidRelation("missing 'ground:' line")
    if powerset == bool(sets):
        raise InvalidRelation("give either 'family: powerset' or explicit 'set:' lines")
    if powerset:
        # index i is the subset whose bits follow the file's element order
        algebra = FiniteAlgebra.powerset(ground)
        family = [frozenset(x for i, x in enumerate(ground) if m >> i & 1) for m in range(algebra.size)]
    else:
        algebra = FiniteAlgebra.from_family(ground, sets)
        family = sets
    try:
        return SetRelation.from_pairs(algebra, [(family[a], family[b]) for a, b in pairs])
    except IndexError:
        raise InvalidRelation("pair index out of range") from None


def format_relation_file(r: SetRelation) -> str:
    alg = r.algebra
    lines = ["ground: " + " ".join(map(str, sorted_worlds(alg.ground)))]
    for m in range(alg.size):
        lines.append(("set: " + " ".join(map(str, sorted_worlds(alg.member(m))))).rstrip())
    for a, b in r.mask_pairs():
        lines.append(f"pair: {a} {b}")
    return "\n".join(lines) + "\n"

