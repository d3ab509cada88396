"""Preferential structures and the satisfaction relation for ``>>``.

A structure is a world order plus a valuation giving each world the set of
propositions true there. ``M |= phi >> psi`` holds when the worlds
satisfying phi are strictly more likely, in the >s sense, than the worlds
satisfying psi.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Mapping

from .errors import InvalidOrder, RelikError, UnknownProposition
from .formulas import FALSE, LIKELIHOOD, Formula, Likelier, Not, evaluate, holds_in, kind, variables
from .lifting import succ_s
from .preorders import Preorder, sorted_worlds


class StructureFormatError(RelikError):
    pass


@dataclass(frozen=True)
class PreferentialStructure:
    props: tuple
    order: Preorder
    valuation: Mapping

    def __post_init__(self):
        props = tuple(sorted(set(self.props)))
        val = {w: frozenset(v) for w, v in dict(self.valuation).items()}
        object.__setattr__(self, "props", props)
        object.__setattr__(self, "valuation", val)
        if set(val) != set(self.order.worlds):
            raise InvalidOrder("valuation and order disagree on the set of worlds")
        for w, true_props in val.items():
            stray = true_props - set(props)
            if stray:
                raise UnknownProposition(f"world {w!r} assigns undeclared propositions {sorted(stray)}")

    @property
    def worlds(self) -> frozenset:
        return self.order.worlds

    def __hash__(self):
        return hash((self.props, self.order, frozenset(self.valuation.items())))


def _check_vocab(M: PreferentialStructure, f: Formula):
    unknown = variables(f) - set(M.props)
    if unknown:
        raise UnknownProposition(f"propositions {sorted(unknown)} are not declared in the structure")


def truth_set(M: PreferentialStructure, phi: Formula) -> frozenset:
    _check_vocab(M, phi)
    return frozenset(w for w, v in M.valuation.items() if holds_in(phi, v))


def sat(M: PreferentialStructure, f: Formula) -> bool:
    if kind(f) != LIKELIHOOD:
        raise ValueError("sat expects a likelihood formula (Boolean combination of '>>' atoms)")
    _check_vocab(M, f)
    strict = M.order.strict
    return evaluate(f, lambda b: succ_s(strict, truth_set(M, b.lhs), truth_set(M, b.rhs)))


def K(phi: Formula) -> Formula:
    """``phi`` holds at every world: not (not phi >> false)."""
    return Not(Likelier(Not(phi), FALSE))


# -- structure file format ---------------------------------------------------------
#
#   props: p q
#   worlds: w1 w2
#   val w1: p=1 q=0
#   order: w1 >= w2, ...
#
# The loader takes the reflexive-transitive closure of the order lines.

_ID = re.compile(r"^[A-Za-z0-9_]+$")
_PROP = re.compile(r"^[a-z][a-z0-9_]*$")


def parse_structure(text: str) -> PreferentialStructure:
    props = worlds = None
    vals = {}
    gens = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        head, sep, rest = line.partition(":")
        if not sep:
            raise StructureFormatError(f"line {lineno}: expected 'key: value'")
        head_toks = head.split()
        if head_toks == ["props"]:
            props = rest.split()
            for p in props:
                if not _PROP.match(p) or p in ("true", "false"):
                    raise StructureFormatError(f"line {lineno}: bad proposition name {p!r}")
        elif head_toks == ["worlds"]:
            worlds = rest.split()
            for w in worlds:
                if not _ID.match(w):
                    raise StructureFormatError(f"line {lineno}: bad world id {w!r}")
            if len(set(worlds)) != len(worlds):
                raise StructureFormatError(f"line {lineno}: duplicate world ids")
        elif len(head_toks) == 2 and head_toks[0] == "val":
            w = head_toks[1]
            if w in vals:
                raise StructureFormatError(f"line {lineno}: second valuation for {w}")
            assignment = {}
            for item in rest.split():
                name, eq, bit = item.partition("=")
                if not eq or bit not in ("0", "1"):
                    raise StructureFormatError(f"line {lineno}: expected p=0 or p=1, got {item!r}")
                assignment[name] = bit == "1"
            vals[w] = (lineno, assignment)
        elif head_toks == ["order"]:
            for item in rest.split(","):
                if not item.strip():
                    continue
                parts = item.split(">=")
                if len(parts) != 2 or not all(p.strip() for p in parts):
                    raise StructureFormatError(f"line {lineno}: expected 'u >= v', got {item.strip()!r}")
                gens.append((parts[0].strip(), parts[1].strip()))
        else:
            raise StructureFormatError(f"line {lineno}: unknown key {head.strip()!r}")
    if props is None or worlds is None:
        raise StructureFormatError("structure needs 'props:' and 'worlds:' lines")
    valuation = {}
    for w in worlds:
        if w not in vals:
            raise StructureFormatError(f"world {w} has no 'val' line")
        lineno, assignment = vals.pop(w)
        if set(assignment) != set(props):
            raise StructureFormatError(f"line {lineno}: valuation of {w} must give every proposition exactly")
        valuation[w] = frozenset(p for p, b in assignment.items() if b)
    if vals:
        raise StructureFormatError(f"valuation for undeclared world(s) {sorted(vals)}")
    for u, v in gens:
        if u not in valuation or v not in valuation:
            raise StructureFormatError(f"order pair {u} >= {v} mentions an undeclared world")
    return PreferentialStructure(tuple(props), Preorder.closure(worlds, gens), valuation)


def format_structure(M: PreferentialStructure, comments=()) -> str:
    lines = [f"# {c}" for c in comments]
    ws = sorted_worlds(M.worlds)
    lines.append(("props: " + " ".join(M.props)).rstrip())
    lines.append(("worlds: " + " ".join(map(str, ws))).rstrip())
    for w in ws:
        bits = " ".join(f"{p}={int(p in M.valuation[w])}" for p in M.props)
        lines.append(f"val {w}: {bits}".rstrip())
    pos = {w: i for i, w in enumerate(ws)}
    for u, v in sorted((pr for pr in M.order.rel if pr[0] != pr[1]), key=lambda pr: (pos[pr[0]], pos[pr[1]])):
        lines.append(f"order: {u} >= {v}")
    return "\n".join(lines) + "\n"
