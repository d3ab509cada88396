"""Formula ASTs, parser and printer.

One set of Boolean connectives (:class:`Not`, :class:`And`, :class:`Or`) is
shared by three layers:

* propositional formulas, with :class:`Var` and :class:`Const` leaves;
* likelihood formulas, Boolean combinations of :class:`Likelier` leaves
  (``phi >> psi``, "phi is more likely than psi");
* conditional formulas, Boolean combinations of :class:`Cond` leaves
  (``psi => phi``, "if psi then normally phi").

Likelihood and conditional leaves take propositional arguments only, and a
formula never mixes layers. Implication ``->`` is propositional sugar for
``!a | b``.

ASCII grammar, loosest first::

    formula := impl [('>>' | '=>') impl]
    impl    := disj ['->' impl]
    disj    := conj {'|' conj}
    conj    := unary {'&' unary}
    unary   := '!' unary | atom
    atom    := NAME | 'true' | 'false' | '(' formula ')'
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Callable, Iterator

from .errors import ParseError

PROP, LIKELIHOOD, CONDITIONAL = "prop", "likelihood", "conditional"


class Formula:
    __slots__ = ()

    def __invert__(self):
        return Not(self)

    def __and__(self, other):
        return And(self, other)

    def __or__(self, other):
        return Or(self, other)

    def __rshift__(self, other):
        return Likelier(self, other)

    def __str__(self):
        return to_text(self)


@dataclass(frozen=True)
class Var(Formula):
    name: str


@dataclass(frozen=True)
class Const(Formula):
    value: bool


TRUE = Const(True)
FALSE = Const(False)


@dataclass(frozen=True)
class Not(Formula):
    arg: Formula


@dataclass(frozen=True)
class And(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Or(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Likelier(Formula):
    lhs: Formula
    rhs: Formula


@dataclass(frozen=True)
class Cond(Formula):
    antecedent: Formula
    consequent: Formula


def implies(a: Formula, b: Formula) -> Formula:
    return Or(Not(a), b)


def conj(*fs: Formula) -> Formula:
    if not fs:
        return TRUE
    out = fs[0]
    for f in fs[1:]:
        out = And(out, f)
    return out


def disj(*fs: Formula) -> Formula:
    if not fs:
        return FALSE
    out = fs[0]
    for f in fs[1:]:
        out = Or(out, f)
    return out


def kind(f: Formula) -> str:
    """Layer of a well-formed formula; raises ValueError on mixed layers."""
    if isinstance(f, (Var, Const)):
        return PROP
    if isinstance(f, Likelier):
        _require_prop(f.lhs, f.rhs)
        return LIKELIHOOD
    if isinstance(f, Cond):
        _require_prop(f.antecedent, f.consequent)
        return CONDITIONAL
    if isinstance(f, Not):
        return kind(f.arg)
    if isinstance(f, (And, Or)):
        a, b = kind(f.left), kind(f.right)
        if a != b:
            raise ValueError(f"mixes {a} and {b} formulas")
        return a
    raise TypeError(f"not a formula: {f!r}")


def _require_prop(*fs):
    for f in fs:
        if kind(f) != PROP:
            raise ValueError("modal operators take propositional arguments only")


def variables(f: Formula) -> frozenset:
    out = set()
    for node in walk(f):
        if isinstance(node, Var):
            out.add(node.name)
    return frozenset(out)


def walk(f: Formula) -> Iterator[Formula]:
    """Pre-order, left to right."""
    yield f
    if isinstance(f, Not):
        yield from walk(f.arg)
    elif isinstance(f, (And, Or)):
        yield from walk(f.left)
        yield from walk(f.right)
    elif isinstance(f, Likelier):
        yield from walk(f.lhs)
        yield from walk(f.rhs)
    elif isinstance(f, Cond):
        yield from walk(f.antecedent)
        yield from walk(f.consequent)


def modal_leaves(f: Formula) -> list:
    """Distinct Likelier/Cond leaves in leftmost-first order."""
    seen = {}
    for node in walk(f):
        if isinstance(node, (Likelier, Cond)) and node not in seen:
            seen[node] = None
    return list(seen)


def evaluate(f: Formula, leaf: Callable[[Formula], bool]) -> bool:
    """Classical evaluation with ``leaf`` deciding Var/Likelier/Cond leaves."""
    if isinstance(f, Const):
        return f.value
    if isinstance(f, Not):
        return not evaluate(f.arg, leaf)
    if isinstance(f, And):
        return evaluate(f.left, leaf) and evaluate(f.right, leaf)
    if isinstance(f, Or):
        return evaluate(f.left, leaf) or evaluate(f.right, leaf)
    return leaf(f)


def holds_in(f: Formula, assignment) -> bool:
    """Truth of a propositional formula under the set of true variables."""
    return evaluate(f, lambda v: v.name in assignment)


def substitute(f: Formula, fn: Callable[[Formula], Formula]) -> Formula:
    """Rebuild ``f`` with every modal leaf replaced by ``fn(leaf)``."""
    if isinstance(f, (Likelier, Cond)):
        return fn(f)
    if isinstance(f, Not):
        return Not(substitute(f.arg, fn))
    if isinstance(f, And):
        return And(substitute(f.left, fn), substitute(f.right, fn))
    if isinstance(f, Or):
        return Or(substitute(f.left, fn), substitute(f.right, fn))
    return f


# -- printing ----------------------------------------------------------------

_PREC = {Or: 1, And: 2, Not: 3}


def to_text(f: Formula) -> str:
    if isinstance(f, (Likelier, Cond)):
        return _modal_text(f)
    return _text(f, 0)


def _modal_text(f):
    if isinstance(f, Likelier):
        return f"{_text(f.lhs, 0)} >> {_text(f.rhs, 0)}"
    return f"{_text(f.antecedent, 0)} => {_text(f.consequent, 0)}"


def _text(f, ctx):
    if isinstance(f, Var):
        return f.name
    if isinstance(f, Const):
        return "true" if f.value else "false"
    if isinstance(f, (Likelier, Cond)):
        return f"({_modal_text(f)})"
    prec = _PREC[type(f)]
    if isinstance(f, Not):
        s = "!" + _text(f.arg, prec)
    else:
        op = " & " if isinstance(f, And) else " | "
        # left-associative: a right operand of equal precedence needs parens
        s = _text(f.left, prec) + op + _text(f.right, prec + 1)
    return f"({s})" if prec < ctx else s


# -- parsing -----------------------------------------------------------------

_TOKENS = re.compile(r"\s*(?:(->|>>|=>|[!&|()])|([a-z][a-z0-9_]*)|(\S))")
_NAME = "NAME"
_END = "end of input"


def _tokenize(text):
    out = []
    for m in _TOKENS.finditer(text):
        op, name, junk = m.groups()
        if junk is not None:
            raise ParseError(f"unexpected character {junk!r}", m.start(3))
        if op is not None:
            out.append((op, op, m.start(1)))
        elif name is not None:
            out.append((_NAME, name, m.start(2)))
    out.append((_END, None, len(text)))
    return out


class _Parser:
    def __init__(self, text):
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i]

    def take(self):
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def expect(self, kind_):
        tok = self.peek()
        if tok[0] != kind_:
            raise ParseError(f"unexpected {_describe(tok)}", tok[2], {kind_})
        return self.take()

    def formula(self):
        left = self.impl()
        tok = self.peek()
        if tok[0] in (">>", "=>"):
            self.take()
            right_pos = self.peek()[2]
            right = self.impl()
            for side, pos in ((left, tok[2]), (right, right_pos)):
                if _kind(side) != PROP:
                    raise ParseError(f"'{tok[0]}' may not be nested", pos)
            nxt = self.peek()
            if nxt[0] in (">>", "=>"):
                raise ParseError(f"'{nxt[0]}' may not be nested", nxt[2])
            return Likelier(left, right) if tok[0] == ">>" else Cond(left, right)
        return left

    def impl(self):
        left = self.disj()
        tok = self.peek()
        if tok[0] == "->":
            self.take()
            right = self.impl()
            if _kind(left) != PROP or _kind(right) != PROP:
                raise ParseError("'->' joins propositional formulas only", tok[2])
            return Or(Not(left), right)
        return left

    def disj(self):
        left = self.conj()
        while self.peek()[0] == "|":
            tok = self.take()
            left = _combine(Or, left, self.conj(), tok)
        return left

    def conj(self):
        left = self.unary()
        while self.peek()[0] == "&":
            tok = self.take()
            left = _combine(And, left, self.unary(), tok)
        return left

    def unary(self):
        if self.peek()[0] == "!":
            self.take()
            return Not(self.unary())
        return self.atom()

    def atom(self):
        tok = self.peek()
        if tok[0] == _NAME:
            self.take()
            if tok[1] == "true":
                return TRUE
            if tok[1] == "false":
                return FALSE
            return Var(tok[1])
        if tok[0] == "(":
            self.take()
            f = self.formula()
            self.expect(")")
            return f
        raise ParseError(f"unexpected {_describe(tok)}", tok[2], {_NAME, "(", "!", "true", "false"})


def _kind(f):
    try:
        return kind(f)
    except ValueError:
        return None


def _combine(cls, left, right, tok):
    if _kind(left) != _kind(right):
        raise ParseError(
            f"'{tok[1]}' cannot join a {_kind(left)} formula with a {_kind(right)} formula", tok[2]
        )
    return cls(left, right)


def _describe(tok):
    return _END if tok[0] == _END else repr(tok[1])


def parse_formula(text: str) -> Formula:
    p = _Parser(text)
    f = p.formula()
    tok = p.peek()
    if tok[0] != _END:
        raise ParseError(f"unexpected {_describe(tok)}", tok[2], {_END, "&", "|", "->", ">>", "=>"})
    return f


def _parse_as(text, want):
    f = parse_formula(text)
    got = kind(f)
    if got != want:
        raise ParseError(f"expected a {want} formula, got a {got} formula", 0)
    return f


def parse_prop(text: str) -> Formula:
    return _parse_as(text, PROP)


def parse_l(text: str) -> Formula:
    return _parse_as(text, LIKELIHOOD)


def parse_cond(text: str) -> Formula:
    return _parse_as(text, CONDITIONAL)
