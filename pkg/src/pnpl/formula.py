"""Propositional formulas over feature names.

Grammar (tightest binding first)::

    !a          negation
    a & b       conjunction        (left associative)
    a | b       disjunction        (left associative)
    a -> b      implication        (right associative)
    a <-> b     biconditional      (left associative)

plus ``true``, ``false``, parentheses and identifiers ``[A-Za-z_][A-Za-z0-9_]*``.

Formulas are compiled against a feature model into a :class:`ConfigSet`, the
set of valid configurations that satisfy them.  Conjunction becomes bitwise
intersection, which is what makes the feature-path bookkeeping of the
reachability-graph builder cheap and exact.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping

from pnpl.errors import FormulaSyntaxError, UndeclaredFeatureError

__all__ = [
    "Formula", "Const", "Var", "Not", "And", "Or", "Implies", "Iff",
    "TRUE", "FALSE", "parse_formula", "to_text", "evaluate", "variables",
    "conj", "disj", "ConfigSet", "to_config_set", "satisfiable_with",
]


class Formula:
    """Base class of all formula nodes."""

    __slots__ = ()

    def __str__(self) -> str:
        return to_text(self)


@dataclass(frozen=True)
class Const(Formula):
    value: bool


@dataclass(frozen=True)
class Var(Formula):
    name: str


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
class Implies(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Iff(Formula):
    left: Formula
    right: Formula


TRUE = Const(True)
FALSE = Const(False)

# ---------------------------------------------------------------- parsing

_TOKEN = re.compile(
    r"\s*(?:(?P<op><->|->|[!&|()])|(?P<ident>[A-Za-z_][A-Za-z0-9_]*))"
)


def _tokenize(text):
    pos = 0
    tokens = []
    n = len(text)
    while pos < n:
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if m is None:
            bad = pos + (len(text[pos:]) - len(text[pos:].lstrip()))
            raise FormulaSyntaxError(f"unexpected character {text[bad]!r}", text, bad)
        kind = "op" if m.group("op") else "ident"
        start = m.start(kind)
        tokens.append((kind, m.group(kind), start))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text, features):
        self.text = text
        self.features = features
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, value):
        kind, val, pos = self.take()
        if val != value or kind == "end":
            found = "end of input" if kind == "end" else repr(val)
            raise FormulaSyntaxError(f"expected {value!r}, found {found}", self.text, pos)

    def parse(self):
        if self.peek()[0] == "end":
            raise FormulaSyntaxError("empty formula", self.text, 0)
        node = self.iff()
        kind, val, pos = self.peek()
        if kind != "end":
            raise FormulaSyntaxError(f"unexpected {val!r}", self.text, pos)
        return node

    def iff(self):
        node = self.implies()
        while self.peek()[1] == "<->":
            self.take()
            node = Iff(node, self.implies())
        return node

    def implies(self):
        node = self.disjunction()
        if self.peek()[1] == "->":
            self.take()
            return Implies(node, self.implies())
        return node

    def disjunction(self):
        node = self.conjunction()
        while self.peek()[1] == "|":
            self.take()
            node = Or(node, self.conjunction())
        return node

    def conjunction(self):
        node = self.unary()
        while self.peek()[1] == "&":
            self.take()
            node = And(node, self.unary())
        return node

    def unary(self):
        if self.peek()[1] == "!":
            self.take()
            return Not(self.unary())
        return self.atom()

    def atom(self):
        kind, val, pos = self.take()
        if kind == "ident":
            if val == "true":
                return TRUE
            if val == "false":
                return FALSE
            if self.features is not None and val not in self.features:
                raise UndeclaredFeatureError(val)
            return Var(val)
        if val == "(":
            node = self.iff()
            self.expect(")")
            return node
        found = "end of input" if kind == "end" else repr(val)
        raise FormulaSyntaxError(f"unexpected {found}", self.text, pos)


def parse_formula(text: str, features: Iterable[str] | None = None) -> Formula:
    """Parse ``text``; identifiers must belong to ``features`` when it is given."""
    feats = None if features is None else frozenset(features)
    return _Parser(text, feats).parse()


# ---------------------------------------------------------------- printing

_PREC = {Iff: 1, Implies: 2, Or: 3, And: 4, Not: 5}
_SYMBOL = {Iff: "<->", Implies: "->", Or: "|", And: "&"}


def _prec(f):
    return _PREC.get(type(f), 6)


def to_text(f: Formula) -> str:
    """Render with the fewest parentheses that still parse back to ``f``."""
    if isinstance(f, Const):
        return "true" if f.value else "false"
    if isinstance(f, Var):
        return f.name
    if isinstance(f, Not):
        inner = to_text(f.arg)
        return "!" + (f"({inner})" if _prec(f.arg) < 5 else inner)
    p = _prec(f)
    right_assoc = isinstance(f, Implies)
    left = to_text(f.left)
    right = to_text(f.right)
    lp, rp = _prec(f.left), _prec(f.right)
    if lp < p or (lp == p and right_assoc):
        left = f"({left})"
    if rp < p or (rp == p and not right_assoc):
        right = f"({right})"
    return f"{left} {_SYMBOL[type(f)]} {right}"


# ---------------------------------------------------------------- semantics

def evaluate(f: Formula, a: Mapping[str, bool]) -> bool:
    if isinstance(f, Const):
        return f.value
    if isinstance(f, Var):
        return bool(a[f.name])
    if isinstance(f, Not):
        return not evaluate(f.arg, a)
    if isinstance(f, And):
        return evaluate(f.left, a) and evaluate(f.right, a)
    if isinstance(f, Or):
        return evaluate(f.left, a) or evaluate(f.right, a)
    if isinstance(f, Implies):
        return (not evaluate(f.left, a)) or evaluate(f.right, a)
    if isinstance(f, Iff):
        return evaluate(f.left, a) == evaluate(f.right, a)
    raise TypeError(f"not a formula: {f!r}")


def variables(f: Formula) -> set[str]:
    out: set[str] = set()
    stack = [f]
    while stack:
        g = stack.pop()
        if isinstance(g, Var):
            out.add(g.name)
        elif isinstance(g, Not):
            stack.append(g.arg)
        elif isinstance(g, (And, Or, Implies, Iff)):
            stack.extend((g.left, g.right))
    return out


def _flatten(f, kind):
    if isinstance(f, kind):
        yield from _flatten(f.left, kind)
        yield from _flatten(f.right, kind)
    else:
        yield f


def _chain(parts, kind, unit, zero):
    seen = []
    for part in parts:
        for g in _flatten(part, kind):
            if g == zero:
                return zero
            if g != unit and g not in seen:
                seen.append(g)
    if not seen:
        return unit
    node = seen[0]
    for g in seen[1:]:
        node = kind(node, g)
    return node


def conj(*parts: Formula) -> Formula:
    """Conjunction dropping ``true`` and repeated conjuncts."""
    return _chain(parts, And, TRUE, FALSE)


def disj(*parts: Formula) -> Formula:
    """Disjunction dropping ``false`` and repeated disjuncts."""
    return _chain(parts, Or, FALSE, TRUE)


# ---------------------------------------------------------------- config sets

@dataclass(frozen=True)
class ConfigSet:
    """Subset of a feature model's valid configurations.

    Bit ``i`` of ``mask`` stands for the ``i``-th configuration in the
    canonical enumeration order; ``size`` is the number of valid
    configurations.
    """

    mask: int
    size: int

    @classmethod
    def full(cls, size: int) -> "ConfigSet":
        return cls((1 << size) - 1, size)

    @classmethod
    def empty(cls, size: int) -> "ConfigSet":
        return cls(0, size)

    @classmethod
    def of(cls, indices: Iterable[int], size: int) -> "ConfigSet":
        mask = 0
        for i in indices:
            if not 0 <= i < size:
                raise IndexError(i)
            mask |= 1 << i
        return cls(mask, size)

    def _check(self, other):
        if self.size != other.size:
            raise ValueError("config sets over different configuration spaces")

    def __and__(self, other: "ConfigSet") -> "ConfigSet":
        self._check(other)
        return ConfigSet(self.mask & other.mask, self.size)

    def __or__(self, other: "ConfigSet") -> "ConfigSet":
        self._check(other)
        return ConfigSet(self.mask | other.mask, self.size)

    def __sub__(self, other: "ConfigSet") -> "ConfigSet":
        self._check(other)
        return ConfigSet(self.mask & ~other.mask, self.size)

    def __invert__(self) -> "ConfigSet":
        return ConfigSet(((1 << self.size) - 1) & ~self.mask, self.size)

    def __bool__(self) -> bool:
        return self.mask != 0

    def __len__(self) -> int:
        return self.mask.bit_count()

    def __contains__(self, index: int) -> bool:
        return index >= 0 and bool(self.mask >> index & 1)

    def __iter__(self) -> Iterator[int]:
        m = self.mask
        while m:
            low = m & -m
            yield low.bit_length() - 1
            m ^= low

    def issubset(self, other: "ConfigSet") -> bool:
        self._check(other)
        return self.mask & ~other.mask == 0


def _compile(f, masks, full):
    if isinstance(f, Const):
        return full if f.value else 0
    if isinstance(f, Var):
        return masks[f.name]
    if isinstance(f, Not):
        return full & ~_compile(f.arg, masks, full)
    left = _compile(f.left, masks, full)
    right = _compile(f.right, masks, full)
    if isinstance(f, And):
        return left & right
    if isinstance(f, Or):
        return left | right
    if isinstance(f, Implies):
        return (full & ~left) | right
    if isinstance(f, Iff):
        return full & ~(left ^ right)
    raise TypeError(f"not a formula: {f!r}")


def to_config_set(f: Formula, fm) -> ConfigSet:
    """Valid configurations of ``fm`` satisfying ``f``."""
    space = fm.space
    return ConfigSet(_compile(f, space.feature_masks, space.full_mask), space.size)


def satisfiable_with(f: Formula, fm) -> bool:
    """True iff some valid configuration of ``fm`` satisfies ``f``."""
    return bool(to_config_set(f, fm))
