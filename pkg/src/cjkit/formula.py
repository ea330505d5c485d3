"""Formulas of the CJ language, with an ASCII parser and printer.

Surface syntax, loosest binding first::

    A <-> B        (left associative)
    A -> B         (right associative)
    A | B
    A & B
    ~A  []A  <>A  [a]A  <a>A  Oa A  Oi A     (prefix, tightest)
    O(B|A)  viol(A)  true  false  (A)

``[]``/``<>`` are the strong (potential) box and diamond, ``[a]``/``<a>``
the actual ones.  Inside ``O( | )`` the bar separates consequent from
antecedent, so a disjunction in the consequent needs its own parentheses:
``O((A | B)|C)``.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterator

from .errors import FormulaSyntaxError, UnknownToken


class Formula:
    __slots__ = ()

    def __str__(self):
        return render_formula(self)


@dataclass(frozen=True)
class Atom(Formula):
    name: str


@dataclass(frozen=True)
class Top(Formula):
    pass


@dataclass(frozen=True)
class Bottom(Formula):
    pass


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


@dataclass(frozen=True)
class BoxStrong(Formula):
    """``[]A``: A holds at every potentially possible world."""
    arg: Formula


@dataclass(frozen=True)
class DiaStrong(Formula):
    arg: Formula


@dataclass(frozen=True)
class BoxActual(Formula):
    """``[a]A``: A holds at every actually possible world."""
    arg: Formula


@dataclass(frozen=True)
class DiaActual(Formula):
    arg: Formula


@dataclass(frozen=True)
class OblActual(Formula):
    arg: Formula


@dataclass(frozen=True)
class OblIdeal(Formula):
    arg: Formula


@dataclass(frozen=True)
class OblCond(Formula):
    """``O(consequent|antecedent)``."""
    consequent: Formula
    antecedent: Formula


@dataclass(frozen=True)
class Viol(Formula):
    """Shorthand for ``Oi A & ~A``."""
    arg: Formula


UNARY = (Not, BoxStrong, DiaStrong, BoxActual, DiaActual, OblActual, OblIdeal)
BINARY = (And, Or, Implies, Iff)

KEYWORDS = frozenset({"O", "Oa", "Oi", "viol", "true", "false"})

_PREFIX = {
    "~": Not, "[]": BoxStrong, "<>": DiaStrong, "[a]": BoxActual,
    "<a>": DiaActual, "Oa": OblActual, "Oi": OblIdeal,
}
_PREFIX_TEXT = {cls: tok for tok, cls in _PREFIX.items()}

_TOKEN = re.compile(r"""
    (?P<ws>\s+)
  | (?P<op><->|->|\[\]|<>|\[a\]|<a>|[~&|()])
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
""", re.VERBOSE)


def tokenize(text: str) -> list[tuple[str, int]]:
    """Split ``text`` into ``(token, position)`` pairs, ending with ``("", len)``."""
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise UnknownToken(pos, text)
        if m.lastgroup != "ws":
            tokens.append((m.group(), pos))
        pos = m.end()
    tokens.append(("", len(text)))
    return tokens


def is_identifier(name: str) -> bool:
    return bool(re.fullmatch(r"[A-Za-z_][A-Za-z0-9_]*", name)) and name not in KEYWORDS


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = tokenize(text)
        self.i = 0

    def peek(self) -> str:
        return self.tokens[self.i][0]

    def pos(self) -> int:
        return self.tokens[self.i][1]

    def advance(self) -> str:
        tok = self.tokens[self.i][0]
        self.i += 1
        return tok

    def expect(self, tok: str) -> None:
        if self.peek() != tok:
            raise FormulaSyntaxError(self.pos(), repr(tok), self.text)
        self.i += 1

    def parse(self) -> Formula:
        f = self.iff(False)
        if self.peek() != "":
            raise FormulaSyntaxError(self.pos(), "end of input", self.text)
        return f

    # no_bar: inside O(...|...) the consequent may not use a bare '|'
    def iff(self, no_bar: bool) -> Formula:
        f = self.imp(no_bar)
        while self.peek() == "<->":
            self.advance()
            f = Iff(f, self.imp(no_bar))
        return f

    def imp(self, no_bar: bool) -> Formula:
        f = self.disj(no_bar)
        if self.peek() == "->":
            self.advance()
            return Implies(f, self.imp(no_bar))
        return f

    def disj(self, no_bar: bool) -> Formula:
        f = self.conj()
        while not no_bar and self.peek() == "|":
            self.advance()
            f = Or(f, self.conj())
        return f

    def conj(self) -> Formula:
        f = self.unary()
        while self.peek() == "&":
            self.advance()
            f = And(f, self.unary())
        return f

    def unary(self) -> Formula:
        tok = self.peek()
        if tok in _PREFIX:
            self.advance()
            return _PREFIX[tok](self.unary())
        if tok == "O":
            self.advance()
            self.expect("(")
            consequent = self.iff(True)
            self.expect("|")
            antecedent = self.iff(False)
            self.expect(")")
            return OblCond(consequent, antecedent)
        if tok == "viol":
            self.advance()
            self.expect("(")
            arg = self.iff(False)
            self.expect(")")
            return Viol(arg)
        if tok == "true":
            self.advance()
            return Top()
        if tok == "false":
            self.advance()
            return Bottom()
        if tok == "(":
            self.advance()
            f = self.iff(False)
            self.expect(")")
            return f
        if tok and (tok[0].isalpha() or tok[0] == "_"):
            self.advance()
            return Atom(tok)
        raise FormulaSyntaxError(self.pos(), "a formula", self.text)


def parse_formula(text: str) -> Formula:
    """Parse ``text`` into a :class:`Formula`.

    Raises :class:`FormulaSyntaxError` (or its subclass :class:`UnknownToken`)
    carrying the character position of the problem.
    """
    return _Parser(text).parse()


# binding strength; larger binds tighter
_IFF, _IMP, _OR, _AND, _UNARY = 1, 2, 3, 4, 5
_LEVEL = {Iff: _IFF, Implies: _IMP, Or: _OR, And: _AND}
_SYMBOL = {Iff: "<->", Implies: "->", Or: "|", And: "&"}


def _level(f: Formula) -> int:
    return _LEVEL.get(type(f), _UNARY)


def _render(f: Formula, ctx: int, no_bar: bool) -> str:
    level = _level(f)
    if level < ctx or (no_bar and isinstance(f, Or)):
        return "(" + _render(f, 0, False) + ")"
    t = type(f)
    if t is Atom:
        return f.name
    if t is Top:
        return "true"
    if t is Bottom:
        return "false"
    if t in _PREFIX_TEXT:
        op = _PREFIX_TEXT[t]
        sep = " " if op[-1].isalpha() else ""
        return op + sep + _render(f.arg, _UNARY, no_bar)
    if t is OblCond:
        return "O(" + _render(f.consequent, 0, True) + "|" + _render(f.antecedent, 0, False) + ")"
    if t is Viol:
        return "viol(" + _render(f.arg, 0, False) + ")"
    if t is Implies:
        left, right = level + 1, level
    else:
        left, right = level, level + 1
    return f"{_render(f.left, left, no_bar)} {_SYMBOL[t]} {_render(f.right, right, no_bar)}"


def render_formula(f: Formula) -> str:
    """Canonical text for ``f`` with the fewest parentheses that parse back to it."""
    return _render(f, 0, False)


def subformulas(f: Formula) -> Iterator[Formula]:
    yield f
    t = type(f)
    if t in UNARY or t is Viol:
        yield from subformulas(f.arg)
    elif t in BINARY:
        yield from subformulas(f.left)
        yield from subformulas(f.right)
    elif t is OblCond:
        yield from subformulas(f.consequent)
        yield from subformulas(f.antecedent)


def atoms_of(f: Formula) -> set[str]:
    return {g.name for g in subformulas(f) if type(g) is Atom}
