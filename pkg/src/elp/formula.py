"""Epistemic formulas over a finite set of agents and atoms.

The core language has atoms, negation, conjunction and the belief
operator ``K{i}``.  Disjunction, implication, equivalence and the
constants ``top``/``bot`` are kept as nodes so that printing round-trips,
but every semantic operation first calls :func:`desugar`.

Concrete syntax::

    form := atom | "~" form | form "&" form | form "|" form
          | form "->" form | form "<->" form | "K{" agent "}" form
          | "(" form ")" | "top" | "bot"

Precedence, tightest first: ``~``/``K{}``, ``&``, ``|``, ``->`` (right
associative), ``<->``.  Atom names start with a lowercase letter or an
underscore; identifiers starting with an uppercase letter are reserved
for program variables.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional, Union

from ._lexer import TokenStream
from .errors import ParseError, UnknownIdentifier

KEYWORDS = frozenset({"top", "bot", "mu"})


@dataclass(frozen=True)
class Universe:
    agents: tuple
    atoms: tuple

    def __init__(self, agents: Iterable[str] = (), atoms: Iterable[str] = ()):
        object.__setattr__(self, "agents", tuple(agents))
        object.__setattr__(self, "atoms", tuple(atoms))


@dataclass(frozen=True)
class Atom:
    name: str


@dataclass(frozen=True)
class Not:
    arg: "Formula"


@dataclass(frozen=True)
class And:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Know:
    agent: str
    arg: "Formula"


@dataclass(frozen=True)
class Or:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Implies:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Iff:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Top:
    pass


@dataclass(frozen=True)
class Bot:
    pass


Formula = Union[Atom, Not, And, Know, Or, Implies, Iff, Top, Bot]
TOP = Top()
BOT = Bot()


def conj(*fs):
    if not fs:
        return TOP
    out = fs[0]
    for f in fs[1:]:
        out = And(out, f)
    return out


def know_group(agents, f):
    """K_B f, i.e. K_i f for every i in the group."""
    return conj(*(Know(a, f) for a in agents))


# ---------------------------------------------------------------- desugaring

DEFAULT_ANCHOR = "p"


def desugar(f: Formula, anchor: Optional[str] = None) -> Formula:
    """Rewrite into atoms, ``Not``, ``And`` and ``Know`` only.

    ``top`` becomes ``anchor | ~anchor`` for a designated atom; which atom
    is used has no semantic effect since atoms are applicable everywhere.
    """
    if anchor is None:
        names = sorted(atoms_of(f))
        anchor = names[0] if names else DEFAULT_ANCHOR
    return _desugar(f, anchor)


def _desugar(f, anchor):
    if isinstance(f, Atom):
        return f
    if isinstance(f, Not):
        inner = _desugar(f.arg, anchor)
        return Not(inner)
    if isinstance(f, And):
        return And(_desugar(f.left, anchor), _desugar(f.right, anchor))
    if isinstance(f, Know):
        return Know(f.agent, _desugar(f.arg, anchor))
    if isinstance(f, Or):
        return Not(And(Not(_desugar(f.left, anchor)), Not(_desugar(f.right, anchor))))
    if isinstance(f, Implies):
        return Not(And(_desugar(f.left, anchor), Not(_desugar(f.right, anchor))))
    if isinstance(f, Iff):
        left, right = _desugar(f.left, anchor), _desugar(f.right, anchor)
        return And(Not(And(left, Not(right))), Not(And(right, Not(left))))
    if isinstance(f, Top):
        a = Atom(anchor)
        return Not(And(Not(a), Not(Not(a))))
    if isinstance(f, Bot):
        a = Atom(anchor)
        return And(a, Not(a))
    raise TypeError(f"not a formula: {f!r}")


def atoms_of(f: Formula) -> set:
    out = set()
    _walk(f, out, None)
    return out


def agents_of(f: Formula) -> set:
    out = set()
    _walk(f, None, out)
    return out


def _walk(f, atoms, agents):
    stack = [f]
    while stack:
        g = stack.pop()
        if isinstance(g, Atom):
            if atoms is not None:
                atoms.add(g.name)
        elif isinstance(g, Not):
            stack.append(g.arg)
        elif isinstance(g, Know):
            if agents is not None:
                agents.add(g.agent)
            stack.append(g.arg)
        elif isinstance(g, (And, Or, Implies, Iff)):
            stack.append(g.left)
            stack.append(g.right)


def modal_depth(f: Formula) -> int:
    if isinstance(f, Atom) or isinstance(f, (Top, Bot)):
        return 0
    if isinstance(f, Not):
        return modal_depth(f.arg)
    if isinstance(f, Know):
        return 1 + modal_depth(f.arg)
    return max(modal_depth(f.left), modal_depth(f.right))


def size(f: Formula) -> int:
    if isinstance(f, (Atom, Top, Bot)):
        return 1
    if isinstance(f, (Not, Know)):
        return 1 + size(f.arg)
    return 1 + size(f.left) + size(f.right)


# ------------------------------------------------------------------ printing

_PREC = {Iff: 1, Implies: 2, Or: 3, And: 4}
_SYM = {Iff: "<->", Implies: "->", Or: "|", And: "&"}


def _prec(f):
    return _PREC.get(type(f), 5)


def to_str(f: Formula) -> str:
    """Canonical concrete syntax; ``parse_formula(to_str(f)) == f``."""
    if isinstance(f, Atom):
        return f.name
    if isinstance(f, Top):
        return "top"
    if isinstance(f, Bot):
        return "bot"
    if isinstance(f, Not):
        return "~" + _wrap(f.arg, 5)
    if isinstance(f, Know):
        return f"K{{{f.agent}}} " + _wrap(f.arg, 5)
    p = _PREC[type(f)]
    if isinstance(f, Implies):
        # right associative
        left, right = _wrap(f.left, p + 1), _wrap(f.right, p)
    else:
        left, right = _wrap(f.left, p), _wrap(f.right, p + 1)
    return f"{left} {_SYM[type(f)]} {right}"


def _wrap(f, min_prec):
    s = to_str(f)
    return s if _prec(f) >= min_prec else f"({s})"


# ------------------------------------------------------------------- parsing

def parse_formula(text: str, universe: Optional[Universe] = None) -> Formula:
    """Parse ``text``; identifiers are checked against ``universe`` if given."""
    ts = TokenStream(text)
    f = parse_formula_tokens(ts, universe)
    tok = ts.peek()
    if tok.kind != "eof":
        raise ParseError(f"unexpected {tok.text!r}", text, tok.pos)
    return f


def parse_formula_tokens(ts: TokenStream, universe=None) -> Formula:
    return _Parser(ts, universe).iff()


class _Parser:
    def __init__(self, ts, universe):
        self.ts = ts
        self.universe = universe

    def iff(self):
        left = self.implies()
        while self.ts.accept("<->"):
            left = Iff(left, self.implies())
        return left

    def implies(self):
        left = self.disj()
        if self.ts.accept("->"):
            return Implies(left, self.implies())
        return left

    def disj(self):
        left = self.conj()
        # "|{" introduces wrong learning in the program language
        while self.ts.peek().kind == "|" and self.ts.peek(1).kind != "{":
            self.ts.next()
            left = Or(left, self.conj())
        return left

    def conj(self):
        left = self.unary()
        while self.ts.accept("&"):
            left = And(left, self.unary())
        return left

    def unary(self):
        ts = self.ts
        tok = ts.peek()
        if ts.accept("~"):
            return Not(self.unary())
        if ts.accept("("):
            f = self.iff()
            ts.expect(")")
            return f
        if tok.kind == "ident":
            if tok.text == "K" and ts.peek(1).kind == "{":
                ts.next()
                ts.next()
                agent = ts.expect("ident", "agent").text
                self._check_agent(agent, tok)
                ts.expect("}")
                return Know(agent, self.unary())
            if tok.text == "top":
                ts.next()
                return TOP
            if tok.text == "bot":
                ts.next()
                return BOT
            if tok.text in KEYWORDS or tok.text[0].isupper():
                raise ts.error(f"expected formula, found {tok.text!r}")
            ts.next()
            if self.universe is not None and tok.text not in self.universe.atoms:
                raise UnknownIdentifier(f"unknown atom {tok.text!r}", ts.text, tok.pos)
            return Atom(tok.text)
        raise ts.error(f"expected formula, found {tok.text or 'end of input'!r}")

    def _check_agent(self, agent, tok):
        if self.universe is not None and agent not in self.universe.agents:
            raise UnknownIdentifier(f"unknown agent {agent!r}", self.ts.text, tok.pos)
