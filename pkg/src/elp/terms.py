"""Learning-program terms: syntax, group/pre, side conditions, parsing, printing.

Concrete syntax::

    term  := unary ("^" unary)*
    unary := "?" form
           | "L{" agents "}(" term ("," term)* ")"
           | form "|{" agents "}" unary
           | "mu" VAR "." term
           | VAR
           | "(" term ")"

``^`` is concurrent learning and associates to the left; ``|{B}`` (wrong
learning) binds tighter.  A ``mu`` body extends as far right as possible.
Variables start with an uppercase letter.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Union

from ._lexer import TokenStream
from .errors import IllFormed, ParseError, UnknownIdentifier
from .formula import Formula, Universe, parse_formula_tokens, to_str
from .formula import _prec as _formula_prec
from .kd45 import get_oracle


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Test:
    formula: Formula


@dataclass(frozen=True)
class Learn:
    group: frozenset
    args: tuple

    def __init__(self, group, args):
        args = tuple(args)
        if not args:
            raise ValueError("L_B needs at least one argument")
        object.__setattr__(self, "group", frozenset(group))
        object.__setattr__(self, "args", args)


@dataclass(frozen=True)
class Concur:
    left: "Term"
    right: "Term"


@dataclass(frozen=True)
class Wrong:
    formula: Formula
    group: frozenset
    arg: "Term"

    def __init__(self, formula, group, arg):
        object.__setattr__(self, "formula", formula)
        object.__setattr__(self, "group", frozenset(group))
        object.__setattr__(self, "arg", arg)


@dataclass(frozen=True)
class Mu:
    var: str
    body: "Term"


Term = Union[Var, Test, Learn, Concur, Wrong, Mu]


def concur(*terms):
    out = terms[0]
    for t in terms[1:]:
        out = Concur(out, t)
    return out


def children(t):
    if isinstance(t, Learn):
        return t.args
    if isinstance(t, Concur):
        return (t.left, t.right)
    if isinstance(t, Wrong):
        return (t.arg,)
    if isinstance(t, Mu):
        return (t.body,)
    return ()


def free_vars(t) -> frozenset:
    if isinstance(t, Var):
        return frozenset([t.name])
    if isinstance(t, Mu):
        return free_vars(t.body) - {t.var}
    out = frozenset()
    for c in children(t):
        out |= free_vars(c)
    return out


def is_closed(t) -> bool:
    return not free_vars(t)


def has_mu(t) -> bool:
    return isinstance(t, Mu) or any(has_mu(c) for c in children(t))


def term_size(t) -> int:
    return 1 + sum(term_size(c) for c in children(t))


# ---------------------------------------------------------------- group / pre

@dataclass(frozen=True)
class TermMeta:
    group: Optional[frozenset]
    pre: Optional[Formula]
    free_vars: frozenset

    @property
    def defined(self):
        return self.group is not None and self.pre is not None


_UNDEF = (None, None)


def _meta(t, env):
    if isinstance(t, Var):
        return env.get(t.name, _UNDEF)
    if isinstance(t, Test):
        return frozenset(), t.formula
    if isinstance(t, Learn):
        g, p = _meta(t.args[0], env)
        return (t.group | g if g is not None else None), p
    if isinstance(t, Concur):
        g1, p1 = _meta(t.left, env)
        g2, p2 = _meta(t.right, env)
        g = g1 | g2 if g1 is not None and g2 is not None else None
        p = p1 if p1 is not None and p2 is not None else None
        return g, p
    if isinstance(t, Wrong):
        return t.group, t.formula
    if isinstance(t, Mu):
        inner = dict(env)
        inner[t.var] = _UNDEF
        return _meta(t.body, inner)
    raise TypeError(f"not a term: {t!r}")


def meta(t, env=None) -> TermMeta:
    """Group and precondition of ``t``; ``None`` marks an undefined value."""
    g, p = _meta(t, dict(env or {}))
    return TermMeta(g, p, free_vars(t))


@dataclass(frozen=True)
class Violation:
    path: str
    message: str

    def __str__(self):
        return f"{self.path or '<root>'}: {self.message}"


def _pre_equal(p1, p2, oracle):
    return p1 == p2 if oracle is None else oracle.equivalent(p1, p2)


def well_formed(t, oracle="syntactic", universe: Optional[Universe] = None):
    """List of violated side conditions (empty when ``t`` is well formed)."""
    oracle = None if oracle == "syntactic" else get_oracle(oracle)
    out = []
    _check(t, {}, "", out, oracle, universe)
    return out


def _check(t, env, path, out, oracle, universe):
    def sub(i):
        return f"{path}.{i}" if path else str(i)

    if universe is not None:
        for grp in ([t.group] if isinstance(t, (Learn, Wrong)) else []):
            bad = sorted(set(grp) - set(universe.agents))
            if bad:
                out.append(Violation(path, f"unknown agents {bad}"))
    if isinstance(t, Learn):
        for i, c in enumerate(t.args):
            _check(c, env, sub(i), out, oracle, universe)
    elif isinstance(t, Concur):
        _check(t.left, env, sub(0), out, oracle, universe)
        _check(t.right, env, sub(1), out, oracle, universe)
        g1, p1 = _meta(t.left, env)
        g2, p2 = _meta(t.right, env)
        if g1 is not None and g2 is not None and g1 & g2:
            out.append(Violation(path, f"concurrent groups overlap on {sorted(g1 & g2)}"))
        if p1 is not None and p2 is not None and not _pre_equal(p1, p2, oracle):
            out.append(Violation(
                path, f"concurrent preconditions differ: {to_str(p1)} vs {to_str(p2)}"))
    elif isinstance(t, Wrong):
        _check(t.arg, env, sub(0), out, oracle, universe)
        g, _ = _meta(t.arg, env)
        if g is not None and not t.group <= g:
            out.append(Violation(
                path, f"wrong-learning group {sorted(t.group)} not within {sorted(g)}"))
    elif isinstance(t, Mu):
        inner = dict(env)
        inner[t.var] = _UNDEF
        g, p = _meta(t.body, inner)
        if g is None or p is None:
            out.append(Violation(path, f"body of mu {t.var} has undefined group or pre"))
            _check(t.body, inner, sub(0), out, oracle, universe)
        else:
            inner[t.var] = (g, p)
            _check(t.body, inner, sub(0), out, oracle, universe)


def check_program(t, oracle="syntactic", universe=None):
    """Raise IllFormed unless ``t`` is a closed, well-formed program."""
    problems = well_formed(t, oracle, universe)
    loose = free_vars(t)
    if loose:
        problems.append(Violation("", f"free variables {sorted(loose)}"))
    if problems:
        raise IllFormed(problems)
    return t


# ------------------------------------------------------------ dependent mu

def _mu_nodes(t):
    """Mu nodes of ``t``, outermost first."""
    if isinstance(t, Mu):
        yield t
    for c in children(t):
        yield from _mu_nodes(c)


def dependent_mu_count(t) -> int:
    """Longest chain of nested mu binders, each using the previous variable."""
    memo = {}

    def active(m):
        return m.var in free_vars(m.body)

    def chain(m):
        key = id(m)
        if key not in memo:
            best = 1
            for inner in _mu_nodes(m.body):
                if inner is not m and active(inner) and m.var in free_vars(inner.body):
                    best = max(best, 1 + chain(inner))
            memo[key] = best
        return memo[key]

    return max((chain(m) for m in _mu_nodes(t) if active(m)), default=0)


# ------------------------------------------------------------------ printing

def _agents(group):
    return "{" + ",".join(sorted(group)) + "}"


def _ends_open(t):
    # a trailing mu body would swallow anything printed after it
    if isinstance(t, Mu):
        return True
    if isinstance(t, Wrong):
        return _ends_open(t.arg)
    if isinstance(t, Concur):
        return _ends_open(t.right)
    return False


def term_to_str(t) -> str:
    """Canonical program syntax."""
    if isinstance(t, Var):
        return t.name
    if isinstance(t, Test):
        f = to_str(t.formula)
        return "?" + (f if _formula_prec(t.formula) >= 5 else f"({f})")
    if isinstance(t, Learn):
        return f"L{_agents(t.group)}(" + ", ".join(term_to_str(a) for a in t.args) + ")"
    if isinstance(t, Concur):
        left = term_to_str(t.left)
        if _ends_open(t.left):
            left = f"({left})"
        right = term_to_str(t.right)
        if isinstance(t.right, Concur):
            right = f"({right})"
        return f"{left} ^ {right}"
    if isinstance(t, Wrong):
        f = to_str(t.formula)
        if _formula_prec(t.formula) < 5:
            f = f"({f})"
        arg = term_to_str(t.arg)
        if isinstance(t.arg, Concur):
            arg = f"({arg})"
        return f"{f} |{_agents(t.group)} {arg}"
    if isinstance(t, Mu):
        return f"mu {t.var}. {term_to_str(t.body)}"
    raise TypeError(f"not a term: {t!r}")


# ------------------------------------------------------------------- parsing

def parse_term(text: str, universe: Optional[Universe] = None):
    ts = TokenStream(text)
    t = _TermParser(ts, universe).term()
    tok = ts.peek()
    if tok.kind != "eof":
        raise ParseError(f"unexpected {tok.text!r}", text, tok.pos)
    return t


class _TermParser:
    def __init__(self, ts, universe):
        self.ts = ts
        self.universe = universe

    def term(self):
        left = self.unary()
        while self.ts.accept("^"):
            left = Concur(left, self.unary())
        return left

    def agents(self):
        ts = self.ts
        ts.expect("{")
        out = []
        if ts.peek().kind != "}":
            while True:
                tok = ts.expect("ident", "agent")
                if self.universe is not None and tok.text not in self.universe.agents:
                    raise UnknownIdentifier(f"unknown agent {tok.text!r}", ts.text, tok.pos)
                out.append(tok.text)
                if not ts.accept(","):
                    break
        ts.expect("}")
        return frozenset(out)

    def _try_wrong_prefix(self):
        """Parse ``form |{`` if present; restore the stream otherwise."""
        ts = self.ts
        start = ts.i
        try:
            parse_formula_tokens(ts, None)
            ok = ts.peek().kind == "|" and ts.peek(1).kind == "{"
        except ParseError:
            ok = False
        ts.i = start
        if not ok:
            return None
        f = parse_formula_tokens(ts, self.universe)  # again, now with identifier checks
        ts.expect("|")
        return f

    def unary(self):
        ts = self.ts
        tok = ts.peek()
        if ts.accept("?"):
            return Test(parse_formula_tokens(ts, self.universe))
        if tok.kind == "ident" and tok.text == "L" and ts.peek(1).kind == "{":
            ts.next()
            group = self.agents()
            ts.expect("(")
            args = [self.term()]
            while ts.accept(","):
                args.append(self.term())
            ts.expect(")")
            return Learn(group, args)
        if tok.kind == "ident" and tok.text == "mu" and ts.peek(1).kind == "ident":
            ts.next()
            var = ts.next()
            if not var.text[0].isupper():
                raise ts.error("mu variables start with an uppercase letter", var)
            ts.expect(".")
            return Mu(var.text, self.term())
        f = self._try_wrong_prefix()
        if f is not None:
            group = self.agents()
            return Wrong(f, group, self.unary())
        if tok.kind == "ident" and tok.text[0].isupper():
            ts.next()
            return Var(tok.text)
        if ts.accept("("):
            t = self.term()
            ts.expect(")")
            return t
        raise ts.error(f"expected program, found {tok.text or 'end of input'!r}")


__all__ = [
    "Var", "Test", "Learn", "Concur", "Wrong", "Mu", "Term", "concur",
    "children", "free_vars", "is_closed", "has_mu", "term_size",
    "TermMeta", "meta", "Violation", "well_formed", "check_program",
    "dependent_mu_count", "term_to_str", "parse_term",
]
