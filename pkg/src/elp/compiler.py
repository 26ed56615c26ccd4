"""Compile learning programs to (open) pointed action models.

An :class:`OpenModel` is an action model that may still mention program
variables.  Each free variable ``X`` owns one hole event ``H:X`` standing
for the actual event of whatever model is substituted later.  A *deferred*
edge ``(u, a, X)`` says that ``u`` sees, via ``a``, every ``a``-successor of
that future event; a hole carries such an edge to itself for every agent.
Preconditions copied from a hole are the placeholder :class:`PreOf`.
"""

from __future__ import annotations

import itertools
import warnings
from dataclasses import dataclass, field
from typing import Optional

from ._refine import coarsest_partition
from .actions import ActionModel, PointedAction, _pre_classes
from .errors import HoleBisimilarityWarning, IllFormed, VariableNotFree
from .formula import agents_of
from .kd45 import get_oracle
from .terms import Concur, Learn, Mu, Test, Var, Wrong, check_program, free_vars


@dataclass(frozen=True)
class PreOf:
    """Precondition of the event eventually substituted for ``var``."""

    var: str


def hole_id(var):
    return f"H:{var}"


@dataclass
class OpenModel:
    events: list
    pre: dict
    edges: set
    deferred: set
    holes: dict  # var -> hole event
    actual: str
    agents: tuple = ()
    meta: dict = field(default_factory=dict)

    # -- queries
    def concrete(self, u, a):
        return sorted(v for (s, b, v) in self.edges if s == u and b == a)

    def deferred_vars(self, u, a):
        out = {x for (s, b, x) in self.deferred if s == u and b == a}
        for x, h in self.holes.items():
            if h == u:
                out.add(x)
        return sorted(out)

    def is_closed(self):
        return not self.holes and not self.deferred and not any(
            isinstance(p, PreOf) for p in self.pre.values())

    def to_pointed(self) -> PointedAction:
        if not self.is_closed():
            raise IllFormed([f"model still has free variables {sorted(self.holes)}"])
        rel = {a: [] for a in self.agents}
        for (u, a, v) in self.edges:
            rel.setdefault(a, []).append((u, v))
        return PointedAction(ActionModel(self.events, rel, self.pre, self.agents), self.actual)

    def copy(self):
        return OpenModel(list(self.events), dict(self.pre), set(self.edges),
                         set(self.deferred), dict(self.holes), self.actual, self.agents)

    def renamed(self, fn):
        """Copy with every event id mapped through ``fn`` (holes unchanged)."""
        hole_ids = set(self.holes.values())
        f = (lambda e: e if e in hole_ids else fn(e))
        return OpenModel([f(e) for e in self.events], {f(e): p for e, p in self.pre.items()},
                         {(f(u), a, f(v)) for (u, a, v) in self.edges},
                         {(f(u), a, x) for (u, a, x) in self.deferred},
                         dict(self.holes), f(self.actual), self.agents)

    def prune(self):
        """Drop events unreachable from the actual one (holes are kept)."""
        succ = {}
        for (u, _, v) in self.edges:
            succ.setdefault(u, set()).add(v)
        seen, stack = {self.actual}, [self.actual]
        while stack:
            for v in succ.get(stack.pop(), ()):
                if v not in seen:
                    seen.add(v)
                    stack.append(v)
        seen |= set(self.holes.values())
        self.events = [e for e in self.events if e in seen]
        self.pre = {e: p for e, p in self.pre.items() if e in seen}
        self.edges = {(u, a, v) for (u, a, v) in self.edges if u in seen}
        self.deferred = {(u, a, x) for (u, a, x) in self.deferred if u in seen}
        return self


def _merge(target: OpenModel, part: OpenModel):
    """Add ``part`` into ``target``; holes for the same variable are shared."""
    for e in part.events:
        if e in target.pre:
            if e in part.holes.values():
                continue
            raise ValueError(f"event id clash: {e}")
        target.events.append(e)
        target.pre[e] = part.pre[e]
    target.edges |= part.edges
    target.deferred |= part.deferred
    target.holes.update(part.holes)


def _single(event, pre, agents):
    return OpenModel([event], {event: pre}, set(), set(), {}, event, agents)


def _copy_root_edges(out, src_model, src, dst, agent_filter):
    for a in src_model.agents:
        if not agent_filter(a):
            continue
        for v in src_model.concrete(src, a):
            out.edges.add((dst, a, v))
        for x in src_model.deferred_vars(src, a):
            out.deferred.add((dst, a, x))


# -------------------------------------------------------- symbolic a-bisimilarity

def _symbolic_agent_bisimilar(agent, m1, m2, oracle):
    """Agent bisimilarity with variables as uninterpreted labels.

    Sound for every later substitution.  The second value says whether a
    variable was involved, in which case a negative answer is only a
    conservative guess.
    """
    models = [m1, m2]
    agents = sorted(set(m1.agents) | set(m2.agents))
    nodes, seed = [], {}
    formulas = [p for m in models for p in m.pre.values() if not isinstance(p, PreOf)]
    cls = _pre_classes(formulas, oracle)
    variables = set()
    for i, m in enumerate(models):
        for e in m.events:
            nodes.append((i, e))
            p = m.pre[e]
            seed[(i, e)] = ("pre-of", p.var) if isinstance(p, PreOf) else ("pre", cls[p])
        for (_, _, x) in m.deferred:
            variables.add(x)
        variables |= set(m.holes)
    for x in variables:
        nodes.append(("var", x))
        seed[("var", x)] = ("var", x)

    def succ(a, node):
        if node[0] == "var":
            return []
        i, e = node
        m = models[i]
        return [(i, v) for v in m.concrete(e, a)] + [("var", x) for x in m.deferred_vars(e, a)]

    block = coarsest_partition(nodes, agents, succ, seed)
    left = {block[n] for n in succ(agent, (0, m1.actual))}
    right = {block[n] for n in succ(agent, (1, m2.actual))}
    return left == right, bool(variables)


# --------------------------------------------------------------------- compile

class _Compiler:
    def __init__(self, agents, oracle):
        self.agents = agents
        self.oracle = oracle

    def run(self, t, path):
        if isinstance(t, Var):
            h = hole_id(t.name)
            return OpenModel([h], {h: PreOf(t.name)}, set(), set(), {t.name: h}, h, self.agents)
        if isinstance(t, Test):
            return _single(f"{path}?", t.formula, self.agents)
        if isinstance(t, Learn):
            return self.learn(t, path)
        if isinstance(t, Concur):
            m1 = self.run(t.left, path + "0/")
            m2 = self.run(t.right, path + "1/")
            root = f"{path}C"
            out = _single(root, m1.pre[m1.actual], self.agents)
            _merge(out, m1)
            _merge(out, m2)
            for m in (m1, m2):
                _copy_root_edges(out, m, m.actual, root, lambda a: True)
            return out.prune()
        if isinstance(t, Wrong):
            m = self.run(t.arg, path + "0/")
            root = f"{path}W"
            out = _single(root, t.formula, self.agents)
            _merge(out, m)
            _copy_root_edges(out, m, m.actual, root, lambda a: a in t.group)
            return out.prune()
        if isinstance(t, Mu):
            body = self.run(t.body, path + "0/")
            if t.var not in body.holes:
                return body
            return tie(body, t.var)
        raise TypeError(f"not a term: {t!r}")

    def learn(self, t, path):
        parts = [self.run(arg, f"{path}{i}/") for i, arg in enumerate(t.args)]
        roots = [f"{path}L.{i + 1}" for i in range(len(parts))]
        out = _single(roots[0], parts[0].pre[parts[0].actual], self.agents)
        for r, m in zip(roots[1:], parts[1:]):
            out.events.append(r)
            out.pre[r] = m.pre[m.actual]
        for m in parts:
            _merge(out, m)
        for r, m in zip(roots, parts):
            _copy_root_edges(out, m, m.actual, r, lambda a: a not in t.group)
        for b in sorted(t.group):
            for i, j in itertools.product(range(len(parts)), repeat=2):
                if i == j:
                    same = True
                elif j < i:
                    same = (roots[j], b, roots[i]) in out.edges
                else:
                    same, symbolic = _symbolic_agent_bisimilar(b, parts[i], parts[j], self.oracle)
                    if symbolic and not same:
                        warnings.warn(
                            f"L{{{','.join(sorted(t.group))}}} arguments {i + 1} and {j + 1} "
                            f"involve unresolved variables; no {b}-edge drawn",
                            HoleBisimilarityWarning, stacklevel=4)
                if same:
                    out.edges.add((roots[i], b, roots[j]))
        return out.prune()


def _term_agents(t):
    out = set()
    stack = [t]
    while stack:
        u = stack.pop()
        if isinstance(u, (Learn, Wrong)):
            out |= set(u.group)
        if isinstance(u, (Test, Wrong)):
            out |= agents_of(u.formula)
        if isinstance(u, Learn):
            stack.extend(u.args)
        elif isinstance(u, Concur):
            stack += [u.left, u.right]
        elif isinstance(u, (Wrong,)):
            stack.append(u.arg)
        elif isinstance(u, Mu):
            stack.append(u.body)
    return out


def compile_term(t, agents=None, oracle=None, check=True) -> OpenModel:
    """Open action model of ``t``; events unreachable from the actual one are dropped."""
    if check:
        from .terms import well_formed
        problems = well_formed(t)
        if problems:
            raise IllFormed(problems)
    ags = tuple(sorted(set(agents or ()) | _term_agents(t)))
    return _Compiler(ags, get_oracle(oracle)).run(t, "")


def compile_program(t, agents=None, oracle=None) -> PointedAction:
    """Pointed action model of a closed well-formed program."""
    check_program(t)
    return compile_term(t, agents, oracle, check=False).to_pointed()


# ---------------------------------------------------------------- substitution

def _resolve(out: OpenModel, x, r, targets_concrete, targets_deferred, pending):
    """Turn the deferred ``x``-edges in ``pending`` into edges towards ``r``'s successors."""
    for (u, a, _) in pending:
        for v in targets_concrete.get(a, ()):
            out.edges.add((u, a, v))
        for y in targets_deferred.get(a, ()):
            out.deferred.add((u, a, y))


def tie(om: OpenModel, x) -> OpenModel:
    """Identify the hole of ``x`` with the actual event (the mu construction)."""
    if x not in om.holes:
        raise VariableNotFree(f"{x} is not free in the model")
    out = om.copy()
    r, h = out.actual, out.holes[x]
    if r == h:
        raise IllFormed([f"mu {x}. {x} has no defined precondition"])
    # r's a-edges through x alone (unguarded recursion) mean a self-loop,
    # otherwise r keeps its concrete a-successors
    conc = {a: out.concrete(r, a) or ([r] if (r, a, x) in out.deferred else [])
            for a in out.agents}
    defer = {a: [y for y in out.deferred_vars(r, a) if y != x] for a in out.agents}
    pending = {d for d in out.deferred if d[2] == x}
    out.deferred -= pending
    _resolve(out, x, r, conc, defer, pending)
    _drop_hole(out, x, r, out.pre[r])
    return out.prune()


def _drop_hole(out, x, r, new_pre):
    h = out.holes.pop(x)
    out.edges = {(u, a, r if v == h else v) for (u, a, v) in out.edges if u != h}
    out.events = [e for e in out.events if e != h]
    out.pre.pop(h, None)
    for e, p in list(out.pre.items()):
        if p == PreOf(x):
            out.pre[e] = new_pre


def substitute(om: OpenModel, x, target) -> OpenModel:
    """Plug ``target`` in for the variable ``x`` of ``om``.

    ``target`` may be a pointed action model, another open model, or ``om``
    itself, in which case this is the mu construction.
    """
    if target is om:
        return tie(om, x)
    if x not in om.holes:
        raise VariableNotFree(f"{x} is not free in the model")
    if isinstance(target, PointedAction):
        m = target.model
        edges = {(u, a, v) for a in m.agents for (u, v) in m.rel[a]}
        target = OpenModel(list(m.states), dict(m.pre), edges, set(), {}, target.actual,
                           tuple(m.agents))
    extra = set(target.agents) - set(om.agents)
    if extra:
        raise ValueError(f"open model was compiled without agents {sorted(extra)}")
    taken = set(om.pre)
    for k in itertools.count():
        prefix = f"{x}{k or ''}:"
        if not any(prefix + e in taken for e in target.events):
            break
    part = target.renamed(lambda e: prefix + e)
    out = om.copy()
    r = part.actual
    pending = {d for d in out.deferred if d[2] == x}
    out.deferred -= pending
    _drop_hole(out, x, r, part.pre[r])
    _merge(out, part)
    conc = {a: part.concrete(r, a) for a in out.agents}
    defer = {a: part.deferred_vars(r, a) for a in out.agents}
    _resolve(out, x, r, conc, defer, pending)
    return out.prune()


__all__ = [
    "PreOf",
    "OpenModel",
    "hole_id",
    "compile_term",
    "compile_program",
    "substitute",
    "tie",
]
