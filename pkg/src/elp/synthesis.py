"""From finite K45 pointed action models back to learning programs."""

from __future__ import annotations

import networkx as nx

from .actions import PointedAction, reachable, t_prime_transform, t_transform, validate
from .errors import NotATree, NotS5, SynthesisError
from .formula import Universe, atoms_of
from .kd45 import distinguishing_formulas
from .terms import Concur, Learn, Mu, Test, Var, Wrong, concur, free_vars


def _wrong_concur(pre, parts):
    """``pre|_a1 P1 ^ pre|_a2 P2 ^ ...``, or ``?pre`` when there are no parts."""
    if not parts:
        return Test(pre)
    return concur(*(Wrong(pre, [a], p) for a, p in parts))


def _psi_universe(model):
    atoms = set()
    for f in model.pre.values():
        atoms |= atoms_of(f)
    return Universe(model.agents, sorted(atoms) or ["q"])


def _classes(model, agent, members):
    """Equivalence classes of ``agent`` restricted to ``members``, in member order."""
    out, seen = [], set()
    for s in members:
        if s in seen:
            continue
        cls = [t for t in members if t in model.succ(agent, s)]
        seen |= set(cls)
        out.append(cls)
    return out


def _s5_alphas(model, members, group):
    """One program per event whose ``a``-bisimilarity mirrors the ``a``-classes."""
    group = sorted(group)
    class_of = {}
    need = 1
    for a in group:
        classes = _classes(model, a, members)
        need = max(need, len(classes))
        for h, cls in enumerate(classes):
            for s in cls:
                class_of[(a, s)] = h
    psis = distinguishing_formulas(need, _psi_universe(model)) if group else []
    return {s: [(a, Learn([a], [Test(psis[class_of[(a, s)]])])) for a in group]
            for s in members}


def synthesize_s5(n: PointedAction):
    """A mu-free program for an S5 pointed action model."""
    if not validate(n).is_S5:
        raise NotS5("synthesize_s5 needs every relation to be an equivalence")
    n = reachable(n)
    m = n.model
    members = [n.actual] + [e for e in m.states if e != n.actual]
    alphas = _s5_alphas(m, members, m.agents)
    args = [_wrong_concur(m.pre[s], alphas[s]) for s in members]
    return Learn(m.agents, args)


# ----------------------------------------------------------------------- trees

def synthesize_tree(n: PointedAction):
    """A mu-free program when G(T(N)) is a tree below the actual component."""
    if not validate(n).is_K45:
        raise SynthesisError("input is not K45")
    tmodel, graph = t_transform(n)
    if not graph.is_tree():
        raise NotATree("the component graph reachable from the actual event is not a tree")
    start = next(w for w in graph.points(n.actual) if graph.placement[w] == graph.root)
    return _tree_program(tmodel, graph, start)


def _tree_program(tmodel, graph, w):
    comp = graph.components[graph.placement[w]]
    names = {s: f"({s},{comp.index})" for s in comp.members}
    members = [w] + [names[s] for s in comp.members if names[s] != w]
    alphas = _s5_alphas(tmodel, members, comp.agents) if comp.agents else {s: [] for s in members}
    gammas = []
    for s in members:
        parts = list(alphas[s])
        for b in sorted(tmodel.agents):
            if b in comp.agents:
                continue
            succ = tmodel.succ(b, s)
            if not succ:
                continue
            target = min(graph.placement[t] for t in succ)
            t = next(t for t in succ if graph.placement[t] == target)
            parts.append((b, _tree_program(tmodel, graph, t)))
        parts.sort(key=lambda ap: ap[0])
        gammas.append(_wrong_concur(tmodel.pre[s], parts))
    if not comp.agents:
        return gammas[0]
    return Learn(comp.agents, gammas)


# ------------------------------------------------------------- general case

def _check_no_agent(gammas, b):
    # Learn_b draws a full b-cluster among its roots only if they have no b-edges
    def ok(g):
        if isinstance(g, Test):
            return True
        if isinstance(g, Wrong):
            return b not in g.group
        if isinstance(g, Concur):
            return ok(g.left) and ok(g.right)
        return False

    for g in gammas:
        if not ok(g):
            raise SynthesisError(f"argument of L{{{b}}} would carry its own {b}-edges")


class _Unwinding:
    """Children of each T'(N) component in the unwinding, one per (event, agent) edge."""

    def __init__(self, n: PointedAction):
        if not validate(n).is_K45:
            raise SynthesisError("input is not K45")
        _, self.graph = t_prime_transform(n)
        self.model = n.model
        comp_of = {}  # (agent, event) -> component index
        for c in self.graph.components:
            for a in c.agents:
                for s in c.members:
                    comp_of[(a, s)] = c.index
        self.comp_of = comp_of
        # only ancestors that can be reached again influence a subtree
        g = self.graph.to_networkx(only_reachable=False)
        self.reach_back = {i: frozenset(nx.descendants(g, i)) for i in g.nodes}

    def children(self, i, v):
        m, c = self.model, self.graph.components[i]
        for a in sorted(m.agents):
            if a in c.agents or not m.succ(a, v):
                continue
            yield a, self.comp_of[(a, m.succ(a, v)[0])]

    def key(self, i, path):
        return i, path & self.reach_back[i]


def synthesize(n: PointedAction):
    """A closed program whose compilation is bisimilar to ``n``.

    The component graph of T'(N) is unwound from the actual component; a
    node whose component already occurs on its root path becomes the
    variable of that component, bound by mu at the earlier occurrence.
    """
    u = _Unwinding(n)
    m, comps = u.model, u.graph.components

    def var(i):
        return f"X{i}"

    memo = {}

    def node(i, path):
        key = u.key(i, path)
        if key in memo:
            return memo[key]
        c = comps[i]
        here = path | {i}
        gammas = []
        for v in c.members:
            parts = [(a, Var(var(j)) if j in here else node(j, here)) for a, j in u.children(i, v)]
            gammas.append(_wrong_concur(m.pre[v], parts))
        if c.agents:
            (b,) = c.agents
            _check_no_agent(gammas, b)
            prog = Learn([b], gammas)
        else:
            prog = gammas[0]
        if var(i) in free_vars(prog):
            prog = Mu(var(i), prog)
        memo[key] = prog
        return prog

    return node(u.graph.root, frozenset())


def unwinding_size(n: PointedAction) -> int:
    """Size of the cut unwinding T''(N) walked by ``synthesize``.

    Counts one per event of every unwound component plus one per cut leaf.
    """
    u = _Unwinding(n)
    memo = {}

    def count(i, path):
        key = u.key(i, path)
        if key not in memo:
            here = path | {i}
            total = 0
            for v in u.graph.components[i].members:
                total += 1 + sum(1 if j in here else count(j, here) for _, j in u.children(i, v))
            memo[key] = total
        return memo[key]

    return count(u.graph.root, frozenset())


__all__ = ["synthesize", "synthesize_s5", "synthesize_tree", "unwinding_size"]
