"""Pointed action models: bisimulation, execution, and the component transforms."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Mapping, Optional

import networkx as nx

from ._refine import coarsest_partition
from .errors import ActualEliminated, CapExceeded, InvalidModel
from .formula import Formula, to_str
from .kd45 import get_oracle
from .kripke import KripkeModel, KripkeState, _Frame, _freeze_rel, holds


class ActionModel(_Frame):
    """Events with per-agent accessibility and a precondition per event."""

    def __init__(self, events, rel, pre, agents=None, atoms=()):
        self.states = tuple(events)
        self.atoms = tuple(atoms)  # declared vocabulary beyond the preconditions
        agents = tuple(agents) if agents is not None else tuple(sorted(rel))
        self.agents = agents
        self.rel = _freeze_rel(rel, agents)
        self.pre = dict(pre)
        self._check_frame()
        missing = [e for e in self.states if e not in self.pre]
        if missing:
            raise InvalidModel(f"events without precondition: {missing}")
        extra = set(self.pre) - set(self.states)
        if extra:
            raise InvalidModel(f"precondition for undeclared events: {sorted(extra)}")

    @property
    def events(self):
        return self.states

    def __repr__(self):
        return f"ActionModel(events={list(self.states)!r})"


@dataclass(frozen=True, eq=False)
class PointedAction:
    model: ActionModel
    actual: str

    def __post_init__(self):
        if self.actual not in self.model.states:
            raise InvalidModel(f"actual event {self.actual!r} not declared")

    def at(self, event):
        return PointedAction(self.model, event)


def validate(n):
    """Frame report of the event frame (K45 is required for FAct)."""
    model = n.model if isinstance(n, PointedAction) else n
    return model.frame()


def reachable(n: PointedAction) -> PointedAction:
    """Restriction to events reachable from the actual one."""
    m = n.model
    seen, stack = {n.actual}, [n.actual]
    while stack:
        s = stack.pop()
        for a in m.agents:
            for t in m.succ(a, s):
                if t not in seen:
                    seen.add(t)
                    stack.append(t)
    events = [e for e in m.states if e in seen]
    rel = {a: [(s, t) for s, t in m.rel[a] if s in seen] for a in m.agents}
    return PointedAction(ActionModel(events, rel, {e: m.pre[e] for e in events}, m.agents),
                         n.actual)


# -------------------------------------------------------------- product update

def _pair(s, t):
    return f"({s},{t})"


def product_update(ms: KripkeState, na: PointedAction) -> KripkeState:
    """Execute ``na`` on ``ms``; non-applicable preconditions do not survive."""
    M, N = ms.model, na.model
    if not holds(M, ms.actual, N.pre[na.actual]):
        raise ActualEliminated(
            f"precondition {to_str(N.pre[na.actual])} of {na.actual} fails at {ms.actual}")
    alive = [(s, t) for s in M.states for t in N.states if holds(M, s, N.pre[t])]
    alive_set = set(alive)
    agents = tuple(sorted(set(M.agents) | set(N.agents)))
    rel = {a: [] for a in agents}
    for (s1, t1) in alive:
        for a in agents:
            ms_succ = M.succ(a, s1) if a in M.agents else ()
            nt_succ = N.succ(a, t1) if a in N.agents else ()
            for s2 in ms_succ:
                for t2 in nt_succ:
                    if (s2, t2) in alive_set:
                        rel[a].append((_pair(s1, t1), _pair(s2, t2)))
    val = {p: [_pair(s, t) for (s, t) in alive if s in M.val[p]] for p in M.atoms}
    model = KripkeModel([_pair(s, t) for s, t in alive], rel, val, agents, M.atoms)
    return KripkeState(model, _pair(ms.actual, na.actual))


# --------------------------------------------------------------- bisimulation

def _pre_classes(formulas, oracle):
    """Group formulas into oracle-equivalence classes; formula -> class id."""
    reps, out = [], {}
    for f in formulas:
        if f in out:
            continue
        for i, r in enumerate(reps):
            if oracle.equivalent(f, r):
                out[f] = i
                break
        else:
            out[f] = len(reps)
            reps.append(f)
    return out


def bisimulation_blocks(models, oracle=None):
    """Maximal bisimulation over the disjoint union of ``models``.

    Returns a dict mapping ``(index, event)`` to a block id; two pointed
    models are bisimilar iff their actual events share a block.
    """
    oracle = get_oracle(oracle)
    agents = sorted(set().union(*(m.agents for m in models)))
    nodes = [(i, e) for i, m in enumerate(models) for e in m.states]
    pres = [models[i].pre[e] for i, e in nodes]
    cls = _pre_classes(pres, oracle)
    seed = {node: cls[models[node[0]].pre[node[1]]] for node in nodes}

    def succ(a, node):
        i, e = node
        m = models[i]
        return [(i, t) for t in m.succ(a, e)] if a in m.agents else []

    return coarsest_partition(nodes, agents, succ, seed)


@dataclass(frozen=True)
class BisimResult:
    bisimilar: bool
    relation: frozenset = frozenset()

    def __bool__(self):
        return self.bisimilar


def bisimilar(n1: PointedAction, n2: PointedAction, oracle=None) -> BisimResult:
    """Decide bisimilarity; on success the maximal bisimulation is the witness."""
    block = bisimulation_blocks([n1.model, n2.model], oracle)
    ok = block[(0, n1.actual)] == block[(1, n2.actual)]
    if not ok:
        return BisimResult(False)
    rel = frozenset((s, t) for s in n1.model.states for t in n2.model.states
                    if block[(0, s)] == block[(1, t)])
    return BisimResult(True, rel)


def agent_bisimilar(agent, n1: PointedAction, n2: PointedAction, oracle=None) -> bool:
    """Forth/Back over ``agent``-successors of the two actual events."""
    block = bisimulation_blocks([n1.model, n2.model], oracle)
    left = {block[(0, t)] for t in n1.model.succ(agent, n1.actual)} \
        if agent in n1.model.agents else set()
    right = {block[(1, t)] for t in n2.model.succ(agent, n2.actual)} \
        if agent in n2.model.agents else set()
    return left == right


def quotient(n: PointedAction, oracle=None) -> PointedAction:
    """Bisimulation-minimal model of the reachable part (debug aid)."""
    n = reachable(n)
    m = n.model
    block = bisimulation_blocks([m], oracle)
    rep = {}
    for e in m.states:
        rep.setdefault(block[(0, e)], e)
    name = {e: rep[block[(0, e)]] for e in m.states}
    events = sorted(set(name.values()))
    rel = {a: {(name[s], name[t]) for s, t in m.rel[a]} for a in m.agents}
    return PointedAction(ActionModel(events, rel, {e: m.pre[e] for e in events}, m.agents),
                         name[n.actual])


# ------------------------------------------------------------ component graph

@dataclass(frozen=True)
class Component:
    index: int
    members: tuple
    agents: frozenset

    def label(self):
        ags = ",".join(sorted(self.agents)) or "-"
        return f"M{self.index}[{ags}]{{{','.join(self.members)}}}"


@dataclass
class ComponentGraph:
    components: tuple
    edges: Mapping  # (i, j) -> frozenset of agents
    root: Optional[int]
    projection: Mapping  # transformed event -> original event
    placement: Mapping = field(default_factory=dict)  # transformed event -> component index

    def successors(self, i):
        return sorted(j for (k, j) in self.edges if k == i)

    def reachable(self):
        if self.root is None:
            return set(range(len(self.components)))
        seen, stack = {self.root}, [self.root]
        while stack:
            for j in self.successors(stack.pop()):
                if j not in seen:
                    seen.add(j)
                    stack.append(j)
        return seen

    def to_networkx(self, only_reachable=True) -> nx.DiGraph:
        keep = self.reachable() if only_reachable else set(range(len(self.components)))
        g = nx.DiGraph()
        g.add_nodes_from(sorted(keep))
        g.add_edges_from((i, j) for (i, j) in self.edges if i in keep and j in keep)
        return g

    def is_tree(self) -> bool:
        """No directed loop in the part reachable from the root.

        This is the notion the tree theorem for mu-free programs actually
        establishes; shared subtrees (a DAG) are allowed. See
        ``is_out_tree`` for the strict reading.
        """
        return not self.has_cycle()

    def is_out_tree(self) -> bool:
        """Reachable part is an out-tree: every non-root node has one parent."""
        g = self.to_networkx()
        if self.root is None:
            return nx.is_arborescence(g) if g.number_of_nodes() else True
        return g.in_degree(self.root) == 0 and all(
            g.in_degree(v) == 1 for v in g.nodes if v != self.root)

    def has_cycle(self) -> bool:
        return not nx.is_directed_acyclic_graph(self.to_networkx())

    def points(self, event):
        """Transformed events projecting to ``event``."""
        return sorted(w for w, s in self.projection.items() if s == event)

    def to_json(self):
        return {
            "components": [{"index": c.index, "members": list(c.members),
                            "agents": sorted(c.agents)} for c in self.components],
            "edges": [{"from": i, "to": j, "agents": sorted(ags)}
                      for (i, j), ags in sorted(self.edges.items())],
            "root": self.root,
        }


def _split_pointed(n):
    if isinstance(n, PointedAction):
        return n.model, n.actual
    return n, None


def _order(model):
    pos = {e: k for k, e in enumerate(model.states)}
    return lambda members: sorted(members, key=pos.__getitem__)


def s5_components(model, group):
    """Closed connected S5 submodels over ``group`` that are maximal in events."""
    group = sorted(group)
    alive = {s for s in model.states if all(s in model.succ(a, s) for a in group)}
    changed = True
    while changed:
        changed = False
        for s in sorted(alive):
            if any(not set(model.succ(a, s)) <= alive for a in group):
                alive.discard(s)
                changed = True
    order = _order(model)
    comps, seen = [], set()
    for s in order(alive):
        if s in seen:
            continue
        comp, stack = {s}, [s]
        while stack:
            u = stack.pop()
            for a in group:
                for v in model.succ(a, u):
                    if v not in comp:
                        comp.add(v)
                        stack.append(v)
        seen |= comp
        comps.append(tuple(order(comp)))
    return comps


def _build_graph(model, actual, comps, edge_rule, name_of):
    """Shared part of T and T': events, relations and the graph G."""
    events, pre, projection, placement = [], {}, {}, {}
    for c in comps:
        for s in c.members:
            w = name_of(s, c)
            events.append(w)
            pre[w] = model.pre[s]
            projection[w] = s
            placement[w] = c.index
    rel = {a: [] for a in model.agents}
    edges = {}
    for ci in comps:
        for cj in comps:
            for s in ci.members:
                for a in model.agents:
                    for t in model.succ(a, s):
                        if t in cj.members and edge_rule(ci, cj, a):
                            rel[a].append((name_of(s, ci), name_of(t, cj)))
                            if ci.index != cj.index:
                                edges.setdefault((ci.index, cj.index), set()).add(a)
    root = None
    if actual is not None:
        root = next(c.index for c in comps if actual in c.members)
    tmodel = ActionModel(events, rel, pre, model.agents)
    graph = ComponentGraph(tuple(comps), {k: frozenset(v) for k, v in edges.items()},
                           root, projection, placement)
    return tmodel, graph


def t_transform(n):
    """T(N) with its graph G(N); accepts a model or a pointed model."""
    model, actual = _split_pointed(n)
    order = _order(model)
    cands = []
    for r in range(len(model.agents), -1, -1):
        for group in itertools.combinations(sorted(model.agents), r):
            if group:
                cands += [(frozenset(c), frozenset(group)) for c in s5_components(model, group)]
            else:
                cands += [(frozenset([s]), frozenset()) for s in model.states]
    maximal = []
    for c, g in cands:
        dominated = any((c2 >= c and g2 >= g) and (c2, g2) != (c, g) for c2, g2 in cands)
        if not dominated and (c, g) not in maximal:
            maximal.append((c, g))
    pos = {e: k for k, e in enumerate(model.states)}
    maximal.sort(key=lambda cg: (sorted(pos[e] for e in cg[0]), sorted(cg[1])))
    comps = [Component(i, tuple(order(c)), g) for i, (c, g) in enumerate(maximal)]

    def rule(ci, cj, a):
        if ci.index == cj.index:
            return a in ci.agents
        return a not in ci.agents and a in cj.agents

    return _build_graph(model, actual, comps, rule, lambda s, c: f"({s},{c.index})")


def t_prime_transform(n):
    """T'(N): single-agent components, plus singletons for loop-free events."""
    model, actual = _split_pointed(n)
    order = _order(model)
    found = []
    for a in sorted(model.agents):
        for c in s5_components(model, [a]):
            found.append((c, frozenset([a])))
    covered = {e for c, _ in found for e in c}
    for s in model.states:
        if s not in covered:
            found.append(((s,), frozenset()))
    pos = {e: k for k, e in enumerate(model.states)}
    found.sort(key=lambda cg: (pos[cg[0][0]], sorted(cg[1])))
    # actual event first inside its component, else document order
    comps = []
    for i, (c, g) in enumerate(found):
        members = tuple(order(c))
        if actual in members:
            members = (actual,) + tuple(e for e in members if e != actual)
        comps.append(Component(i, members, g))

    def rule(ci, cj, b):
        if ci.index == cj.index:
            return b in ci.agents
        return b not in ci.agents and cj.agents == frozenset([b])

    def name_of(s, c):
        ag = next(iter(c.agents)) if c.agents else "-"
        return f"({s},({c.index},{ag}))"

    return _build_graph(model, actual, comps, rule, name_of)


# --------------------------------------------------------------- nested loops

def _entry_nodes(g, root, cycle):
    """Cycle nodes reachable from ``root`` without touching the rest of the cycle."""
    if root in cycle:
        return {root}
    out = set()
    members = set(cycle)
    for v in cycle:
        h = g.subgraph((set(g.nodes) - members) | {v})
        if root in h and nx.has_path(h, root, v):
            out.add(v)
    return out


def nested_loop_depth(graph: ComponentGraph, cap: int = 6) -> int:
    """Longest chain of simple loops, each hung on a non-start node of the last.

    Only the part reachable from the root is inspected.  A loop starts at an
    entry node, and every later loop shares exactly its start node with the
    loops already in the chain.
    """
    g = graph.to_networkx()
    root = graph.root if graph.root is not None else (min(g.nodes) if g.nodes else None)
    if root is None:
        return 0
    loops = []
    for cyc in nx.simple_cycles(g):
        members = frozenset(cyc)
        for start in _entry_nodes(g, root, cyc):
            loops.append((start, members))
    by_start = {}
    for start, members in loops:
        by_start.setdefault(start, []).append(members)

    best = 0

    def extend(depth, start, members, used):
        nonlocal best
        best = max(best, depth)
        if best > cap:
            raise CapExceeded(f"found a loop nesting deeper than the cap {cap}")
        for v in members:
            if v == start:
                continue
            for nxt in by_start.get(v, ()):
                if nxt & used == {v}:
                    extend(depth + 1, v, nxt, used | nxt)

    for start, members in loops:
        extend(1, start, members, members)
    return best


__all__ = [
    "ActionModel",
    "PointedAction",
    "validate",
    "reachable",
    "product_update",
    "bisimulation_blocks",
    "BisimResult",
    "bisimilar",
    "agent_bisimilar",
    "quotient",
    "Component",
    "ComponentGraph",
    "s5_components",
    "t_transform",
    "t_prime_transform",
    "nested_loop_depth",
    "Formula",
]
