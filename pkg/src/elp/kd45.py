"""KD45 satisfiability by a cluster tableau.

In a KD45 frame every world sees, for each agent, one nonempty cluster
of worlds that all see that same cluster.  The tableau exploits this:
after propositional saturation, a world decides every top-level
``K_i``-subformula of its ``K_i``-literals (an analytic cut), then builds
the ``i``-cluster as one child world per negative literal ``~K_i psi``
(or a single child if there is none).  Each child inherits the complete
set of ``K_i``-literals, so inside the cluster no new ``i``-cluster has to
be opened; children only open clusters for the other agents.  Modal depth
of the non-inherited part decreases along every such step, which bounds
the search.
"""

from __future__ import annotations

import itertools
import os
from dataclasses import dataclass, field
from typing import Optional

from .errors import ResourceBoundExceeded
from .formula import (
    And,
    Atom,
    Iff,
    Know,
    Not,
    Universe,
    agents_of,
    atoms_of,
    desugar,
    to_str,
)

DEFAULT_MAX_NODES = 200_000


@dataclass
class _World:
    atoms: frozenset
    skip: Optional[str]
    clusters: dict = field(default_factory=dict)  # agent -> list[_World]


def _is_literal(f):
    if isinstance(f, (Atom, Know)):
        return True
    return isinstance(f, Not) and isinstance(f.arg, (Atom, Know))


def _top_level_knows(f, agent, out):
    """Collect ``K_agent`` subformulas of ``f`` not under any modality."""
    stack = [f]
    while stack:
        g = stack.pop()
        if isinstance(g, Know):
            if g.agent == agent:
                out.add(g)
        elif isinstance(g, Not):
            stack.append(g.arg)
        elif isinstance(g, And):
            stack.append(g.left)
            stack.append(g.right)


class Tableau:
    """One proof search; owns the node budget and the memo table."""

    def __init__(self, max_nodes=DEFAULT_MAX_NODES):
        self.max_nodes = max_nodes
        self.nodes = 0
        self._memo = {}

    def _tick(self):
        self.nodes += 1
        if self.nodes > self.max_nodes:
            raise ResourceBoundExceeded(f"tableau exceeded {self.max_nodes} nodes")

    def sat(self, gamma: frozenset, skip=None):
        key = (gamma, skip)
        if key in self._memo:
            return self._memo[key]
        result = None
        for lits in self._expand(list(gamma), frozenset()):
            result = self._world(lits, skip)
            if result is not None:
                break
        self._memo[key] = result
        return result

    def _expand(self, todo, lits):
        # depth-first propositional saturation, yielding open literal sets
        self._tick()
        while todo:
            f = todo.pop()
            if _is_literal(f):
                neg = f.arg if isinstance(f, Not) else Not(f)
                if neg in lits:
                    return
                lits = lits | {f}
            elif isinstance(f, And):
                todo.append(f.left)
                todo.append(f.right)
            elif isinstance(f.arg, Not):
                todo.append(f.arg.arg)
            else:  # Not(And(a, b))
                a, b = f.arg.left, f.arg.right
                yield from self._expand(todo + [Not(a)], lits)
                yield from self._expand(todo + [Not(b)], lits)
                return
        yield lits

    def _world(self, lits, skip):
        by_agent = {}
        for f in lits:
            k = f.arg if isinstance(f, Not) and isinstance(f.arg, Know) else f
            if isinstance(k, Know) and k.agent != skip:
                by_agent.setdefault(k.agent, []).append(f)

        for agent in sorted(by_agent):
            pos, neg = self._split(by_agent[agent])
            pending = set()
            for g in itertools.chain(pos, neg):
                _top_level_knows(g, agent, pending)
            for k in sorted(pending, key=to_str):
                if k not in lits and Not(k) not in lits:
                    return (self.sat(lits | {k}, skip)
                            or self.sat(lits | {Not(k)}, skip))

        world = _World(frozenset(f.name for f in lits if isinstance(f, Atom)), skip)
        for agent in sorted(by_agent):
            inherited = frozenset(by_agent[agent])
            pos, neg = self._split(by_agent[agent])
            base = frozenset(pos) | inherited
            members = []
            for psi in neg or [None]:
                gamma = base if psi is None else base | {Not(psi)}
                child = self.sat(gamma, agent)
                if child is None:
                    return None
                members.append(child)
            world.clusters[agent] = members
        return world

    @staticmethod
    def _split(agent_lits):
        pos = [f.arg for f in agent_lits if isinstance(f, Know)]
        neg = [f.arg.arg for f in agent_lits if isinstance(f, Not)]
        return pos, neg


def _prepare(phi, anchor=None):
    return desugar(phi, anchor)


def kd45_satisfiable(phi, max_nodes=DEFAULT_MAX_NODES) -> bool:
    """True iff ``phi`` holds at some world of some KD45 model."""
    return Tableau(max_nodes).sat(frozenset([_prepare(phi)])) is not None


def kd45_valid(phi, max_nodes=DEFAULT_MAX_NODES) -> bool:
    return not kd45_satisfiable(Not(phi), max_nodes)


def kd45_equivalent(phi, psi, max_nodes=DEFAULT_MAX_NODES) -> bool:
    a = desugar(phi, _shared_anchor(phi, psi))
    b = desugar(psi, _shared_anchor(phi, psi))
    if a == b:
        return True
    t = Tableau(max_nodes)
    if t.sat(frozenset([a, Not(b)])) is not None:
        return False
    return t.sat(frozenset([b, Not(a)])) is None


def _shared_anchor(*fs):
    names = sorted(set().union(*(atoms_of(f) for f in fs)))
    return names[0] if names else None


def kd45_model(phi, universe: Optional[Universe] = None, max_nodes=DEFAULT_MAX_NODES):
    """A finite KD45 pointed model satisfying ``phi``, or None if unsatisfiable."""
    from .kripke import KripkeModel, KripkeState

    core = _prepare(phi)
    root = Tableau(max_nodes).sat(frozenset([core]))
    if root is None:
        return None
    agents = set(agents_of(core))
    atoms = set(atoms_of(core))
    if universe is not None:
        agents |= set(universe.agents)
        atoms |= set(universe.atoms)

    states, edges, val = [], set(), {p: set() for p in atoms}
    counter = itertools.count()

    # memoised worlds may be shared; unfold them into a tree with fresh ids
    def build(world):
        sid = f"w{next(counter)}"
        states.append(sid)
        for p in world.atoms:
            val.setdefault(p, set()).add(sid)
        for agent in sorted(agents):
            if agent != world.skip and agent not in world.clusters:
                edges.add((agent, sid, sid))  # unconstrained agent: keep serial
        for agent, members in sorted(world.clusters.items()):
            ids = [build(m) for m in members]
            for cid in ids:
                edges.add((agent, sid, cid))
                for did in ids:
                    edges.add((agent, cid, did))
        return sid

    actual = build(root)
    rel = {a: frozenset((s, t) for (b, s, t) in edges if b == a) for a in agents}
    model = KripkeModel(
        states=states,
        rel=rel,
        val={p: frozenset(v) for p, v in val.items()},
        agents=sorted(agents),
        atoms=sorted(atoms),
    )
    return KripkeState(model, actual)


def kd45_countermodel(phi, universe=None, max_nodes=DEFAULT_MAX_NODES):
    """A KD45 pointed model falsifying ``phi`` (None when ``phi`` is valid)."""
    return kd45_model(Not(phi), universe, max_nodes)


# ------------------------------------------------------------------- oracles

class SyntacticOracle:
    """Structural equality after desugaring."""

    name = "syntactic"

    def equivalent(self, phi, psi) -> bool:
        if phi == psi:
            return True
        anchor = _shared_anchor(phi, psi)
        return desugar(phi, anchor) == desugar(psi, anchor)


class KD45Oracle:
    """KD45 logical equivalence, memoised per unordered pair."""

    name = "kd45"

    def __init__(self, max_nodes=DEFAULT_MAX_NODES):
        self.max_nodes = max_nodes
        self._cache = {}

    def equivalent(self, phi, psi) -> bool:
        if phi == psi:
            return True
        key = frozenset((phi, psi))
        hit = self._cache.get(key)
        if hit is None:
            hit = kd45_equivalent(phi, psi, self.max_nodes)
            self._cache[key] = hit
        return hit


_SHARED = {}


def get_oracle(oracle=None):
    """Resolve an oracle object, a name, or the ``ELP_ORACLE`` default."""
    if oracle is not None and not isinstance(oracle, str):
        return oracle
    name = oracle or os.environ.get("ELP_ORACLE", "kd45")
    if name not in ("kd45", "syntactic"):
        raise ValueError(f"unknown oracle {name!r} (expected 'kd45' or 'syntactic')")
    if name not in _SHARED:
        _SHARED[name] = KD45Oracle() if name == "kd45" else SyntacticOracle()
    return _SHARED[name]


# ---------------------------------------------------- distinguishing formulas

def _formulas_of_size(n, universe, cache):
    if n in cache:
        return cache[n]
    out = []
    if n == 1:
        out = [Atom(p) for p in universe.atoms]
    else:
        for f in _formulas_of_size(n - 1, universe, cache):
            out.append(Not(f))
        for a in universe.agents:
            for f in _formulas_of_size(n - 1, universe, cache):
                out.append(Know(a, f))
        for k in range(1, n - 1):
            for f in _formulas_of_size(k, universe, cache):
                for g in _formulas_of_size(n - 1 - k, universe, cache):
                    out.append(And(f, g))
    cache[n] = out
    return out


def distinguishing_formulas(n: int, universe: Universe, max_candidates=5000, oracle=None):
    """``n`` formulas over ``universe``, pairwise not KD45-equivalent."""
    if n < 1:
        raise ValueError("n must be at least 1")
    if not universe.atoms:
        raise ValueError("universe needs at least one atom")
    oracle = get_oracle(oracle or "kd45")
    chosen = []
    cache = {}
    seen = 0
    for size in itertools.count(1):
        for f in _formulas_of_size(size, universe, cache):
            seen += 1
            if seen > max_candidates:
                raise ResourceBoundExceeded(
                    f"found only {len(chosen)} of {n} distinguishing formulas")
            if all(not oracle.equivalent(f, g) for g in chosen):
                chosen.append(f)
                if len(chosen) == n:
                    return chosen


__all__ = [
    "Tableau",
    "kd45_satisfiable",
    "kd45_valid",
    "kd45_equivalent",
    "kd45_model",
    "kd45_countermodel",
    "SyntacticOracle",
    "KD45Oracle",
    "get_oracle",
    "distinguishing_formulas",
    "Iff",
]
