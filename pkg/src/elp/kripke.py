"""Finite epistemic states with applicability-restricted truth."""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Mapping

from ._refine import coarsest_partition
from .errors import InvalidModel, NotApplicable
from .formula import And, Atom, Know, Not, desugar, to_str


def _freeze_rel(rel, agents):
    out = {a: frozenset() for a in agents}
    for a, pairs in rel.items():
        out[a] = frozenset((s, t) for s, t in pairs)
    return out


# ------------------------------------------------------------ frame classes

@dataclass(frozen=True)
class AgentFrame:
    reflexive: bool
    serial: bool
    transitive: bool
    euclidean: bool

    @property
    def is_K45(self):
        return self.transitive and self.euclidean

    @property
    def is_KD45(self):
        return self.is_K45 and self.serial

    @property
    def is_S5(self):
        return self.is_KD45 and self.reflexive


@dataclass(frozen=True)
class FrameReport:
    per_agent: Mapping[str, AgentFrame]

    def _all(self, flag):
        return all(getattr(f, flag) for f in self.per_agent.values())

    @property
    def reflexive(self):
        return self._all("reflexive")

    @property
    def serial(self):
        return self._all("serial")

    @property
    def transitive(self):
        return self._all("transitive")

    @property
    def euclidean(self):
        return self._all("euclidean")

    @property
    def is_K45(self):
        return self._all("is_K45")

    @property
    def is_KD45(self):
        return self._all("is_KD45")

    @property
    def is_S5(self):
        return self._all("is_S5")

    def to_json(self):
        flags = ("reflexive", "serial", "transitive", "euclidean", "is_K45", "is_KD45", "is_S5")
        return {
            "agents": {a: {k: getattr(f, k) for k in flags}
                       for a, f in sorted(self.per_agent.items())},
            **{k: getattr(self, k) for k in ("is_K45", "is_KD45", "is_S5")},
        }


def frame_report(states, rel, agents) -> FrameReport:
    """Check the four frame conditions per agent by direct quantification."""
    per = {}
    for a in agents:
        pairs = rel.get(a, frozenset())
        succ = {s: set() for s in states}
        for s, t in pairs:
            succ[s].add(t)
        per[a] = AgentFrame(
            reflexive=all(s in succ[s] for s in states),
            serial=all(succ[s] for s in states),
            transitive=all(succ[t] <= succ[s] for s in states for t in succ[s]),
            euclidean=all(succ[s] <= succ[t] for s in states for t in succ[s]),
        )
    return FrameReport(per)


# -------------------------------------------------------------------- models

class _Frame:
    """Shared plumbing for Kripke and action models."""

    states: tuple
    rel: Mapping
    agents: tuple

    def _check_frame(self):
        known = set(self.states)
        if len(known) != len(self.states):
            raise InvalidModel("duplicate state ids")
        for a, pairs in self.rel.items():
            if a not in self.agents:
                raise InvalidModel(f"relation for undeclared agent {a!r}")
            for s, t in pairs:
                if s not in known or t not in known:
                    raise InvalidModel(f"edge {s}->{t} for {a} uses an undeclared state")

    @cached_property
    def _succ(self):
        table = {a: {s: [] for s in self.states} for a in self.agents}
        for a, pairs in self.rel.items():
            for s, t in sorted(pairs):
                table[a][s].append(t)
        return {a: {s: tuple(v) for s, v in m.items()} for a, m in table.items()}

    def succ(self, agent, s):
        return self._succ[agent][s] if agent in self._succ else ()

    def present(self, s):
        return frozenset(a for a in self.agents if self.succ(a, s))

    def frame(self) -> FrameReport:
        return frame_report(self.states, self.rel, self.agents)


class KripkeModel(_Frame):
    def __init__(self, states, rel, val, agents=None, atoms=None):
        self.states = tuple(states)
        agents = tuple(agents) if agents is not None else tuple(sorted(rel))
        self.agents = agents
        self.rel = _freeze_rel(rel, agents)
        self.atoms = tuple(atoms) if atoms is not None else tuple(sorted(val))
        self.val = {p: frozenset(val.get(p, ())) for p in self.atoms}
        self._check_frame()
        for p, ss in val.items():
            if p not in self.atoms:
                raise InvalidModel(f"valuation for undeclared atom {p!r}")
            if not set(ss) <= set(self.states):
                raise InvalidModel(f"valuation of {p!r} uses undeclared states")

    def __repr__(self):
        return f"KripkeModel(states={list(self.states)!r})"


@dataclass(frozen=True, eq=False)
class KripkeState:
    model: KripkeModel
    actual: str

    def __post_init__(self):
        if self.actual not in self.model.states:
            raise InvalidModel(f"actual state {self.actual!r} not declared")


def frame_class(model) -> FrameReport:
    return model.frame()


def present_group(ms: KripkeState) -> frozenset:
    return ms.model.present(ms.actual)


# ------------------------------------------------------------------ semantics

def _applicable(model, s, f, memo):
    key = (s, f)
    if key in memo:
        return memo[key]
    if isinstance(f, Atom):
        r = True
    elif isinstance(f, Not):
        r = _applicable(model, s, f.arg, memo)
    elif isinstance(f, And):
        r = _applicable(model, s, f.left, memo) and _applicable(model, s, f.right, memo)
    else:
        succ = model.succ(f.agent, s)
        r = bool(succ) and all(_applicable(model, t, f.arg, memo) for t in succ)
    memo[key] = r
    return r


def _truth(model, s, f, memo):
    # caller guarantees applicability
    key = (s, f)
    if key in memo:
        return memo[key]
    if isinstance(f, Atom):
        r = s in model.val.get(f.name, ())
    elif isinstance(f, Not):
        r = not _truth(model, s, f.arg, memo)
    elif isinstance(f, And):
        r = _truth(model, s, f.left, memo) and _truth(model, s, f.right, memo)
    else:
        r = all(_truth(model, t, f.arg, memo) for t in model.succ(f.agent, s))
    memo[key] = r
    return r


def is_applicable(ms: KripkeState, phi) -> bool:
    return _applicable(ms.model, ms.actual, desugar(phi), {})


def satisfies(ms: KripkeState, phi) -> bool:
    """Truth of an applicable formula; raises NotApplicable otherwise."""
    core = desugar(phi)
    if not _applicable(ms.model, ms.actual, core, {}):
        raise NotApplicable(f"{to_str(phi)} is not applicable at {ms.actual}")
    return _truth(ms.model, ms.actual, core, {})


def holds(model, s, phi) -> bool:
    """Applicable and true: the survival test of product update."""
    core = desugar(phi)
    return _applicable(model, s, core, {}) and _truth(model, s, core, {})


# --------------------------------------------------------------- bisimulation

def _union_blocks(left, right, seed):
    """Partition refinement over the disjoint union of two frames."""
    lm, rm = left, right
    agents = sorted(set(lm.agents) | set(rm.agents))
    nodes = [(0, s) for s in lm.states] + [(1, s) for s in rm.states]

    def succ(a, node):
        side, s = node
        m = lm if side == 0 else rm
        return [(side, t) for t in (m.succ(a, s) if a in m.agents else ())]

    return coarsest_partition(nodes, agents, succ, seed(nodes))


def kripke_bisimilar(m1: KripkeState, m2: KripkeState) -> bool:
    """Standard bisimulation, with valuation agreement as the atomic clause."""
    atoms = sorted(set(m1.model.atoms) | set(m2.model.atoms))

    def seed(nodes):
        out = {}
        for side, s in nodes:
            m = m1.model if side == 0 else m2.model
            out[(side, s)] = tuple(s in m.val.get(p, ()) for p in atoms)
        return out

    block = _union_blocks(m1.model, m2.model, seed)
    return block[(0, m1.actual)] == block[(1, m2.actual)]


__all__ = [
    "AgentFrame",
    "FrameReport",
    "KripkeModel",
    "KripkeState",
    "frame_report",
    "frame_class",
    "present_group",
    "is_applicable",
    "satisfies",
    "holds",
    "kripke_bisimilar",
]
