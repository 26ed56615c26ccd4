"""Position of programs and models in the kRLP hierarchy."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Optional

from .actions import PointedAction, nested_loop_depth, quotient, t_transform
from .errors import UniverseTooSmall
from .formula import Atom, Universe
from .kd45 import distinguishing_formulas, get_oracle
from .terms import Learn, Mu, Var, Wrong, check_program, concur, dependent_mu_count

DEFAULT_UNIVERSE = Universe(("a", "b", "c"), ("phi", "psi", "theta"))


def classify_program(t) -> int:
    """Number of dependent mu binders of a closed well-formed program."""
    check_program(t)
    return dependent_mu_count(t)


@dataclass(frozen=True)
class ModelReport:
    depth: int
    premise_distinct_pre: bool
    components: int

    def to_json(self):
        return {"depth": self.depth, "premise_distinct_pre": self.premise_distinct_pre,
                "components": self.components}


def _premise(n: PointedAction, oracle) -> bool:
    """Reachable events of different components have non-equivalent preconditions."""
    q = quotient(n, oracle)
    _, graph = t_transform(q)
    comps = [graph.components[i] for i in sorted(graph.reachable())]
    pre = q.model.pre
    for c1, c2 in itertools.combinations(comps, 2):
        for s in c1.members:
            for t in c2.members:
                if s != t and oracle.equivalent(pre[s], pre[t]):
                    return False
    return True


def classify_model(n: PointedAction, cap: int = 6, oracle=None) -> ModelReport:
    """Nested-loop depth of the reachable component graph G(N), with the premise check.

    G(N) is built from the maximal multi-agent components of T(N). The
    single-agent graph of T'(N) links the a- and b-components of every
    shared cluster both ways, which would count a loop for ``L{a,b}(?p)``.
    """
    oracle = get_oracle(oracle)
    _, graph = t_transform(n)
    depth = nested_loop_depth(graph, cap)
    return ModelReport(depth, _premise(n, oracle), len(graph.reachable()))


def _formulas(k, universe):
    named = [Atom(p) for p in ("phi", "psi", "theta") if p in universe.atoms]
    if len(named) >= k + 1:
        return named[: k + 1]
    return distinguishing_formulas(k + 1, universe)


def witness(k: int, universe: Optional[Universe] = None):
    """A program with ``k`` dependent mu binders and a ``k``-nested loop."""
    if k < 1:
        raise ValueError("k must be at least 1")
    universe = universe or DEFAULT_UNIVERSE
    agents = sorted(universe.agents)
    if len(agents) < (2 if k == 1 else 3):
        raise UniverseTooSmall(f"witness({k}) needs {2 if k == 1 else 3} agents")
    if not universe.atoms:
        raise UniverseTooSmall("witness needs at least one atom")
    f = _formulas(k, universe)
    if k == 1:
        a, b = agents[:2]
        return check_program(Mu("X", Learn([b], [Wrong(f[0], [a], Learn([a], [
            Wrong(f[1], [b], Learn([b], [Var("X")]))]))])))
    if k == 2:
        a, b, c = agents[:3]
        inner = Mu("Y", Learn([b], [concur(
            Wrong(f[1], [a], Var("X")),
            Wrong(f[1], [c], Learn([c], [Wrong(f[2], [b], Var("Y"))])))]))
        return check_program(Mu("X", Learn([a], [Wrong(f[0], [b], inner)])))

    def g(i):  # agents cycle along the chain
        return agents[(i - 1) % 3]

    def node(i):
        if i == k + 1:
            return Learn([g(i)], [Wrong(f[i - 1], [g(i - 1)], Var(f"X{i - 1}"))])
        down = Wrong(f[i - 1], [g(i + 1)], node(i + 1))
        body = down if i == 1 else concur(Wrong(f[i - 1], [g(i - 1)], Var(f"X{i - 1}")), down)
        return Mu(f"X{i}", Learn([g(i)], [body]))

    return check_program(node(1))


__all__ = ["classify_program", "classify_model", "ModelReport", "witness", "DEFAULT_UNIVERSE"]
