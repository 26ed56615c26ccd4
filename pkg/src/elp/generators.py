"""Seeded random formulas, models and programs for property checks."""

from __future__ import annotations

import random
from typing import Optional

from .actions import ActionModel, PointedAction
from .formula import And, Atom, Implies, Know, Not, Or, Universe
from .kripke import KripkeModel, KripkeState
from .terms import Concur, Learn, Mu, Test, Var, Wrong, free_vars, well_formed


def random_formula(rng: random.Random, universe: Universe, depth: int = 3, sugar=False):
    if depth <= 0 or rng.random() < 0.25:
        return Atom(rng.choice(universe.atoms))
    kinds = ["not", "and", "know"] + (["or", "implies"] if sugar else [])
    kind = rng.choice(kinds)
    sub = lambda: random_formula(rng, universe, depth - 1, sugar)  # noqa: E731
    if kind == "not":
        return Not(sub())
    if kind == "know":
        return Know(rng.choice(universe.agents), sub())
    left, right = sub(), sub()
    return {"and": And, "or": Or, "implies": Implies}[kind](left, right)


def _k45_relation(rng, states, density=0.5):
    """Each state is in a cluster, points into one, or has no successor."""
    states = list(states)
    n_clusters = rng.randint(0, max(1, len(states) // 2))
    members = rng.sample(states, min(len(states), n_clusters)) if n_clusters else []
    clusters = [[s] for s in members]
    for s in states:
        if s in members:
            continue
        roll = rng.random()
        if clusters and roll < density / 2:
            rng.choice(clusters).append(s)
    pairs = set()
    home = {s: c for c in clusters for s in c}
    for c in clusters:
        pairs |= {(s, t) for s in c for t in c}
    for s in states:
        if s in home:
            continue
        if clusters and rng.random() < density:
            pairs |= {(s, t) for t in rng.choice(clusters)}
    return pairs


def random_kripke(rng, universe: Universe, max_states=5, density=0.5) -> KripkeState:
    n = rng.randint(1, max_states)
    states = [f"w{i}" for i in range(n)]
    rel = {a: _k45_relation(rng, states, density) for a in universe.agents}
    val = {p: [s for s in states if rng.random() < 0.5] for p in universe.atoms}
    return KripkeState(KripkeModel(states, rel, val, universe.agents, universe.atoms),
                       rng.choice(states))


def random_action(rng, universe: Universe, max_events=5, pool=None, density=0.5,
                  min_events=1) -> PointedAction:
    """A K45 pointed action model; preconditions come from ``pool`` if given."""
    n = rng.randint(min_events, max_events)
    events = [f"e{i}" for i in range(n)]
    rel = {a: _k45_relation(rng, events, density) for a in universe.agents}
    pool = pool or [Atom(p) for p in universe.atoms]
    pre = {e: rng.choice(pool) for e in events}
    return PointedAction(ActionModel(events, rel, pre, universe.agents), events[0])


def random_s5_action(rng, universe: Universe, max_events=6, pool=None) -> PointedAction:
    n = rng.randint(1, max_events)
    events = [f"e{i}" for i in range(n)]
    rel = {}
    for a in universe.agents:
        block = {e: rng.randrange(max(1, n // 2 + 1)) for e in events}
        rel[a] = {(s, t) for s in events for t in events if block[s] == block[t]}
    pool = pool or [Atom(p) for p in universe.atoms]
    pre = {e: rng.choice(pool) for e in events}
    return PointedAction(ActionModel(events, rel, pre, universe.agents), events[0])


# ------------------------------------------------------------------- programs

def _subset(rng, items, nonempty=False):
    items = sorted(items)
    out = [x for x in items if rng.random() < 0.5]
    if nonempty and not out and items:
        out = [rng.choice(items)]
    return frozenset(out)


def random_blp(rng, universe: Universe, depth=4, pre=None, forbid=frozenset(),
               formula_depth=1):
    """A mu-free well-formed program; returns ``(term, group, pre)``.

    ``pre`` fixes the precondition and ``forbid`` lists agents the group
    must avoid, which is how concurrent arguments are kept compatible.
    """
    free = sorted(set(universe.agents) - set(forbid))
    phi = pre if pre is not None else random_formula(rng, universe, formula_depth)
    choices = ["test"] if depth <= 0 else ["test", "learn", "learn", "concur", "wrong"]
    kind = rng.choice(choices)
    if kind == "learn":
        group = _subset(rng, free, nonempty=True) if free else frozenset()
        first, g1, p1 = random_blp(rng, universe, depth - 1, pre, forbid, formula_depth)
        rest = [random_blp(rng, universe, depth - 1, None, frozenset(), formula_depth)[0]
                for _ in range(rng.randint(0, 2))]
        return Learn(group, [first] + rest), group | g1, p1
    if kind == "concur":
        t1, g1, p1 = random_blp(rng, universe, depth - 1, pre, forbid, formula_depth)
        t2, g2, _ = random_blp(rng, universe, depth - 1, p1, forbid | g1, formula_depth)
        return Concur(t1, t2), g1 | g2, p1
    if kind == "wrong":
        t, g, _ = random_blp(rng, universe, depth - 1, None, frozenset(), formula_depth)
        group = frozenset(x for x in g if x not in forbid and rng.random() < 0.7)
        return Wrong(phi, group, t), group, phi
    return Test(phi), frozenset(), phi


def random_rlp(rng, universe: Universe, depth=4, tries=200, formula_depth=1):
    """A closed well-formed program that uses mu, found by rejection sampling."""
    for _ in range(tries):
        t = _open_term(rng, universe, depth, [], formula_depth)
        if isinstance(t, Var):
            continue
        if not free_vars(t) and not well_formed(t):
            return t
    raise RuntimeError("no well-formed recursive program found")


def _open_term(rng, universe, depth, bound, formula_depth):
    agents = sorted(universe.agents)
    phi = lambda: random_formula(rng, universe, formula_depth)  # noqa: E731
    roll = rng.random()
    if bound and (depth <= 0 or roll < 0.2):
        return Var(rng.choice(bound))
    if depth <= 0:
        return Test(phi())
    if roll < 0.35:
        name = f"X{len(bound)}"
        return Mu(name, _open_term(rng, universe, depth - 1, bound + [name], formula_depth))
    if roll < 0.65:
        group = _subset(rng, agents, nonempty=True)
        n = rng.randint(1, 2)
        return Learn(group, [_open_term(rng, universe, depth - 1, bound, formula_depth)
                             for _ in range(n)])
    if roll < 0.9:
        return Wrong(phi(), [rng.choice(agents)],
                     _open_term(rng, universe, depth - 1, bound, formula_depth))
    return Test(phi())


def pre_pool(k: int, universe: Optional[Universe] = None):
    """``k`` pairwise non-equivalent preconditions."""
    from .kd45 import distinguishing_formulas
    return distinguishing_formulas(k, universe or Universe(("a", "b"), ("p", "q", "r")))


__all__ = [
    "random_formula", "random_kripke", "random_action", "random_s5_action",
    "random_blp", "random_rlp", "pre_pool",
]
