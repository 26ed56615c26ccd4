"""Independent reference implementations used to derive and cross-check test values.

Nothing here imports the library's semantic code; only plain data is shared.
"""

from __future__ import annotations

import itertools

from elp.formula import And, Atom, Bot, Iff, Implies, Know, Not, Or, Top


def evaluate(f, worlds, rel, val, w):
    """Standard Kripke truth (no applicability restriction)."""
    if isinstance(f, Atom):
        return w in val.get(f.name, ())
    if isinstance(f, Top):
        return True
    if isinstance(f, Bot):
        return False
    if isinstance(f, Not):
        return not evaluate(f.arg, worlds, rel, val, w)
    if isinstance(f, And):
        return evaluate(f.left, worlds, rel, val, w) and evaluate(f.right, worlds, rel, val, w)
    if isinstance(f, Or):
        return evaluate(f.left, worlds, rel, val, w) or evaluate(f.right, worlds, rel, val, w)
    if isinstance(f, Implies):
        return (not evaluate(f.left, worlds, rel, val, w)) or evaluate(f.right, worlds, rel, val, w)
    if isinstance(f, Iff):
        return evaluate(f.left, worlds, rel, val, w) == evaluate(f.right, worlds, rel, val, w)
    if isinstance(f, Know):
        return all(evaluate(f.arg, worlds, rel, val, v)
                   for (u, v) in rel.get(f.agent, ()) if u == w)
    raise TypeError(f)


def kd45_relations(n):
    """Every serial, transitive, Euclidean relation on range(n)."""
    worlds = range(n)
    subsets = [frozenset(c) for k in range(1, n + 1) for c in itertools.combinations(worlds, k)]
    out = []
    for choice in itertools.product(subsets, repeat=n):
        if all(choice[v] == choice[w] for w in worlds for v in choice[w]):
            out.append(frozenset((w, v) for w in worlds for v in choice[w]))
    return out


def brute_force_satisfiable(f, agents, atoms, max_worlds=2):
    """True if some KD45 model with at most ``max_worlds`` worlds satisfies ``f``."""
    for n in range(1, max_worlds + 1):
        rels = kd45_relations(n)
        for combo in itertools.product(rels, repeat=len(agents)):
            rel = dict(zip(agents, combo))
            for bits in itertools.product([False, True], repeat=n * len(atoms)):
                val = {p: {w for w in range(n) if bits[i * n + w]} for i, p in enumerate(atoms)}
                if any(evaluate(f, range(n), rel, val, w) for w in range(n)):
                    return True
    return False


def naive_bisimilar(m1, m2, same_label):
    """Greatest-fixpoint bisimulation on plain dicts.

    Each model is ``(states, rel, label, actual)`` with ``rel[a]`` a set of pairs.
    ``same_label(l1, l2)`` decides the atomic clause.
    """
    s1, r1, l1, a1 = m1
    s2, r2, l2, a2 = m2
    agents = set(r1) | set(r2)

    def succ(r, a, s):
        return {t for (u, t) in r.get(a, ()) if u == s}

    z = {(x, y) for x in s1 for y in s2 if same_label(l1[x], l2[y])}
    changed = True
    while changed:
        changed = False
        for x, y in list(z):
            ok = all(
                all(any((x2, y2) in z for y2 in succ(r2, a, y)) for x2 in succ(r1, a, x)) and
                all(any((x2, y2) in z for x2 in succ(r1, a, x)) for y2 in succ(r2, a, y))
                for a in agents)
            if not ok:
                z.discard((x, y))
                changed = True
    return (a1, a2) in z


def is_bisimulation(z, m1, m2, same_label):
    s1, r1, l1, _ = m1
    s2, r2, l2, _ = m2
    agents = set(r1) | set(r2)

    def succ(r, a, s):
        return {t for (u, t) in r.get(a, ()) if u == s}

    for x, y in z:
        if not same_label(l1[x], l2[y]):
            return False
        for a in agents:
            if any(not any((x2, y2) in z for y2 in succ(r2, a, y)) for x2 in succ(r1, a, x)):
                return False
            if any(not any((x2, y2) in z for x2 in succ(r1, a, x)) for y2 in succ(r2, a, y)):
                return False
    return True


def exhaustive_bisimilar(m1, m2, same_label):
    """Search every relation between the two state sets (tiny models only)."""
    pairs = [(x, y) for x in m1[0] for y in m2[0]]
    for k in range(1, len(pairs) + 1):
        for z in itertools.combinations(pairs, k):
            z = set(z)
            if (m1[3], m2[3]) in z and is_bisimulation(z, m1, m2, same_label):
                return True
    return False


def action_data(n):
    """Plain-dict view of a PointedAction: labels are preconditions."""
    m = n.model
    return (list(m.states), {a: set(m.rel[a]) for a in m.agents}, dict(m.pre), n.actual)


def kripke_data(ms):
    m = ms.model
    label = {s: frozenset(p for p in m.atoms if s in m.val[p]) for s in m.states}
    return (list(m.states), {a: set(m.rel[a]) for a in m.agents}, label, ms.actual)


def frame_flags(states, pairs):
    """Definitional reflexive/serial/transitive/Euclidean check for one relation."""
    r = set(pairs)
    return {
        "reflexive": all((s, s) in r for s in states),
        "serial": all(any((s, t) in r for t in states) for s in states),
        "transitive": all((s, u) in r for (s, t) in r for (t2, u) in r if t == t2),
        "euclidean": all((t, u) in r for (s, t) in r for (s2, u) in r if s == s2),
    }
