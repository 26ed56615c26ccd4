"""Partition refinement for labelled transition systems."""


def coarsest_partition(states, agents, succ, initial):
    """Coarsest stable refinement of ``initial``.

    ``succ(agent, s)`` yields successors; ``initial`` maps every state to a
    hashable seed class.  Returns a dict state -> block index.
    """
    states = list(states)
    seeds = {}
    block = {}
    for s in states:
        block[s] = seeds.setdefault(initial[s], len(seeds))
    while True:
        sigs = {}
        new = {}
        for s in states:
            sig = (block[s],) + tuple(
                frozenset(block[t] for t in succ(a, s)) for a in agents)
            new[s] = sigs.setdefault(sig, len(sigs))
        if len(sigs) == len(set(block.values())):
            return new
        block = new
