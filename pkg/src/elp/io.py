"""Canonical JSON and DOT encodings of models and component graphs."""

from __future__ import annotations

import json
from pathlib import Path

from .actions import ActionModel, ComponentGraph, PointedAction
from .errors import InvalidModel
from .formula import Universe, parse_formula, to_str
from .kripke import KripkeModel, KripkeState

_PAIRS = {"type": "array", "items": {"type": "array", "items": {"type": "string"},
                                      "minItems": 2, "maxItems": 2}}
_NAMES = {"type": "array", "items": {"type": "string"}}

KRIPKE_SCHEMA = {
    "type": "object",
    "required": ["agents", "atoms", "states", "rel", "val", "actual"],
    "additionalProperties": False,
    "properties": {
        "agents": _NAMES, "atoms": _NAMES, "states": _NAMES,
        "rel": {"type": "object", "additionalProperties": _PAIRS},
        "val": {"type": "object", "additionalProperties": _NAMES},
        "actual": {"type": "string"},
    },
}

ACTION_SCHEMA = {
    "type": "object",
    "required": ["agents", "atoms", "states", "rel", "pre", "actual"],
    "additionalProperties": False,
    "properties": {
        "agents": _NAMES, "atoms": _NAMES, "states": _NAMES,
        "rel": {"type": "object", "additionalProperties": _PAIRS},
        "pre": {"type": "object", "additionalProperties": {"type": "string"}},
        "actual": {"type": "string"},
    },
}


def _atoms_of_pres(pres):
    from .formula import atoms_of
    out = set()
    for f in pres:
        out |= atoms_of(f)
    return out


def to_json(obj, atoms=None) -> dict:
    """Canonical dict: every id list sorted, formulas in concrete syntax."""
    if isinstance(obj, KripkeState):
        m = obj.model
        return {
            "agents": sorted(m.agents), "atoms": sorted(m.atoms),
            "states": sorted(m.states),
            "rel": {a: sorted([s, t] for s, t in m.rel[a]) for a in sorted(m.agents)},
            "val": {p: sorted(m.val[p]) for p in sorted(m.atoms)},
            "actual": obj.actual,
        }
    if isinstance(obj, PointedAction):
        m = obj.model
        ats = set(atoms or ()) | set(m.atoms) | _atoms_of_pres(m.pre.values())
        return {
            "agents": sorted(m.agents), "atoms": sorted(ats),
            "states": sorted(m.states),
            "rel": {a: sorted([s, t] for s, t in m.rel[a]) for a in sorted(m.agents)},
            "pre": {e: to_str(m.pre[e]) for e in sorted(m.states)},
            "actual": obj.actual,
        }
    raise TypeError(f"cannot encode {type(obj).__name__}")


def from_json(data: dict):
    """Build a KripkeState (``val`` key) or a PointedAction (``pre`` key)."""
    try:
        agents, atoms = list(data["agents"]), list(data["atoms"])
        states, actual = list(data["states"]), data["actual"]
        rel = {a: [tuple(p) for p in pairs] for a, pairs in data.get("rel", {}).items()}
    except (KeyError, TypeError) as exc:
        raise InvalidModel(f"malformed model JSON: {exc}") from None
    if "val" in data:
        return KripkeState(KripkeModel(states, rel, data["val"], agents, atoms), actual)
    if "pre" in data:
        uni = Universe(agents, atoms)
        pre = {e: parse_formula(s, uni) for e, s in data["pre"].items()}
        return PointedAction(ActionModel(states, rel, pre, agents, atoms), actual)
    raise InvalidModel("model JSON needs either 'val' or 'pre'")


def dumps(data) -> str:
    return json.dumps(data, sort_keys=True, indent=2) + "\n"


def load(path):
    return from_json(json.loads(Path(path).read_text()))


def save(obj, path, atoms=None):
    Path(path).write_text(dumps(to_json(obj, atoms)))


# ------------------------------------------------------------------------ DOT

def _q(s):
    # ids and formulas never contain backslashes; "\\n" is Graphviz's line break
    return '"' + str(s).replace('"', '\\"') + '"'


def model_to_dot(obj, name="model") -> str:
    """Graphviz digraph: one edge per (source, target) labelled by its agents."""
    m = obj.model
    lines = [f"digraph {_q(name)} {{", "  node [shape=ellipse];"]
    for s in sorted(m.states):
        if isinstance(obj, PointedAction):
            label = f"{s}\\n{to_str(m.pre[s])}"
        else:
            true = [p for p in sorted(m.atoms) if s in m.val[p]]
            label = f"{s}\\n{','.join(true) or '-'}"
        extra = ", peripheries=2" if s == obj.actual else ""
        lines.append(f"  {_q(s)} [label={_q(label)}{extra}];")
    labels = {}
    for a in sorted(m.agents):
        for s, t in m.rel[a]:
            labels.setdefault((s, t), []).append(a)
    for (s, t), ags in sorted(labels.items()):
        lines.append(f"  {_q(s)} -> {_q(t)} [label={_q(','.join(ags))}];")
    lines.append("}")
    return "\n".join(lines) + "\n"


def graph_to_dot(graph: ComponentGraph, name="components") -> str:
    lines = [f"digraph {_q(name)} {{", "  node [shape=box];"]
    for c in graph.components:
        extra = ", peripheries=2" if c.index == graph.root else ""
        lines.append(f"  {c.index} [label={_q(c.label())}{extra}];")
    for (i, j), ags in sorted(graph.edges.items()):
        lines.append(f"  {i} -> {j} [label={_q(','.join(sorted(ags)))}];")
    lines.append("}")
    return "\n".join(lines) + "\n"
