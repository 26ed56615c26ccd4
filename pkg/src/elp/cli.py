"""Command-line front end: ``elp <subcommand> ...``.

Model arguments accept a JSON file, ``fixture:NAME`` for a bundled model,
or a program string which is compiled on the fly.
"""

from __future__ import annotations

import argparse
import json
import os
import random
import sys
from pathlib import Path

from . import io
from .actions import (PointedAction, agent_bisimilar, bisimilar, product_update,
                      t_prime_transform, t_transform, validate)
from .compiler import compile_program
from .errors import ElpError, InvalidModel, ParseError, SynthesisError
from .formula import Universe, modal_depth, parse_formula, to_str
from .hierarchy import classify_model, classify_program, witness
from .kd45 import get_oracle, kd45_countermodel, kd45_satisfiable, kd45_valid
from .kripke import KripkeState, frame_class, is_applicable, satisfies
from .synthesis import synthesize, synthesize_s5, synthesize_tree
from .terms import (dependent_mu_count, free_vars, has_mu, parse_term, term_to_str,
                    well_formed)

_BOOL = {"type": "boolean"}
_INT = {"type": "integer", "minimum": 0}
_STR = {"type": "string"}


def _obj(props, required=None):
    return {"type": "object", "properties": props,
            "required": sorted(required if required is not None else props),
            "additionalProperties": False}


_CLASSIFY = _obj({"depth": _INT, "dependent_mu": {"type": ["integer", "null"]},
                  "premise_distinct_pre": _BOOL, "components": _INT})
_FRAME = {"type": "object", "required": ["agents", "is_K45", "is_KD45", "is_S5"]}

#: JSON Schema of the ``--json`` output of every subcommand
OUTPUT_SCHEMAS = {
    "parse": {"oneOf": [
        _obj({"kind": {"const": "formula"}, "canonical": _STR, "modal_depth": _INT}),
        _obj({"kind": {"const": "program"}, "canonical": _STR, "closed": _BOOL,
              "mu_free": _BOOL, "dependent_mu": _INT}),
    ]},
    "compile": io.ACTION_SCHEMA,
    "update": io.KRIPKE_SCHEMA,
    "bisim": _obj({"bisimilar": _BOOL}),
    "abisim": _obj({"agent": _STR, "bisimilar": _BOOL}),
    "synthesize": _obj({"program": _STR, "mu_free": _BOOL,
                        "verified": {"type": ["boolean", "null"]}}),
    "classify": _CLASSIFY,
    "witness": _obj({**_CLASSIFY["properties"], "k": _INT, "program": _STR}),
    "check": {"oneOf": [
        _obj({"kind": {"const": "program"}, "well_formed": _BOOL, "closed": _BOOL,
              "violations": {"type": "array", "items": _obj({"path": _STR, "message": _STR})}}),
        _obj({"kind": {"enum": ["kripke", "action"]}, "frame": _FRAME}),
        _obj({"kind": {"const": "random"}, "runs": _INT, "seed": {"type": "integer"},
              "checks": {"type": "object", "additionalProperties": _obj({"runs": _INT,
                                                                          "failures": _INT})}}),
    ]},
    "mc": _obj({"formula": _STR, "applicable": _BOOL, "holds": {"type": ["boolean", "null"]}}),
    "prove": _obj({"formula": _STR, "satisfiable": _BOOL, "valid": _BOOL,
                   "countermodel": {"oneOf": [{"type": "null"}, io.KRIPKE_SCHEMA]}}),
    "export-dot": _obj({"dot": _STR}),
    "error": _obj({"error": _STR, "message": _STR}),
}


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(f"{self.prog}: {message}")


# ----------------------------------------------------------------- arguments

def _agents(args, fallback=()):
    if args.agents:
        return sorted(a for a in args.agents.split(",") if a)
    return sorted(fallback) or None


def _program(text):
    return parse_term(text)


def _model(arg, args, agents=()):
    """Load a JSON file or fixture, or compile a program string."""
    if arg.startswith("fixture:"):
        from .fixtures import load_fixture
        try:
            return load_fixture(arg[len("fixture:"):])
        except FileNotFoundError:
            raise InvalidModel(f"no fixture named {arg[len('fixture:'):]!r}") from None
    path = Path(arg)
    if path.suffix == ".json" or path.is_file():
        if not path.is_file():
            raise InvalidModel(f"no such model file: {arg}")
        try:
            return io.load(path)
        except json.JSONDecodeError as exc:
            raise InvalidModel(f"{arg}: {exc}") from None
    t = _program(arg)
    return compile_program(t, agents=_agents(args, agents), oracle=args.oracle)


def _action(arg, args, agents=()):
    m = _model(arg, args, agents)
    if not isinstance(m, PointedAction):
        raise InvalidModel(f"{arg} is a Kripke model, an action model is needed")
    return m


def _state(arg, args):
    m = _model(arg, args)
    if not isinstance(m, KripkeState):
        raise InvalidModel(f"{arg} is an action model, a Kripke model is needed")
    return m


def _agents_of(n):
    return n.model.agents if n is not None else ()


# ---------------------------------------------------------------- subcommands

def cmd_parse(args):
    if not args.formula:
        try:
            t = _program(args.text)
        except ParseError:
            t = None
        if t is not None:
            out = {"kind": "program", "canonical": term_to_str(t),
                   "closed": not free_vars(t), "mu_free": not has_mu(t),
                   "dependent_mu": dependent_mu_count(t)}
            return out, out["canonical"]
    f = parse_formula(args.text)
    out = {"kind": "formula", "canonical": to_str(f), "modal_depth": modal_depth(f)}
    return out, out["canonical"]


def cmd_compile(args):
    n = compile_program(_program(args.program), agents=_agents(args), oracle=args.oracle)
    if args.dot:
        Path(args.dot).write_text(io.model_to_dot(n))
    data = io.to_json(n)
    return data, io.dumps(data).rstrip("\n")


def cmd_update(args):
    ms = _state(args.state, args)
    if (args.program is None) == (args.action is None):
        raise _UsageError("update: give exactly one of --program or --action")
    if args.program is not None:
        na = compile_program(_program(args.program), agents=_agents(args, ms.model.agents),
                             oracle=args.oracle)
    else:
        na = _action(args.action, args)
    data = io.to_json(product_update(ms, na))
    return data, io.dumps(data).rstrip("\n")


def _pair(args):
    first = _action(args.left, args)
    second = _action(args.right, args, _agents_of(first))
    return first, second


def cmd_bisim(args):
    n1, n2 = _pair(args)
    ok = bool(bisimilar(n1, n2, args.oracle))
    return {"bisimilar": ok}, "bisimilar" if ok else "not bisimilar"


def cmd_abisim(args):
    n1, n2 = _pair(args)
    ok = agent_bisimilar(args.agent, n1, n2, args.oracle)
    return ({"agent": args.agent, "bisimilar": ok},
            f"{args.agent}-bisimilar" if ok else f"not {args.agent}-bisimilar")


_METHODS = {"general": synthesize, "s5": synthesize_s5, "tree": synthesize_tree}


def cmd_synthesize(args):
    n = _action(args.model, args)
    t = _METHODS[args.method](n)
    verified = None
    if args.verify:
        verified = bool(bisimilar(compile_program(t, agents=n.model.agents,
                                                  oracle=args.oracle), n, args.oracle))
        if not verified:
            raise SynthesisError("compiled program is not bisimilar to the input")
    text = term_to_str(t)
    return {"program": text, "mu_free": not has_mu(t), "verified": verified}, text


def _report(n, dependent, cap, oracle):
    r = classify_model(n, cap, oracle)
    return {**r.to_json(), "dependent_mu": dependent}


def _report_text(out):
    return " ".join(f"{k}={json.dumps(out[k])}" for k in sorted(out))


def cmd_classify(args):
    arg = args.target
    if arg.startswith("fixture:") or Path(arg).suffix == ".json" or Path(arg).is_file():
        out = _report(_action(arg, args), None, args.cap, args.oracle)
    else:
        t = _program(arg)
        dep = classify_program(t)
        n = compile_program(t, agents=_agents(args), oracle=args.oracle)
        out = _report(n, dep, args.cap, args.oracle)
    return out, _report_text(out)


def cmd_witness(args):
    t = witness(args.k)
    n = compile_program(t, oracle=args.oracle)
    out = {"k": args.k, "program": term_to_str(t),
           **_report(n, classify_program(t), args.cap, args.oracle)}
    return out, out["program"]


def cmd_check(args):
    if args.random is not None:
        return _random_checks(args.random, args.seed, args.oracle)
    if args.target is None:
        raise _UsageError("check: give a target or --random N")
    arg = args.target
    if arg.startswith("fixture:") or Path(arg).suffix == ".json" or Path(arg).is_file():
        m = _model(arg, args)
        rep = validate(m) if isinstance(m, PointedAction) else frame_class(m.model)
        kind = "action" if isinstance(m, PointedAction) else "kripke"
        out = {"kind": kind, "frame": rep.to_json()}
        text = f"{kind} model: K45={rep.is_K45} KD45={rep.is_KD45} S5={rep.is_S5}"
        return out, text
    t = _program(arg)
    vs = well_formed(t, oracle=args.oracle or "syntactic")
    closed = not free_vars(t)
    out = {"kind": "program", "well_formed": not vs, "closed": closed,
           "violations": [{"path": v.path, "message": v.message} for v in vs]}
    lines = ["well-formed" if not vs else "ill-formed"] + [f"  {v.path or '<root>'}: {v.message}" for v in vs]
    if not closed:
        lines.append("free variables: " + ", ".join(sorted(free_vars(t))))
    return out, "\n".join(lines), (0 if not vs else 1)


def _random_checks(runs, seed, oracle):
    """Small-scale versions of the library's structural guarantees."""
    from .generators import pre_pool, random_action, random_blp, random_kripke, random_s5_action
    rng = random.Random(seed)
    uni = Universe(("a", "b", "c"), ("p", "q", "r"))
    pool = pre_pool(4, uni)
    checks = {}

    def tally(name, ok):
        c = checks.setdefault(name, {"runs": 0, "failures": 0})
        c["runs"] += 1
        c["failures"] += 0 if ok else 1

    for _ in range(runs):
        t, _, _ = random_blp(rng, uni, depth=3)
        tally("tree", t_transform(compile_program(t, agents=uni.agents))[1].is_tree())

        ms = random_kripke(rng, uni)
        na = random_action(rng, uni, pool=pool)
        try:
            tally("k45_closure", frame_class(product_update(ms, na).model).is_K45)
        except ElpError:
            pass

        n = random_action(rng, uni, max_events=6, pool=pool)
        tmodel, g = t_transform(n)
        pmodel, gp = t_prime_transform(n)
        tally("t_bisim", all(bisimilar(n, PointedAction(tmodel, w), oracle)
                             for w in g.points(n.actual)) and
              all(bisimilar(n, PointedAction(pmodel, w), oracle) for w in gp.points(n.actual)))
        prog = synthesize(n)
        tally("synthesis", bool(bisimilar(compile_program(prog, agents=uni.agents), n, oracle)))

        s5 = random_s5_action(rng, uni, pool=pool)
        tally("s5", bool(bisimilar(compile_program(synthesize_s5(s5), agents=uni.agents),
                                   s5, oracle)))
    out = {"kind": "random", "runs": runs, "seed": seed, "checks": checks}
    text = "\n".join(f"{k}: {v['runs']} runs, {v['failures']} failures"
                     for k, v in sorted(checks.items()))
    failed = any(v["failures"] for v in checks.values())
    return out, text, (1 if failed else 0)


def cmd_mc(args):
    ms = _state(args.state, args)
    if args.at is not None:
        if args.at not in ms.model.states:
            raise InvalidModel(f"no state {args.at!r} in {args.state}")
        ms = KripkeState(ms.model, args.at)
    f = parse_formula(args.formula, Universe(ms.model.agents, ms.model.atoms))
    app = is_applicable(ms, f)
    val = satisfies(ms, f) if app else None
    text = "not applicable" if not app else ("true" if val else "false")
    return {"formula": to_str(f), "applicable": app, "holds": val}, text


def cmd_prove(args):
    f = parse_formula(args.formula)
    sat, valid = kd45_satisfiable(f), kd45_valid(f)
    cm = None if valid else io.to_json(kd45_countermodel(f))
    text = "valid" if valid else ("satisfiable, not valid" if sat else "unsatisfiable")
    if cm is not None:
        text += "\ncountermodel:\n" + io.dumps(cm).rstrip("\n")
    return {"formula": to_str(f), "satisfiable": sat, "valid": valid,
            "countermodel": cm}, text


def cmd_export_dot(args):
    m = _model(args.model, args)
    if args.graph == "none":
        dot = io.model_to_dot(m)
    else:
        if not isinstance(m, PointedAction):
            raise InvalidModel("component graphs exist only for action models")
        transform = t_transform if args.graph == "t" else t_prime_transform
        dot = io.graph_to_dot(transform(m)[1])
    if args.output:
        Path(args.output).write_text(dot)
    return {"dot": dot}, dot.rstrip("\n")


# ------------------------------------------------------------------- parser

def build_parser():
    p = _Parser(prog="elp", description="Epistemic learning programs and K45 action models.")
    p.add_argument("--json", action="store_true", help="machine-readable output")
    p.add_argument("--seed", type=int, default=0, help="seed for random checks")
    p.add_argument("--oracle", choices=["syntactic", "kd45"], default=None,
                   help="precondition equivalence oracle (default: $ELP_ORACLE or kd45)")
    p.add_argument("--agents", default=None, help="comma-separated agents for compilation")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("parse", help="parse and pretty-print a program or formula")
    s.add_argument("text")
    s.add_argument("--formula", action="store_true", help="force formula syntax")
    s.set_defaults(func=cmd_parse)

    s = sub.add_parser("compile", help="compile a closed program to an action model")
    s.add_argument("program")
    s.add_argument("--dot", metavar="PATH", help="also write the model as DOT")
    s.set_defaults(func=cmd_compile)

    s = sub.add_parser("update", help="product update of a Kripke state")
    s.add_argument("state")
    s.add_argument("--program")
    s.add_argument("--action")
    s.set_defaults(func=cmd_update)

    s = sub.add_parser("bisim", help="bisimilarity of two pointed action models")
    s.add_argument("left")
    s.add_argument("right")
    s.set_defaults(func=cmd_bisim)

    s = sub.add_parser("abisim", help="agent bisimilarity of two pointed action models")
    s.add_argument("agent")
    s.add_argument("left")
    s.add_argument("right")
    s.set_defaults(func=cmd_abisim)

    s = sub.add_parser("synthesize", help="recover a program from a K45 action model")
    s.add_argument("model")
    s.add_argument("--method", choices=sorted(_METHODS), default="general")
    s.add_argument("--verify", action="store_true", help="check the round trip")
    s.set_defaults(func=cmd_synthesize)

    s = sub.add_parser("classify", help="hierarchy level of a program or model")
    s.add_argument("target")
    s.add_argument("--cap", type=int, default=6)
    s.set_defaults(func=cmd_classify)

    s = sub.add_parser("witness", help="program separating level k from level k-1")
    s.add_argument("k", type=int)
    s.add_argument("--cap", type=int, default=6)
    s.set_defaults(func=cmd_witness)

    s = sub.add_parser("check", help="well-formedness, frame class, or random self-checks")
    s.add_argument("target", nargs="?")
    s.add_argument("--random", type=int, metavar="N")
    s.set_defaults(func=cmd_check)

    s = sub.add_parser("mc", help="evaluate a formula at a Kripke state")
    s.add_argument("state")
    s.add_argument("formula")
    s.add_argument("--at", metavar="STATE", help="evaluate here instead of the actual state")
    s.set_defaults(func=cmd_mc)

    s = sub.add_parser("prove", help="KD45 satisfiability and validity")
    s.add_argument("formula")
    s.set_defaults(func=cmd_prove)

    s = sub.add_parser("export-dot", help="Graphviz rendering of a model or its component graph")
    s.add_argument("model")
    s.add_argument("--graph", choices=["none", "t", "t-prime"], default="none")
    s.add_argument("-o", "--output")
    s.set_defaults(func=cmd_export_dot)
    return p


def run(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    argv = list(sys.argv[1:] if argv is None else argv)
    json_mode = "--json" in argv
    try:
        args = build_parser().parse_args(argv)
        if args.oracle is None:
            args.oracle = os.environ.get("ELP_ORACLE") or None
        args.oracle = get_oracle(args.oracle)
        result = args.func(args)
    except _UsageError as exc:
        print(str(exc), file=stderr)
        return 2
    except ElpError as exc:
        name = type(exc).__name__
        if json_mode:
            print(json.dumps({"error": name, "message": str(exc)}, sort_keys=True), file=stdout)
        else:
            print(f"{name}: {exc}", file=stderr)
        return 1
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=stderr)
        return 2
    out, text, code = result if len(result) == 3 else (*result, 0)
    if args.json:
        print(json.dumps(out, sort_keys=True, indent=2), file=stdout)
    else:
        print(text, file=stdout)
    return code


def main():
    raise SystemExit(run())


if __name__ == "__main__":
    main()
