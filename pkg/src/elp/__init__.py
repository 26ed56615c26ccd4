"""Epistemic learning programs.

Compile learning programs (with mu-recursion) into finite K45 pointed action
models, run them on epistemic states, decide bisimilarity, synthesize a
program back from any finite K45 action model, and classify programs and
models by their number of dependent recursions.
"""

from .actions import (ActionModel, BisimResult, Component, ComponentGraph, PointedAction,
                      agent_bisimilar, bisimilar, nested_loop_depth, product_update, quotient,
                      reachable, s5_components, t_prime_transform, t_transform, validate)
from .compiler import OpenModel, PreOf, compile_program, compile_term, substitute, tie
from .errors import (ActualEliminated, CapExceeded, ElpError, HoleBisimilarityWarning,
                     IllFormed, InvalidModel, NotApplicable, NotATree, NotS5, ParseError,
                     ResourceBoundExceeded, SynthesisError, UnknownIdentifier,
                     UniverseTooSmall, VariableNotFree)
from .formula import (BOT, TOP, And, Atom, Bot, Iff, Implies, Know, Not, Or, Top, Universe,
                      desugar, modal_depth, parse_formula, to_str)
from .hierarchy import ModelReport, classify_model, classify_program, witness
from .io import from_json, graph_to_dot, load, model_to_dot, save, to_json
from .kd45 import (KD45Oracle, SyntacticOracle, distinguishing_formulas, get_oracle,
                   kd45_countermodel, kd45_equivalent, kd45_model, kd45_satisfiable,
                   kd45_valid)
from .kripke import (FrameReport, KripkeModel, KripkeState, frame_class, holds,
                     is_applicable, kripke_bisimilar, present_group, satisfies)
from .synthesis import synthesize, synthesize_s5, synthesize_tree
from .terms import (Concur, Learn, Mu, Test, Var, Violation, Wrong, check_program, concur,
                    dependent_mu_count, free_vars, meta, parse_term, term_to_str, well_formed)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
