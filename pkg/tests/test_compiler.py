import random
import warnings

import pytest

from elp.actions import bisimilar, t_transform, validate
from elp.compiler import PreOf, compile_program, compile_term, substitute, tie
from elp.errors import HoleBisimilarityWarning, IllFormed, VariableNotFree
from elp.fixtures import PROGRAMS, load_fixture
from elp.formula import Atom, Universe
from elp.generators import random_blp, random_rlp
from elp.terms import meta, parse_term

P = parse_term
UNI = Universe(("a", "b", "c"), ("p", "q", "r"))


def _actual_group(n):
    m = n.model
    return {a for a in m.agents if any(s == n.actual for s, _ in m.rel[a])}


def test_compile_test_is_one_event():
    n = compile_program(P("?phi"))
    assert len(n.model.states) == 1
    assert n.model.pre[n.actual] == Atom("phi")
    assert all(not r for r in n.model.rel.values())


@pytest.mark.parametrize("name", sorted(PROGRAMS))
def test_fixture_programs(name):
    n = compile_program(P(PROGRAMS[name]), agents=["a", "b"])
    assert bisimilar(n, load_fixture(name))


def test_cli_example_has_two_events():
    n = compile_program(P("L{b}(p |{a} L{a}(?q))"))
    assert len(n.model.states) == 2
    assert validate(n).is_K45


def test_substitution_example():
    open_model = compile_term(P("L{a}(L{b}(X))"), agents=["a", "b"])
    assert set(open_model.holes) == {"X"}
    closed = substitute(open_model, "X", compile_program(P("L{a,b}(?phi)")))
    assert closed.is_closed()
    assert bisimilar(closed.to_pointed(), compile_program(P("L{a}(L{b}(L{a,b}(?phi)))")))


def test_substitute_open_target_keeps_other_holes():
    om = compile_term(P("L{a}(X)"), agents=["a", "b"])
    out = substitute(om, "X", compile_term(P("L{b}(Y)"), agents=["a", "b"]))
    assert set(out.holes) == {"Y"} and not out.is_closed()
    done = substitute(out, "Y", compile_program(P("?p")))
    assert bisimilar(done.to_pointed(), compile_program(P("L{a}(L{b}(?p))")))


def test_substitute_requires_free_variable():
    om = compile_term(P("L{a}(?p)"))
    with pytest.raises(VariableNotFree):
        substitute(om, "X", compile_program(P("?q")))
    with pytest.raises(VariableNotFree):
        tie(om, "X")


def test_substitute_rejects_unknown_agents():
    om = compile_term(P("L{a}(X)"))
    with pytest.raises(ValueError):
        substitute(om, "X", compile_program(P("L{b}(?p)")))


def test_open_model_cannot_be_pointed():
    om = compile_term(P("L{a}(X)"))
    with pytest.raises(IllFormed):
        om.to_pointed()


def test_pre_placeholder_until_substitution():
    om = compile_term(P("L{a}(X)"))
    assert om.pre[om.actual] == PreOf("X")
    out = substitute(om, "X", compile_program(P("?q")))
    assert out.pre[out.actual] == Atom("q")


def test_mu_matches_self_substitution():
    body = "L{b}(phi |{a} L{a}(psi |{b} L{b}(X)))"
    via_mu = compile_program(P(f"mu X. {body}"))
    om = compile_term(P(body))
    assert bisimilar(tie(om, "X").to_pointed(), via_mu)
    assert bisimilar(substitute(om, "X", om).to_pointed(), via_mu)
    assert len(tie(om, "X").events) == len(via_mu.model.states)


def test_double_unfolding():
    once = P("mu X. L{b}(phi |{a} L{a}(psi |{b} L{b}("
             "L{b}(phi |{a} L{a}(psi |{b} L{b}(X))))))")
    assert bisimilar(compile_program(once), load_fixture("fig13"))
    assert bisimilar(compile_program(once), load_fixture("fig3"))


def test_ill_formed_rejected():
    with pytest.raises(IllFormed):
        compile_program(P("?p ^ ?q"))
    with pytest.raises(IllFormed):
        compile_program(P("L{a}(X)"))
    with pytest.raises(IllFormed):
        compile_program(P("mu X. X"))


def test_hole_bisimilarity_warning():
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        compile_term(P("L{a}(L{b}(X), ?q)"))
    assert any(w.category is HoleBisimilarityWarning for w in caught)
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        compile_term(P("L{a}(L{b}(X))"))


def test_unguarded_recursion_loops_on_the_actual_event():
    n = compile_program(P("mu X. ~p |{b} X"))
    assert len(n.model.states) == 1
    assert n.model.rel["b"] == frozenset({(n.actual, n.actual)})
    n = compile_program(P("L{b}(mu X. r |{a} X)"))
    assert validate(n).is_K45 and _actual_group(n) == {"a", "b"}


def _programs(seed, count):
    rng = random.Random(seed)
    out = []
    for _ in range(count):
        out.append(random_rlp(rng, UNI, depth=4))
        out.append(random_blp(rng, UNI, depth=4)[0])
    return out


@pytest.mark.filterwarnings("ignore::elp.errors.HoleBisimilarityWarning")
def test_compiled_programs_are_k45_and_match_meta():
    for t in _programs(1, 150):
        n = compile_program(t, agents=UNI.agents)
        assert validate(n).is_K45
        m = meta(t)
        assert n.model.pre[n.actual] == m.pre
        assert _actual_group(n) == set(m.group)


def test_mu_free_programs_give_trees():
    rng = random.Random(2)
    for _ in range(100):
        t = random_blp(rng, UNI, depth=5)[0]
        assert t_transform(compile_program(t, agents=UNI.agents))[1].is_tree()


def test_compile_is_deterministic():
    for t in _programs(3, 20):
        n1, n2 = compile_program(t), compile_program(t)
        assert n1.model.states == n2.model.states
        assert n1.model.rel == n2.model.rel
