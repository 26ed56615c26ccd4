import random

import pytest

from elp.errors import IllFormed, ParseError, UnknownIdentifier
from elp.formula import Atom, Universe
from elp.generators import random_blp, random_rlp
from elp import terms
from elp.terms import (Concur, Learn, Mu, Var, Wrong, check_program, dependent_mu_count,
                       free_vars, has_mu, meta, parse_term, term_size, term_to_str, well_formed)

P = parse_term
UNI = Universe(("a", "b", "c"), ("p", "q", "r"))


def test_parse_nested_learning():
    want = Learn({"b"}, [Wrong(Atom("p"), {"a"}, Learn({"a"}, [terms.Test(Atom("q"))]))])
    assert P("L{b}(p |{a} L{a}(?q))") == want


def test_parse_mu():
    t = P("mu X. L{b}(phi |{a} L{a}(psi |{b} L{b}(X)))")
    assert isinstance(t, Mu) and t.var == "X"
    assert free_vars(t) == frozenset() and free_vars(t.body) == {"X"}


def test_mu_x_x_parses_but_is_ill_formed():
    t = P("mu X. X")
    assert t == Mu("X", Var("X"))
    assert well_formed(t)
    with pytest.raises(IllFormed):
        check_program(t)


def test_concur_is_left_associative_and_looser_than_wrong():
    t = P("?p ^ q |{a} ?q ^ ?r")
    assert t == Concur(Concur(terms.Test(Atom("p")), Wrong(Atom("q"), {"a"}, terms.Test(Atom("q")))),
                       terms.Test(Atom("r")))


@pytest.mark.parametrize("text", ["", "L{a}()", "?", "L{a}(?p", "mu . ?p", "?p ^", "p |{a}"])
def test_parse_errors(text):
    with pytest.raises((ParseError, ValueError)):
        P(text)


def test_unknown_agent_in_program():
    with pytest.raises(UnknownIdentifier):
        P("L{z}(?p)", UNI)


def test_learn_needs_an_argument():
    with pytest.raises(ValueError):
        Learn({"a"}, [])


def test_meta_examples():
    m = meta(P("?phi"))
    assert m.group == frozenset() and m.pre == Atom("phi")
    m = meta(P("L{b}(phi |{a} L{a}(?psi))"))
    assert m.group == {"a", "b"} and m.pre == Atom("phi") and m.defined
    m = meta(Var("X"))
    assert m.group is None and m.pre is None and not m.defined
    assert meta(P("L{a}(X)")).group is None


def test_well_formed_examples():
    assert well_formed(P("phi |{a} L{a}(?psi) ^ phi |{b} L{b}(?phi)")) == []
    (v,) = well_formed(P("?phi ^ ?psi"))
    assert "preconditions differ" in v.message
    (v,) = well_formed(P("psi |{a,b} L{a}(?chi)"))
    assert "not within" in v.message
    (v,) = well_formed(P("L{a}(?p) ^ L{a}(?p)"))
    assert "overlap" in v.message


def test_well_formed_reports_paths():
    (v,) = well_formed(P("L{c}(?p, ?phi ^ ?psi)"))
    assert v.path == "1"


def test_pre_equality_oracle():
    t = P("?p ^ ?(p & p)")
    assert well_formed(t)
    assert well_formed(t, oracle="kd45") == []


def test_dependent_mu_examples():
    assert dependent_mu_count(P("L{b}(phi |{a} L{a}(?psi))")) == 0
    indep = P("(chi |{a} mu X. L{a}(phi |{b} L{b}(psi |{a} X))) ^ "
              "(chi |{b} mu Y. L{b}(psi |{a} L{a}(phi |{b} Y)))")
    assert dependent_mu_count(indep) == 1
    dep = P("mu X. L{a}(phi |{b} mu Y. L{b}(psi |{a} X ^ psi |{c} L{c}(theta |{b} Y)))")
    assert dependent_mu_count(dep) == 2
    # binder with no occurrence counts as nothing
    assert dependent_mu_count(P("mu X. L{a}(?p)")) == 0


def _samples(seed, count):
    rng = random.Random(seed)
    out = []
    for _ in range(count):
        out.append(random_rlp(rng, UNI, depth=4))
        out.append(random_blp(rng, UNI, depth=4)[0])
    return out


def test_print_is_canonical():
    for t in _samples(1, 150):
        s = term_to_str(t)
        assert P(s) == t
        assert term_to_str(P(s)) == s


def test_generated_terms_are_programs():
    for t in _samples(2, 150):
        assert well_formed(t) == [] and not free_vars(t)
        m = meta(t)
        assert m.defined
        assert term_size(t) >= 1


def test_dependent_mu_zero_iff_no_active_binder():
    def active(t):
        if isinstance(t, Mu) and t.var in free_vars(t.body):
            return True
        kids = {Learn: lambda u: u.args, Concur: lambda u: (u.left, u.right),
                Wrong: lambda u: (u.arg,), Mu: lambda u: (u.body,)}
        return any(active(c) for c in kids.get(type(t), lambda u: ())(t))

    for t in _samples(3, 150):
        assert (dependent_mu_count(t) == 0) == (not active(t))
        if not has_mu(t):
            assert dependent_mu_count(t) == 0


def test_random_blp_is_well_formed():
    rng = random.Random(4)
    for _ in range(300):
        t, group, pre = random_blp(rng, UNI, depth=rng.randint(0, 5))
        assert well_formed(t) == [] and not has_mu(t)
        m = meta(t)
        assert m.group == group and m.pre == pre
