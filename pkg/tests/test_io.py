import random

import jsonschema
import pytest

from elp import io
from elp.actions import PointedAction, bisimilar, t_prime_transform
from elp.errors import InvalidModel
from elp.fixtures import fixture_path, fixture_text, load_fixture, names
from elp.formula import Universe
from elp.generators import pre_pool, random_action, random_kripke
from elp.kripke import kripke_bisimilar


@pytest.mark.parametrize("name", names())
def test_fixture_round_trip_is_byte_identical(name, tmp_path):
    obj = load_fixture(name)
    out = tmp_path / f"{name}.json"
    io.save(obj, out)
    assert out.read_text() == fixture_text(name)
    assert fixture_path(name).read_text() == fixture_text(name)


@pytest.mark.parametrize("name", names())
def test_fixtures_match_schema(name):
    data = io.to_json(load_fixture(name))
    schema = io.ACTION_SCHEMA if "pre" in data else io.KRIPKE_SCHEMA
    jsonschema.validate(data, schema)


def test_random_models_round_trip(tmp_path):
    rng = random.Random(1)
    uni = Universe(("a", "b"), ("p", "q"))
    for i in range(20):
        n = random_action(rng, uni, max_events=5, pool=pre_pool(4, uni))
        io.save(n, tmp_path / "n.json")
        back = io.load(tmp_path / "n.json")
        assert bisimilar(n, back)
        assert io.dumps(io.to_json(back)) == io.dumps(io.to_json(n))
        ms = random_kripke(rng, uni)
        io.save(ms, tmp_path / "m.json")
        assert kripke_bisimilar(ms, io.load(tmp_path / "m.json"))


def test_malformed_json():
    with pytest.raises(InvalidModel):
        io.from_json({"agents": []})
    with pytest.raises(InvalidModel):
        io.from_json({"agents": [], "atoms": [], "states": ["s"], "actual": "s"})


def test_model_dot():
    dot = io.model_to_dot(load_fixture("fig2"), "fig2")
    assert dot.startswith('digraph "fig2" {')
    assert '"s" -> "t" [label="a"];' in dot
    assert '"s" [label="s\\nphi", peripheries=2];' in dot
    assert dot.rstrip().endswith("}")
    kdot = io.model_to_dot(load_fixture("fig6"))
    assert "peripheries=2" in kdot


def test_graph_dot():
    _, g = t_prime_transform(load_fixture("fig3"))
    dot = io.graph_to_dot(g)
    assert dot.count("->") == len(g.edges)
    assert dot.count("peripheries=2") == 1


def test_to_json_rejects_other_objects():
    with pytest.raises(TypeError):
        io.to_json("fig2")
    assert isinstance(load_fixture("fig2"), PointedAction)
