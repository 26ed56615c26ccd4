import random

from elp.actions import validate
from elp.formula import Universe, to_str
from elp.generators import (pre_pool, random_action, random_blp, random_formula, random_kripke,
                            random_rlp, random_s5_action)
from elp.io import dumps, to_json
from elp.kd45 import kd45_equivalent
from elp.kripke import frame_class
from elp.terms import term_to_str

UNI = Universe(("a", "b", "c"), ("p", "q", "r"))


def _draw(seed):
    rng = random.Random(seed)
    return [
        to_str(random_formula(rng, UNI, 3, sugar=True)),
        dumps(to_json(random_kripke(rng, UNI))),
        dumps(to_json(random_action(rng, UNI, pool=pre_pool(4, UNI)))),
        dumps(to_json(random_s5_action(rng, UNI))),
        term_to_str(random_blp(rng, UNI)[0]),
        term_to_str(random_rlp(rng, UNI)),
    ]


def test_same_seed_same_output():
    assert _draw(5) == _draw(5)
    assert _draw(5) != _draw(6)


def test_generated_frames():
    rng = random.Random(1)
    for _ in range(50):
        assert frame_class(random_kripke(rng, UNI).model).is_K45
        assert validate(random_action(rng, UNI)).is_K45
        assert validate(random_s5_action(rng, UNI)).is_S5


def test_action_sizes_and_pool():
    rng = random.Random(2)
    pool = pre_pool(3, UNI)
    for _ in range(30):
        n = random_action(rng, UNI, max_events=4, pool=pool, min_events=2)
        assert 2 <= len(n.model.states) <= 4 and n.actual == "e0"
        assert set(n.model.pre.values()) <= set(pool)


def test_pre_pool_is_pairwise_distinct():
    pool = pre_pool(4, UNI)
    assert len(pool) == 4
    for i, f in enumerate(pool):
        for g in pool[i + 1:]:
            assert not kd45_equivalent(f, g)
