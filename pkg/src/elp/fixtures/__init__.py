"""Bundled reference models, with the programs they are expected to match."""

from __future__ import annotations

import json
from importlib import resources

#: fixture name -> program whose compilation is bisimilar to the fixture
PROGRAMS = {
    "fig1": "phi |{a} L{a}(?psi)",
    "fig2": "L{b}(phi |{a} L{a}(?psi))",
    "fig3": "mu X. L{b}(phi |{a} L{a}(psi |{b} L{b}(X)))",
    "fig4": "L{b}(phi |{a} L{a}(?psi), ?chi)",
    "fig5": "phi |{a} L{a}(?psi) ^ phi |{b} L{b}(?phi)",
    "fig13": "mu X. L{b}(phi |{a} L{a}(psi |{b} L{b}(X)))",
    "spy_seeing": "L{b}(L{a}(?p), L{a}(?~p))",
    "spy_reading": "L{b}(L{a}(?p))",
    "tell": "L{a,b}(?p)",
    "read": "L{a,b}(L{a}(?p), L{a}(?~p))",
    "mayread_alpha": "L{a}(?p) ^ p |{b} L{b}(?top)",
    "mayread_beta": "L{a}(?~p) ^ ~p |{b} L{b}(?top)",
    "mayread_gamma": "L{a}(?top) ^ L{b}(?top)",
    "mayread": ("L{a,b}(L{a}(?p) ^ p |{b} L{b}(?top), L{a}(?~p) ^ ~p |{b} L{b}(?top), "
                "L{a}(?top) ^ L{b}(?top))"),
    "bothmayread": ("L{a,b}(L{a}(?p) ^ L{b}(?p), L{a}(?~p) ^ L{b}(?~p), "
                    "L{a}(?top) ^ L{b}(?top), L{a}(?p) ^ p |{b} L{b}(?top), "
                    "L{a}(?~p) ^ ~p |{b} L{b}(?top), L{b}(?p) ^ p |{a} L{a}(?top), "
                    "L{b}(?~p) ^ ~p |{a} L{a}(?top))"),
}


def names():
    return sorted(p.name[:-5] for p in resources.files(__name__).iterdir()
                  if p.name.endswith(".json"))


def fixture_path(name):
    return resources.files(__name__) / f"{name}.json"


def fixture_text(name) -> str:
    return fixture_path(name).read_text()


def load_fixture(name):
    from ..io import from_json
    return from_json(json.loads(fixture_text(name)))


__all__ = ["PROGRAMS", "names", "fixture_path", "fixture_text", "load_fixture"]
