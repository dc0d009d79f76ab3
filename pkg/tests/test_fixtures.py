from __future__ import annotations

import pytest

from lookahead_lab.core import ModelError
from lookahead_lab.fixtures import FIXTURE_IDS, evaluate, evaluate_fact, load_fixture


@pytest.mark.parametrize("fixture_id", FIXTURE_IDS)
def test_every_documented_fact_holds(fixture_id):
    fixture = load_fixture(fixture_id)
    assert fixture.facts
    for fact, result in zip(fixture.facts, evaluate(fixture)):
        assert result.source in ("worked-example", "computed")
        assert result.passed, (fact, result.detail)


def test_false_facts_are_detected():
    game = load_fixture("example1").game
    ok, _ = evaluate_fact(game, {"check": "klo", "k": 2, "order": [1, 2, 3], "equals": [["r", "s", "t"]]})
    assert not ok
    ok, _ = evaluate_fact(game, {"check": "costs", "profile": ["s", "s", "t"], "expected": [3, 3, 3]})
    assert not ok
    with pytest.raises(ModelError):
        evaluate_fact(game, {"check": "nonsense"})


def test_curse_of_ties_spo_set():
    game = load_fixture("curse-of-ties").game
    ok, detail = evaluate_fact(game, {"check": "spo", "order": [1, 2], "equals": [["r", "s"], ["s", "t"]]})
    assert ok, detail


def test_unknown_fixture():
    with pytest.raises(ModelError):
        load_fixture("example9")
