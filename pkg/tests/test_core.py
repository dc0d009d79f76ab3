from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lookahead_lab.core import (
    BudgetExceededError,
    CongestionGame,
    DelayTable,
    ModelError,
    TableTooShortError,
    TieBreakRule,
    best_responses,
    congestion_vector,
    costs,
    enumerate_nash,
    expand_class,
    induced_subgame,
    is_close,
    is_generic,
    is_nash,
    iter_profile_classes,
    iter_profiles,
    labels,
    perturb_to_generic,
    player_cost,
    to_rational,
    truncate_game,
)
from lookahead_lab.fixtures import load_fixture

from .oracle import cost as oracle_cost
from .oracle import nash_set, random_raw_game


def example1():
    return load_fixture("example1").game


def test_to_rational_accepts_exact_values_only():
    assert to_rational([3, 2]) == Fraction(3, 2)
    assert to_rational(4) == 4
    assert to_rational("5/7") == Fraction(5, 7)
    for bad in (1.5, True, [1, 0], [1, -2], "x", [1, 2, 3]):
        with pytest.raises(ModelError):
            to_rational(bad)


def test_delay_table_monotonicity_flags():
    assert DelayTable((1, 2, 2)).monotonicity == "non-decreasing"
    assert DelayTable((3, 2)).monotonicity == "non-increasing"
    with pytest.raises(ModelError):
        DelayTable((1, 3), "non-increasing")
    with pytest.raises(ModelError):
        DelayTable((-1,))
    with pytest.raises(ModelError):
        DelayTable(())


def test_game_validation_errors():
    with pytest.raises(TableTooShortError):
        CongestionGame({1: ["r"], 2: ["r"]}, {"r": [1]})
    with pytest.raises(ModelError):
        CongestionGame({1: ["q"]}, {"r": [1]})
    with pytest.raises(ModelError):
        CongestionGame({1: ["r", "r"]}, {"r": [1]})
    with pytest.raises(ModelError):
        CongestionGame({1: []}, {"r": [1]})


def test_example1_costs_and_loads():
    game = example1()
    sst = game.profile("s", "s", "t")
    assert costs(game, sst) == (3, 3, 2)
    assert congestion_vector(game, sst) == {"r": 0, "s": 2, "t": 1}
    assert player_cost(game, sst, 3) == 2
    assert labels(sst) == ("s", "s", "t")


def test_best_responses_and_nash():
    game = example1()
    assert best_responses(game, game.profile("r", "s", "t"), 1) == {game.action("r")}
    assert is_nash(game, game.profile("r", "s", "t"))
    assert not is_nash(game, game.profile("s", "t", "t"))


@pytest.mark.parametrize("seed", range(40))
def test_enumerate_nash_matches_oracle(seed):
    action_sets, delays = random_raw_game(seed)
    game = CongestionGame(action_sets, delays)
    assert set(enumerate_nash(game)) == nash_set(action_sets, delays)
    for prof in iter_profiles(game):
        chosen = dict(zip(game.players, prof))
        assert costs(game, prof) == tuple(oracle_cost(delays, chosen, p) for p in game.players)


def test_profile_classes_cover_all_profiles():
    game = load_fixture("example3").game
    expanded = {p for rep in iter_profile_classes(game) for p in expand_class(game, rep)}
    assert expanded == set(iter_profiles(game))


def test_budget_is_enforced(monkeypatch):
    game = load_fixture("example3").game
    with pytest.raises(BudgetExceededError):
        list(iter_profiles(game, budget=3))
    monkeypatch.setenv("LOOKAHEAD_LAB_BUDGET", "3")
    with pytest.raises(BudgetExceededError):
        enumerate_nash(game)
    monkeypatch.setenv("LOOKAHEAD_LAB_BUDGET", "many")
    with pytest.raises(ModelError):
        enumerate_nash(game)


def test_induced_and_truncated_games():
    game = example1()
    sub = induced_subgame(game, {1: game.action("s")})
    assert sub.players == (2, 3)
    # player 2 now sees s already loaded once
    assert costs(sub, sub.profile("s", "t")) == (3, 2)
    head = truncate_game(game, (3, 1, 2), 2)
    assert head.players == (1, 3)


def test_tiebreak_rules():
    game = example1()
    lex = TieBreakRule.lex(game)
    assert lex.choose(1, game.actions(1)) == game.action("r")
    rev = TieBreakRule({p: tuple(reversed(game.actions(p))) for p in game.players}).validate(game)
    assert rev.choose(1, game.actions(1)) == game.action("s")
    with pytest.raises(ModelError):
        TieBreakRule({1: (game.action("r"),)}).validate(game)
    with pytest.raises(ModelError):
        TieBreakRule({1: (game.action("r"), game.action("r"))})


def test_genericity_examples():
    assert is_generic(example1())
    result = is_generic(load_fixture("curse-of-ties").game)
    assert not result
    w = result.witness
    a, b = w["A"][w["player"]], w["B"][w["player"]]
    assert a != b


def _check_witness(game, result):
    w = result.witness
    sub = CongestionGame({p: game.actions(p) for p in w["players"]}, game.delays)
    prof_a = tuple(w["A"][p] for p in sub.players)
    prof_b = tuple(w["B"][p] for p in sub.players)
    j = w["player"]
    assert w["A"][j] != w["B"][j]
    assert player_cost(sub, prof_a, j) == player_cost(sub, prof_b, j) == w["cost"]


def test_non_generic_witnesses_are_real_ties():
    for fixture in ("curse-of-ties", "prop6", "parity", "intro"):
        game = load_fixture(fixture).game
        result = is_generic(game)
        assert not result, fixture
        _check_witness(game, result)


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10_000))
def test_perturbation_is_generic_and_close(seed):
    action_sets, delays = random_raw_game(seed)
    game = CongestionGame(action_sets, delays)
    perturbed = perturb_to_generic(game, seed=seed)
    assert is_generic(perturbed)
    assert is_close(game, perturbed)
    # strict comparisons survive the perturbation
    for p in iter_profiles(game):
        for q in iter_profiles(game):
            for i in range(game.n_players):
                if costs(game, p)[i] < costs(game, q)[i]:
                    assert costs(perturbed, p)[i] < costs(perturbed, q)[i]
