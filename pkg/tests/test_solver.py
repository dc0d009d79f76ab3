from __future__ import annotations

import itertools

import pytest

from lookahead_lab.core import (
    BudgetExceededError,
    CongestionGame,
    ModelError,
    TieBreakRule,
)
from lookahead_lab.fixtures import load_fixture
from lookahead_lab.games import identical_pair_game, random_cost_sharing
from lookahead_lab.solver import (
    Solver,
    TableView,
    all_tiebreaks,
    as_view,
    greedy_sequence,
    k_lookahead_all_orders,
    k_lookahead_set,
    random_view,
    spo_all_orders,
    spo_set,
    spo_set_naive,
    spo_unique,
)

from .oracle import lookahead_outcomes, random_raw_game, spe_outcomes


def _game(seed):
    action_sets, delays = random_raw_game(seed)
    return action_sets, delays, CongestionGame(action_sets, delays)


@pytest.mark.parametrize("seed", range(30))
def test_spo_set_matches_brute_force_spe(seed):
    action_sets, delays, game = _game(seed)
    for order in itertools.permutations(game.players):
        found = spo_set(game, order)
        expected = set()
        for outcome in spe_outcomes(list(order), action_sets, delays):
            chosen = dict(zip(order, outcome))
            expected.add(tuple(chosen[p] for p in game.players))
        assert found == expected, order
        assert spo_set_naive(game, order) == expected


@pytest.mark.parametrize("seed", range(30))
def test_k_lookahead_matches_brute_force(seed):
    action_sets, delays, game = _game(seed)
    for order in itertools.permutations(game.players):
        for k in range(1, game.n_players + 1):
            assert k_lookahead_set(game, order, k) == lookahead_outcomes(order, action_sets, delays, k)


def test_full_lookahead_contains_spos_and_large_k_saturates():
    game = load_fixture("intro").game
    full = k_lookahead_set(game, (1, 2), 2)
    # with ties the follower may answer bl with any best response, so full
    # lookahead can strictly exceed the SPO set
    assert spo_set(game, (1, 2)) < full
    assert game.profile("bl", "bs") in full
    assert k_lookahead_set(game, (1, 2), 5) == full
    for tiebreak in all_tiebreaks(as_view(game, (1, 2))):
        assert k_lookahead_set(game, (1, 2), 2, tiebreak) == {spo_unique(game, tiebreak, (1, 2))}
    with pytest.raises(ModelError):
        k_lookahead_set(game, (1, 2), 0)


def test_tiebroken_outcomes_are_members_of_the_sets():
    for seed in range(20):
        view = random_view(seed)
        spo = spo_set(view)
        for tiebreak in itertools.islice(all_tiebreaks(view), 6):
            assert spo_unique(view, tiebreak) in spo
            for k in range(1, view.n + 1):
                (single,) = k_lookahead_set(view, None, k, tiebreak)
                assert single in k_lookahead_set(view, None, k)


def test_greedy_is_one_lookahead():
    game = load_fixture("example1").game
    assert greedy_sequence(game, (1, 2, 3)) in k_lookahead_set(game, (1, 2, 3), 1)
    assert greedy_sequence(game, (1, 2, 3), TieBreakRule.lex(game)) == k_lookahead_set(
        game, (1, 2, 3), 1, TieBreakRule.lex(game)
    ).__iter__().__next__()


@pytest.mark.parametrize("seed", range(8))
def test_symmetry_shortcut_matches_plain_enumeration(seed):
    game = random_cost_sharing(seed, 3, generic=False)
    for k in (1, 2, 3):
        fast = k_lookahead_all_orders(game, k, exploit_symmetry=True)
        slow = k_lookahead_all_orders(game, k, exploit_symmetry=False)
        assert fast == slow
    assert spo_all_orders(game) == spo_all_orders(game, exploit_symmetry=False)


def test_identical_pair_game_every_outcome_splits_evenly():
    game = identical_pair_game(4)
    for profile in spo_set(game):
        names = [next(iter(a)) for a in profile]
        assert names.count("r") == names.count("s") == 2


def test_table_view_rejects_missing_costs_and_reorders():
    view = TableView((1, 2), {1: ("a", "b"), 2: ("c",)},
                     {("a",): (1,), ("b",): (2,), ("a", "c"): (1, 1), ("b", "c"): (0, 0)})
    assert spo_set(view) == {("b", "c")}
    assert as_view(view, (1, 2)) is not None


def test_solver_budget():
    game = load_fixture("example3").game
    with pytest.raises(BudgetExceededError):
        Solver(as_view(game), budget=2).spo_suffixes((), game.n_players)
