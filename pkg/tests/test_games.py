from __future__ import annotations

import itertools
from fractions import Fraction

import pytest

from lookahead_lab.core import CongestionGame, ModelError, costs, is_generic
from lookahead_lab.games import (
    AffineShare,
    ConsensusGame,
    RetriesExhausted,
    consensus_costs,
    consensus_is_nash,
    consensus_is_optimal,
    consensus_view,
    cost_sharing_game,
    generic_sncg_on,
    is_tree_respecting,
    offset_pair_game,
    random_consensus,
    random_cost_sharing,
    random_generic_sncg,
    random_sncg,
    singleton_structure,
    sncg_from_term,
    threshold_share_game,
)
from lookahead_lab.network import is_extension_parallel, random_term, term_from_json
from lookahead_lab.solver import k_lookahead_all_orders, k_lookahead_set, spo_set


def test_sncg_from_term_gives_every_player_all_paths():
    term = term_from_json(["P", "m", ["S", "b", ["P", "l", "s"]]])
    game = sncg_from_term(term, {"m": [6, 6], "b": [3, 5], "l": [2, 2], "s": [1, 1]}, 2)
    assert game.symmetric and game.n_players == 2
    assert len(game.actions(1)) == 3
    with pytest.raises(ModelError):
        sncg_from_term(term, {}, 0)


def test_affine_share_and_cost_sharing_validation():
    table = AffineShare(6, 1).table(3)
    assert table.values == (7, 4, 3)
    with pytest.raises(ModelError):
        AffineShare(-1, 0)
    with pytest.raises(ModelError, match="not cost-sharing"):
        cost_sharing_game({"r": [1, 2]}, [["r"]], 1)
    with pytest.raises(ModelError):
        cost_sharing_game({"r": [2, 1]}, [["r"]])
    game = cost_sharing_game({"r": AffineShare(2, 0), "s": [3, 3, 3]}, [["r"], ["s"]], 2)
    assert game.is_cost_sharing


def test_singleton_structure():
    game = cost_sharing_game({"r": [4, 2, 1], "s": [3, 3, 3]}, {1: [["r"], ["s"]], 2: [["r"]]})
    users, best = singleton_structure(game)
    assert users["r"] == {1, 2} and users["s"] == {1}
    assert best == {"r"}  # d_r(2) = 2 < d_s(1) = 3
    with pytest.raises(ModelError):
        singleton_structure(CongestionGame({1: [["r", "s"]]}, {"r": [1], "s": [1]}))


def test_threshold_share_game_lookahead_by_hand():
    # n = 5: alone on r costs 5/k when k players share it, s costs 6 alone and 2 shared;
    # P_k = r iff 5/k < 2 (k >= 3) or k = 1 (5 < 6); all-r costs 5 in total, all-s costs 10
    game = threshold_share_game(5)
    expected = {1: "r", 2: "s", 3: "r", 4: "r", 5: "r"}
    for k, name in expected.items():
        assert k_lookahead_all_orders(game, k) == {game.profile(*[name] * 5)}
    assert is_generic(game)


def test_offset_pair_game_first_mover_pattern():
    # backward induction by hand for d_r = x, d_s = x + 1/2: player 3 answers (r,r) with s and
    # everything else with r; player 2 then prefers s after r and r after s; player 1 takes s
    game = offset_pair_game(3)
    assert spo_set(game) == {game.profile("s", "r", "r")}
    assert costs(game, game.profile("s", "r", "r")) == (Fraction(3, 2), 2, 2)


def test_consensus_game_costs_and_validation():
    game = ConsensusGame(3, {(1, 3): 1, (2, 3): 2})
    assert consensus_costs(game, ("L", "R", "R")) == (1, 0, 1)
    assert consensus_is_nash(game, ("L", "L", "L"))
    assert not consensus_is_nash(game, ("L", "R", "L"))
    assert consensus_is_optimal(game, ("R", "R", "R"))
    assert not consensus_is_optimal(game, ("L", "R", "R"))
    assert is_tree_respecting(game, (3, 1, 2))
    assert not is_tree_respecting(game, (1, 2, 3))
    for bad in ({(1, 1): 1}, {(1, 4): 1}, {(1, 2): -1}, {(1, 2): 1, (2, 1): 2}):
        with pytest.raises(ModelError):
            ConsensusGame(3, bad)


def test_consensus_view_spo_example():
    game = ConsensusGame(3, {(1, 3): 1, (2, 3): 2})
    spo = spo_set(consensus_view(game, (1, 2, 3)))
    assert ("L", "R", "R") in spo
    assert k_lookahead_set(consensus_view(game, (3, 1, 2)), None, 3) <= {("L",) * 3, ("R",) * 3}


def test_disconnected_consensus_optimum_is_zero_cost():
    game = ConsensusGame(4, {(1, 2): 1, (3, 4): 1})
    assert consensus_is_optimal(game, ("L", "L", "R", "R"))


def test_random_generators_are_seeded_and_valid():
    assert random_sncg(4, 5, 3) == random_sncg(4, 5, 3)
    game = random_generic_sncg(11, 5, 3, ep_only=True)
    assert is_generic(game)
    term = random_term(2, 4, True)
    assert is_extension_parallel(term)
    assert is_generic(generic_sncg_on(term, 2, 5))
    cs = random_cost_sharing(3, 3, family="axb")
    assert cs.is_cost_sharing and cs.symmetric and is_generic(cs)
    single = random_cost_sharing(3, 3, symmetric=False, singleton=True)
    assert single.is_singleton
    cons = random_consensus(8, max_players=5)
    assert 2 <= cons.n_players <= 5
    assert random_consensus(8) == random_consensus(8)
    with pytest.raises(ModelError):
        random_cost_sharing(0, 2, family="bogus")


def test_generic_generation_can_give_up():
    term = term_from_json(["P", "a", "b"])
    with pytest.raises(RetriesExhausted):
        generic_sncg_on(term, 1, 0, retries=0)


def test_every_nash_of_consensus_matches_definition():
    game = random_consensus(3, max_players=4)
    for profile in itertools.product("LR", repeat=game.n_players):
        cheaper = any(
            game.cost({**dict(zip(game.players, profile)), p: b}, p)
            < game.cost(dict(zip(game.players, profile)), p)
            for p in game.players for b in "LR"
        )
        assert consensus_is_nash(game, profile) == (not cheaper)
    assert all(isinstance(w, Fraction) for w in game.weights.values())
