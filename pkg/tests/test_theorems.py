from __future__ import annotations

import json

import pytest

from lookahead_lab.fixtures import load_fixture
from lookahead_lab.games import consensus_is_optimal, consensus_view
from lookahead_lab.instances import from_data
from lookahead_lab.solver import spo_set
from lookahead_lab.theorems import (
    CATALOG,
    FAIL,
    Claim,
    UnknownTheorem,
    _network_trial,
    claim_cor3,
    claim_ex5,
    claim_thm2,
    claim_thm4,
    claim_thm6,
    claim_thm7,
    claim_thm11,
    example4_expected,
    example5_game,
    replay,
    thm11_fixture_holds,
    trial_seed,
    verify_theorem,
)


def game(fixture_id):
    return load_fixture(fixture_id).game


# Dropping a hypothesis must make the claims fail on the bundled counterexamples.


def test_spo_equals_ne_fails_without_genericity():
    detail = claim_thm4(game("intro"))
    assert detail and ("bl", "m") in detail["only_spo"]


def test_one_lookahead_equals_ne_fails_off_ep():
    detail = claim_thm2(game("prop6"))
    assert detail and detail["only_ne"]
    assert claim_thm6(game("prop6"))


def test_unique_sorted_spo_fails_with_ties():
    assert claim_thm7(game("parity"))["spo"]


def test_monotone_lpoa_fails_outside_affine_family():
    assert claim_cor3(game("example3"))


def test_singleton_stability_fails_without_genericity():
    assert claim_thm11(game("example2"))["unstable_spo"]


def test_consensus_non_tree_order_has_suboptimal_spos():
    g = example5_game()
    assert claim_ex5(g) is None
    spo = spo_set(consensus_view(g, (1, 2, 3)))
    assert {("L", "R", "R"), ("R", "L", "L")} <= spo
    assert not consensus_is_optimal(g, ("L", "R", "R")) and not consensus_is_optimal(g, ("R", "L", "L"))


def test_thm11_counterexample_fixture():
    assert thm11_fixture_holds()


def test_example4_pattern():
    assert example4_expected(4) == ("r", "r", "s", "s")
    assert example4_expected(3) == ("s", "r", "r")


def test_all_claims_hold_on_small_runs():
    for theorem in CATALOG:
        verdict = verify_theorem(theorem, trials=5, seed=3)
        assert verdict.passed, verdict.to_data()
        assert verdict.trials == (1 if CATALOG[theorem].fixture_only else 5)


def test_zero_trials_is_a_vacuous_pass():
    verdict = verify_theorem("thm2", trials=0)
    assert verdict.passed and verdict.trials == 0 and verdict.notes


def test_unknown_theorem():
    with pytest.raises(UnknownTheorem):
        verify_theorem("thm3")


def test_parallel_and_serial_runs_agree():
    serial = verify_theorem("cor1", trials=12, seed=5, jobs=1)
    parallel = verify_theorem("cor1", trials=12, seed=5, jobs=3)
    assert serial.to_data() == parallel.to_data()


def test_insufficient_qualifying_instances_fail():
    verdict = verify_theorem("lem5", trials=50, seed=1, max_attempts=20)
    assert not verdict.passed
    assert verdict.trials < 50 and verdict.skipped


def test_broken_claim_yields_replayable_counterexample(monkeypatch):
    # full-lookahead stability without EP or genericity is false; the harness must find and record it
    broken = Claim("unguarded SPO stability", _network_trial(claim_thm4, ep=False, generic=False),
                   {"players": 3, "term_size": 5})
    monkeypatch.setitem(CATALOG, "broken", broken)
    verdict = verify_theorem("broken", trials=200, seed=0)
    assert not verdict.passed and verdict.failures
    ce = verdict.counterexample
    assert ce["seed"] == trial_seed(0, "broken", int(ce["seed"].rsplit(":", 1)[1]))
    json.dumps(ce)  # serializable as-is
    assert replay(ce).status == FAIL
    rebuilt = from_data(ce["instance"]).game
    assert claim_thm4(rebuilt)
