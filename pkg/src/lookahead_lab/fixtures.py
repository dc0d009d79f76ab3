"""Bundled example instances with their expected facts.

Each file in ``data/`` holds an instance and a list of facts; a fact names a
check, its arguments and a ``source`` tag (``worked-example`` for claims made
about the example, ``computed`` for values obtained by direct computation and
frozen here).
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from importlib import resources as _resources

from .analysis import optimum, social_cost
from .core import (
    CongestionGame,
    ModelError,
    best_responses,
    costs,
    enumerate_nash,
    is_generic,
    is_nash,
    labels,
    to_rational,
)
from .games import (
    ConsensusGame,
    consensus_costs,
    consensus_is_nash,
    consensus_is_optimal,
    consensus_view,
    is_tree_respecting,
    singleton_structure,
)
from .instances import Instance, from_data
from .solver import (
    as_view,
    greedy_sequence,
    k_lookahead_all_orders,
    k_lookahead_set,
    spo_all_orders,
    spo_set,
    spo_set_naive,
)

FIXTURE_IDS = (
    "intro", "example1", "curse-of-ties", "prop6", "example2", "example3", "example4", "thm11",
    "example5", "parity",
)


@dataclass(frozen=True)
class Fixture:
    id: str
    description: str
    instance: Instance
    facts: tuple

    @property
    def game(self):
        return self.instance.game


@dataclass(frozen=True)
class FactResult:
    check: str
    source: str
    passed: bool
    detail: dict


def load_fixture(fixture_id: str) -> Fixture:
    if fixture_id not in FIXTURE_IDS:
        raise ModelError(f"unknown example id {fixture_id!r}; known: {', '.join(FIXTURE_IDS)}")
    text = _resources.files(__package__).joinpath("data", f"{fixture_id}.json").read_text("utf-8")
    raw = json.loads(text)
    return Fixture(raw["id"], raw["description"], from_data(raw["instance"]), tuple(raw["facts"]))


def prop6_game() -> CongestionGame:
    return load_fixture("prop6").game


# Game-family dispatch


def _is_consensus(game) -> bool:
    return isinstance(game, ConsensusGame)


def _view(game, order):
    if _is_consensus(game):
        return consensus_view(game, order)
    return as_view(game, order)


def _profile(game, names) -> tuple:
    if _is_consensus(game):
        return tuple(names)
    return game.profile(*names)


def _costs(game, profile) -> tuple:
    return consensus_costs(game, profile) if _is_consensus(game) else costs(game, profile)


def _nash(game, profile) -> bool:
    return consensus_is_nash(game, profile) if _is_consensus(game) else is_nash(game, profile)


def _optimal(game, profile) -> bool:
    if _is_consensus(game):
        return consensus_is_optimal(game, profile)
    return social_cost(game, profile) == optimum(game)[1]


def _names(profiles) -> list:
    return sorted(list(p) if isinstance(p[0], str) else list(labels(p)) for p in profiles)


def _compare(game, found: frozenset, fact: dict) -> tuple:
    ok = True
    detail = {"found": _names(found) if found else []}
    if "equals" in fact:
        ok &= found == {_profile(game, p) for p in fact["equals"]}
    if "contains" in fact:
        ok &= all(_profile(game, p) in found for p in fact["contains"])
    if "excludes" in fact:
        ok &= not any(_profile(game, p) in found for p in fact["excludes"])
    if "permutations_of" in fact:
        base = _profile(game, fact["permutations_of"])
        ok &= found == set(itertools.permutations(base))
    return ok, detail


def _klo(game, fact):
    order, k = fact.get("order"), fact["k"]
    if order is None:
        if _is_consensus(game):
            return frozenset().union(*(k_lookahead_set(_view(game, o), None, k)
                                       for o in itertools.permutations(game.players)))
        return k_lookahead_all_orders(game, k)
    return k_lookahead_set(_view(game, order), None, k)


def evaluate_fact(game, fact: dict) -> tuple:
    """Return ``(passed, detail)`` for one fact."""
    check = fact["check"]
    if check == "costs":
        got = _costs(game, _profile(game, fact["profile"]))
        want = tuple(to_rational(v) for v in fact["expected"])
        return got == want, {"found": [str(c) for c in got]}
    if check == "nash":
        got = _nash(game, _profile(game, fact["profile"]))
        return got == fact["expected"], {"found": got}
    if check == "spo":
        return _compare(game, spo_set(_view(game, fact["order"])), fact)
    if check == "spo_matches_naive":
        view = _view(game, fact["order"])
        fast, naive = spo_set(view), spo_set_naive(view)
        return fast == naive, {"fast": _names(fast), "naive": _names(naive)}
    if check == "klo":
        return _compare(game, _klo(game, fact), fact)
    if check == "klo_disjoint":
        a = _klo(game, {"k": fact["k1"]})
        b = _klo(game, {"k": fact["k2"]})
        return not (a & b), {"common": _names(a & b)}
    if check == "klo_optimal":
        found = _klo(game, fact)
        flags = [_optimal(game, p) for p in found]
        want = fact["expected"]
        ok = all(flags) if want == "all" else not any(flags)
        return ok, {"found": _names(found)}
    if check == "ne":
        return _compare(game, enumerate_nash(game), fact)
    if check == "optimum":
        _, value = optimum(game, fact.get("kind", "utilitarian"))
        return value == to_rational(fact["value"]), {"found": str(value)}
    if check == "generic":
        result = is_generic(game)
        return bool(result) == fact["expected"], {"witness": _witness(result.witness)}
    if check == "greedy":
        got = greedy_sequence(game, fact["order"])
        return got == _profile(game, fact["profile"]), {"found": list(labels(got))}
    if check == "best_responses":
        player = fact["player"]
        others = {p: game.action(a, p) for p, a in zip(game.players, fact["profile"]) if a is not None}
        got = best_responses(game, others, player)
        want = {game.action(a, player) for a in fact["expected"]}
        return got == want, {"found": sorted(labels(got))}
    if check == "singleton_best":
        _, best = singleton_structure(game)
        return best == frozenset(fact["expected"]), {"found": sorted(best)}
    if check == "spo_all_nash":
        spo = spo_all_orders(game)
        bad = [p for p in spo if not _nash(game, p)]
        return not bad, {"unstable": _names(bad)}
    if check == "unstable_spo":
        spo = spo_set(_view(game, fact["order"]))
        bad = [p for p in spo if not _nash(game, p)]
        return bool(bad), {"unstable": _names(bad)}
    if check == "tree_respecting_spos_optimal":
        bad = [
            (o, p)
            for o in itertools.permutations(game.players)
            if is_tree_respecting(game, o)
            for p in spo_set(_view(game, o))
            if not _optimal(game, p)
        ]
        return not bad, {"violations": [[list(o), list(p)] for o, p in bad]}
    if check == "first_mover_max_cost":
        view = _view(game, fact["order"])
        first = fact["order"][0] - 1
        hits = [p for p in spo_set(view) if _costs(game, p)[first] == max(_costs(game, p))]
        return bool(hits), {"found": _names(hits)}
    if check == "first_mover_lookahead":
        order = fact["order"]
        low = k_lookahead_set(_view(game, order), None, fact["k_low"])
        high = k_lookahead_set(_view(game, order), None, fact["k_high"])
        first = order[0] - 1
        ok = all(
            _costs(game, a)[first] == min(_costs(game, a))
            and _costs(game, b)[first] == max(_costs(game, b))
            and _costs(game, a)[first] < _costs(game, b)[first]
            for a in low for b in high
        )
        return ok and bool(low) and bool(high), {"low": _names(low), "high": _names(high)}
    raise ModelError(f"unknown fact check {check!r}")


def _witness(witness):
    if witness is None:
        return None
    return {
        "players": witness["players"],
        "player": witness["player"],
        "cost": str(witness["cost"]),
        "A": {str(p): labels([a])[0] for p, a in witness["A"].items()},
        "B": {str(p): labels([a])[0] for p, a in witness["B"].items()},
    }


def evaluate(fixture: Fixture) -> list:
    results = []
    for fact in fixture.facts:
        passed, detail = evaluate_fact(fixture.game, fact)
        results.append(FactResult(fact["check"], fact["source"], passed, detail))
    return results
