"""Constructors for network, cost-sharing and consensus games."""

from __future__ import annotations

import itertools
import random
from collections.abc import Mapping, Sequence
from dataclasses import dataclass
from fractions import Fraction

from .core import (
    NON_DECREASING,
    NON_INCREASING,
    CongestionGame,
    DelayTable,
    LookaheadError,
    ModelError,
    check_order,
    is_generic,
    to_rational,
)
from .network import SPTerm, enumerate_paths, random_term, resources
from .solver import SequentialGameView


def sncg_from_term(term: SPTerm, delays: Mapping, n: int, budget: int | None = None) -> CongestionGame:
    """Symmetric network congestion game: every player picks an o-d path of ``term``."""
    if n < 1:
        raise ModelError("need at least one player")
    paths = enumerate_paths(term, budget)
    return CongestionGame({p: paths for p in range(1, n + 1)}, delays)


@dataclass(frozen=True)
class AffineShare:
    """Delay ``a / x + b`` with ``a, b >= 0``."""

    a: Fraction
    b: Fraction

    def __post_init__(self):
        object.__setattr__(self, "a", to_rational(self.a))
        object.__setattr__(self, "b", to_rational(self.b))
        if self.a < 0 or self.b < 0:
            raise ModelError("cost-sharing coefficients must be non-negative")

    def table(self, length: int) -> DelayTable:
        return DelayTable(tuple(self.a / x + self.b for x in range(1, length + 1)), NON_INCREASING)


def cost_sharing_game(spec: Mapping, action_sets: Mapping | Sequence, n: int | None = None) -> CongestionGame:
    """Congestion game with non-increasing delays.

    ``spec`` maps resources to a table (sequence / DelayTable) or an
    :class:`AffineShare`.  ``action_sets`` is either per-player or, together
    with ``n``, one shared list of actions.
    """
    if not isinstance(action_sets, Mapping):
        if n is None:
            raise ModelError("shared action list needs the number of players")
        action_sets = {p: list(action_sets) for p in range(1, n + 1)}
    n = len(action_sets)
    delays = {}
    for r, entry in spec.items():
        if isinstance(entry, AffineShare):
            table = entry.table(n + 1)
        else:
            table = entry if isinstance(entry, DelayTable) else DelayTable(tuple(entry))
        if any(a < b for a, b in zip(table.values, table.values[1:])):
            raise ModelError(f"not cost-sharing: delay of {r} increases")
        delays[r] = DelayTable(table.values, NON_INCREASING)
    return CongestionGame(action_sets, delays)


def singleton_structure(game: CongestionGame) -> tuple:
    """Players able to use each resource, and the resources minimizing ``d_r(|N_r|)``."""
    if not game.is_singleton:
        raise ModelError("non-singleton action present")
    users = {r: frozenset(p for p in game.players if any(r in a for a in game.actions(p)))
             for r in game.resources}
    values = {r: game.delays[r](len(ps)) for r, ps in users.items() if ps}
    best = min(values.values())
    return users, frozenset(r for r, v in values.items() if v == best)


# Consensus games


@dataclass(frozen=True)
class ConsensusGame:
    """Players sit on a weighted graph and choose ``L`` or ``R``.

    A player pays the weight of every incident edge whose other end chose
    differently.
    """

    n_players: int
    weights: Mapping

    def __post_init__(self):
        clean = {}
        for edge, w in self.weights.items():
            i, j = edge
            if i == j:
                raise ModelError("self-loops are not allowed")
            if not (1 <= i <= self.n_players and 1 <= j <= self.n_players):
                raise ModelError(f"edge {edge} leaves the vertex set")
            w = to_rational(w)
            if w < 0:
                raise ModelError("weights must be non-negative")
            key = frozenset((i, j))
            if key in clean and clean[key] != w:
                raise ModelError(f"asymmetric weight on edge {sorted(key)}")
            clean[key] = w
        object.__setattr__(self, "weights", clean)

    @property
    def players(self) -> tuple:
        return tuple(range(1, self.n_players + 1))

    def weight(self, i: int, j: int) -> Fraction:
        return self.weights.get(frozenset((i, j)), Fraction(0))

    def neighbours(self, i: int) -> list:
        return sorted(j for e, w in self.weights.items() if i in e and w > 0 for j in e if j != i)

    def cost(self, profile: Mapping, player: int) -> Fraction:
        mine = profile[player]
        return sum((self.weight(player, q) for q, a in profile.items() if q != player and a != mine),
                   Fraction(0))


CONSENSUS_ACTIONS = ("L", "R")


class ConsensusView(SequentialGameView):
    """Consensus game; partial costs count disagreements with players who have moved."""

    def __init__(self, game: ConsensusGame, order: Sequence | None = None):
        super().__init__(check_order(game.players, order if order is not None else game.players))
        self.game = game
        self._w = [[game.weight(p, q) for q in self.order] for p in self.order]

    def actions(self, player) -> tuple:
        return CONSENSUS_ACTIONS

    def cost(self, history: tuple, position: int) -> Fraction:
        mine = history[position]
        row = self._w[position]
        return sum((row[q] for q, a in enumerate(history) if a != mine), Fraction(0))

    def reorder(self, order: Sequence) -> ConsensusView:
        return ConsensusView(self.game, order)


def consensus_view(game: ConsensusGame, order: Sequence | None = None) -> ConsensusView:
    return ConsensusView(game, order)


def is_tree_respecting(game: ConsensusGame, order: Sequence) -> bool:
    """Every player after the first moves after at least one neighbour."""
    order = check_order(game.players, order)
    seen = {order[0]}
    for p in order[1:]:
        if not any(q in seen for q in game.neighbours(p)):
            return False
        seen.add(p)
    return True


def consensus_profiles(game: ConsensusGame):
    return itertools.product(CONSENSUS_ACTIONS, repeat=game.n_players)


def consensus_costs(game: ConsensusGame, profile: Sequence) -> tuple:
    assignment = dict(zip(game.players, profile))
    return tuple(game.cost(assignment, p) for p in game.players)


def consensus_is_nash(game: ConsensusGame, profile: Sequence) -> bool:
    assignment = dict(zip(game.players, profile))
    for p in game.players:
        flipped = dict(assignment)
        flipped[p] = "L" if assignment[p] == "R" else "R"
        if game.cost(flipped, p) < game.cost(assignment, p):
            return False
    return True


def consensus_is_optimal(game: ConsensusGame, profile: Sequence) -> bool:
    """Optimal means nobody pays anything (all-L and all-R always achieve 0)."""
    return not any(consensus_costs(game, profile))


# Seeded random instances


def _rng(seed) -> random.Random:
    return seed if isinstance(seed, random.Random) else random.Random(seed)


def _fine(rng: random.Random, low: int, high: int) -> Fraction:
    """Rational in [low, high] on a 1/1000 grid."""
    return Fraction(rng.randint(low * 1000, high * 1000), 1000)


def random_increasing_table(rng: random.Random, length: int, coarse: bool = False,
                            max_delay: int = 100) -> DelayTable:
    """Non-decreasing positive table with values at most ``max_delay``."""
    if coarse:
        step_max = max(1, min(4, max_delay // (length + 1)))
        first = rng.randint(1, step_max)
        values = [Fraction(first)]
        for _ in range(length - 1):
            values.append(values[-1] + rng.randint(0, step_max))
    else:
        head = max_delay * 2 // 5
        step = (max_delay - head) // max(1, length - 1)
        values = [_fine(rng, 1, head)]
        for _ in range(length - 1):
            values.append(values[-1] + _fine(rng, 0, step))
    return DelayTable(tuple(values), NON_DECREASING)


def random_decreasing_table(rng: random.Random, length: int, max_delay: int = 100) -> DelayTable:
    values = [_fine(rng, max_delay // 5, max_delay)]
    for _ in range(length - 1):
        values.append(values[-1] - _fine(rng, 0, 1) * values[-1] / 2)
    return DelayTable(tuple(values), NON_INCREASING)


def random_delays(rng: random.Random, term: SPTerm, n: int, coarse: bool = False,
                  extra_load: int = 1) -> dict:
    """Non-decreasing tables covering ``n + extra_load`` congestion levels for every arc."""
    return {r: random_increasing_table(rng, n + extra_load, coarse) for r in resources(term)}


def random_sncg(seed, size: int, n: int, ep_only: bool = False, coarse: bool = False,
                extra_load: int = 1) -> CongestionGame:
    rng = _rng(seed)
    term = random_term(rng.getrandbits(32), size, ep_only)
    return sncg_from_term(term, random_delays(rng, term, n, coarse, extra_load), n)


class RetriesExhausted(LookaheadError):
    pass


def generic_sncg_on(term: SPTerm, n: int, seed, retries: int = 50, extra_load: int = 1) -> CongestionGame:
    """Draw fine-grained delays for ``term`` until the game is generic."""
    rng = _rng(seed)
    for _ in range(retries):
        game = sncg_from_term(term, random_delays(rng, term, n, False, extra_load), n)
        if is_generic(game):
            return game
    raise RetriesExhausted(f"no generic delays found in {retries} draws")


def random_generic_sncg(seed, size: int, n: int, ep_only: bool = False, retries: int = 50,
                        extra_load: int = 1) -> CongestionGame:
    """Random SNCG that passes the exhaustive genericity check."""
    rng = _rng(seed)
    term = random_term(rng.getrandbits(32), size, ep_only)
    return generic_sncg_on(term, n, rng, retries, extra_load)


def _random_actions(rng: random.Random, resources: Sequence, count: int, singleton: bool) -> list:
    if singleton:
        pool = [frozenset([r]) for r in resources]
    else:
        pool = [frozenset(c) for k in range(1, len(resources) + 1)
                for c in itertools.combinations(resources, k)]
    count = min(count, len(pool))
    return rng.sample(pool, count)


def random_cost_sharing(seed, n: int, n_resources: int = 3, n_actions: int = 3,
                        family: str = "table", symmetric: bool = True, singleton: bool = False,
                        generic: bool = True, retries: int = 50) -> CongestionGame:
    """Random cost-sharing game.

    ``family`` is ``"table"`` (arbitrary non-increasing tables) or ``"axb"``
    (delays ``a / x + b``).  Non-symmetric games draw every player's action
    set independently.
    """
    if family not in ("table", "axb"):
        raise ModelError(f"unknown cost-sharing family {family!r}")
    rng = _rng(seed)
    resources = [chr(ord("a") + i) for i in range(n_resources)]
    if symmetric:
        shared = _random_actions(rng, resources, n_actions, singleton)
        action_sets = {p: shared for p in range(1, n + 1)}
    else:
        action_sets = {p: _random_actions(rng, resources, rng.randint(1, n_actions), singleton)
                       for p in range(1, n + 1)}
    for _ in range(retries):
        if family == "axb":
            spec = {r: AffineShare(_fine(rng, 0, 50), _fine(rng, 0, 50)) for r in resources}
        else:
            spec = {r: random_decreasing_table(rng, n + 1) for r in resources}
        game = cost_sharing_game(spec, action_sets)
        if not generic or is_generic(game):
            return game
    raise RetriesExhausted(f"no generic cost-sharing game found in {retries} draws")


def random_consensus(seed, max_players: int = 5, max_weight: int = 4, edge_probability: float = 0.6,
                     min_players: int = 2) -> ConsensusGame:
    rng = _rng(seed)
    n = rng.randint(min_players, max_players)
    weights = {}
    for i, j in itertools.combinations(range(1, n + 1), 2):
        if rng.random() < edge_probability:
            weights[(i, j)] = rng.randint(1, max_weight)
    return ConsensusGame(n, weights)


# Parametric families used by the bundled examples


def singleton_pair_game(n: int, d_r, d_s, length: int | None = None) -> CongestionGame:
    """Symmetric singleton game on two resources ``r`` and ``s``."""
    length = length or n + 1
    return CongestionGame(
        {p: (["r"], ["s"]) for p in range(1, n + 1)},
        {"r": DelayTable.from_function(d_r, length), "s": DelayTable.from_function(d_s, length)},
    )


def offset_pair_game(n: int, scale=1, offset=0) -> CongestionGame:
    """``d_r(x) = c (x + b)`` and ``d_s(x) = c (x + b + 1/2)``: generic, first mover advantage."""
    c, b = to_rational(scale), to_rational(offset)
    return singleton_pair_game(n, lambda x: c * (x + b), lambda x: c * (x + b + Fraction(1, 2)))


def identical_pair_game(n: int) -> CongestionGame:
    """Two resources with ``d(x) = x``: ties everywhere."""
    return singleton_pair_game(n, lambda x: x, lambda x: x)


def threshold_share_game(n: int) -> CongestionGame:
    """``d_r(x) = n / x`` against ``d_s(1) = n + 1``, ``d_s(x) = 2`` otherwise."""
    return cost_sharing_game(
        {
            "r": [Fraction(n, x) for x in range(1, n + 2)],
            "s": [n + 1] + [2] * n,
        },
        [["r"], ["s"]],
        n,
    )
