"""Exact-arithmetic congestion game model.

Every delay and cost is a :class:`fractions.Fraction`, so ties between
actions are detected exactly.  Complete profiles are tuples of actions aligned
with ``game.players``; partial profiles are mappings ``player -> action``.
"""

from __future__ import annotations

import itertools
import math
import os
import random
from collections import Counter
from collections.abc import Iterable, Iterator, Mapping, Sequence
from dataclasses import dataclass, field
from fractions import Fraction
from graphlib import TopologicalSorter
from typing import Any, Union

Action = frozenset  # frozenset[str]: the resources an action uses
Player = int
Rational = Fraction
PartialProfile = Mapping[Player, Action]
Profile = Union[Sequence[Action], PartialProfile]

NON_DECREASING = "non-decreasing"
NON_INCREASING = "non-increasing"
UNRESTRICTED = "unrestricted"
MONOTONICITIES = (NON_DECREASING, NON_INCREASING, UNRESTRICTED)

DEFAULT_BUDGET = 2_000_000
BUDGET_ENV = "LOOKAHEAD_LAB_BUDGET"


class LookaheadError(Exception):
    """Base class for all errors raised by this package."""


class ModelError(LookaheadError, ValueError):
    """An instance or argument violates the model's invariants."""


class TableTooShortError(ModelError):
    pass


class BudgetExceededError(LookaheadError):
    """An exhaustive computation would exceed its configured budget."""


class PerturbationError(LookaheadError):
    def __init__(self, message: str, witness: Any = None):
        super().__init__(message)
        self.witness = witness


def default_budget(fallback: int = DEFAULT_BUDGET) -> int:
    """Budget for exhaustive enumerations, overridable via ``LOOKAHEAD_LAB_BUDGET``."""
    raw = os.environ.get(BUDGET_ENV)
    if raw:
        try:
            return int(raw)
        except ValueError as exc:
            raise ModelError(f"{BUDGET_ENV} must be an integer, got {raw!r}") from exc
    return fallback


def to_rational(value: Any) -> Fraction:
    """Convert an exact number to a Fraction; floats are refused."""
    if isinstance(value, bool):
        raise ModelError(f"booleans are not numbers: {value!r}")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, float):
        raise ModelError(
            f"floating-point value {value!r} rejected; give an exact fraction such as [3, 2]"
        )
    if isinstance(value, str):
        try:
            return Fraction(value)
        except ValueError as exc:
            raise ModelError(f"not an exact number: {value!r}") from exc
    if isinstance(value, (list, tuple)) and len(value) == 2:
        num, den = value
        if isinstance(num, int) and isinstance(den, int) and not isinstance(num, bool) and not isinstance(den, bool):
            if den <= 0:
                raise ModelError(f"denominator must be positive: {value!r}")
            return Fraction(num, den)
    raise ModelError(f"not an exact number: {value!r}")


def action_label(action: Action) -> str:
    names = sorted(action)
    if all(len(name) == 1 for name in names):
        return "".join(names)
    return "+".join(names)


def _infer_monotonicity(values: Sequence[Fraction]) -> str:
    pairs = list(zip(values, values[1:]))
    if all(a <= b for a, b in pairs):
        return NON_DECREASING
    if all(a >= b for a, b in pairs):
        return NON_INCREASING
    return UNRESTRICTED


@dataclass(frozen=True)
class DelayTable:
    """Delays ``d(1), ..., d(len)`` of one resource.

    ``monotonicity`` defaults to the strongest flag the values satisfy
    (constant tables count as non-decreasing).
    """

    values: tuple
    monotonicity: str | None = None

    def __post_init__(self):
        values = tuple(to_rational(v) for v in self.values)
        if not values:
            raise ModelError("delay table must cover congestion 1")
        if any(v < 0 for v in values):
            raise ModelError(f"delays must be non-negative: {values}")
        flag = self.monotonicity or _infer_monotonicity(values)
        if flag not in MONOTONICITIES:
            raise ModelError(f"unknown monotonicity flag {flag!r}")
        pairs = list(zip(values, values[1:]))
        if flag == NON_DECREASING and any(a > b for a, b in pairs):
            raise ModelError(f"table {values} is flagged non-decreasing but decreases")
        if flag == NON_INCREASING and any(a < b for a, b in pairs):
            raise ModelError(f"table {values} is flagged non-increasing but increases")
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "monotonicity", flag)

    @classmethod
    def from_function(cls, func, length: int, monotonicity: str | None = None) -> DelayTable:
        return cls(tuple(to_rational(func(x)) for x in range(1, length + 1)), monotonicity)

    def __len__(self) -> int:
        return len(self.values)

    def __call__(self, load: int) -> Fraction:
        if load < 1:
            raise ModelError(f"delay queried at congestion {load}")
        if load > len(self.values):
            raise TableTooShortError(
                f"table too short: congestion {load} exceeds table length {len(self.values)}"
            )
        return self.values[load - 1]

    def shifted(self, base: int) -> DelayTable:
        """The table ``y -> d(y + base)``."""
        if base == 0:
            return self
        if base >= len(self.values):
            raise TableTooShortError(f"table too short to shift by {base}")
        return DelayTable(self.values[base:], self.monotonicity)

    def extended(self, length: int) -> DelayTable:
        """Pad by repeating the last value up to ``length`` entries."""
        if length <= len(self.values):
            return self
        pad = (self.values[-1],) * (length - len(self.values))
        return DelayTable(self.values + pad, self.monotonicity)


def _as_table(value) -> DelayTable:
    return value if isinstance(value, DelayTable) else DelayTable(tuple(value))


@dataclass(frozen=True, eq=True)
class CongestionGame:
    """A congestion game with tabulated delays.

    ``action_sets`` maps each player id to its actions (iterables of resource
    names); ``delays`` maps each resource to a :class:`DelayTable` or a
    sequence of exact numbers.  Action order is preserved and is the
    canonical order used by enumerations and the ``lex`` tie-breaking rule.
    """

    action_sets: Mapping
    delays: Mapping
    players: tuple = field(init=False, compare=False)
    resources: tuple = field(init=False, compare=False)

    def __post_init__(self):
        delays = {str(r): _as_table(t) for r, t in self.delays.items()}
        action_sets = {}
        for player in sorted(self.action_sets):
            if isinstance(player, bool) or not isinstance(player, int):
                raise ModelError(f"player ids must be integers, got {player!r}")
            actions = []
            for raw in self.action_sets[player]:
                act = frozenset([raw]) if isinstance(raw, str) else frozenset(raw)
                if not act:
                    raise ModelError(f"player {player} has an empty action")
                missing = act - delays.keys()
                if missing:
                    raise ModelError(f"unknown resources {sorted(missing)} in action of player {player}")
                if act in actions:
                    raise ModelError(f"duplicate action {action_label(act)} for player {player}")
                actions.append(act)
            if not actions:
                raise ModelError(f"player {player} has no actions")
            action_sets[player] = tuple(actions)
        if not action_sets:
            raise ModelError("a game needs at least one player")
        n = len(action_sets)
        for r, table in delays.items():
            if len(table) < n:
                raise TableTooShortError(
                    f"table too short: resource {r} covers {len(table)} < {n} players"
                )
        object.__setattr__(self, "action_sets", action_sets)
        object.__setattr__(self, "delays", delays)
        object.__setattr__(self, "players", tuple(action_sets))
        object.__setattr__(self, "resources", tuple(delays))

    @property
    def n_players(self) -> int:
        return len(self.players)

    @property
    def symmetric(self) -> bool:
        first = set(self.action_sets[self.players[0]])
        return all(set(acts) == first for acts in self.action_sets.values())

    @property
    def is_cost_sharing(self) -> bool:
        return all(
            all(a >= b for a, b in zip(t.values, t.values[1:])) for t in self.delays.values()
        )

    @property
    def is_singleton(self) -> bool:
        return all(len(a) == 1 for acts in self.action_sets.values() for a in acts)

    def actions(self, player: Player) -> tuple:
        try:
            return self.action_sets[player]
        except KeyError:
            raise ModelError(f"unknown player {player}") from None

    def all_actions(self) -> tuple:
        seen: dict = {}
        for acts in self.action_sets.values():
            for a in acts:
                seen.setdefault(a, None)
        return tuple(seen)

    def action(self, label: str, player: Player | None = None) -> Action:
        """Look up an action by its label (sorted resource names)."""
        pool = self.actions(player) if player is not None else self.all_actions()
        for a in pool:
            if action_label(a) == label:
                return a
        raise ModelError(f"no action labelled {label!r}")

    def profile(self, *labels: str) -> tuple:
        """Complete profile from action labels given in player order."""
        if len(labels) != self.n_players:
            raise ModelError(f"expected {self.n_players} labels, got {len(labels)}")
        return tuple(self.action(lab, p) for p, lab in zip(self.players, labels))

    def with_delays(self, delays: Mapping) -> CongestionGame:
        return CongestionGame(self.action_sets, delays)


def as_mapping(game: CongestionGame, profile: Profile) -> dict:
    if isinstance(profile, Mapping):
        for p, a in profile.items():
            if a not in game.actions(p):
                raise ModelError(f"action {action_label(a)} is not available to player {p}")
        return dict(profile)
    profile = tuple(profile)
    if len(profile) != game.n_players:
        raise ModelError("sequence profiles must assign every player; use a mapping for partial profiles")
    return as_mapping(game, dict(zip(game.players, profile)))


def labels(profile: Sequence[Action]) -> tuple:
    return tuple(action_label(a) for a in profile)


def congestion_vector(game: CongestionGame, profile: Profile) -> dict:
    """Load ``x_r`` of every resource over the assigned players."""
    load = dict.fromkeys(game.resources, 0)
    for act in as_mapping(game, profile).values():
        for r in act:
            load[r] += 1
    return load


def _path_cost(game: CongestionGame, action: Action, load: Mapping) -> Fraction:
    return sum((game.delays[r](load[r]) for r in action), Fraction(0))


def player_cost(game: CongestionGame, profile: Profile, player: Player) -> Fraction:
    """Current cost of ``player``: loads count assigned players only."""
    assignment = as_mapping(game, profile)
    if player not in assignment:
        raise ModelError(f"unassigned player {player}")
    return _path_cost(game, assignment[player], congestion_vector(game, assignment))


def costs(game: CongestionGame, profile: Profile) -> tuple:
    assignment = as_mapping(game, profile)
    load = congestion_vector(game, assignment)
    return tuple(_path_cost(game, assignment[p], load) for p in sorted(assignment))


def induced_subgame(game: CongestionGame, partial: PartialProfile) -> CongestionGame:
    """Game left to the unassigned players once ``partial`` is fixed."""
    assignment = as_mapping(game, partial)
    remaining = [p for p in game.players if p not in assignment]
    if not remaining:
        raise ModelError("no players remain")
    base = congestion_vector(game, assignment)
    delays = {r: t.shifted(base[r]) for r, t in game.delays.items()}
    return CongestionGame({p: game.action_sets[p] for p in remaining}, delays)


def check_order(players: Iterable[Player], order: Sequence[Player]) -> tuple:
    """Restrict ``order`` to ``players``; it must list each of them exactly once."""
    players = set(players)
    restricted = tuple(p for p in order if p in players)
    if len(set(restricted)) != len(restricted) or set(restricted) != players:
        raise ModelError(f"order {tuple(order)} is not a permutation of players {sorted(players)}")
    return restricted


def truncate_game(game: CongestionGame, order: Sequence[Player], k: int) -> CongestionGame:
    """Keep only the first ``min(k, n)`` players under ``order``."""
    if k < 1:
        raise ModelError("k must be positive")
    order = check_order(game.players, order)
    if k >= len(order):
        return game
    kept = order[:k]
    return CongestionGame({p: game.action_sets[p] for p in sorted(kept)}, game.delays)


@dataclass(frozen=True)
class TieBreakRule:
    """Per-player strict ranking of actions, most preferred first."""

    rankings: Mapping

    def __post_init__(self):
        clean = {}
        for player, ranking in self.rankings.items():
            ranking = tuple(ranking)
            if len(set(ranking)) != len(ranking):
                raise ModelError(f"tie-breaking rule of player {player} repeats an action")
            clean[player] = ranking
        object.__setattr__(self, "rankings", clean)
        object.__setattr__(self, "_rank", {p: {a: i for i, a in enumerate(r)} for p, r in clean.items()})

    @classmethod
    def lex(cls, game) -> TieBreakRule:
        """Prefer actions in their canonical order."""
        return cls({p: game.actions(p) for p in game.players})

    @classmethod
    def common(cls, game, ranking: Sequence) -> TieBreakRule:
        return cls({p: tuple(a for a in ranking if a in game.actions(p)) for p in game.players})

    def validate(self, game) -> TieBreakRule:
        for p in game.players:
            if set(self.rankings.get(p, ())) != set(game.actions(p)):
                raise ModelError(f"tie-breaking rule of player {p} is not a total order on its actions")
        return self

    def rank(self, player: Player, action) -> int:
        return self._rank[player][action]

    def choose(self, player: Player, candidates: Iterable):
        return min(candidates, key=lambda a: self._rank[player][a])


def count_profiles(game: CongestionGame) -> int:
    total = 1
    for acts in game.action_sets.values():
        total *= len(acts)
    return total


def iter_profiles(game: CongestionGame, budget: int | None = None) -> Iterator[tuple]:
    budget = default_budget() if budget is None else budget
    if count_profiles(game) > budget:
        raise BudgetExceededError(
            f"profile space of {count_profiles(game)} exceeds budget {budget}"
        )
    return itertools.product(*(game.action_sets[p] for p in game.players))


def distinct_permutations(items: Sequence) -> list:
    return sorted(set(itertools.permutations(items)), key=lambda t: [id_key(a) for a in t])


def id_key(action: Action) -> tuple:
    return (len(action), tuple(sorted(action)))


def iter_profile_classes(game: CongestionGame, budget: int | None = None) -> Iterator[tuple]:
    """One representative per class of profiles equal up to player relabelling.

    For symmetric games these are the multisets of actions; otherwise every
    profile is its own class.
    """
    if not game.symmetric:
        yield from iter_profiles(game, budget)
        return
    budget = default_budget() if budget is None else budget
    actions = game.actions(game.players[0])
    n = game.n_players
    if math.comb(len(actions) + n - 1, n) > budget:
        raise BudgetExceededError("profile classes exceed budget")
    yield from itertools.combinations_with_replacement(actions, n)


def expand_class(game: CongestionGame, representative: tuple) -> list:
    if not game.symmetric:
        return [representative]
    return distinct_permutations(representative)


def best_responses(game: CongestionGame, profile: Profile, player: Player) -> frozenset:
    """Actions of ``player`` minimizing its cost against the others' actions."""
    assignment = dict(profile) if isinstance(profile, Mapping) else dict(zip(game.players, profile))
    assignment.pop(player, None)
    others = as_mapping(game, assignment)
    base = congestion_vector(game, others)
    best: list = []
    best_cost = None
    for act in game.actions(player):
        load = dict(base)
        for r in act:
            load[r] += 1
        c = _path_cost(game, act, load)
        if best_cost is None or c < best_cost:
            best, best_cost = [act], c
        elif c == best_cost:
            best.append(act)
    return frozenset(best)


def is_nash(game: CongestionGame, profile: Profile) -> bool:
    assignment = as_mapping(game, profile)
    if len(assignment) != game.n_players:
        raise ModelError("Nash check needs a complete profile")
    load = congestion_vector(game, assignment)
    checked = set()
    for player, act in assignment.items():
        key = (act, game.action_sets[player])
        if key in checked:
            continue
        checked.add(key)
        current = _path_cost(game, act, load)
        for alt in game.actions(player):
            if alt == act:
                continue
            moved = dict(load)
            for r in act:
                moved[r] -= 1
            for r in alt:
                moved[r] += 1
            if _path_cost(game, alt, moved) < current:
                return False
    return True


def enumerate_nash(game: CongestionGame, budget: int | None = None) -> frozenset:
    """All pure Nash equilibria (brute force over profile classes)."""
    found = set()
    for rep in iter_profile_classes(game, budget):
        if is_nash(game, rep):
            found.update(expand_class(game, rep))
    return frozenset(found)


@dataclass(frozen=True)
class GenericityResult:
    generic: bool
    witness: dict | None = None

    def __bool__(self) -> bool:
        return self.generic


def is_generic(game: CongestionGame, budget: int | None = None) -> GenericityResult:
    """Exhaustive genericity check over every sub-population of players.

    On failure the witness holds players ``N``, two profiles ``A`` and ``B``
    over ``N`` and a player ``j`` with ``A_j != B_j`` and equal costs.
    """
    budget = default_budget() if budget is None else budget
    if game.symmetric:
        return _is_generic_symmetric(game, budget)
    evaluations = 0
    players = game.players
    for size in range(1, len(players) + 1):
        for group in itertools.combinations(players, size):
            for j in group:
                others = [p for p in group if p != j]
                seen: dict = {}
                for rest in itertools.product(*(game.action_sets[p] for p in others)):
                    base = dict.fromkeys(game.resources, 0)
                    for act in rest:
                        for r in act:
                            base[r] += 1
                    for act in game.actions(j):
                        evaluations += 1
                        if evaluations > budget:
                            raise BudgetExceededError("instance too large for exact genericity check")
                        load = dict(base)
                        for r in act:
                            load[r] += 1
                        c = _path_cost(game, act, load)
                        prior = seen.get(c)
                        if prior is not None and prior[0] != act:
                            a_prof = dict(zip(others, prior[1]))
                            a_prof[j] = prior[0]
                            b_prof = dict(zip(others, rest))
                            b_prof[j] = act
                            return GenericityResult(False, {
                                "players": list(group), "player": j, "cost": c,
                                "A": a_prof, "B": b_prof,
                            })
                        seen.setdefault(c, (act, rest))
    return GenericityResult(True)


def _is_generic_symmetric(game: CongestionGame, budget: int) -> GenericityResult:
    actions = game.actions(game.players[0])
    evaluations = 0
    for size in range(1, game.n_players + 1):
        seen: dict = {}
        for rest in itertools.combinations_with_replacement(actions, size - 1):
            base = dict.fromkeys(game.resources, 0)
            for act in rest:
                for r in act:
                    base[r] += 1
            for act in actions:
                evaluations += 1
                if evaluations > budget:
                    raise BudgetExceededError("instance too large for exact genericity check")
                load = dict(base)
                for r in act:
                    load[r] += 1
                c = _path_cost(game, act, load)
                prior = seen.get(c)
                if prior is not None and prior[0] != act:
                    group = list(game.players[:size])
                    j = group[0]
                    return GenericityResult(False, {
                        "players": group, "player": j, "cost": c,
                        "A": dict(zip(group, (prior[0],) + prior[1])),
                        "B": dict(zip(group, (act,) + rest)),
                    })
                seen.setdefault(c, (act, rest))
    return GenericityResult(True)


def _cost_values(game: CongestionGame) -> set:
    """Every value ``sum_{r in P} d_r(t_r)`` with ``1 <= t_r <= n``.

    A superset of the path costs reachable in play, used to bound
    perturbation sizes.
    """
    n = game.n_players
    out = set()
    for act in game.all_actions():
        tables = [game.delays[r] for r in act]
        for loads in itertools.product(range(1, n + 1), repeat=len(tables)):
            out.add(sum((t(x) for t, x in zip(tables, loads)), Fraction(0)))
    return out


def min_cost_gap(game: CongestionGame) -> Fraction:
    values = sorted(_cost_values(game))
    gaps = [b - a for a, b in zip(values, values[1:])]
    return min(gaps) if gaps else Fraction(1)


def unique_resources(game: CongestionGame) -> dict | None:
    """For each action, a resource no other action uses (None if some action has none)."""
    actions = game.all_actions()
    usage = Counter(r for a in actions for r in a)
    chosen = {}
    for a in actions:
        own = sorted(r for r in a if usage[r] == 1)
        if not own:
            return None
        chosen[a] = own[0]
    return chosen


def perturb_to_generic(
    game: CongestionGame,
    preserve: Profile | None = None,
    seed: int = 0,
    retries: int = 8,
    budget: int | None = None,
) -> CongestionGame:
    """Return a generic game close to ``game``.

    Every perturbation is strictly below half the smallest non-zero gap
    between attainable path costs, so strict cost comparisons survive.  On
    games where each action owns a private resource (symmetric EP networks)
    the perturbation is per-path and, if ``preserve`` is a Nash equilibrium,
    the private-resource increments are ordered so it stays one.  Elsewhere
    every ``(resource, load)`` entry gets an independent dyadic increment.
    """
    if preserve is not None:
        preserve = tuple(as_mapping(game, preserve)[p] for p in game.players)
        if not is_nash(game, preserve):
            raise ModelError("profile to preserve is not a Nash equilibrium")
    if is_generic(game, budget):
        return game
    delta = min_cost_gap(game)
    rng = random.Random(seed)
    private = unique_resources(game) if game.symmetric else None
    scale = delta / 4
    last = None
    for _ in range(retries):
        if private is not None:
            out = _perturb_private(game, private, preserve, scale, rng)
        else:
            out = _perturb_dyadic(game, scale, rng)
        result = is_generic(out, budget)
        if result and (preserve is None or is_nash(out, preserve)):
            return out
        last = result.witness
        scale /= 2
    raise PerturbationError("genericity not achieved within retry budget", last)


def _perturb_private(game, private, preserve, scale, rng) -> CongestionGame:
    n = game.n_players
    actions = game.all_actions()
    nodes = [(a, t) for a in actions for t in range(1, n + 1)]
    rng.shuffle(nodes)
    graph: dict = {node: set() for node in nodes}
    for a in actions:
        mono = game.delays[private[a]].monotonicity
        if mono == NON_DECREASING:
            for t in range(2, n + 1):
                graph[(a, t)].add((a, t - 1))
    if preserve is not None:
        counts = Counter(preserve)
        load = congestion_vector(game, preserve)
        for p in set(preserve):
            here = _path_cost(game, p, load)
            for q in actions:
                if q == p:
                    continue
                moved = dict(load)
                for r in p:
                    moved[r] -= 1
                for r in q:
                    moved[r] += 1
                if _path_cost(game, q, moved) == here:
                    # raise the deviation's cost above the equilibrium path's
                    graph[(q, counts[q] + 1)].add((p, counts[p]))
    order = list(TopologicalSorter(graph).static_order())
    total = len(order) + 1
    bump = {node: scale * (i + 1) / total for i, node in enumerate(order)}
    delays = {}
    for r, table in game.delays.items():
        delays[r] = table
    for a in actions:
        r = private[a]
        table = game.delays[r]
        vals = list(table.values)
        for t in range(1, n + 1):
            vals[t - 1] += bump[(a, t)]
        delays[r] = DelayTable(tuple(vals), _keep_flag(table.monotonicity, vals))
    return game.with_delays(delays)


def _keep_flag(flag: str, values: Sequence[Fraction]) -> str:
    inferred = _infer_monotonicity(values)
    if flag == inferred or flag == UNRESTRICTED:
        return flag
    if flag == NON_INCREASING and all(a >= b for a, b in zip(values, values[1:])):
        return flag
    return UNRESTRICTED


def _perturb_dyadic(game, scale, rng) -> CongestionGame:
    n = game.n_players
    cells = [(r, t) for r in game.resources for t in range(1, n + 1)]
    rng.shuffle(cells)
    bump = {cell: scale * Fraction(1, 2 ** (i + 1)) for i, cell in enumerate(cells)}
    delays = {}
    for r, table in game.delays.items():
        vals = list(table.values)
        for t in range(1, n + 1):
            vals[t - 1] += bump[(r, t)]
        delays[r] = DelayTable(tuple(vals), _keep_flag(table.monotonicity, vals))
    return game.with_delays(delays)


def is_close(original: CongestionGame, perturbed: CongestionGame) -> bool:
    """Strict path-cost comparisons of ``original`` hold weakly in ``perturbed``.

    Compares ``sum_{r in P} d_r(x_r)`` against ``sum_{r in Q} d_r(y_r)`` for
    all distinct actions and all load levels ``1..n`` on their resources.
    """
    n = original.n_players
    entries = []
    for act in original.all_actions():
        res = sorted(act)
        for loads in itertools.product(range(1, n + 1), repeat=len(res)):
            before = sum((original.delays[r](x) for r, x in zip(res, loads)), Fraction(0))
            after = sum((perturbed.delays[r](x) for r, x in zip(res, loads)), Fraction(0))
            entries.append((before, act, after))
    entries.sort(key=lambda e: e[0])
    # two largest "after" values among strictly cheaper entries, from distinct actions
    top: list = []
    i = 0
    while i < len(entries):
        j = i
        while j < len(entries) and entries[j][0] == entries[i][0]:
            j += 1
        group = entries[i:j]
        for _, act, after in group:
            rival = next((v for v, a in top if a != act), None)
            if rival is not None and rival > after:
                return False
        for _, act, after in group:
            top.append((after, act))
            top.sort(key=lambda e: e[0], reverse=True)
            best = top[:1]
            best += [e for e in top[1:] if e[1] != top[0][1]][:1]
            top = best
        i = j
    return True
