"""Backward induction over sequential games.

The solver only sees a :class:`SequentialGameView`: players in move order,
their actions and a partial-cost evaluator.  Histories are tuples of actions
of the first ``len(history)`` movers.  Truncating the game to a lookahead of
``depth`` movers means treating ``history + suffix`` as a leaf and scoring it
with the partial costs.
"""

from __future__ import annotations

import itertools
import random
from abc import ABC, abstractmethod
from collections.abc import Hashable, Iterable, Mapping, Sequence
from fractions import Fraction

from .core import (
    BudgetExceededError,
    CongestionGame,
    ModelError,
    TieBreakRule,
    check_order,
    default_budget,
)

NODE_BUDGET = 1_000_000


class SequentialGameView(ABC):
    """A sequential game with a lookahead structure for partial profiles."""

    def __init__(self, order: Sequence):
        self.order = tuple(order)
        self.canonical = tuple(sorted(self.order))
        self._position = {p: i for i, p in enumerate(self.order)}

    @property
    def n(self) -> int:
        return len(self.order)

    @abstractmethod
    def actions(self, player) -> tuple:
        ...

    @abstractmethod
    def cost(self, history: tuple, position: int) -> Fraction:
        """Cost of the mover at ``position`` once ``history`` has been played."""

    @abstractmethod
    def reorder(self, order: Sequence) -> SequentialGameView:
        ...

    def terminal_costs(self, history: tuple) -> tuple:
        if len(history) != self.n:
            raise ModelError("terminal costs need a complete history")
        return tuple(self.cost(history, i) for i in range(self.n))

    def state_key(self, history: tuple) -> Hashable:
        """Summary of ``history`` that determines all later costs."""
        return history

    def to_profile(self, history: tuple) -> tuple:
        """Move-order history -> profile indexed like ``canonical``."""
        by_player = dict(zip(self.order, history))
        return tuple(by_player[p] for p in self.canonical)

    def to_history(self, profile: Sequence) -> tuple:
        by_player = dict(zip(self.canonical, profile))
        return tuple(by_player[p] for p in self.order)

    def position_signature(self) -> Hashable | None:
        """Hashable description of the move-order game tree, if cheap to give.

        Views with equal signatures have identical trees position by position.
        """
        return None


class CongestionView(SequentialGameView):
    """Congestion game scored with current costs (loads of movers so far)."""

    def __init__(self, game: CongestionGame, order: Sequence | None = None):
        order = check_order(game.players, order if order is not None else game.players)
        super().__init__(order)
        self.game = game
        self._res_index = {r: i for i, r in enumerate(game.resources)}
        self._tables = [game.delays[r].values for r in game.resources]
        self._idx = {}
        for acts in game.action_sets.values():
            for a in acts:
                self._idx.setdefault(a, tuple(sorted(self._res_index[r] for r in a)))

    def actions(self, player) -> tuple:
        return self.game.actions(player)

    def loads(self, history: tuple) -> tuple:
        load = [0] * len(self._tables)
        for a in history:
            for r in self._idx[a]:
                load[r] += 1
        return tuple(load)

    def cost(self, history: tuple, position: int) -> Fraction:
        load = self.loads(history)
        total = Fraction(0)
        for r in self._idx[history[position]]:
            table = self._tables[r]
            if load[r] > len(table):
                raise ModelError("table too short")
            total += table[load[r] - 1]
        return total

    def state_key(self, history: tuple) -> Hashable:
        return self.loads(history)

    def reorder(self, order: Sequence) -> CongestionView:
        return CongestionView(self.game, order)

    def position_signature(self) -> Hashable:
        return tuple(self.game.actions(p) for p in self.order)


class TableView(SequentialGameView):
    """Explicit sequential game: partial costs listed per history.

    ``costs[history]`` gives the cost of every mover in ``history``; it must
    cover every non-empty history over the move order.
    """

    def __init__(self, order: Sequence, action_sets: Mapping, costs: Mapping):
        super().__init__(order)
        self.action_sets = {p: tuple(a) for p, a in action_sets.items()}
        self.costs = dict(costs)

    def actions(self, player) -> tuple:
        return self.action_sets[player]

    def cost(self, history: tuple, position: int) -> Fraction:
        return self.costs[history][position]

    def reorder(self, order: Sequence) -> TableView:
        if tuple(order) == self.order:
            return self
        raise ModelError("table views are tied to their move order")


def random_view(seed, max_players: int = 3, max_actions: int = 3, max_cost: int = 3) -> TableView:
    """Random explicit view with small integer costs (ties are common)."""
    rng = random.Random(seed)
    n = rng.randint(1, max_players)
    order = tuple(range(1, n + 1))
    action_sets = {p: tuple(f"a{j}" for j in range(rng.randint(1, max_actions))) for p in order}
    costs = {}
    for length in range(1, n + 1):
        for hist in itertools.product(*(action_sets[p] for p in order[:length])):
            costs[hist] = tuple(Fraction(rng.randint(0, max_cost)) for _ in range(length))
    return TableView(order, action_sets, costs)


def as_view(game, order: Sequence | None = None) -> SequentialGameView:
    if isinstance(game, SequentialGameView):
        if order is None or tuple(order) == game.order:
            return game
        return game.reorder(order)
    if isinstance(game, CongestionGame):
        return CongestionView(game, order)
    raise TypeError(f"cannot build a sequential view of {type(game).__name__}")


class Solver:
    """Memoized backward induction on one view.

    Subtree results are cached by ``(position, depth, state_key)``; histories
    sharing a state key have identical continuations.
    """

    def __init__(self, view: SequentialGameView, budget: int | None = None):
        self.view = view
        self.budget = default_budget(NODE_BUDGET) if budget is None else budget
        self.nodes = 0
        self._sets: dict = {}
        self._unique: dict = {}
        self._klo: dict = {}

    def _tick(self):
        self.nodes += 1
        if self.nodes > self.budget:
            raise BudgetExceededError(f"game tree exceeds node budget {self.budget}")

    def spo_suffixes(self, history: tuple, depth: int) -> frozenset:
        """SPO set (as move suffixes) of the subgame at ``history`` cut ``depth`` movers deep.

        An outcome reached through action ``a`` is on an equilibrium path iff
        the mover's cost does not exceed ``min_b max_{o in SPO(b)} cost(o)``:
        every sibling subtree can independently be given an SPE whose outcome
        is at least as costly.
        """
        if depth == 0:
            return frozenset([()])
        view = self.view
        key = (len(history), depth, view.state_key(history))
        hit = self._sets.get(key)
        if hit is not None:
            return hit
        self._tick()
        pos = len(history)
        player = view.order[pos]
        branches = []
        threshold = None
        for a in view.actions(player):
            child = history + (a,)
            scored = [(s, view.cost(child + s, pos)) for s in self.spo_suffixes(child, depth - 1)]
            worst = max(c for _, c in scored)
            threshold = worst if threshold is None else min(threshold, worst)
            branches.append((a, scored))
        result = frozenset((a,) + s for a, scored in branches for s, c in scored if c <= threshold)
        self._sets[key] = result
        return result

    def spo_unique_suffix(self, history: tuple, depth: int, tiebreak: TieBreakRule) -> tuple:
        """Backward induction with argmin-then-tiebreak at every node."""
        if depth == 0:
            return ()
        view = self.view
        key = (id(tiebreak), len(history), depth, view.state_key(history))
        hit = self._unique.get(key)
        if hit is not None:
            return hit
        self._tick()
        pos = len(history)
        player = view.order[pos]
        best = None
        for a in view.actions(player):
            child = history + (a,)
            suffix = self.spo_unique_suffix(child, depth - 1, tiebreak)
            c = view.cost(child + suffix, pos)
            rank = tiebreak.rank(player, a)
            if best is None or (c, rank) < (best[0], best[1]):
                best = (c, rank, (a,) + suffix)
        self._unique[key] = best[2]
        return best[2]

    def lookahead_suffixes(self, history: tuple, k: int, tiebreak: TieBreakRule | None = None) -> frozenset:
        """All k-lookahead continuations from ``history``."""
        view = self.view
        if len(history) == view.n:
            return frozenset([()])
        key = (k, id(tiebreak), len(history), view.state_key(history))
        hit = self._klo.get(key)
        if hit is not None:
            return hit
        depth = min(k, view.n - len(history))
        if tiebreak is None:
            firsts = {s[0] for s in self.spo_suffixes(history, depth)}
        else:
            firsts = {self.spo_unique_suffix(history, depth, tiebreak)[0]}
        ordered = [a for a in view.actions(view.order[len(history)]) if a in firsts]
        result = frozenset(
            (a,) + rest for a in ordered for rest in self.lookahead_suffixes(history + (a,), k, tiebreak)
        )
        self._klo[key] = result
        return result


def _check_k(k: int) -> int:
    if k < 1:
        raise ModelError("k must be positive")
    return k


def spo_unique(view, tiebreak: TieBreakRule | None = None, order: Sequence | None = None,
               budget: int | None = None) -> tuple:
    """The SPO when every player breaks ties by ``tiebreak`` (default: lex)."""
    view = as_view(view, order)
    tiebreak = tiebreak or TieBreakRule({p: view.actions(p) for p in view.order})
    return view.to_profile(Solver(view, budget).spo_unique_suffix((), view.n, tiebreak))


def spo_set(view, order: Sequence | None = None, budget: int | None = None) -> frozenset:
    """Every SPO of the view for its move order."""
    view = as_view(view, order)
    return frozenset(view.to_profile(h) for h in Solver(view, budget).spo_suffixes((), view.n))


def k_lookahead_set(game, order: Sequence | None, k: int, tiebreak: TieBreakRule | None = None,
                    budget: int | None = None) -> frozenset:
    """All k-lookahead outcomes for one order (a single outcome under ``tiebreak``).

    ``k`` larger than the number of players acts as full lookahead.
    """
    _check_k(k)
    view = as_view(game, order)
    solver = Solver(view, budget)
    return frozenset(view.to_profile(h) for h in solver.lookahead_suffixes((), k, tiebreak))


def all_orders(view) -> list:
    return list(itertools.permutations(view.canonical))


def _permute(view_from, view_to, profile: tuple) -> tuple:
    """Map a profile of ``view_from`` to the one where each position keeps its action."""
    return view_to.to_profile(view_from.to_history(profile))


def _union_over_orders(game, compute, exploit_symmetry: bool) -> frozenset:
    base = as_view(game)
    out = set()
    cache: dict = {}
    for order in all_orders(base):
        view = base.reorder(order)
        sig = view.position_signature() if exploit_symmetry else None
        if sig is not None and sig in cache:
            src_view, src = cache[sig]
            out.update(_permute(src_view, view, p) for p in src)
            continue
        result = compute(view)
        if sig is not None:
            cache[sig] = (view, result)
        out.update(result)
    return frozenset(out)


def k_lookahead_all_orders(game, k: int, tiebreak: TieBreakRule | None = None,
                           budget: int | None = None, exploit_symmetry: bool = True) -> frozenset:
    """Union over every player order of the k-lookahead outcomes.

    With ``exploit_symmetry`` an order whose move-order game tree is
    identical to one already solved reuses that result, relabelled.
    """
    _check_k(k)
    return _union_over_orders(
        game, lambda v: k_lookahead_set(v, None, k, tiebreak, budget), exploit_symmetry
    )


def spo_all_orders(game, budget: int | None = None, exploit_symmetry: bool = True) -> frozenset:
    return _union_over_orders(game, lambda v: spo_set(v, None, budget), exploit_symmetry)


def greedy_sequence(game, order: Sequence | None = None, tiebreak: TieBreakRule | None = None) -> tuple:
    """Players enter in order and each plays its tie-broken cheapest current action."""
    view = as_view(game, order)
    tiebreak = tiebreak or TieBreakRule({p: view.actions(p) for p in view.order})
    history: tuple = ()
    for pos, player in enumerate(view.order):
        scored = [(view.cost(history + (a,), pos), tiebreak.rank(player, a), a) for a in view.actions(player)]
        history += (min(scored, key=lambda t: (t[0], t[1]))[2],)
    return view.to_profile(history)


def all_tiebreaks(view) -> Iterable[TieBreakRule]:
    per_player = [list(itertools.permutations(view.actions(p))) for p in view.order]
    for combo in itertools.product(*per_player):
        yield TieBreakRule(dict(zip(view.order, combo)))


def spo_set_naive(view, order: Sequence | None = None, budget: int = 200_000) -> frozenset:
    """Reference SPO set from explicit enumeration of subgame-perfect strategy profiles.

    Strategy profiles map every history to the mover's action.  They are
    built from the last mover upwards; a candidate survives only if the
    profile restricted to each new subgame is a Nash equilibrium there, where
    every player on the subgame's path is checked against all of its
    alternative actions.
    """
    view = as_view(view, order)
    n = view.n
    layers = [list(itertools.product(*(view.actions(p) for p in view.order[:i]))) for i in range(n)]
    profiles = [dict()]

    def follow(strategy: dict, history: tuple) -> tuple:
        while len(history) < n:
            history = history + (strategy[history],)
        return history

    def subgame_is_nash(strategy: dict, root: tuple) -> bool:
        leaf = follow(strategy, root)
        for pos in range(len(root), n):
            node = leaf[:pos]
            mine = view.cost(leaf, pos)
            for alt in view.actions(view.order[pos]):
                if alt != leaf[pos] and view.cost(follow(strategy, node + (alt,)), pos) < mine:
                    return False
        return True

    for i in reversed(range(n)):
        grown = []
        mover = view.order[i]
        for strategy in profiles:
            options = []
            for node in layers[i]:
                ok = []
                for a in view.actions(mover):
                    trial = dict(strategy)
                    trial[node] = a
                    if subgame_is_nash(trial, node):
                        ok.append(a)
                options.append(ok)
            for combo in itertools.product(*options):
                candidate = dict(strategy)
                candidate.update(zip(layers[i], combo))
                grown.append(candidate)
                if len(grown) > budget:
                    raise BudgetExceededError("strategy-profile enumeration exceeds budget")
        profiles = grown
    return frozenset(view.to_profile(follow(s, ())) for s in profiles)
