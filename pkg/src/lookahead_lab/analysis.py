"""Potential, social cost and inefficiency ratios."""

from __future__ import annotations

from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field
from fractions import Fraction

from .core import (
    BudgetExceededError,
    CongestionGame,
    DelayTable,
    ModelError,
    as_mapping,
    congestion_vector,
    costs,
    enumerate_nash,
    expand_class,
    iter_profile_classes,
    iter_profiles,
)
from .solver import k_lookahead_all_orders, spo_all_orders

UTILITARIAN = "utilitarian"
EGALITARIAN = "egalitarian"


def rosenthal_potential(game: CongestionGame, profile) -> Fraction:
    load = congestion_vector(game, profile)
    return sum(
        (sum(game.delays[r].values[:x], Fraction(0)) for r, x in load.items() if x),
        Fraction(0),
    )


def potential_minimizers(game: CongestionGame, budget: int | None = None) -> tuple:
    """All global minima of the potential and the minimal value."""
    best, found = None, []
    for rep in iter_profile_classes(game, budget):
        phi = rosenthal_potential(game, rep)
        if best is None or phi < best:
            best, found = phi, [rep]
        elif phi == best:
            found.append(rep)
    return frozenset(p for rep in found for p in expand_class(game, rep)), best


def opportunity_cost(game: CongestionGame, profile) -> Fraction:
    """Cheapest cost a newcomer would pay after ``profile`` (symmetric games)."""
    if not game.symmetric:
        raise ModelError("opportunity cost needs a symmetric game")
    load = congestion_vector(game, profile)
    return min(
        sum((game.delays[r](load[r] + 1) for r in act), Fraction(0))
        for act in game.actions(game.players[0])
    )


def worst_cost(game: CongestionGame, profile) -> Fraction:
    return max(costs(game, profile))


def social_cost(game: CongestionGame, profile, kind: str = UTILITARIAN) -> Fraction:
    if kind == UTILITARIAN:
        return sum(costs(game, profile), Fraction(0))
    if kind == EGALITARIAN:
        return worst_cost(game, profile)
    raise ModelError(f"unknown social cost {kind!r}")


def optimum(game: CongestionGame, kind: str = UTILITARIAN, budget: int | None = None) -> tuple:
    """Argmin set and value of the social cost over all profiles."""
    best, found = None, []
    for rep in iter_profile_classes(game, budget):
        c = social_cost(game, rep, kind)
        if best is None or c < best:
            best, found = c, [rep]
        elif c == best:
            found.append(rep)
    return frozenset(p for rep in found for p in expand_class(game, rep)), best


def ratio(value: Fraction, opt: Fraction):
    """``value / opt``; a zero optimum yields the flag ``"optimal"`` or ``"suboptimal"``."""
    if opt == 0:
        return "optimal" if value == 0 else "suboptimal"
    return value / opt


@dataclass
class InefficiencyReport:
    kind: str
    optimum: Fraction
    ne_best: Fraction | None
    ne_worst: Fraction | None
    spo_worst: Fraction | None
    klo_worst: dict = field(default_factory=dict)
    errors: dict = field(default_factory=dict)

    @property
    def poa(self):
        return None if self.ne_worst is None else ratio(self.ne_worst, self.optimum)

    @property
    def pos(self):
        return None if self.ne_best is None else ratio(self.ne_best, self.optimum)

    @property
    def spoa(self):
        return None if self.spo_worst is None else ratio(self.spo_worst, self.optimum)

    def lpoa(self, k: int):
        worst = self.klo_worst.get(k)
        return None if worst is None else ratio(worst, self.optimum)


def _worst(game, profiles: Iterable, kind: str) -> Fraction | None:
    values = [social_cost(game, p, kind) for p in profiles]
    return max(values) if values else None


def inefficiency_report(game: CongestionGame, ks: Sequence[int] = (), kind: str = UTILITARIAN,
                        budget: int | None = None) -> InefficiencyReport:
    """Exact PoA, PoS, SPoA and k-LPoA (k-lookahead outcomes over all orders).

    A metric whose computation exceeds its budget is left ``None`` and the
    error message is kept in ``errors``.
    """
    _, opt = optimum(game, kind, budget)
    report = InefficiencyReport(kind, opt, None, None, None)
    try:
        ne = enumerate_nash(game, budget)
        values = [social_cost(game, p, kind) for p in ne]
        if values:
            report.ne_best, report.ne_worst = min(values), max(values)
    except BudgetExceededError as exc:
        report.errors["ne"] = str(exc)
    try:
        report.spo_worst = _worst(game, spo_all_orders(game, budget), kind)
    except BudgetExceededError as exc:
        report.errors["spo"] = str(exc)
    for k in ks:
        try:
            report.klo_worst[k] = _worst(game, k_lookahead_all_orders(game, k, budget=budget), kind)
        except BudgetExceededError as exc:
            report.errors[f"k={k}"] = str(exc)
    return report


def rho_of_class(tables: Iterable, x_max: int | None = None) -> Fraction:
    """``1 / (1 - max y (d(x) - d(y)) / (x d(x)))`` over tabulated delays.

    ``x`` ranges over ``1..x_max`` and ``y`` over ``0..x_max``; the ``y = 0``
    term is zero.  ``x_max`` defaults to each table's length.
    """
    sup = Fraction(0)
    for table in tables:
        table = table if isinstance(table, DelayTable) else DelayTable(tuple(table))
        top = len(table) if x_max is None else x_max
        if top > len(table):
            raise ModelError(f"table too short for x_max={top}")
        values = table.values[:top]
        if any(v <= 0 for v in values):
            raise ModelError("delays must be positive for rho")
        for x in range(1, top + 1):
            dx = values[x - 1]
            for y in range(1, top + 1):
                term = y * (dx - values[y - 1]) / (x * dx)
                sup = max(sup, term)
    if sup >= 1:
        raise ModelError("rho undefined/infinite")
    return 1 / (1 - sup)


def instance_rho(game: CongestionGame) -> Fraction:
    """``rho`` over the game's own tables at the loads reachable in play."""
    return rho_of_class(game.delays.values(), game.n_players)


def one_lookahead_worst_cost(game: CongestionGame, budget: int | None = None) -> Fraction:
    """Common worst cost ``W(G)`` of the 1-lookahead outcomes (max over them)."""
    return max(worst_cost(game, p) for p in k_lookahead_all_orders(game, 1, budget=budget))


def strictly_worse_deviators(game: CongestionGame, profile, budget: int | None = None) -> bool:
    """Whether every player deviating from ``profile`` pays strictly more, whatever the others do."""
    target = as_mapping(game, profile)
    base = costs(game, target)
    index = {p: i for i, p in enumerate(game.players)}
    for other in iter_profiles(game, budget):
        c = None
        for p, act in zip(game.players, other):
            if act != target[p]:
                c = c or costs(game, other)
                if c[index[p]] <= base[index[p]]:
                    return False
    return True
