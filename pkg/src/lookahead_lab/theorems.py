"""Property suites: each catalog entry checks one claim on seeded random instances.

A trial draws an instance from the seed string ``"{seed}:{id}:{attempt}"``,
checks the claim's hypotheses (EP-ness, genericity, ...) and either skips
the instance or evaluates the claim on it.  Attempts continue until the
requested number of qualifying instances has been checked.
"""

from __future__ import annotations

import itertools
import random
from collections.abc import Callable
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

from .analysis import (
    inefficiency_report,
    instance_rho,
    one_lookahead_worst_cost,
    opportunity_cost,
    optimum,
    potential_minimizers,
    rosenthal_potential,
    social_cost,
    strictly_worse_deviators,
    worst_cost,
)
from .core import (
    BudgetExceededError,
    CongestionGame,
    LookaheadError,
    TieBreakRule,
    congestion_vector,
    costs,
    enumerate_nash,
    induced_subgame,
    is_generic,
    is_nash,
    iter_profile_classes,
    labels,
    truncate_game,
)
from .fixtures import prop6_game
from .games import (
    CONSENSUS_ACTIONS,
    ConsensusGame,
    RetriesExhausted,
    consensus_is_nash,
    consensus_is_optimal,
    consensus_view,
    generic_sncg_on,
    is_tree_respecting,
    offset_pair_game,
    random_consensus,
    random_cost_sharing,
    random_delays,
    sncg_from_term,
)
from .instances import game_to_data
from .network import is_extension_parallel, random_term
from .solver import (
    CongestionView,
    _permute,
    all_orders,
    k_lookahead_all_orders,
    k_lookahead_set,
    spo_all_orders,
    spo_set,
)

PASS, FAIL, SKIP, INCONCLUSIVE = "pass", "fail", "skip", "inconclusive"


@dataclass
class TheoremVerdict:
    theorem: str
    description: str
    passed: bool
    trials: int = 0
    failures: int = 0
    skipped: int = 0
    inconclusive: int = 0
    counterexample: dict | None = None
    notes: list = field(default_factory=list)

    def to_data(self) -> dict:
        return {
            "theorem": self.theorem,
            "description": self.description,
            "passed": self.passed,
            "trials": self.trials,
            "failures": self.failures,
            "skipped": self.skipped,
            "inconclusive": self.inconclusive,
            "counterexample": self.counterexample,
            "notes": list(self.notes),
        }


@dataclass
class Outcome:
    status: str
    instance: dict | None = None
    detail: dict | None = None


def _jsonable(value):
    if isinstance(value, Fraction):
        return value.numerator if value.denominator == 1 else [value.numerator, value.denominator]
    if isinstance(value, frozenset):
        return sorted(value)
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple, set)):
        return [_jsonable(v) for v in value]
    return value


def _profiles(ps) -> list:
    return sorted(labels(p) for p in ps)


# Instance sources


def _sncg_instance(seed: str, params: dict, ep: bool, generic: bool):
    """Random SNCG and its term, or ``(None, None)`` when the hypotheses fail.

    Non-generic suites mostly use small integer delays so that ties occur.
    """
    rng = random.Random(seed)
    n = rng.randint(min(2, params.get("players", 4)), params.get("players", 4))
    size = rng.randint(min(2, params.get("term_size", 8)), params.get("term_size", 8))
    term = random_term(rng.getrandbits(32), size, ep)
    if ep and not is_extension_parallel(term):
        return None, None
    if generic:
        try:
            game = generic_sncg_on(term, n, rng, retries=10)
        except RetriesExhausted:
            return None, None
    else:
        game = sncg_from_term(term, random_delays(rng, term, n, coarse=rng.random() < 0.7), n)
    return game, term


# Claims: each returns ``None`` when it holds on ``game``, else a violation detail.


def claim_thm1(game: CongestionGame, k: int) -> dict | None:
    """Identity-order k-lookahead outcomes, relabelled, are k-lookahead outcomes for every order.

    Every order is solved from scratch; nothing is transferred between orders.
    """
    base = CongestionView(game)
    identity = k_lookahead_set(base, None, k)
    for order in all_orders(base):
        view = base.reorder(order)
        direct = k_lookahead_set(view, None, k)
        for a in identity:
            moved = _permute(base, view, a)
            if moved not in direct:
                return {"k": k, "order": order, "outcome": labels(a), "permuted": labels(moved)}
    return None


def claim_thm2(game: CongestionGame) -> dict | None:
    klo = k_lookahead_all_orders(game, 1)
    ne = enumerate_nash(game)
    if klo != ne:
        return {"only_1lo": _profiles(klo - ne), "only_ne": _profiles(ne - klo)}
    return None


def claim_thm4(game: CongestionGame) -> dict | None:
    spo = spo_all_orders(game)
    ne = enumerate_nash(game)
    if spo != ne:
        return {"only_spo": _profiles(spo - ne), "only_ne": _profiles(ne - spo)}
    return None


def claim_thm5(game: CongestionGame) -> dict | None:
    missing = enumerate_nash(game) - spo_all_orders(game)
    return {"ne_not_spo": _profiles(missing)} if missing else None


def claim_thm6(game: CongestionGame) -> dict | None:
    ne = enumerate_nash(game)
    ks = list(range(1, game.n_players + 1))
    report = inefficiency_report(game, ks)
    for k in ks:
        klo = k_lookahead_all_orders(game, k)
        if klo != ne:
            return {"k": k, "only_klo": _profiles(klo - ne), "only_ne": _profiles(ne - klo)}
        if report.lpoa(k) != report.poa:
            return {"k": k, "lpoa": report.lpoa(k), "poa": report.poa}
    return None


def claim_thm7(game: CongestionGame) -> dict | None:
    spo = spo_set(game)
    if len(spo) != 1:
        return {"spo": _profiles(spo)}
    (b,) = spo
    cb = costs(game, b)
    if any(x > y for x, y in zip(cb, cb[1:])):
        return {"spo": labels(b), "costs": cb}
    for k in range(1, game.n_players + 1):
        for a in k_lookahead_set(game, None, k):
            if costs(game, a)[0] < cb[0]:
                return {"k": k, "outcome": labels(a), "first_cost": costs(game, a)[0],
                        "spo_first_cost": cb[0]}
    return None


def example4_expected(n: int) -> tuple:
    """Identity-order SPO of the two-resource offset game, as labels."""
    if n % 2 == 0:
        return ("r",) * (n // 2) + ("s",) * (n // 2)
    return ("s",) * ((n - 1) // 2) + ("r",) * ((n + 1) // 2)


def claim_ex4(game: CongestionGame) -> dict | None:
    spo = _profiles(spo_set(game))
    expected = example4_expected(game.n_players)
    return None if spo == [expected] else {"spo": spo, "expected": expected}


def claim_cor1(game: CongestionGame) -> dict | None:
    values = {rosenthal_potential(game, a) for a in k_lookahead_all_orders(game, 1)}
    return None if len(values) == 1 else {"potentials": sorted(values)}


def _load_key(game, profile) -> tuple:
    load = congestion_vector(game, profile)
    return tuple(load[r] for r in game.resources)


def claim_prop7(game: CongestionGame) -> dict | None:
    klo = k_lookahead_all_orders(game, 1)
    minima, _ = potential_minimizers(game)
    stray = klo - minima
    if stray:
        return {"not_minimizing": _profiles(stray)}
    klo_loads = {_load_key(game, a) for a in klo}
    min_loads = {_load_key(game, a) for a in minima}
    if klo_loads != min_loads:
        return {"klo_loads": sorted(klo_loads), "minimizer_loads": sorted(min_loads)}
    return None


def claim_lem3(game: CongestionGame) -> dict | None:
    """``O_A(G^n) <= O_B(G)`` for every profile ``A`` with ``n <= m`` players; ``<= W_B(G)`` if ``n < m``."""
    m = game.n_players
    klo = k_lookahead_all_orders(game, 1)
    o_b = min(opportunity_cost(game, b) for b in klo)
    w_b = min(worst_cost(game, b) for b in klo)
    for n in range(1, m + 1):
        small = truncate_game(game, game.players, n)
        for a in iter_profile_classes(small):
            o_a = opportunity_cost(small, a)
            if o_a > o_b:
                return {"players": n, "profile": labels(a), "o_a": o_a, "o_b": o_b}
            if n < m and o_a > w_b:
                return {"players": n, "profile": labels(a), "o_a": o_a, "w_b": w_b}
    return None


def claim_lem4(game: CongestionGame) -> dict | None:
    w = one_lookahead_worst_cost(game)
    actions = game.actions(game.players[0])
    for m in range(1, game.n_players):
        for fixed in itertools.combinations_with_replacement(actions, m):
            sub = induced_subgame(game, dict(zip(game.players, fixed)))
            w_sub = one_lookahead_worst_cost(sub)
            if w_sub > w:
                return {"fixed": labels(fixed), "w_sub": w_sub, "w": w}
    return None


def claim_thm9(game: CongestionGame) -> dict | None:
    w = one_lookahead_worst_cost(game)
    for a in spo_all_orders(game):
        if worst_cost(game, a) != w:
            return {"spo": labels(a), "worst": worst_cost(game, a), "w": w}
    return None


def claim_cor2(game: CongestionGame) -> dict | None:
    _, opt = optimum(game)
    worst = max(social_cost(game, a) for a in k_lookahead_all_orders(game, 1))
    rho = instance_rho(game)
    return {"lpoa1": worst / opt, "rho": rho} if worst > rho * opt else None


def _best_action(game: CongestionGame, k: int):
    return min(game.actions(game.players[0]), key=lambda a: sum(game.delays[r](k) for r in a))


def claim_thm10(game: CongestionGame) -> dict | None:
    n = game.n_players
    for k in range(1, n + 1):
        uniform = (_best_action(game, k),) * n
        klo = k_lookahead_all_orders(game, k)
        if klo != frozenset([uniform]):
            return {"k": k, "klo": _profiles(klo), "expected": labels(uniform)}
        if not is_nash(game, uniform):
            return {"k": k, "not_nash": labels(uniform)}
    _, opt = optimum(game)
    if social_cost(game, (_best_action(game, n),) * n) != opt:
        return {"full_lookahead_not_optimal": True}
    return None


def claim_cor3(game: CongestionGame) -> dict | None:
    n = game.n_players
    report = inefficiency_report(game, range(1, n + 1))
    values = [report.lpoa(k) for k in range(1, n + 1)]
    return {"lpoa": values} if any(b > a for a, b in zip(values, values[1:])) else None


def claim_thm11(game: CongestionGame) -> dict | None:
    bad = [a for a in spo_all_orders(game) if not is_nash(game, a)]
    return {"unstable_spo": _profiles(bad)} if bad else None


def claim_lem5(game: CongestionGame, target: tuple) -> dict | None:
    """``target`` (assumed to satisfy the deviation condition) is the only SPO for every order."""
    for order in itertools.permutations(game.players):
        spo = spo_set(game, order)
        if spo != frozenset([target]):
            return {"order": order, "target": labels(target), "spo": _profiles(spo)}
    return None


def claim_prop8(game: ConsensusGame, preferred: str) -> dict | None:
    ranking = (preferred,) + tuple(a for a in CONSENSUS_ACTIONS if a != preferred)
    rule = TieBreakRule({p: ranking for p in game.players})
    for order in itertools.permutations(game.players):
        view = consensus_view(game, order)
        for k in range(1, game.n_players + 1):
            for a in k_lookahead_set(view, None, k, rule):
                if a != (preferred,) * game.n_players:
                    return {"order": order, "k": k, "outcome": a, "preferred": preferred}
    return None


def claim_ex5(game: ConsensusGame) -> dict | None:
    for order in itertools.permutations(game.players):
        if not is_tree_respecting(game, order):
            continue
        for a in spo_set(consensus_view(game, order)):
            if not consensus_is_optimal(game, a):
                return {"order": order, "spo": a}
    return None


def claim_prop6(game: CongestionGame) -> dict | None:
    one = k_lookahead_all_orders(game, 1)
    full = k_lookahead_all_orders(game, game.n_players)
    want_one = set(itertools.permutations(game.profile("rt", "su", "ru")))
    want_full = set(itertools.permutations(game.profile("st", "ru", "ru")))
    if one != want_one or full != want_full or one & full:
        return {"one": _profiles(one), "full": _profiles(full)}
    return None


# Trials: draw an instance, check hypotheses, evaluate the claim.


def _verdict(game, detail, term=None) -> Outcome:
    if detail is None:
        return Outcome(PASS)
    return Outcome(FAIL, game_to_data(game, term), _jsonable(detail))


def _network_trial(claim, ep: bool, generic: bool, min_players: int = 1):
    def check(seed: str, params: dict) -> Outcome:
        game, term = _sncg_instance(seed, params, ep, generic)
        if game is None or game.n_players < min_players:
            return Outcome(SKIP)
        try:
            detail = claim(game)
        except BudgetExceededError:
            return Outcome(INCONCLUSIVE)
        return _verdict(game, detail, term)

    check.__name__ = f"check_{claim.__name__[6:]}"
    return check


check_thm2 = _network_trial(claim_thm2, ep=True, generic=False)
check_thm4 = _network_trial(claim_thm4, ep=True, generic=True)
check_thm5 = _network_trial(claim_thm5, ep=True, generic=False)
check_thm6 = _network_trial(claim_thm6, ep=True, generic=True)
check_thm7 = _network_trial(claim_thm7, ep=True, generic=True)
check_cor1 = _network_trial(claim_cor1, ep=False, generic=False)
check_prop7 = _network_trial(claim_prop7, ep=False, generic=False)
check_lem3 = _network_trial(claim_lem3, ep=False, generic=False)
check_lem4 = _network_trial(claim_lem4, ep=False, generic=False, min_players=2)
check_thm9 = _network_trial(claim_thm9, ep=True, generic=False)
check_cor2 = _network_trial(claim_cor2, ep=False, generic=False)


def check_thm1(seed: str, params: dict) -> Outcome:
    rng = random.Random(seed)
    players = min(params.get("players", 3), 3)
    if rng.random() < 0.5:
        game, term = _sncg_instance(seed + "/g", {**params, "players": players}, ep=False, generic=False)
    else:
        term = None
        game = random_cost_sharing(rng, rng.randint(2, players), family="table", generic=False)
    if game is None or not game.symmetric:
        return Outcome(SKIP)
    return _verdict(game, claim_thm1(game, rng.randint(1, game.n_players)), term)


def check_ex4(seed: str, params: dict) -> Outcome:
    rng = random.Random(seed)
    n = rng.randint(1, params.get("players", 4))
    scale = Fraction(rng.randint(1, 40), rng.randint(1, 8))
    offset = Fraction(rng.randint(0, 40), rng.randint(1, 8))
    game = offset_pair_game(n, scale, offset)
    return _verdict(game, claim_ex4(game))


def _generic_cost_sharing(rng: random.Random, n: int, **kwargs):
    try:
        game = random_cost_sharing(rng, n, retries=10, **kwargs)
    except RetriesExhausted:
        return None
    return game if is_generic(game) else None


def check_thm10(seed: str, params: dict) -> Outcome:
    rng = random.Random(seed)
    n = rng.randint(1, params.get("players", 4))
    game = _generic_cost_sharing(rng, n, n_resources=rng.randint(2, 4), n_actions=rng.randint(2, 4),
                                 family=rng.choice(["table", "axb"]), singleton=rng.random() < 0.3)
    return Outcome(SKIP) if game is None else _verdict(game, claim_thm10(game))


def check_cor3(seed: str, params: dict) -> Outcome:
    rng = random.Random(seed)
    n = rng.randint(1, params.get("players", 5))
    game = _generic_cost_sharing(rng, n, n_resources=rng.randint(2, 4), n_actions=rng.randint(2, 4),
                                 family="axb", singleton=rng.random() < 0.3)
    return Outcome(SKIP) if game is None else _verdict(game, claim_cor3(game))


def check_thm11(seed: str, params: dict) -> Outcome:
    rng = random.Random(seed)
    n = rng.randint(1, params.get("players", 4))
    game = _generic_cost_sharing(rng, n, n_resources=rng.randint(2, 4), n_actions=3,
                                 family=rng.choice(["table", "axb"]), symmetric=False, singleton=True)
    return Outcome(SKIP) if game is None else _verdict(game, claim_thm11(game))


THM11_COUNTEREXAMPLE = {
    "action_sets": {1: (["r"], ["s"]), 2: (["s"],)},
    "delays": {"r": [1, Fraction(1, 2), Fraction(1, 3)], "s": [Fraction(4, 3), Fraction(2, 3), Fraction(4, 9)]},
}


def thm11_game() -> CongestionGame:
    return CongestionGame(THM11_COUNTEREXAMPLE["action_sets"], THM11_COUNTEREXAMPLE["delays"])


def thm11_fixture_holds() -> bool:
    """The two-player instance has the unstable 1-lookahead outcome ``(r, s)``."""
    game = thm11_game()
    rs = game.profile("r", "s")
    return k_lookahead_set(game, (1, 2), 1) == frozenset([rs]) and not is_nash(game, rs)


def check_lem5(seed: str, params: dict) -> Outcome:
    rng = random.Random(seed)
    n = rng.randint(1, params.get("players", 3))
    game = random_cost_sharing(rng, n, rng.randint(2, 3), rng.randint(2, 3),
                               family=rng.choice(["table", "axb"]), symmetric=rng.random() < 0.6,
                               singleton=rng.random() < 0.4, generic=False)
    if game.symmetric and rng.random() < 0.5:
        target = (_best_action(game, n),) * n
    else:
        target = tuple(rng.choice(game.actions(p)) for p in game.players)
    if not strictly_worse_deviators(game, target):
        return Outcome(SKIP)
    return _verdict(game, claim_lem5(game, target))


def check_prop8(seed: str, params: dict) -> Outcome:
    rng = random.Random(seed)
    game = random_consensus(rng, params.get("players", 5))
    return _verdict(game, claim_prop8(game, rng.choice(CONSENSUS_ACTIONS)))


def example5_game(w23=2, w13=1) -> ConsensusGame:
    return ConsensusGame(3, {(2, 3): w23, (1, 3): w13})


def random_tree_consensus(rng: random.Random, max_players: int) -> ConsensusGame:
    n = rng.randint(2, max_players)
    return ConsensusGame(n, {(rng.randint(1, v - 1), v): rng.randint(1, 4) for v in range(2, n + 1)})


def check_ex5(seed: str, params: dict) -> Outcome:
    """Tree-respecting orders on random weighted trees give optimal SPOs only."""
    game = random_tree_consensus(random.Random(seed), params.get("players", 5))
    return _verdict(game, claim_ex5(game))


def example5_fixture_holds() -> bool:
    """Order (1, 2, 3) admits an unstable SPO; tree-respecting orders admit only optimal ones."""
    game = example5_game()
    spo = spo_set(consensus_view(game, (1, 2, 3)))
    return any(not consensus_is_nash(game, a) for a in spo) and claim_ex5(game) is None


def check_prop6(seed: str, params: dict) -> Outcome:
    game = prop6_game()
    return _verdict(game, claim_prop6(game))


@dataclass(frozen=True)
class Claim:
    description: str
    check: Callable
    defaults: dict
    fixture_only: bool = False
    fixture: Callable | None = None


CATALOG = {
    "thm1": Claim("symmetric games: permuted k-lookahead outcomes transfer across orders",
                  check_thm1, {"players": 3, "term_size": 6}),
    "thm2": Claim("EP networks: 1-lookahead outcomes equal Nash equilibria", check_thm2,
                  {"players": 4, "term_size": 8}),
    "thm4": Claim("generic EP networks: subgame-perfect outcomes equal Nash equilibria", check_thm4,
                  {"players": 4, "term_size": 8}),
    "thm5": Claim("EP networks: every Nash equilibrium is subgame-perfect for some order", check_thm5,
                  {"players": 4, "term_size": 8}),
    "thm6": Claim("generic EP networks: k-lookahead outcomes equal Nash equilibria for every k",
                  check_thm6, {"players": 4, "term_size": 8}),
    "thm7": Claim("generic EP networks: identity-order SPO costs are sorted and favour the first mover",
                  check_thm7, {"players": 4, "term_size": 8}),
    "ex4": Claim("offset two-resource game: identity-order SPO follows the parity pattern", check_ex4,
                 {"players": 4}),
    "cor1": Claim("SP networks: all 1-lookahead outcomes share one potential value", check_cor1,
                  {"players": 4, "term_size": 8}),
    "prop7": Claim("SP networks: 1-lookahead outcomes are potential minimizers with the same loads",
                   check_prop7, {"players": 4, "term_size": 8}),
    "lem3": Claim("SP networks: opportunity costs are bounded by those of 1-lookahead outcomes",
                  check_lem3, {"players": 4, "term_size": 8}),
    "lem4": Claim("SP networks: fixing paths never raises the 1-lookahead worst cost", check_lem4,
                  {"players": 4, "term_size": 8}),
    "thm9": Claim("EP networks: every SPO has the 1-lookahead worst cost", check_thm9,
                  {"players": 4, "term_size": 8}),
    "cor2": Claim("SP networks: 1-LPoA is at most the instance rho", check_cor2,
                  {"players": 4, "term_size": 8}),
    "thm10": Claim("generic symmetric cost-sharing: k-lookahead outcomes are (P_k, ..., P_k) and stable",
                   check_thm10, {"players": 4}),
    "cor3": Claim("generic symmetric a/x+b cost-sharing: k-LPoA is non-increasing in k", check_cor3,
                  {"players": 5}),
    "thm11": Claim("generic singleton cost-sharing: SPOs are Nash equilibria", check_thm11,
                   {"players": 4}, fixture=thm11_fixture_holds),
    "lem5": Claim("profiles where deviators always lose are the unique SPO", check_lem5,
                  {"players": 3}),
    "prop8": Claim("consensus games with a common tie-break: k-lookahead outcomes are optimal",
                   check_prop8, {"players": 5}),
    "ex5": Claim("consensus trees: tree-respecting orders give optimal SPOs", check_ex5,
                 {"players": 5}, fixture=example5_fixture_holds),
    "prop6": Claim("non-EP network: 1-lookahead and full-lookahead outcomes are disjoint", check_prop6,
                   {}, fixture_only=True),
}


class UnknownTheorem(LookaheadError, KeyError):
    pass


def trial_seed(seed, theorem: str, attempt: int) -> str:
    return f"{seed}:{theorem}:{attempt}"


def run_trial(theorem: str, seed, attempt: int, params: dict) -> tuple:
    s = trial_seed(seed, theorem, attempt)
    outcome = CATALOG[theorem].check(s, params)
    return attempt, s, outcome


def _run_batch(args):
    return run_trial(*args)


def verify_theorem(theorem: str, trials: int = 200, seed=0, params: dict | None = None,
                   jobs: int = 1, max_attempts: int | None = None) -> TheoremVerdict:
    """Run one catalog claim until ``trials`` qualifying instances are checked."""
    if theorem not in CATALOG:
        raise UnknownTheorem(f"unknown theorem id {theorem!r}; known: {', '.join(CATALOG)}")
    claim = CATALOG[theorem]
    params = {**claim.defaults, **(params or {})}
    verdict = TheoremVerdict(theorem, claim.description, True)
    if claim.fixture is not None and not claim.fixture():
        verdict.passed = False
        verdict.failures += 1
        verdict.counterexample = {"fixture": theorem}
    if claim.fixture_only:
        trials = min(trials, 1)
    if trials <= 0:
        verdict.notes.append("no trials requested; vacuous pass")
        return verdict
    max_attempts = max_attempts if max_attempts is not None else max(50, trials * 20)
    attempt = 0
    pool = ProcessPoolExecutor(max_workers=jobs) if jobs > 1 else None
    try:
        while verdict.trials < trials and attempt < max_attempts:
            want = trials - verdict.trials
            batch = list(range(attempt, min(max_attempts, attempt + max(want, jobs))))
            attempt = batch[-1] + 1
            args = [(theorem, seed, i, params) for i in batch]
            results = pool.map(_run_batch, args) if pool else map(_run_batch, args)
            for i, s, outcome in sorted(results, key=lambda r: r[0]):
                if verdict.trials >= trials:
                    break
                if outcome.status == SKIP:
                    verdict.skipped += 1
                    continue
                if outcome.status == INCONCLUSIVE:
                    verdict.inconclusive += 1
                    continue
                verdict.trials += 1
                if outcome.status == FAIL:
                    verdict.failures += 1
                    verdict.passed = False
                    if verdict.counterexample is None:
                        verdict.counterexample = {
                            "theorem": theorem, "seed": s, "params": params, "instance": outcome.instance,
                            "detail": outcome.detail,
                        }
    finally:
        if pool:
            pool.shutdown()
    if verdict.trials < trials:
        verdict.notes.append(f"only {verdict.trials} qualifying instances in {attempt} attempts")
        verdict.passed = False
    return verdict


def replay(counterexample: dict) -> Outcome:
    """Re-run the trial recorded in a counterexample payload."""
    claim = CATALOG[counterexample["theorem"]]
    return claim.check(counterexample["seed"], counterexample["params"])
