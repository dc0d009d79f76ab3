"""Command-line interface: ``lookahead-lab analyze | verify | reproduce | generate``.

Exit codes: 0 success, 1 failed assertion or property, 2 usage or parse
error, 3 budget exceeded.
"""

from __future__ import annotations

import argparse
import csv
import io
import itertools
import json
import os
import random
import sys
import time
from fractions import Fraction
from pathlib import Path

from . import __version__
from .analysis import (
    EGALITARIAN,
    UTILITARIAN,
    inefficiency_report,
    potential_minimizers,
)
from .core import (
    BUDGET_ENV,
    BudgetExceededError,
    CongestionGame,
    LookaheadError,
    ModelError,
    TieBreakRule,
    enumerate_nash,
    is_generic,
    is_nash,
    labels,
)
from .fixtures import FIXTURE_IDS, evaluate, load_fixture
from .games import (
    ConsensusGame,
    consensus_is_nash,
    consensus_is_optimal,
    consensus_profiles,
    consensus_view,
    generic_sncg_on,
    random_consensus,
    random_cost_sharing,
    random_delays,
    sncg_from_term,
)
from .instances import Instance, dumps, load
from .network import random_term
from .solver import (
    as_view,
    k_lookahead_all_orders,
    k_lookahead_set,
    spo_set,
    spo_unique,
)
from .theorems import CATALOG, verify_theorem

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_BUDGET = 0, 1, 2, 3


class UsageError(LookaheadError):
    pass


def _num(value):
    if isinstance(value, Fraction):
        return value.numerator if value.denominator == 1 else [value.numerator, value.denominator]
    return value


def _names(profiles) -> list:
    return sorted(list(p) if p and isinstance(p[0], str) else list(labels(p)) for p in profiles)


def parse_order(text: str | None, players) -> tuple | None:
    if text is None:
        return None
    try:
        order = tuple(int(x) for x in text.split(","))
    except ValueError:
        raise UsageError(f"order must be comma-separated player ids, got {text!r}") from None
    if sorted(order) != sorted(players):
        raise UsageError(f"order {text!r} is not a permutation of players {list(players)}")
    return order


def parse_ks(text: str | None, n: int) -> list:
    if not text:
        return list(range(1, n + 1))
    try:
        ks = sorted({int(x) for x in text.split(",")})
    except ValueError:
        raise UsageError(f"k list must be comma-separated integers, got {text!r}") from None
    if any(k < 1 for k in ks):
        raise UsageError("k must be positive")
    return ks


def parse_tiebreak(text: str | None, view) -> TieBreakRule | None:
    """``lex``, a common ranking ``a>b>c`` or per-player rankings ``1:a>b;2:b>a``."""
    if text is None:
        return None
    if text == "lex":
        return TieBreakRule({p: view.actions(p) for p in view.order})

    def lookup(player, label):
        for a in view.actions(player):
            name = a if isinstance(a, str) else labels([a])[0]
            if name == label:
                return a
        raise UsageError(f"player {player} has no action {label!r}")

    rankings = {}
    if ":" not in text:
        common = text.split(">")
        for p in view.order:
            known = {a if isinstance(a, str) else labels([a])[0] for a in view.actions(p)}
            rankings[p] = [lookup(p, lab) for lab in common if lab in known]
    else:
        for part in text.split(";"):
            player, _, ranking = part.partition(":")
            try:
                p = int(player)
            except ValueError:
                raise UsageError(f"bad tie-breaking entry {part!r}") from None
            rankings[p] = [lookup(p, lab) for lab in ranking.split(">")]
    try:
        return TieBreakRule(rankings).validate(_Players(view))
    except ModelError as exc:
        raise UsageError(str(exc)) from None


class _Players:
    """Adapter so ``TieBreakRule.validate`` works on any view."""

    def __init__(self, view):
        self.players = view.canonical
        self.actions = view.actions


def _load_instance(ref: str) -> Instance:
    path = Path(ref)
    if path.exists():
        return load(path)
    if ref in FIXTURE_IDS:
        return load_fixture(ref).instance
    raise UsageError(f"no instance file or bundled example named {ref!r}")


def _view(game, order):
    return consensus_view(game, order) if isinstance(game, ConsensusGame) else as_view(game, order)


def _all_orders_klo(game, k):
    if isinstance(game, ConsensusGame):
        return frozenset().union(*(k_lookahead_set(consensus_view(game, o), None, k)
                                   for o in itertools.permutations(game.players)))
    return k_lookahead_all_orders(game, k)


def analyze(instance: Instance, order=None, ks=None, tiebreak_text=None) -> dict:
    game = instance.game
    view = _view(game, order)
    ks = ks or list(range(1, view.n + 1))
    consensus = isinstance(game, ConsensusGame)
    nash = (lambda p: consensus_is_nash(game, p)) if consensus else (lambda p: is_nash(game, p))
    spo = spo_set(view)
    results: dict = {
        "players": view.n,
        "order": list(view.order),
        "spo_set": [{"profile": p, "nash": nash(_profile_of(game, p))} for p in _names(spo)],
        "k_lookahead": {
            str(k): {
                "order": _names(k_lookahead_set(view, None, k)),
                "all_orders": _names(_all_orders_klo(game, k)),
            }
            for k in ks
        },
    }
    tiebreak = parse_tiebreak(tiebreak_text, view)
    if tiebreak is not None:
        results["tiebreak"] = {
            "spo": _names([spo_unique(view, tiebreak)]),
            "k_lookahead": {str(k): _names(k_lookahead_set(view, None, k, tiebreak)) for k in ks},
        }
    if consensus:
        results["nash"] = _names(p for p in consensus_profiles(game) if consensus_is_nash(game, p))
        results["optimal"] = _names(p for p in consensus_profiles(game) if consensus_is_optimal(game, p))
        return results
    results["generic"] = bool(is_generic(game))
    results["nash"] = _names(enumerate_nash(game))
    minima, phi = potential_minimizers(game)
    results["potential_minimizers"] = {"value": _num(phi), "profiles": _names(minima)}
    results["inefficiency"] = _inefficiency(game, ks, UTILITARIAN)
    results["inefficiency_egalitarian"] = _inefficiency(game, ks, EGALITARIAN)
    return results


def _inefficiency(game, ks, kind) -> dict:
    report = inefficiency_report(game, ks, kind)
    return {
        "optimum": _num(report.optimum),
        "poa": _num(report.poa),
        "pos": _num(report.pos),
        "spoa": _num(report.spoa),
        "lpoa": {str(k): _num(report.lpoa(k)) for k in ks},
        "errors": report.errors,
    }


def _profile_of(game, names):
    if isinstance(game, CongestionGame):
        return game.profile(*names)
    return tuple(names)


def _report(command: dict, results, started: float | None) -> dict:
    out = {"tool": {"name": "lookahead-lab", "version": __version__}, "command": command, "results": results}
    if started is not None:
        out["timing_seconds"] = [round((time.perf_counter() - started) * 1000), 1000]
    return out


def _emit(payload: dict, out_path: str | None):
    text = json.dumps(payload, sort_keys=True, indent=2) + "\n"
    _write(text, out_path)


def _write(text: str, out_path: str | None):
    if out_path:
        Path(out_path).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def cmd_analyze(args) -> int:
    instance = _load_instance(args.instance)
    game = instance.game
    order = parse_order(args.order, game.players)
    n = game.n_players
    ks = parse_ks(args.k, n)
    started = time.perf_counter() if args.timing else None
    results = analyze(instance, order, ks, args.tiebreak)
    if args.csv:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["k", "lpoa_numerator", "lpoa_denominator"])
        for k in ks:
            value = results.get("inefficiency", {}).get("lpoa", {}).get(str(k))
            if isinstance(value, list):
                writer.writerow([k, value[0], value[1]])
            elif isinstance(value, int):
                writer.writerow([k, value, 1])
            else:
                writer.writerow([k, value, ""])
        _write(buf.getvalue(), args.out)
        return EXIT_OK
    command = {"name": "analyze", "instance": args.instance, "order": args.order, "k": ks,
               "tiebreak": args.tiebreak, "budget": os.environ.get(BUDGET_ENV)}
    _emit(_report(command, results, started), args.out)
    return EXIT_OK


def cmd_verify(args) -> int:
    if args.theorem not in CATALOG:
        raise UsageError(f"unknown theorem id {args.theorem!r}; known: {', '.join(CATALOG)}")
    params = {}
    if args.players is not None:
        params["players"] = args.players
    if args.term_size is not None:
        params["term_size"] = args.term_size
    started = time.perf_counter() if args.timing else None
    jobs = args.jobs if args.jobs is not None else (os.cpu_count() or 1)
    verdict = verify_theorem(args.theorem, args.trials, args.seed, params, jobs=jobs)
    command = {"name": "verify", "theorem": args.theorem, "trials": args.trials, "seed": args.seed,
               "params": params, "budget": os.environ.get(BUDGET_ENV)}
    _emit(_report(command, verdict.to_data(), started), args.out)
    return EXIT_OK if verdict.passed else EXIT_FAIL


def cmd_reproduce(args) -> int:
    if args.example not in FIXTURE_IDS:
        raise UsageError(f"unknown example id {args.example!r}; known: {', '.join(FIXTURE_IDS)}")
    fixture = load_fixture(args.example)
    started = time.perf_counter() if args.timing else None
    facts = []
    for fact, result in zip(fixture.facts, evaluate(fixture)):
        entry = {"fact": fact, "passed": result.passed}
        if not result.passed:
            entry["observed"] = result.detail
        facts.append(entry)
    ok = all(f["passed"] for f in facts)
    results = {"example": fixture.id, "description": fixture.description, "passed": ok, "facts": facts}
    _emit(_report({"name": "reproduce", "example": args.example}, results, started), args.out)
    return EXIT_OK if ok else EXIT_FAIL


def generate(family: str, seed: int, players: int, term_size: int, ep: bool = False,
             generic: bool = False, kind: str = "table") -> Instance:
    name = f"{family}-seed{seed}"
    if family == "sncg-term":
        rng = random.Random(seed)
        term = random_term(rng.getrandbits(32), term_size, ep)
        if generic:
            game = generic_sncg_on(term, players, rng)
        else:
            game = sncg_from_term(term, random_delays(rng, term, players, coarse=True), players)
        return Instance("sncg-term", game, term, name)
    if family == "cost-sharing":
        game = random_cost_sharing(seed, players, family=kind, generic=generic)
        return Instance("cost-sharing", game, name=name)
    if family == "congestion":
        game = random_cost_sharing(seed, players, family=kind, symmetric=False, generic=generic)
        return Instance("congestion", game, name=name)
    if family == "consensus":
        return Instance("consensus", random_consensus(seed, players, min_players=players), name=name)
    raise UsageError(f"unknown family {family!r}")


def cmd_generate(args) -> int:
    instance = generate(args.family, args.seed, args.players, args.term_size, args.ep, args.generic,
                        args.kind)
    _write(dumps(instance), args.out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="lookahead-lab", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="equilibria, lookahead outcomes and inefficiency of an instance")
    p.add_argument("instance", help="instance file or bundled example id")
    p.add_argument("--order", help="player order, e.g. 2,1,3 (default: identity)")
    p.add_argument("--k", help="comma-separated lookahead depths (default: 1..n)")
    p.add_argument("--tiebreak", help="'lex', a common ranking 'a>b', or '1:a>b;2:b>a'")
    p.add_argument("--csv", action="store_true", help="emit the k-LPoA sweep as CSV")
    p.add_argument("--out", help="write the report here instead of stdout")
    p.add_argument("--timing", action="store_true", help="include wall-clock time in the report")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("verify", help="run a property suite")
    p.add_argument("theorem", help=f"one of: {', '.join(CATALOG)}")
    p.add_argument("--trials", type=int, default=200)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--players", type=int)
    p.add_argument("--term-size", type=int)
    p.add_argument("--jobs", type=int, help="worker processes (default: number of CPUs)")
    p.add_argument("--out")
    p.add_argument("--timing", action="store_true")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("reproduce", help="check the documented facts of a bundled example")
    p.add_argument("example", help=f"one of: {', '.join(FIXTURE_IDS)}")
    p.add_argument("--out")
    p.add_argument("--timing", action="store_true")
    p.set_defaults(func=cmd_reproduce)

    p = sub.add_parser("generate", help="write a seeded random instance file")
    p.add_argument("family", choices=["sncg-term", "cost-sharing", "congestion", "consensus"])
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--players", type=int, default=3)
    p.add_argument("--term-size", type=int, default=5)
    p.add_argument("--ep", action="store_true", help="extension-parallel networks only")
    p.add_argument("--generic", action="store_true", help="resample until the game is generic")
    p.add_argument("--family", dest="kind", choices=["table", "axb"], default="table",
                   help="cost-sharing delay family")
    p.add_argument("--out")
    p.set_defaults(func=cmd_generate)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except BudgetExceededError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (UsageError, ModelError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
