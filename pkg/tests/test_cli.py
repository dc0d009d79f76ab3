from __future__ import annotations

import json

import pytest

from lookahead_lab import cli
from lookahead_lab.cli import main, parse_order, parse_tiebreak
from lookahead_lab.core import is_generic
from lookahead_lab.fixtures import FactResult, load_fixture
from lookahead_lab.instances import loads
from lookahead_lab.network import is_extension_parallel
from lookahead_lab.solver import as_view
from lookahead_lab.theorems import CATALOG, Claim, _network_trial, claim_thm4


def run(capsys, *args):
    code = main(list(args))
    out, err = capsys.readouterr()
    return code, out, err


def test_analyze_fixture_report(capsys):
    code, out, _ = run(capsys, "analyze", "intro", "--k", "1,2")
    assert code == 0
    report = json.loads(out)
    assert report["tool"]["name"] == "lookahead-lab"
    assert report["command"]["name"] == "analyze"
    res = report["results"]
    assert res["inefficiency"]["poa"] == [6, 5]
    assert res["inefficiency"]["lpoa"] == {"1": [6, 5], "2": [13, 10]}
    assert ["bl", "m"] in [s["profile"] for s in res["spo_set"] if not s["nash"]]
    assert "timing_seconds" not in report
    assert "." not in json.dumps(res["inefficiency"])


def test_analyze_csv_and_timing(capsys):
    code, out, _ = run(capsys, "analyze", "intro", "--csv")
    assert code == 0
    assert out.splitlines() == ["k,lpoa_numerator,lpoa_denominator", "1,6,5", "2,13,10"]
    code, out, _ = run(capsys, "analyze", "intro", "--timing")
    assert "timing_seconds" in json.loads(out)


def test_analyze_consensus_and_tiebreak(capsys):
    code, out, _ = run(capsys, "analyze", "example5", "--order", "3,1,2", "--tiebreak", "R>L")
    assert code == 0
    res = json.loads(out)["results"]
    assert res["tiebreak"]["spo"] == [["R", "R", "R"]]
    assert ["L", "L", "L"] in res["optimal"]


def test_analyze_instance_file(capsys, tmp_path):
    path = tmp_path / "g.json"
    code, _, _ = run(capsys, "generate", "cost-sharing", "--seed", "1", "--players", "2", "--out", str(path))
    assert code == 0
    assert loads(path.read_text()).family == "cost-sharing"
    code, out, _ = run(capsys, "analyze", str(path))
    assert code == 0 and json.loads(out)["results"]["players"] == 2


def test_usage_and_parse_errors(capsys, tmp_path):
    assert run(capsys, "analyze", "missing")[0] == 2
    assert run(capsys, "analyze", "intro", "--order", "1,1")[0] == 2
    assert run(capsys, "analyze", "intro", "--k", "x")[0] == 2
    assert run(capsys, "analyze", "intro", "--tiebreak", "1:zz")[0] == 2
    assert run(capsys, "verify", "nope")[0] == 2
    assert run(capsys, "reproduce", "nope")[0] == 2
    bad = tmp_path / "bad.json"
    bad.write_text('{"format": 1, "family": "consensus", "players": 2, "edges": [[1, 2, 0.5]]}')
    code, _, err = run(capsys, "analyze", str(bad))
    assert code == 2 and "line 1" in err
    with pytest.raises(SystemExit) as exc:
        main(["frobnicate"])
    assert exc.value.code == 2


def test_budget_exit_code(capsys, monkeypatch):
    monkeypatch.setenv("LOOKAHEAD_LAB_BUDGET", "2")
    code, _, err = run(capsys, "analyze", "example3")
    assert code == 3 and "budget" in err


def test_verify_and_reproduce(capsys):
    code, out, _ = run(capsys, "verify", "thm2", "--trials", "5", "--seed", "1", "--jobs", "1")
    assert code == 0
    assert json.loads(out)["results"]["trials"] == 5
    code, out, _ = run(capsys, "reproduce", "example1")
    assert code == 0 and json.loads(out)["results"]["passed"]


def test_failures_exit_one(capsys, monkeypatch):
    monkeypatch.setattr(cli, "evaluate", lambda f: [FactResult("x", "computed", False, {"found": []})
                                                    for _ in f.facts])
    code, out, _ = run(capsys, "reproduce", "intro")
    assert code == 1
    assert json.loads(out)["results"]["facts"][0]["observed"] == {"found": []}
    broken = Claim("unguarded SPO stability", _network_trial(claim_thm4, ep=False, generic=False),
                   {"players": 3, "term_size": 5})
    monkeypatch.setitem(CATALOG, "broken", broken)
    code, out, _ = run(capsys, "verify", "broken", "--trials", "200", "--jobs", "1")
    assert code == 1
    assert json.loads(out)["results"]["counterexample"]["instance"]


def test_parse_helpers():
    game = load_fixture("example1").game
    assert parse_order("3,1,2", game.players) == (3, 1, 2)
    view = as_view(game)
    rule = parse_tiebreak("1:s>r;2:t>s;3:t", view)
    assert rule.choose(1, game.actions(1)) == game.action("s")
    assert parse_tiebreak(None, view) is None


@pytest.mark.parametrize("family", ["sncg-term", "cost-sharing", "congestion", "consensus"])
def test_generate_is_deterministic(capsys, family):
    first = run(capsys, "generate", family, "--seed", "4", "--players", "3", "--generic")[1]
    second = run(capsys, "generate", family, "--seed", "4", "--players", "3", "--generic")[1]
    assert first == second
    assert loads(first).family == family


def test_analyze_single_player_sets_coincide(capsys, tmp_path):
    path = tmp_path / "one.json"
    path.write_text('{"format": 1, "family": "congestion", "delays": {"r": [2], "s": [1], "t": [1]},'
                    ' "action_sets": {"1": [["r"], ["s"], ["t"]]}}')
    code, out, _ = run(capsys, "analyze", str(path))
    assert code == 0
    res = json.loads(out)["results"]
    argmin = [["s"], ["t"]]
    assert res["nash"] == argmin
    assert [s["profile"] for s in res["spo_set"]] == argmin
    assert res["k_lookahead"]["1"]["order"] == argmin
    assert res["potential_minimizers"]["profiles"] == argmin
    assert res["inefficiency_egalitarian"]["optimum"] == 1


def test_verify_documented_runs(capsys):
    code, out, _ = run(capsys, "verify", "thm6", "--players", "3", "--term-size", "6", "--trials", "200",
                       "--seed", "42", "--jobs", "1")
    assert code == 0 and json.loads(out)["results"]["failures"] == 0
    code, out, _ = run(capsys, "verify", "prop6", "--jobs", "1")
    assert code == 0
    code, out, _ = run(capsys, "verify", "thm2", "--trials", "0")
    assert code == 0 and json.loads(out)["results"]["notes"]


def test_generate_ep_generic_round_trip(capsys):
    out = run(capsys, "generate", "sncg-term", "--seed", "1", "--ep", "--generic")[1]
    inst = loads(out)
    assert is_extension_parallel(inst.term)
    assert is_generic(inst.game)
    out = run(capsys, "generate", "cost-sharing", "--family", "axb")[1]
    assert loads(out).game.is_cost_sharing
