"""JSON instance files.

Numbers are integers or ``[numerator, denominator]`` pairs; floating-point
literals are rejected with their line and column.  Example::

    {"format": 1, "family": "sncg-term", "players": 2,
     "term": ["P", "m", ["S", "b", ["P", "l", "s"]]],
     "delays": {"m": [6, 6], "b": [3, 5], "l": [2, 2], "s": [1, 1]}}
"""

from __future__ import annotations

import json
from collections.abc import Mapping
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

import jsonschema

from .core import CongestionGame, DelayTable, ModelError, to_rational
from .games import AffineShare, ConsensusGame, cost_sharing_game, sncg_from_term
from .network import SPTerm, term_from_json, term_to_json

FORMAT_VERSION = 1
FAMILIES = ("congestion", "sncg-term", "cost-sharing", "consensus")


class InstanceError(ModelError):
    """Malformed instance text; ``line``/``column`` locate the problem when known."""

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        where = f" (line {line}, column {column})" if line is not None else ""
        super().__init__(message + where)
        self.line, self.column = line, column


_NUMBER = {
    "oneOf": [
        {"type": "integer"},
        {"type": "array", "prefixItems": [{"type": "integer"}, {"type": "integer", "minimum": 1}],
         "minItems": 2, "maxItems": 2},
    ]
}
_TABLE = {"type": "array", "items": _NUMBER, "minItems": 1}
_ACTION = {"type": "array", "items": {"type": "string", "minLength": 1}, "minItems": 1}
_ACTION_SETS = {
    "type": "object",
    "patternProperties": {"^[1-9][0-9]*$": {"type": "array", "items": _ACTION, "minItems": 1}},
    "additionalProperties": False,
    "minProperties": 1,
}
_TERM = {"anyOf": [{"type": "string", "minLength": 1}, {"type": "array", "minItems": 3}]}
_COMMON = {
    "format": {"const": FORMAT_VERSION},
    "family": {"enum": list(FAMILIES)},
    "name": {"type": "string"},
    "metadata": {"type": "object"},
}


def _schema(required: list, props: Mapping) -> dict:
    return {
        "$schema": "https://json-schema.org/draft/2020-12/schema",
        "type": "object",
        "required": ["format", "family"] + required,
        "properties": {**_COMMON, **props},
        "additionalProperties": False,
    }


SCHEMAS = {
    "congestion": _schema(["delays", "action_sets"], {
        "delays": {"type": "object", "additionalProperties": _TABLE, "minProperties": 1},
        "action_sets": _ACTION_SETS,
    }),
    "sncg-term": _schema(["players", "term", "delays"], {
        "players": {"type": "integer", "minimum": 1},
        "term": _TERM,
        "delays": {"type": "object", "additionalProperties": _TABLE, "minProperties": 1},
    }),
    "cost-sharing": _schema(["delays", "action_sets"], {
        "delays": {
            "type": "object",
            "minProperties": 1,
            "additionalProperties": {
                "oneOf": [
                    _TABLE,
                    {"type": "object", "required": ["a", "b"], "additionalProperties": False,
                     "properties": {"a": _NUMBER, "b": _NUMBER}},
                ]
            },
        },
        "action_sets": _ACTION_SETS,
    }),
    "consensus": _schema(["players", "edges"], {
        "players": {"type": "integer", "minimum": 1},
        "edges": {
            "type": "array",
            "items": {"type": "array", "prefixItems": [{"type": "integer"}, {"type": "integer"}, _NUMBER],
                      "minItems": 3, "maxItems": 3},
        },
    }),
}


@dataclass(frozen=True)
class Instance:
    family: str
    game: Any  # CongestionGame or ConsensusGame
    term: SPTerm | None = None
    name: str = ""
    metadata: Mapping = field(default_factory=dict)


def find_float(text: str) -> tuple | None:
    """Line and column (1-based) of the first float literal outside strings."""
    i, n = 0, len(text)
    line, col = 1, 1
    while i < n:
        ch = text[i]
        if ch == '"':
            i += 1
            col += 1
            while i < n and text[i] != '"':
                step = 2 if text[i] == "\\" else 1
                i += step
                col += step
            i += 1
            col += 1
            continue
        if ch == "-" or ch.isdigit():
            start_col = col
            j = i
            while j < n and (text[j].isdigit() or text[j] in "+-.eE"):
                j += 1
            if any(c in ".eE" for c in text[i:j]):
                return line, start_col
            col += j - i
            i = j
            continue
        if ch == "\n":
            line, col = line + 1, 1
        else:
            col += 1
        i += 1
    return None


def number_to_json(value: Fraction):
    value = to_rational(value)
    return value.numerator if value.denominator == 1 else [value.numerator, value.denominator]


def _table(raw, length: int, resource: str, extended: list) -> DelayTable:
    values = tuple(to_rational(v) for v in raw)
    if len(values) < length:
        values += (values[-1],) * (length - len(values))
        extended.append(resource)
    return DelayTable(values)


def loads(text: str) -> Instance:
    """Parse and validate instance text."""
    hit = find_float(text)
    if hit:
        raise InstanceError("floating-point literal rejected; use an integer or [num, den]", *hit)
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InstanceError(exc.msg, exc.lineno, exc.colno) from exc
    return from_data(data)


def load(path) -> Instance:
    with open(path, encoding="utf-8") as fh:
        return loads(fh.read())


def from_data(data: Mapping) -> Instance:
    if not isinstance(data, Mapping):
        raise InstanceError("instance must be a JSON object")
    family = data.get("family")
    if family not in SCHEMAS:
        raise InstanceError(f"unknown family {family!r}; expected one of {', '.join(FAMILIES)}")
    try:
        jsonschema.validate(data, SCHEMAS[family])
    except jsonschema.ValidationError as exc:
        where = "/".join(str(p) for p in exc.absolute_path) or "<root>"
        raise InstanceError(f"schema violation at {where}: {exc.message}") from None
    metadata = dict(data.get("metadata", {}))
    name = data.get("name", "")
    extended: list = []
    term = None
    if family == "consensus":
        game = ConsensusGame(data["players"], {(i, j): w for i, j, w in data["edges"]})
    else:
        if family == "sncg-term":
            term = term_from_json(data["term"])
            n = data["players"]
        else:
            action_sets = {int(p): acts for p, acts in data["action_sets"].items()}
            n = len(action_sets)
            if sorted(action_sets) != list(range(1, n + 1)):
                raise InstanceError("players must be numbered 1..n")
        # opportunity costs probe congestion n + 1
        delays = {}
        for r, raw in data["delays"].items():
            if isinstance(raw, Mapping):
                delays[r] = AffineShare(to_rational(raw["a"]), to_rational(raw["b"]))
            else:
                delays[r] = _table(raw, n + 1, r, extended)
        if family == "sncg-term":
            game = sncg_from_term(term, delays, n)
        elif family == "cost-sharing":
            game = cost_sharing_game(delays, action_sets)
        else:
            game = CongestionGame(action_sets, delays)
    if extended:
        metadata["extended_tables"] = sorted(set(metadata.get("extended_tables", [])) | set(extended))
    return Instance(family, game, term, name, metadata)


def to_data(instance: Instance) -> dict:
    game = instance.game
    data: dict = {"format": FORMAT_VERSION, "family": instance.family}
    if instance.name:
        data["name"] = instance.name
    if instance.metadata:
        data["metadata"] = dict(instance.metadata)
    if instance.family == "consensus":
        data["players"] = game.n_players
        data["edges"] = sorted([*sorted(e), number_to_json(w)] for e, w in game.weights.items())
        return data
    tables = {r: [number_to_json(v) for v in t.values] for r, t in game.delays.items()}
    data["delays"] = tables
    if instance.family == "sncg-term":
        data["players"] = game.n_players
        data["term"] = term_to_json(instance.term)
    else:
        data["action_sets"] = {
            str(p): [sorted(a) for a in game.actions(p)] for p in game.players
        }
    return data


def dumps(instance: Instance) -> str:
    return json.dumps(to_data(instance), sort_keys=True, indent=2) + "\n"


def game_instance(game, name: str = "", term: SPTerm | None = None) -> Instance:
    """Wrap a game object, choosing the family from its type."""
    if isinstance(game, ConsensusGame):
        return Instance("consensus", game, name=name)
    if term is not None:
        return Instance("sncg-term", game, term, name)
    return Instance("congestion", game, name=name)


def game_to_data(game, term: SPTerm | None = None) -> dict:
    return to_data(game_instance(game, term=term))
