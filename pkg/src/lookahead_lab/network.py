"""Series-parallel composition terms for single-commodity networks."""

from __future__ import annotations

import itertools
import random
import string
from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from typing import Union

from .core import BudgetExceededError, ModelError, default_budget


@dataclass(frozen=True)
class Single:
    resource: str


@dataclass(frozen=True)
class Series:
    left: SPTerm
    right: SPTerm


@dataclass(frozen=True)
class Parallel:
    left: SPTerm
    right: SPTerm


SPTerm = Union[Single, Series, Parallel]


def resources(term: SPTerm) -> list:
    """Arcs of ``term`` from left to right."""
    if isinstance(term, Single):
        return [term.resource]
    return resources(term.left) + resources(term.right)


def validate_term(term: SPTerm) -> SPTerm:
    arcs = resources(term)
    dupes = sorted({a for a in arcs if arcs.count(a) > 1})
    if dupes:
        raise ModelError(f"arcs must be distinct; repeated: {dupes}")
    return term


def count_paths(term: SPTerm) -> int:
    if isinstance(term, Single):
        return 1
    if isinstance(term, Series):
        return count_paths(term.left) * count_paths(term.right)
    return count_paths(term.left) + count_paths(term.right)


def enumerate_paths(term: SPTerm, budget: int | None = None) -> tuple:
    """All origin-destination paths as resource sets, in left-to-right order."""
    budget = default_budget() if budget is None else budget
    total = count_paths(term)
    if total > budget:
        raise BudgetExceededError(f"{total} paths exceed budget {budget}")
    validate_term(term)
    return tuple(_paths(term))


def _paths(term: SPTerm) -> list:
    if isinstance(term, Single):
        return [frozenset([term.resource])]
    left, right = _paths(term.left), _paths(term.right)
    if isinstance(term, Series):
        return [p | q for p in left for q in right]
    return left + right


def _series_chain(term: SPTerm) -> list:
    if isinstance(term, Series):
        return _series_chain(term.left) + _series_chain(term.right)
    return [term]


def is_extension_parallel(term: SPTerm) -> bool:
    """Structural EP test.

    Series is associative, so a maximal series chain is EP exactly when at
    most one of its members is not a single arc and that member is EP.
    """
    if isinstance(term, Single):
        return True
    if isinstance(term, Parallel):
        return is_extension_parallel(term.left) and is_extension_parallel(term.right)
    chain = _series_chain(term)
    compound = [t for t in chain if not isinstance(t, Single)]
    return len(compound) <= 1 and all(is_extension_parallel(t) for t in compound)


@dataclass(frozen=True)
class EPCertificate:
    is_ep: bool
    bad_configuration: tuple | None = None

    def __bool__(self) -> bool:
        return self.is_ep


def has_bad_configuration(action_set: Iterable) -> EPCertificate:
    """Scan ordered triples ``(A, B, C)`` for ``A`` meeting both ``C - B`` and ``B - C``."""
    actions = _distinct(action_set)
    for a, b, c in itertools.permutations(actions, 3):
        if a & (c - b) and a & (b - c):
            return EPCertificate(False, (a, b, c))
    return EPCertificate(True)


def _distinct(action_set: Iterable) -> list:
    actions = [frozenset(a) for a in action_set]
    if len(set(actions)) != len(actions):
        raise ModelError("actions must be pairwise distinct")
    return actions


def _nested(actions: Sequence) -> bool:
    return all(
        (a & b) <= (a & c) or (a & b) >= (a & c)
        for a, b, c in itertools.permutations(actions, 3)
    )


def _contained_intersections(actions: Sequence) -> bool:
    return all(
        (a & b) <= c or (a & c) == (b & c) == (a & b & c)
        for a, b, c in itertools.permutations(actions, 3)
    )


def nested_intersections_agree(action_set: Iterable) -> bool:
    """Evaluate the three nested-intersection properties separately; True iff they agree."""
    actions = _distinct(action_set)
    verdicts = {
        _nested(actions),
        _contained_intersections(actions),
        has_bad_configuration(actions).is_ep,
    }
    return len(verdicts) == 1


def arc_names(count: int) -> list:
    if count <= len(string.ascii_lowercase):
        return list(string.ascii_lowercase[:count])
    return [f"e{i}" for i in range(count)]


def random_term(seed, size: int, ep_only: bool = False, names: Sequence[str] | None = None) -> SPTerm:
    """Seeded random composition term with ``size`` arcs."""
    if size < 1:
        raise ModelError("size must be at least 1")
    rng = random.Random(seed)
    names = list(names) if names is not None else arc_names(size)
    if len(names) < size:
        raise ModelError("not enough arc names")
    pool = iter(names[:size])

    def build(k: int) -> SPTerm:
        if k == 1:
            return Single(next(pool))
        kind = rng.choice("SP")
        if kind == "S" and ep_only:
            if rng.random() < 0.5:
                return Series(build(1), build(k - 1))
            return Series(build(k - 1), build(1))
        left = rng.randint(1, k - 1)
        sub = build(left), build(k - left)
        return Series(*sub) if kind == "S" else Parallel(*sub)

    return build(size)


def term_to_json(term: SPTerm):
    if isinstance(term, Single):
        return term.resource
    tag = "S" if isinstance(term, Series) else "P"
    return [tag, term_to_json(term.left), term_to_json(term.right)]


def term_from_json(data) -> SPTerm:
    """Parse ``["S"|"P", t1, t2, ...]`` nested arrays; n-ary nodes fold to the left."""
    if isinstance(data, str):
        if not data:
            raise ModelError("empty resource name in term")
        return Single(data)
    if not isinstance(data, list) or len(data) < 3 or data[0] not in ("S", "P"):
        raise ModelError(f"malformed term node: {data!r}")
    node = Series if data[0] == "S" else Parallel
    parts = [term_from_json(x) for x in data[1:]]
    term = parts[0]
    for part in parts[1:]:
        term = node(term, part)
    return validate_term(term)
