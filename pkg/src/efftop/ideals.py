"""The space of ideals of a c.e. transitive relation, prefix validation,
and the ceer correspondence for discrete ideal spaces.

An ideal name enumerates the ideal's elements directly (repetition is the
padding mechanism, so finite ideals have names).  Validation is
refutation-style: it reports the downward-closure and directedness
obligations still outstanding at a given fuel, never asserting that a
name is valid outright.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, List, Optional, Sequence, Set, Tuple

from .ceers import CeerPresentation, saturate
from .kernel import unpair


class RelationPresentation:
    """Deterministic stream of pairs (x, y) meaning x ≪ y.

    Transitivity is an obligation of the supplier; ``transitivity_gaps``
    reports observed violations rather than assuming their absence.
    """

    def __init__(self, pairs: Optional[Sequence[Tuple[int, int]]] = None,
                 pair_fn: Optional[Callable[[int], List[Tuple[int, int]]]] = None,
                 label: str = ""):
        if (pairs is None) == (pair_fn is None):
            raise ValueError("exactly one pair source required")
        self.pairs = [tuple(p) for p in pairs] if pairs is not None else None
        self.pair_fn = pair_fn
        self.label = label

    def pairs_within(self, fuel: int) -> List[Tuple[int, int]]:
        if self.pairs is not None:
            return self.pairs[:fuel]
        return list(self.pair_fn(fuel))

    def transitivity_gaps(self, fuel: int) -> List[Tuple[int, int, int]]:
        seen = set(self.pairs_within(fuel))
        gaps = []
        for (x, y) in seen:
            for (y2, z) in seen:
                if y == y2 and (x, z) not in seen:
                    gaps.append((x, y, z))
        return gaps


@dataclass
class IdealObligations:
    """Outstanding evidence that a prefix fails to enumerate an ideal."""

    pending_down: Set[Tuple[int, int]] = field(default_factory=set)
    pending_directed: Set[Tuple[int, int]] = field(default_factory=set)

    @property
    def clean(self) -> bool:
        return not self.pending_down and not self.pending_directed


def validate_ideal_prefix(rel: RelationPresentation, prefix: Sequence[int],
                          fuel: int) -> IdealObligations:
    """Obligations observable from the relation pairs enumerated within
    fuel against the set of elements the prefix has emitted.

    pending_down holds pairs (x, y) with x ≪ y, y enumerated, x not;
    pending_directed holds element pairs with no common ≪-upper bound
    among the enumerated elements.
    """
    emitted = set(prefix)
    pairs = set(rel.pairs_within(fuel))
    down = {(x, y) for (x, y) in pairs if y in emitted and x not in emitted}
    above = {e: {z for (x, z) in pairs if x == e} for e in emitted}
    directed = set()
    for x in emitted:
        for y in emitted:
            if x <= y:
                bounds = above[x] & above[y] & emitted
                if not bounds:
                    directed.add((x, y))
    return IdealObligations(pending_down=down, pending_directed=directed)


def ceer_to_ideal_space(pres: CeerPresentation) -> RelationPresentation:
    """The transitive relation whose ideals are exactly the R-classes.

    Emits every ordered pair of merged elements (including reflexive
    pairs): directedness then forces a subset to stay within one class
    and downward closure forces it to exhaust that class, so the maximal
    validated sets are the full equivalence classes.
    """

    def pair_fn(fuel: int) -> List[Tuple[int, int]]:
        state = saturate(pres, fuel)
        out = []
        for k in range(fuel):
            a, b = unpair(k)
            if a == b or state.same(a, b):
                out.append((a, b))
        return out

    return RelationPresentation(pair_fn=pair_fn, label="ceer-induced")


# ---------------------------------------------------------------------------
# Relation file format: header `rel v1`, lines `x y` meaning x ≪ y.


def parse_relation(text: str) -> RelationPresentation:
    lines = text.splitlines()
    if not lines or lines[0].strip() != "rel v1":
        raise ValueError("expected header 'rel v1'")
    pairs = []
    for ln in lines[1:]:
        stripped = ln.split("#", 1)[0].strip()
        if not stripped:
            continue
        x, y = stripped.split()
        pairs.append((int(x), int(y)))
    return RelationPresentation(pairs=pairs)


def format_relation(rel: RelationPresentation) -> str:
    if rel.pairs is None:
        raise ValueError("derived relations have no file form")
    return "rel v1\n" + "".join(f"{x} {y}\n" for x, y in rel.pairs)
