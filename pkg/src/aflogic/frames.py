"""Frame classes and the relation predicates that define them."""

from __future__ import annotations

import enum
from typing import FrozenSet, Iterable, Set, Tuple

Pair = Tuple[str, str]


class FrameClass(enum.Enum):
    """Semantic regime: no constraints, belief (KD-less), or knowledge."""

    K = "k"
    K45 = "k45"
    S5 = "s5"

    @classmethod
    def from_string(cls, text: str) -> "FrameClass":
        try:
            return cls(text.strip().lower())
        except ValueError:
            raise ValueError(f"unknown frame class {text!r} (expected k, k45 or s5)") from None


def is_reflexive(pairs: Iterable[Pair], states: Iterable[str]) -> bool:
    rel = set(pairs)
    return all((s, s) in rel for s in states)


def is_transitive(pairs: Iterable[Pair]) -> bool:
    rel = set(pairs)
    succ: dict = {}
    for x, y in rel:
        succ.setdefault(x, set()).add(y)
    for x, y in rel:
        for z in succ.get(y, ()):
            if (x, z) not in rel:
                return False
    return True


def is_euclidean(pairs: Iterable[Pair]) -> bool:
    rel = set(pairs)
    succ: dict = {}
    for x, y in rel:
        succ.setdefault(x, set()).add(y)
    for x, ys in succ.items():
        for y in ys:
            for z in ys:
                if (y, z) not in rel:
                    return False
    return True


def relation_in_class(pairs: Iterable[Pair], states: Iterable[str], cls: FrameClass) -> bool:
    """Check one agent relation against a frame class."""
    pairs = set(pairs)
    if cls is FrameClass.K:
        return True
    if cls is FrameClass.K45:
        return is_transitive(pairs) and is_euclidean(pairs)
    return is_reflexive(pairs, states) and is_transitive(pairs) and is_euclidean(pairs)


def transitive_euclidean_closure(pairs: Iterable[Pair]) -> FrozenSet[Pair]:
    """Smallest transitive and Euclidean relation containing `pairs`."""
    rel: Set[Pair] = set(pairs)
    changed = True
    while changed:
        changed = False
        for x, y in list(rel):
            for u, v in list(rel):
                if y == u and (x, v) not in rel:
                    rel.add((x, v))
                    changed = True
                if x == u and (y, v) not in rel:
                    rel.add((y, v))
                    changed = True
    return frozenset(rel)
