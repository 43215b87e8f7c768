"""Smart constructors that fold boolean constants (the only simplification reduce performs)."""

from __future__ import annotations

from .syntax import (BOTTOM, TOP, And, Atom, Bottom, Box, Diamond, Formula,
                     Iff, Implies, Not, Or, Top)


def s_not(f: Formula) -> Formula:
    if isinstance(f, Top):
        return BOTTOM
    if isinstance(f, Bottom):
        return TOP
    if isinstance(f, Not):
        return f.body
    return Not(f)


def s_and(left: Formula, right: Formula) -> Formula:
    if isinstance(left, Bottom) or isinstance(right, Bottom):
        return BOTTOM
    if isinstance(left, Top):
        return right
    if isinstance(right, Top):
        return left
    return And(left, right)


def s_or(left: Formula, right: Formula) -> Formula:
    if isinstance(left, Top) or isinstance(right, Top):
        return TOP
    if isinstance(left, Bottom):
        return right
    if isinstance(right, Bottom):
        return left
    return Or(left, right)


def s_implies(left: Formula, right: Formula) -> Formula:
    if isinstance(left, Bottom) or isinstance(right, Top):
        return TOP
    if isinstance(left, Top):
        return right
    if isinstance(right, Bottom):
        return s_not(left)
    return Implies(left, right)


def s_iff(left: Formula, right: Formula) -> Formula:
    if isinstance(left, Top):
        return right
    if isinstance(right, Top):
        return left
    if isinstance(left, Bottom):
        return s_not(right)
    if isinstance(right, Bottom):
        return s_not(left)
    return Iff(left, right)


def s_box(agent: str, body: Formula) -> Formula:
    # [a] true is vacuously true; no dual fold for diamonds of true.
    if isinstance(body, Top):
        return TOP
    return Box(agent, body)


def s_diamond(agent: str, body: Formula) -> Formula:
    if isinstance(body, Bottom):
        return BOTTOM
    return Diamond(agent, body)


def _fold_balanced(parts, combine, unit) -> Formula:
    parts = [p for p in parts]
    if not parts:
        return unit
    while len(parts) > 1:
        merged = []
        for i in range(0, len(parts) - 1, 2):
            merged.append(combine(parts[i], parts[i + 1]))
        if len(parts) % 2:
            merged.append(parts[-1])
        parts = merged
    return parts[0]


def s_and_all(parts) -> Formula:
    return _fold_balanced(parts, s_and, TOP)


def s_or_all(parts) -> Formula:
    return _fold_balanced(parts, s_or, BOTTOM)
