"""Rewrite boxes over concrete action models into basic modal formulae.

This is the reduction-axiom engine for action-model boxes: a multi-pointed box
splits into a conjunction over its points; at a single point, atoms become
guarded implications, negation and conjunction commute under the guard, and an
agent box steps the designated set along the action relation.  Derived
connectives are lowered to negation/conjunction/box first.  The continuation
formula must already be basic, which the callers guarantee by rewriting
innermost operators first.
"""

from __future__ import annotations

from typing import Iterable, Optional

from .action import ActionModel
from .budget import Budget
from .fold import s_and, s_and_all, s_box, s_implies, s_not
from .syntax import (And, Atom, Bottom, Box, Cover, Diamond, Formula, Iff,
                     Implies, Not, Or, Top, expand_cover, print_formula)


def am_box_reduce(am: ActionModel, points: Iterable[str], f: Formula,
                  budget: Optional[Budget] = None) -> Formula:
    """Basic formula equivalent to the box over (am, points) applied to basic f."""
    budget = Budget.ensure(budget)
    return _box(am, tuple(sorted(set(points))), f, budget)


def am_diamond_reduce(am: ActionModel, point: str, f: Formula,
                      budget: Optional[Budget] = None) -> Formula:
    """Basic formula equivalent to the diamond over (am, {point}) applied to f."""
    budget = Budget.ensure(budget)
    return s_not(_box(am, (point,), s_not(f), budget))


def _box(am: ActionModel, points: tuple, f: Formula, budget: Budget) -> Formula:
    budget.spend()
    if len(points) != 1:
        return s_and_all(_box(am, (t,), f, budget) for t in points)
    t = points[0]
    pre = am.pre(t)
    if isinstance(f, Top):
        return f
    if isinstance(f, Bottom):
        return s_not(pre)
    if isinstance(f, Atom):
        return s_implies(pre, f)
    if isinstance(f, Not):
        return s_implies(pre, s_not(_box(am, points, f.body, budget)))
    if isinstance(f, And):
        return s_and(_box(am, points, f.left, budget), _box(am, points, f.right, budget))
    if isinstance(f, Box):
        successors = tuple(sorted(am.successors(f.agent, t)))
        return s_implies(pre, s_box(f.agent, _box(am, successors, f.body, budget)))
    if isinstance(f, Or):
        return _box(am, points, Not(And(Not(f.left), Not(f.right))), budget)
    if isinstance(f, Implies):
        return _box(am, points, Not(And(f.left, Not(f.right))), budget)
    if isinstance(f, Iff):
        return _box(am, points, And(Implies(f.left, f.right), Implies(f.right, f.left)), budget)
    if isinstance(f, Diamond):
        return _box(am, points, Not(Box(f.agent, Not(f.body))), budget)
    if isinstance(f, Cover):
        return _box(am, points, expand_cover(f.agent, f.members), budget)
    raise ValueError(f"action-model box elimination requires a basic body: {print_formula(f)}")
