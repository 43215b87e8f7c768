"""Action formulae matching a given action model up to bounded bisimilarity.

Depth zero is a bare test on the point's precondition.  At positive depth in K
and K45 the formula tests the precondition and then, agent by agent, learns
the choice of the successors' formulae one level down; an agent with no
successors learns an unexecutable test, whose translation only adds points
with unsatisfiable preconditions.  In S5 composing with a test is unusable
(the test's reflexive skip point leaks guard-mixed preconditions into every
cluster), so the learnings are nested instead: each agent's learning takes the
previously built formula as the action that actually occurred, which rebuilds
that agent's cluster while preserving the ones already in place.
"""

from __future__ import annotations

from typing import Dict, Optional, Tuple

from .action import PointedActionModel
from .budget import Budget
from .frames import FrameClass
from .syntax import (BOTTOM, TOP, ActionFormula, Learn, Test, big_choice,
                     big_compose)


def correspond(pam: PointedActionModel, n: int, cls: FrameClass,
               budget: Optional[Budget] = None) -> ActionFormula:
    """An action formula whose translation is n-bisimilar to (pam, its point)."""
    if n < 0:
        raise ValueError("depth must be a natural number")
    point = pam.single_point()
    budget = Budget.ensure(budget)
    am = pam.model
    agents = sorted(am.agents)
    memo: Dict[Tuple[str, int], ActionFormula] = {}

    def build(s: str, k: int) -> ActionFormula:
        key = (s, k)
        if key in memo:
            return memo[key]
        budget.spend()
        if cls is FrameClass.S5:
            result = build_s5(s, k)
        else:
            parts = [Test(am.pre(s))]
            if k > 0:
                for a in agents:
                    succ = sorted(am.successors(a, s))
                    if not succ:
                        parts.append(Learn(frozenset([a]), Test(BOTTOM), Test(BOTTOM)))
                        continue
                    chosen = big_choice([build(t, k - 1) for t in succ])
                    parts.append(Learn(frozenset([a]), chosen, chosen))
            result = big_compose(parts)
        memo[key] = result
        return result

    def build_s5(s: str, k: int) -> ActionFormula:
        if k == 0:
            return Test(am.pre(s))
        acc = build(s, k - 1)
        for a in agents:
            succ = sorted(am.successors(a, s))
            if not succ:
                raise ValueError(
                    f"point {s!r} has no {a}-successors; not an S5 action model")
            chosen = big_choice([build(t, k - 1) for t in succ])
            acc = Learn(frozenset([a]), acc, chosen)
        return acc

    return build(point, n)


def correspond_multi(pam: PointedActionModel, n: int, cls: FrameClass,
                     budget: Optional[Budget] = None) -> ActionFormula:
    """Choice over the single-point correspondences of each designated point."""
    return big_choice([correspond(pam.at(p), n, cls, budget)
                       for p in sorted(pam.points)])
