"""Rewrite formulae of the full language to equivalent basic modal formulae.

Elimination is innermost-first.  A dynamic box is translated through the
action-model construction and then eliminated by the action-model reduction
axioms; a refinement quantifier is eliminated by converting its (already
basic) body to the class normal form and distributing the existential over
covers.  The K-only fast path instead rewrites dynamic boxes purely
syntactically, with learning clauses commuting with agent boxes.
"""

from __future__ import annotations

from typing import Dict, Iterable, Optional

from .boxelim import am_box_reduce
from .budget import Budget
from .fold import (s_and, s_and_all, s_box, s_diamond, s_iff, s_implies,
                   s_not, s_or, s_or_all)
from .frames import FrameClass
from .normform import to_adnf, to_dnf, to_explicit
from .syntax import (And, Atom, Bottom, Box, Choice, Compose, Cover, Diamond,
                     DynBox, DynDiamond, Formula, Iff, Implies, Learn, Not,
                     Or, RefBox, RefDiamond, Test, Top, expand_cover,
                     formula_agents, is_propositional, map_action_tests,
                     print_formula)
from .tau import tau


def reduce_formula(f: Formula, cls: FrameClass, budget: Optional[Budget] = None,
                   agents: Optional[Iterable[str]] = None) -> Formula:
    """Equivalent basic formula, for models over `agents` (default: f's own)."""
    budget = Budget.ensure(budget)
    ambient = sorted(set(agents) if agents is not None else formula_agents(f))
    exists_memo: Dict[Formula, Formula] = {}

    def rec(g: Formula) -> Formula:
        budget.spend()
        if isinstance(g, (Top, Bottom, Atom)):
            return g
        if isinstance(g, Not):
            return s_not(rec(g.body))
        if isinstance(g, And):
            return s_and(rec(g.left), rec(g.right))
        if isinstance(g, Or):
            return s_or(rec(g.left), rec(g.right))
        if isinstance(g, Implies):
            return s_implies(rec(g.left), rec(g.right))
        if isinstance(g, Iff):
            return s_iff(rec(g.left), rec(g.right))
        if isinstance(g, Box):
            return s_box(g.agent, rec(g.body))
        if isinstance(g, Diamond):
            return s_diamond(g.agent, rec(g.body))
        if isinstance(g, Cover):
            return Cover(g.agent, frozenset(rec(m) for m in g.members))
        if isinstance(g, DynBox):
            body = rec(g.body)
            action = map_action_tests(g.action, rec)
            pam = tau(action, cls, ambient, budget)
            return am_box_reduce(pam.model, pam.points, body, budget)
        if isinstance(g, DynDiamond):
            body = rec(g.body)
            action = map_action_tests(g.action, rec)
            pam = tau(action, cls, ambient, budget)
            return s_not(am_box_reduce(pam.model, pam.points, s_not(body), budget))
        if isinstance(g, RefBox):
            return s_not(exists(s_not(rec(g.body))))
        if isinstance(g, RefDiamond):
            return exists(rec(g.body))
        raise TypeError(f"not a formula: {g!r}")

    def exists(g: Formula) -> Formula:
        """Eliminate one existential refinement quantifier over a basic body."""
        if g in exists_memo:
            return exists_memo[g]
        budget.spend()
        if is_propositional(g):
            result = g
        elif cls is FrameClass.S5:
            parts = []
            for d in to_explicit(g, budget).disjuncts:
                conj = [d.pi, exists(d.gamma0)]
                for agent, members in d.covers:
                    conj.extend(s_diamond(agent, exists(m))
                                for m in sorted(members, key=print_formula))
                parts.append(s_and_all(conj))
            result = s_or_all(parts)
        else:
            form = to_dnf(g, budget) if cls is FrameClass.K else to_adnf(g, budget)
            parts = []
            for clause in form.clauses:
                conj = [clause.pi]
                for agent, members in clause.covers:
                    conj.extend(s_diamond(agent, exists(m.to_formula()))
                                for m in members)
                parts.append(s_and_all(conj))
            result = s_or_all(parts)
        exists_memo[g] = result
        return result

    return rec(f)


def reduce_afl_fastpath(f: Formula, cls: FrameClass = FrameClass.K,
                        budget: Optional[Budget] = None) -> Formula:
    """K-only syntactic elimination of dynamic boxes by the learning axioms."""
    if cls is not FrameClass.K:
        raise ValueError("the fast path applies the K axiomatisation only")
    budget = Budget.ensure(budget)

    def rec(g: Formula) -> Formula:
        budget.spend()
        if isinstance(g, (Top, Bottom, Atom)):
            return g
        if isinstance(g, Not):
            return s_not(rec(g.body))
        if isinstance(g, And):
            return s_and(rec(g.left), rec(g.right))
        if isinstance(g, Or):
            return s_or(rec(g.left), rec(g.right))
        if isinstance(g, Implies):
            return s_implies(rec(g.left), rec(g.right))
        if isinstance(g, Iff):
            return s_iff(rec(g.left), rec(g.right))
        if isinstance(g, Box):
            return s_box(g.agent, rec(g.body))
        if isinstance(g, Diamond):
            return s_diamond(g.agent, rec(g.body))
        if isinstance(g, Cover):
            return Cover(g.agent, frozenset(rec(m) for m in g.members))
        if isinstance(g, DynBox):
            return step(map_action_tests(g.action, rec), rec(g.body))
        if isinstance(g, DynDiamond):
            return s_not(step(map_action_tests(g.action, rec), s_not(rec(g.body))))
        if isinstance(g, (RefBox, RefDiamond)):
            # refinement quantifiers take the main path
            return rec(reduce_formula(g, cls, budget))
        raise TypeError(f"not a formula: {g!r}")

    def step(action, body: Formula) -> Formula:
        """[action] body with a basic body, by LT/LU/LS/LP/LN/LC/LK1/LK2."""
        budget.spend()
        if isinstance(action, Test):
            return s_implies(action.condition, body)
        if isinstance(action, Choice):
            return s_and(step(action.left, body), step(action.right, body))
        if isinstance(action, Compose):
            return step(action.left, step(action.right, body))
        assert isinstance(action, Learn)
        if isinstance(body, (Top, Bottom, Atom)):
            return body
        if isinstance(body, Not):
            return s_not(step(action, body.body))
        if isinstance(body, And):
            return s_and(step(action, body.left), step(action, body.right))
        if isinstance(body, Box):
            if body.agent in action.group:
                learned = action.left if action.left == action.right \
                    else Choice(action.left, action.right)
                return s_box(body.agent, step(learned, body.body))
            return s_box(body.agent, body.body)
        if isinstance(body, Or):
            return step(action, Not(And(Not(body.left), Not(body.right))))
        if isinstance(body, Implies):
            return step(action, Not(And(body.left, Not(body.right))))
        if isinstance(body, Iff):
            return step(action, And(Implies(body.left, body.right),
                                    Implies(body.right, body.left)))
        if isinstance(body, Diamond):
            return step(action, Not(Box(body.agent, Not(body.body))))
        if isinstance(body, Cover):
            return step(action, expand_cover(body.agent, body.members))
        raise ValueError(f"fast path requires a basic continuation: {print_formula(body)}")

    return rec(f)
