"""Translate action formulae into pointed action models, per frame class.

Tests in K and K45 are a guard point with an every-agent edge to a skip point;
in S5 the two points share universal relations instead.  Choice is disjoint
union, composition is sequential execution with eagerly normalised
preconditions.  Learning in K hangs the translated operand below a fresh root;
K45 interposes proxy copies of the designated points so the output stays
transitive and Euclidean; S5 builds proxy cliques over both operands and
designates the proxies of the first (the action that actually occurred).
Point names are derived from the syntax-tree path, so outputs are reproducible.
"""

from __future__ import annotations

from typing import Iterable, Optional, Tuple

from .action import ActionModel, PointedActionModel, choice_union, seq_compose
from .boxelim import am_diamond_reduce
from .budget import Budget
from .frames import FrameClass
from .syntax import (TOP, ActionFormula, Choice, Compose, Formula, Learn,
                     Test, action_agents, formula_agents)


def tau(alpha: ActionFormula, cls: FrameClass, agents: Iterable[str],
        budget: Optional[Budget] = None, minimize: bool = False) -> PointedActionModel:
    """Pointed action model denoted by `alpha` over the declared agent set.

    With `minimize`, every intermediate model is quotiented by bisimulation;
    the output is then bisimilar to the exact translation rather than
    identical to it, which large compositions need to stay tractable.
    """
    agents = sorted(set(agents))
    used = action_agents(alpha)
    if not used <= set(agents):
        raise ValueError(f"action mentions undeclared agents: {sorted(used - set(agents))}")
    budget = Budget.ensure(budget)
    return _tau(alpha, cls, tuple(agents), "", budget, minimize)


def _tau(alpha: ActionFormula, cls: FrameClass, agents: Tuple[str, ...],
         path: str, budget: Budget, minimize: bool = False) -> PointedActionModel:
    budget.spend()
    if minimize:
        from .bisim import am_quotient
        shrink = lambda pam: am_quotient(pam, cls, budget)
    else:
        shrink = lambda pam: pam
    if isinstance(alpha, Test):
        return _test(alpha.condition, cls, agents, path)
    if isinstance(alpha, Choice):
        return shrink(choice_union(
            _tau(alpha.left, cls, agents, path + "0.", budget, minimize),
            _tau(alpha.right, cls, agents, path + "1.", budget, minimize)))
    if isinstance(alpha, Compose):
        left = _tau(alpha.left, cls, agents, path + "0.", budget, minimize)
        right = _tau(alpha.right, cls, agents, path + "1.", budget, minimize)
        normalize = lambda am, s, f: am_diamond_reduce(am, s, f, budget)
        return shrink(seq_compose(left, right, normalize, reachable_only=True))
    if isinstance(alpha, Learn):
        if cls is FrameClass.S5:
            return shrink(_learn_s5(alpha, agents, path, budget, minimize))
        # in K and K45 the binary operator reads as learning the choice
        if alpha.left == alpha.right:
            inner = _tau(alpha.left, cls, agents, path + "0.", budget, minimize)
        else:
            inner = _tau(Choice(alpha.left, alpha.right), cls, agents, path, budget, minimize)
        if cls is FrameClass.K:
            return shrink(_learn_k(alpha.group, inner, agents, path))
        return shrink(_learn_k45(alpha.group, inner, agents, path))
    raise TypeError(f"not an action: {alpha!r}")


def _test(condition: Formula, cls: FrameClass, agents: Tuple[str, ...],
          path: str) -> PointedActionModel:
    t, skip = path + "?t", path + "?s"
    if cls is FrameClass.S5:
        pairs = {(t, t), (t, skip), (skip, t), (skip, skip)}
    else:
        pairs = {(t, skip), (skip, skip)}
    relations = {a: set(pairs) for a in agents}
    model = ActionModel(agents, [t, skip], relations,
                        {t: condition, skip: TOP})
    return PointedActionModel(model, [t])


def _learn_k(group, inner: PointedActionModel, agents, path) -> PointedActionModel:
    im = inner.model
    root, skip = path + "Lt", path + "Ls"
    points = set(im.points) | {root, skip}
    relations = {}
    for a in agents:
        pairs = set(im.relations[a]) | {(skip, skip)}
        if a in group:
            pairs |= {(root, t) for t in inner.points}
        else:
            pairs.add((root, skip))
        relations[a] = pairs
    pre = dict(im.preconditions)
    pre[root] = TOP
    pre[skip] = TOP
    return PointedActionModel(ActionModel(agents, points, relations, pre), [root])


def _learn_k45(group, inner: PointedActionModel, agents, path) -> PointedActionModel:
    im = inner.model
    root, skip = path + "Lt", path + "Ls"
    proxies = {t: f"{path}Lp({t})" for t in sorted(inner.points)}
    points = set(im.points) | {root, skip} | set(proxies.values())
    relations = {}
    for a in agents:
        pairs = set(im.relations[a]) | {(skip, skip)}
        if a in group:
            pairs |= {(root, p) for p in proxies.values()}
            pairs |= {(p, q) for p in proxies.values() for q in proxies.values()}
        else:
            pairs.add((root, skip))
            pairs |= {(proxies[t], u) for t in inner.points
                      for u in im.successors(a, t)}
        relations[a] = pairs
    pre = dict(im.preconditions)
    pre[root] = TOP
    pre[skip] = TOP
    for t, p in proxies.items():
        pre[p] = im.pre(t)
    return PointedActionModel(ActionModel(agents, points, relations, pre), [root])


def _learn_s5(alpha: Learn, agents, path: str, budget: Budget,
              minimize: bool = False) -> PointedActionModel:
    left = _tau(alpha.left, FrameClass.S5, agents, path + "0.", budget, minimize)
    if alpha.left == alpha.right:
        right = left
    else:
        right = _tau(alpha.right, FrameClass.S5, agents, path + "1.", budget, minimize)
    lm, rm = left.model, right.model
    both = sorted(left.points | right.points)
    proxies = {t: f"{path}Lp({t})" for t in both}
    points = set(lm.points) | set(rm.points) | set(proxies.values())
    relations = {}
    for a in agents:
        pairs = set(lm.relations[a]) | set(rm.relations[a])
        if a in alpha.group:
            pairs |= {(proxies[t], proxies[u]) for t in both for u in both}
        else:
            union_rel = lm.relations[a] | rm.relations[a]
            for t in both:
                cluster = {proxies[t]} | {v for u, v in union_rel if u == t}
                pairs |= {(x, y) for x in cluster for y in cluster}
        relations[a] = pairs
    pre = dict(lm.preconditions)
    pre.update(rm.preconditions)
    for t, p in proxies.items():
        pre[p] = pre[t]
    model = ActionModel(agents, points, relations, pre)
    return PointedActionModel(model, [proxies[t] for t in sorted(left.points)])
