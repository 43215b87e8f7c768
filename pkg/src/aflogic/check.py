"""Model checking for the full language, plus seeded random instance generators.

The basic evaluator is standard Kripke semantics with multi-pointed
satisfaction read as satisfaction at every designated state (so an empty
designated set is vacuously true).  The full checker translates dynamic boxes
through the action-model construction and executes them, evaluating stored
preconditions recursively through itself; refinement quantifiers are never
enumerated, only rewritten.
"""

from __future__ import annotations

import random
from typing import Iterable, List, Optional, Sequence, Set

from .action import execute
from .budget import Budget
from .frames import FrameClass, transitive_euclidean_closure
from .kripke import KripkeModel, PointedKripkeModel, frame_class_holds
from .reduction import reduce_formula
from .syntax import (BOTTOM, TOP, ActionFormula, And, Atom, Bottom, Box,
                     Choice, Compose, Cover, Diamond, DynBox, DynDiamond,
                     Formula, Iff, Implies, Learn, Not, Or, RefBox,
                     RefDiamond, Test, Top, print_formula)
from .tau import tau


def eval_basic(pm: PointedKripkeModel, f: Formula) -> bool:
    """Basic-formula satisfaction at every designated state."""
    return all(_ev(pm.model, s, f) for s in pm.points)


def _ev(m: KripkeModel, s: str, f: Formula) -> bool:
    if isinstance(f, Top):
        return True
    if isinstance(f, Bottom):
        return False
    if isinstance(f, Atom):
        return f.name in m.valuation[s]
    if isinstance(f, Not):
        return not _ev(m, s, f.body)
    if isinstance(f, And):
        return _ev(m, s, f.left) and _ev(m, s, f.right)
    if isinstance(f, Or):
        return _ev(m, s, f.left) or _ev(m, s, f.right)
    if isinstance(f, Implies):
        return not _ev(m, s, f.left) or _ev(m, s, f.right)
    if isinstance(f, Iff):
        return _ev(m, s, f.left) == _ev(m, s, f.right)
    if isinstance(f, Box):
        return all(_ev(m, t, f.body) for t in m.successors(f.agent, s))
    if isinstance(f, Diamond):
        return any(_ev(m, t, f.body) for t in m.successors(f.agent, s))
    if isinstance(f, Cover):
        succ = m.successors(f.agent, s)
        members = list(f.members)
        if not all(any(_ev(m, t, g) for g in members) for t in succ):
            return False
        return all(any(_ev(m, t, g) for t in succ) for g in members)
    raise ValueError(f"eval_basic requires a basic formula: {print_formula(f)}")


def check(pm: PointedKripkeModel, f: Formula, cls: FrameClass,
          budget: Optional[Budget] = None) -> bool:
    """Full-language satisfaction; the input model must belong to the class."""
    if not frame_class_holds(pm.model, cls):
        raise ValueError(f"model is not in class {cls.value}")
    budget = Budget.ensure(budget)
    return all(_ck(pm.model, s, f, cls, budget) for s in pm.points)


def _ck(m: KripkeModel, s: str, f: Formula, cls: FrameClass, budget: Budget) -> bool:
    budget.spend()
    if isinstance(f, (Top, Bottom, Atom)):
        return _ev(m, s, f)
    if isinstance(f, Not):
        return not _ck(m, s, f.body, cls, budget)
    if isinstance(f, And):
        return _ck(m, s, f.left, cls, budget) and _ck(m, s, f.right, cls, budget)
    if isinstance(f, Or):
        return _ck(m, s, f.left, cls, budget) or _ck(m, s, f.right, cls, budget)
    if isinstance(f, Implies):
        return not _ck(m, s, f.left, cls, budget) or _ck(m, s, f.right, cls, budget)
    if isinstance(f, Iff):
        return _ck(m, s, f.left, cls, budget) == _ck(m, s, f.right, cls, budget)
    if isinstance(f, Box):
        return all(_ck(m, t, f.body, cls, budget) for t in m.successors(f.agent, s))
    if isinstance(f, Diamond):
        return any(_ck(m, t, f.body, cls, budget) for t in m.successors(f.agent, s))
    if isinstance(f, Cover):
        succ = m.successors(f.agent, s)
        members = list(f.members)
        if not all(any(_ck(m, t, g, cls, budget) for g in members) for t in succ):
            return False
        return all(any(_ck(m, t, g, cls, budget) for t in succ) for g in members)
    if isinstance(f, DynBox):
        pam = tau(f.action, cls, sorted(m.agents), budget)
        result = execute(PointedKripkeModel(m, [s]), pam,
                         sat=lambda st, pre: _ck(m, st, pre, cls, budget))
        if not result.model.states or not result.points:
            return True  # failed execution: vacuously true
        if not frame_class_holds(result.model, cls):
            return True  # update left the class: vacuously true
        return all(_ck(result.model, t, f.body, cls, budget) for t in result.points)
    if isinstance(f, DynDiamond):
        return not _ck(m, s, DynBox(f.action, Not(f.body)), cls, budget)
    if isinstance(f, (RefBox, RefDiamond)):
        reduced = reduce_formula(f, cls, budget, agents=m.agents)
        return _ev(m, s, reduced)
    raise TypeError(f"not a formula: {f!r}")


def check_via_reduction(pm: PointedKripkeModel, f: Formula, cls: FrameClass,
                        budget: Optional[Budget] = None) -> bool:
    """Reduce to a basic formula, then evaluate; must agree with `check`."""
    if not frame_class_holds(pm.model, cls):
        raise ValueError(f"model is not in class {cls.value}")
    return eval_basic(pm, reduce_formula(f, cls, budget, agents=pm.model.agents))


# ---------------------------------------------------------------------------
# seeded random instances


def sample_model(cls: FrameClass, max_states: int, agents: Iterable[str],
                 atoms: Iterable[str], seed: int) -> PointedKripkeModel:
    """Pseudo-random model guaranteed to lie in the class; deterministic in seed."""
    if max_states < 1:
        raise ValueError("max_states must be at least 1")
    rng = random.Random(seed)
    agents = sorted(set(agents))
    atoms = sorted(set(atoms))
    n = rng.randint(1, max_states)
    states = [f"s{i}" for i in range(n)]
    valuation = {s: {p for p in atoms if rng.random() < 0.5} for s in states}
    relations = {}
    for a in agents:
        if cls is FrameClass.K:
            pairs = {(x, y) for x in states for y in states if rng.random() < 0.35}
        elif cls is FrameClass.K45:
            seeded = {(x, y) for x in states for y in states if rng.random() < 0.2}
            pairs = transitive_euclidean_closure(seeded)
        else:
            blocks = [rng.randrange(max(1, n // 2 + 1)) for _ in states]
            pairs = {(x, y) for i, x in enumerate(states)
                     for j, y in enumerate(states) if blocks[i] == blocks[j]}
        relations[a] = pairs
    model = KripkeModel(agents, states, relations, valuation)
    return PointedKripkeModel(model, [rng.choice(states)])


def sample_formula(depth: int, agents: Sequence[str], atoms: Sequence[str],
                   seed: int, dynamic: int = 0, refinement: int = 0,
                   size: int = 24) -> Formula:
    """Random well-formed formula of modal depth at most `depth`.

    `size` bounds the overall node count so boolean nesting stays desk-scale.
    """
    rng = random.Random(seed)
    agents = list(agents)
    atoms = list(atoms)
    counters = {"dyn": dynamic, "ref": refinement, "size": size}
    return _gen_formula(rng, depth, agents, atoms, counters)


def _gen_formula(rng, depth, agents, atoms, counters) -> Formula:
    counters["size"] -= 1
    leaves = ["atom", "natom", "top", "bottom"]
    if depth <= 0 or counters["size"] <= 0:
        kind = rng.choice(leaves)
    else:
        kinds = leaves + ["not", "and", "and", "or", "implies"]
        if agents:
            kinds += ["box", "box", "diamond", "diamond", "cover"]
            if counters["dyn"] > 0:
                kinds += ["dynbox", "dyndiamond"]
            if counters["ref"] > 0:
                kinds += ["refbox", "refdiamond"]
        kind = rng.choice(kinds)
    if kind == "atom":
        return Atom(rng.choice(atoms))
    if kind == "natom":
        return Not(Atom(rng.choice(atoms)))
    if kind == "top":
        return TOP
    if kind == "bottom":
        return BOTTOM
    if kind == "not":
        return Not(_gen_formula(rng, depth, agents, atoms, counters))
    if kind in ("and", "or", "implies"):
        left = _gen_formula(rng, depth, agents, atoms, counters)
        right = _gen_formula(rng, depth, agents, atoms, counters)
        return {"and": And, "or": Or, "implies": Implies}[kind](left, right)
    if kind == "box":
        return Box(rng.choice(agents), _gen_formula(rng, depth - 1, agents, atoms, counters))
    if kind == "diamond":
        return Diamond(rng.choice(agents), _gen_formula(rng, depth - 1, agents, atoms, counters))
    if kind == "cover":
        k = rng.randint(0, 2)
        members = frozenset(_gen_formula(rng, depth - 1, agents, atoms, counters)
                            for _ in range(k))
        return Cover(rng.choice(agents), members)
    if kind in ("dynbox", "dyndiamond"):
        counters["dyn"] -= 1
        action = _gen_action(rng, max(depth - 1, 0), agents, atoms, counters)
        body = _gen_formula(rng, depth - 1, agents, atoms, counters)
        return DynBox(action, body) if kind == "dynbox" else DynDiamond(action, body)
    counters["ref"] -= 1
    body = _gen_formula(rng, depth - 1, agents, atoms, counters)
    return RefBox(body) if kind == "refbox" else RefDiamond(body)


def sample_action(depth: int, agents: Sequence[str], atoms: Sequence[str],
                  seed: int, size: int = 24) -> ActionFormula:
    """Random well-formed action; deterministic in seed."""
    rng = random.Random(seed)
    return _gen_action(rng, depth, list(agents), list(atoms),
                       {"dyn": 0, "ref": 0, "size": size})


def _gen_action(rng, depth, agents, atoms, counters) -> ActionFormula:
    counters["size"] -= 1
    if depth <= 0 or counters["size"] <= 0:
        return Test(_gen_formula(rng, 0, agents, atoms, counters))
    kind = rng.choice(["test", "test", "choice", "compose", "learn", "learn"])
    if kind == "test":
        return Test(_gen_formula(rng, depth - 1, agents, atoms, counters))
    if kind == "choice":
        return Choice(_gen_action(rng, depth - 1, agents, atoms, counters),
                      _gen_action(rng, depth - 1, agents, atoms, counters))
    if kind == "compose":
        return Compose(_gen_action(rng, depth - 1, agents, atoms, counters),
                       _gen_action(rng, depth - 1, agents, atoms, counters))
    group = frozenset(rng.sample(agents, rng.randint(1, len(agents))))
    left = _gen_action(rng, depth - 1, agents, atoms, counters)
    if rng.random() < 0.5:
        return Learn(group, left, left)
    return Learn(group, left, _gen_action(rng, depth - 1, agents, atoms, counters))


def sample_action_model(cls: FrameClass, max_points: int, agents: Iterable[str],
                        atoms: Iterable[str], seed: int):
    """Pseudo-random action model in the class, with shallow basic preconditions."""
    from .action import ActionModel, PointedActionModel
    if max_points < 1:
        raise ValueError("max_points must be at least 1")
    rng = random.Random(seed)
    agents = sorted(set(agents))
    atoms = sorted(set(atoms))
    n = rng.randint(1, max_points)
    points = [f"e{i}" for i in range(n)]
    pres = {}
    for e in points:
        pres[e] = _gen_formula(rng, rng.choice([0, 0, 0, 1]), agents, atoms,
                               {"dyn": 0, "ref": 0, "size": 8})
    relations = {}
    for a in agents:
        if cls is FrameClass.K:
            pairs = {(x, y) for x in points for y in points if rng.random() < 0.4}
        elif cls is FrameClass.K45:
            seeded = {(x, y) for x in points for y in points if rng.random() < 0.25}
            pairs = transitive_euclidean_closure(seeded)
        else:
            blocks = [rng.randrange(max(1, n // 2 + 1)) for _ in points]
            pairs = {(x, y) for i, x in enumerate(points)
                     for j, y in enumerate(points) if blocks[i] == blocks[j]}
        relations[a] = pairs
    model = ActionModel(agents, points, relations, pres)
    return PointedActionModel(model, [rng.choice(points)])
