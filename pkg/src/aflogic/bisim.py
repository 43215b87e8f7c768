"""Bisimulation checks for Kripke and action models.

Full bisimilarity is the greatest fixpoint, computed by partition refinement
on the disjoint union; bounded variants recurse with memoisation.  For action
models the atoms clause is provable equivalence of preconditions in the chosen
frame class, and points with unsatisfiable preconditions are discarded first:
they can never be executed, never be matched by the atoms clause, and the
correspondence construction encodes empty successor sets through them.
"""

from __future__ import annotations

from typing import Dict, FrozenSet, Iterable, List, Optional, Set, Tuple

from . import prover
from .action import ActionModel, PointedActionModel
from .budget import Budget
from .frames import FrameClass
from .kripke import KripkeModel, PointedKripkeModel

_State = Tuple[int, str]


def _check_agents(a1: FrozenSet[str], a2: FrozenSet[str]) -> List[str]:
    if a1 != a2:
        raise ValueError("bisimulation requires identical agent sets")
    return sorted(a1)


def _refine(states: List[_State], agents: List[str],
            succ: Dict[str, Dict[_State, FrozenSet[_State]]],
            initial_key) -> Dict[_State, int]:
    """Coarsest partition refining `initial_key` and respecting transitions."""
    keys = {s: initial_key(s) for s in states}
    ids = {k: i for i, k in enumerate(sorted(set(keys.values()), key=repr))}
    block = {s: ids[keys[s]] for s in states}
    while True:
        sig = {s: (block[s], tuple(tuple(sorted({block[t] for t in succ[a][s]}))
                                   for a in agents))
               for s in states}
        new_ids = {k: i for i, k in enumerate(sorted(set(sig.values())))}
        new_block = {s: new_ids[sig[s]] for s in states}
        if len(new_ids) == len(set(block.values())):
            return new_block
        block = new_block


def _union(m1: KripkeModel, m2: KripkeModel):
    agents = _check_agents(m1.agents, m2.agents)
    states: List[_State] = [(1, s) for s in sorted(m1.states)] + \
                           [(2, s) for s in sorted(m2.states)]
    succ = {a: {} for a in agents}
    for tag, m in ((1, m1), (2, m2)):
        for a in agents:
            for s in m.states:
                succ[a][(tag, s)] = frozenset((tag, t) for t in m.successors(a, s))
    val = {}
    for tag, m in ((1, m1), (2, m2)):
        for s in m.states:
            val[(tag, s)] = m.valuation[s]
    return agents, states, succ, val


def bisimilar(pm1: PointedKripkeModel, pm2: PointedKripkeModel) -> bool:
    """Greatest-fixpoint bisimilarity of two single-pointed models."""
    s1, s2 = pm1.single_point(), pm2.single_point()
    agents, states, succ, val = _union(pm1.model, pm2.model)
    block = _refine(states, agents, succ, lambda s: tuple(sorted(val[s])))
    return block[(1, s1)] == block[(2, s2)]


def n_bisimilar(pm1: PointedKripkeModel, pm2: PointedKripkeModel, n: int) -> bool:
    """Bisimilarity bounded to n relational steps; atoms always checked."""
    if n < 0:
        raise ValueError("n must be a natural number")
    s1, s2 = pm1.single_point(), pm2.single_point()
    agents = _check_agents(pm1.model.agents, pm2.model.agents)
    m1, m2 = pm1.model, pm2.model
    memo: Dict[Tuple[str, str, int], bool] = {}

    def go(x: str, y: str, k: int) -> bool:
        key = (x, y, k)
        if key in memo:
            return memo[key]
        result = m1.valuation[x] == m2.valuation[y]
        if result and k > 0:
            for a in agents:
                xs, ys = m1.successors(a, x), m2.successors(a, y)
                if not all(any(go(u, v, k - 1) for v in ys) for u in xs):
                    result = False
                    break
                if not all(any(go(u, v, k - 1) for u in xs) for v in ys):
                    result = False
                    break
        memo[key] = result
        return result

    return go(s1, s2, n)


def b_bisimilar(pm1: PointedKripkeModel, pm2: PointedKripkeModel,
                group: Iterable[str]) -> bool:
    """Atoms plus forth/back for agents in `group`, with full bisimilarity below."""
    group = frozenset(group)
    s1, s2 = pm1.single_point(), pm2.single_point()
    agents, states, succ, val = _union(pm1.model, pm2.model)
    if not group <= set(agents):
        raise ValueError("restriction group must be a subset of the agents")
    if not group:
        return True
    if pm1.model.valuation[s1] != pm2.model.valuation[s2]:
        return False
    block = _refine(states, agents, succ, lambda s: tuple(sorted(val[s])))
    for a in sorted(group):
        xs, ys = succ[a][(1, s1)], succ[a][(2, s2)]
        if not all(any(block[u] == block[v] for v in ys) for u in xs):
            return False
        if not all(any(block[u] == block[v] for u in xs) for v in ys):
            return False
    return True


def refines(pm1: PointedKripkeModel, pm2: PointedKripkeModel) -> bool:
    """True iff pm1 is a refinement of pm2 (atoms plus forth from pm1 into pm2)."""
    s1, s2 = pm1.single_point(), pm2.single_point()
    agents = _check_agents(pm1.model.agents, pm2.model.agents)
    m1, m2 = pm1.model, pm2.model
    rel: Set[Tuple[str, str]] = {(x, y) for x in m1.states for y in m2.states
                                 if m1.valuation[x] == m2.valuation[y]}
    changed = True
    while changed:
        changed = False
        for (x, y) in sorted(rel):
            for a in agents:
                if not all(any((u, v) in rel for v in m2.successors(a, y))
                           for u in m1.successors(a, x)):
                    rel.discard((x, y))
                    changed = True
                    break
    return (s1, s2) in rel


# ---------------------------------------------------------------------------
# action models


def _sat_points(am: ActionModel, cls: FrameClass, budget: Optional[Budget]) -> FrozenSet[str]:
    return frozenset(p for p in am.points
                     if prover.satisfiable(am.pre(p), cls, budget))


def _am_succ(am: ActionModel, alive: FrozenSet[str]):
    return {a: {p: frozenset(t for t in am.successors(a, p) if t in alive)
                for p in alive}
            for a in sorted(am.agents)}


def _pre_classes(pres: List, cls: FrameClass, budget: Optional[Budget]) -> List[int]:
    """Partition formulas by provable equivalence; returns class ids."""
    reps: List = []
    out = []
    for f in pres:
        for i, r in enumerate(reps):
            if f == r or prover.equiv(f, r, cls, budget):
                out.append(i)
                break
        else:
            reps.append(f)
            out.append(len(reps) - 1)
    return out


def am_bisimilar(pa1: PointedActionModel, pa2: PointedActionModel,
                 cls: FrameClass, budget: Optional[Budget] = None) -> bool:
    """Bisimilarity of action models; atoms clause is precondition equivalence."""
    p1, p2 = pa1.single_point(), pa2.single_point()
    agents = _check_agents(pa1.model.agents, pa2.model.agents)
    alive1 = _sat_points(pa1.model, cls, budget)
    alive2 = _sat_points(pa2.model, cls, budget)
    if p1 not in alive1 or p2 not in alive2:
        return p1 not in alive1 and p2 not in alive2
    states: List[_State] = [(1, s) for s in sorted(alive1)] + [(2, s) for s in sorted(alive2)]
    succ1, succ2 = _am_succ(pa1.model, alive1), _am_succ(pa2.model, alive2)
    succ = {a: {} for a in agents}
    for a in agents:
        succ[a].update({(1, s): frozenset((1, t) for t in succ1[a][s]) for s in alive1})
        succ[a].update({(2, s): frozenset((2, t) for t in succ2[a][s]) for s in alive2})
    pres = [pa1.model.pre(s) if tag == 1 else pa2.model.pre(s) for tag, s in states]
    colors = _pre_classes(pres, cls, budget)
    color = dict(zip(states, colors))
    block = _refine(states, agents, succ, lambda s: color[s])
    return block[(1, p1)] == block[(2, p2)]


def am_n_bisimilar(pa1: PointedActionModel, pa2: PointedActionModel, n: int,
                   cls: FrameClass, budget: Optional[Budget] = None) -> bool:
    """Bounded action-model bisimilarity with prover-equivalence atoms."""
    if n < 0:
        raise ValueError("n must be a natural number")
    p1, p2 = pa1.single_point(), pa2.single_point()
    agents = _check_agents(pa1.model.agents, pa2.model.agents)
    m1, m2 = pa1.model, pa2.model
    alive1 = _sat_points(m1, cls, budget)
    alive2 = _sat_points(m2, cls, budget)
    if p1 not in alive1 or p2 not in alive2:
        return p1 not in alive1 and p2 not in alive2
    succ1, succ2 = _am_succ(m1, alive1), _am_succ(m2, alive2)
    memo: Dict[Tuple[str, str, int], bool] = {}

    def go(x: str, y: str, k: int) -> bool:
        key = (x, y, k)
        if key in memo:
            return memo[key]
        result = prover.equiv(m1.pre(x), m2.pre(y), cls, budget)
        if result and k > 0:
            for a in agents:
                xs, ys = succ1[a][x], succ2[a][y]
                if not all(any(go(u, v, k - 1) for v in ys) for u in xs):
                    result = False
                    break
                if not all(any(go(u, v, k - 1) for u in xs) for v in ys):
                    result = False
                    break
        memo[key] = result
        return result

    return go(p1, p2, n)


def am_quotient(pam: PointedActionModel, cls: FrameClass,
                budget: Optional[Budget] = None) -> PointedActionModel:
    """Quotient an action model by its own greatest bisimulation.

    The result is bisimilar to the input (so execution and bounded
    bisimilarity are unaffected) and stays in the input's frame class.
    Representatives are the first member of each block in sorted order.
    """
    am = pam.model
    points = sorted(am.points)
    agents = sorted(am.agents)
    colors = _pre_classes([am.pre(p) for p in points], cls, budget)
    block = dict(zip(points, colors))
    succ = {a: {p: am.successors(a, p) for p in points} for a in agents}
    while True:
        sig = {p: (block[p], tuple(tuple(sorted({block[q] for q in succ[a][p]}))
                                   for a in agents))
               for p in points}
        ids: Dict = {}
        for p in points:
            ids.setdefault(sig[p], len(ids))
        new_block = {p: ids[sig[p]] for p in points}
        if len(ids) == len(set(block.values())):
            block = new_block
            break
        block = new_block
    rep: Dict[int, str] = {}
    for p in points:
        rep.setdefault(block[p], p)
    relations = {a: {(rep[block[x]], rep[block[y]]) for (x, y) in am.relations[a]}
                 for a in agents}
    preconditions = {rep[b]: am.pre(rep[b]) for b in rep}
    model = ActionModel(agents, rep.values(), relations, preconditions)
    return PointedActionModel(model, {rep[block[p]] for p in pam.points})
