"""Action models, product update, sequential composition and choice."""

from __future__ import annotations

import json
from typing import Callable, Dict, FrozenSet, Iterable, Mapping, Tuple

from .frames import FrameClass, Pair, relation_in_class
from .kripke import KripkeModel, PointedKripkeModel
from .syntax import Formula, parse_formula, print_formula

SatOracle = Callable[[str, Formula], bool]
NormalizeOracle = Callable[["ActionModel", str, Formula], Formula]


class ActionModel:
    """Like a Kripke model, but points carry precondition formulae."""

    __slots__ = ("agents", "points", "relations", "preconditions")

    def __init__(self, agents: Iterable[str], points: Iterable[str],
                 relations: Mapping[str, Iterable[Pair]],
                 preconditions: Mapping[str, Formula]):
        self.agents: FrozenSet[str] = frozenset(agents)
        self.points: FrozenSet[str] = frozenset(points)
        if not self.points:
            raise ValueError("action point set must be non-empty")
        if set(relations) != self.agents:
            raise ValueError("relations must be defined for exactly the declared agents")
        rel: Dict[str, FrozenSet[Pair]] = {}
        for a in self.agents:
            pairs = frozenset(tuple(p) for p in relations[a])
            for s, t in pairs:
                if s not in self.points or t not in self.points:
                    raise ValueError(f"relation endpoint ({s}, {t}) outside the point set")
            rel[a] = pairs
        self.relations = rel
        if set(preconditions) != self.points:
            raise ValueError("preconditions must be total over the points")
        self.preconditions = dict(preconditions)

    def successors(self, agent: str, point: str) -> FrozenSet[str]:
        if agent not in self.relations:
            raise ValueError(f"unknown agent {agent!r}")
        return frozenset(t for s, t in self.relations[agent] if s == point)

    def pre(self, point: str) -> Formula:
        return self.preconditions[point]

    def _key(self):
        return (self.agents, self.points,
                tuple(sorted((a, tuple(sorted(p))) for a, p in self.relations.items())),
                tuple(sorted((s, print_formula(f)) for s, f in self.preconditions.items())))

    def __eq__(self, other):
        return isinstance(other, ActionModel) and self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    def __repr__(self):
        return f"ActionModel(points={sorted(self.points)})"


class PointedActionModel:
    __slots__ = ("model", "points")

    def __init__(self, model: ActionModel, points: Iterable[str]):
        self.model = model
        self.points: FrozenSet[str] = frozenset(points)
        if not self.points:
            raise ValueError("designated point set must be non-empty")
        if not self.points <= model.points:
            raise ValueError("designated points must belong to the model")

    def single_point(self) -> str:
        if len(self.points) != 1:
            raise ValueError(f"expected a single designated point, got {sorted(self.points)}")
        return next(iter(self.points))

    def at(self, point: str) -> "PointedActionModel":
        return PointedActionModel(self.model, [point])

    def __eq__(self, other):
        return (isinstance(other, PointedActionModel)
                and self.model == other.model and self.points == other.points)

    def __hash__(self):
        return hash((self.model, self.points))

    def __repr__(self):
        return f"PointedActionModel(points={sorted(self.points)})"


def am_frame_class_holds(model: ActionModel, cls: FrameClass) -> bool:
    return all(relation_in_class(model.relations[a], model.points, cls)
               for a in model.agents)


def _pair_name(s: str, t: str) -> str:
    return f"({s}|{t})"


def execute(pm: PointedKripkeModel, pam: PointedActionModel, sat: SatOracle) -> PointedKripkeModel:
    """Product update.  The designated set of the result may be empty (failed
    execution, which dynamic boxes read as vacuous truth)."""
    m, am = pm.model, pam.model
    if m.agents != am.agents:
        raise ValueError("model and action model must share the agent set")
    live: Dict[Tuple[str, str], str] = {}
    for s in sorted(m.states):
        for t in sorted(am.points):
            if sat(s, am.pre(t)):
                live[(s, t)] = _pair_name(s, t)
    relations = {}
    for a in m.agents:
        pairs = set()
        for (s, u) in m.relations[a]:
            for (t, v) in am.relations[a]:
                if (s, t) in live and (u, v) in live:
                    pairs.add((live[(s, t)], live[(u, v)]))
        relations[a] = pairs
    valuation = {name: m.valuation[s] for (s, _t), name in live.items()}
    model = KripkeModel(m.agents, live.values(), relations, valuation)
    designated = [live[(s, t)] for s in pm.points for t in pam.points if (s, t) in live]
    return PointedKripkeModel(model, designated)


def seq_compose(a: PointedActionModel, b: PointedActionModel,
                normalize: NormalizeOracle, reachable_only: bool = False) -> PointedActionModel:
    """Sequential execution of action models.  The precondition of a product
    point is the first model's diamond over the second's precondition, passed
    through `normalize` so stored preconditions stay basic.

    With `reachable_only` the product is restricted to the points reachable
    from the designated pairs, which changes nothing observable from the
    designated points but sidesteps the full product blow-up.
    """
    am, bm = a.model, b.model
    if am.agents != bm.agents:
        raise ValueError("sequential composition requires identical agent sets")
    seeds = [(s, t) for s in sorted(a.points) for t in sorted(b.points)]
    if reachable_only:
        a_succ = {(ag, s): sorted(am.successors(ag, s))
                  for ag in am.agents for s in am.points}
        b_succ = {(ag, t): sorted(bm.successors(ag, t))
                  for ag in bm.agents for t in bm.points}
        pairs = set(seeds)
        raw_edges = {ag: set() for ag in am.agents}
        frontier = list(seeds)
        while frontier:
            s, t = frontier.pop()
            for ag in am.agents:
                for u in a_succ[(ag, s)]:
                    for v in b_succ[(ag, t)]:
                        raw_edges[ag].add(((s, t), (u, v)))
                        if (u, v) not in pairs:
                            pairs.add((u, v))
                            frontier.append((u, v))
        points = {st: _pair_name(*st) for st in pairs}
        relations = {ag: {(points[x], points[y]) for x, y in raw_edges[ag]}
                     for ag in am.agents}
    else:
        points = {(s, t): _pair_name(s, t) for s in am.points for t in bm.points}
        relations = {}
        for ag in am.agents:
            relations[ag] = {(points[(s, t)], points[(u, v)])
                             for (s, u) in am.relations[ag] for (t, v) in bm.relations[ag]}
    preconditions = {name: normalize(am, s, bm.pre(t)) for (s, t), name in points.items()}
    model = ActionModel(am.agents, points.values(), relations, preconditions)
    designated = [points[st] for st in seeds]
    return PointedActionModel(model, designated)


def choice_union(a: PointedActionModel, b: PointedActionModel) -> PointedActionModel:
    """Non-deterministic choice: disjoint union with unioned designated sets."""
    am, bm = a.model, b.model
    if am.agents != bm.agents:
        raise ValueError("choice requires identical agent sets")
    ren_a = {p: p for p in am.points}
    ren_b = {p: p for p in bm.points}
    if am.points & bm.points:
        ren_a = {p: p + "#1" for p in am.points}
        ren_b = {p: p + "#2" for p in bm.points}
    points = set(ren_a.values()) | set(ren_b.values())
    relations = {ag: {(ren_a[s], ren_a[t]) for s, t in am.relations[ag]}
                 | {(ren_b[s], ren_b[t]) for s, t in bm.relations[ag]}
                 for ag in am.agents}
    preconditions = {ren_a[p]: am.pre(p) for p in am.points}
    preconditions.update({ren_b[p]: bm.pre(p) for p in bm.points})
    model = ActionModel(am.agents, points, relations, preconditions)
    designated = {ren_a[p] for p in a.points} | {ren_b[p] for p in b.points}
    return PointedActionModel(model, designated)


_ACTION_KEYS = {"agents", "states", "pre", "relations", "points"}


def action_model_from_json(text: str) -> PointedActionModel:
    data = json.loads(text)
    if not isinstance(data, dict):
        raise ValueError("action-model JSON must be an object")
    unknown = set(data) - _ACTION_KEYS
    if unknown:
        raise ValueError(f"unknown action-model keys: {sorted(unknown)}")
    missing = _ACTION_KEYS - set(data)
    if missing:
        raise ValueError(f"missing action-model keys: {sorted(missing)}")
    if not data["agents"]:
        raise ValueError("agent set must be non-empty")
    agents = list(data["agents"])
    relations = {a: [tuple(p) for p in pairs] for a, pairs in data["relations"].items()}
    preconditions = {p: parse_formula(text, agents) for p, text in data["pre"].items()}
    model = ActionModel(agents, data["states"], relations, preconditions)
    return PointedActionModel(model, data["points"])


def action_model_to_json(pam: PointedActionModel) -> str:
    m = pam.model
    data = {
        "agents": sorted(m.agents),
        "states": sorted(m.points),
        "pre": {p: print_formula(m.pre(p)) for p in sorted(m.points)},
        "relations": {a: [list(p) for p in sorted(m.relations[a])] for a in sorted(m.agents)},
        "points": sorted(pam.points),
    }
    return json.dumps(data, indent=2, sort_keys=True) + "\n"


def action_model_dot(pam: PointedActionModel) -> str:
    m = pam.model
    lines = ["digraph action {", "  rankdir=LR;"]
    for p in sorted(m.points):
        label = f"{p}: {print_formula(m.pre(p))}"
        shape = "doublecircle" if p in pam.points else "circle"
        lines.append(f'  "{p}" [shape={shape}, label="{label}"];')
    edges = sorted((s, t, a) for a in m.agents for s, t in m.relations[a])
    for s, t, a in edges:
        lines.append(f'  "{s}" -> "{t}" [label="{a}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"
