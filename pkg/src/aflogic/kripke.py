"""Finite Kripke models, pointed variants, class predicates, JSON and DOT I/O."""

from __future__ import annotations

import json
from typing import Dict, FrozenSet, Iterable, Mapping, Set, Tuple

from .frames import FrameClass, Pair, relation_in_class

Relations = Dict[str, FrozenSet[Pair]]


class KripkeModel:
    """States, one accessibility relation per agent, and a valuation.

    Values are immutable after construction.  An empty state set is permitted
    only because product update can produce one; the JSON loader rejects it.
    """

    __slots__ = ("agents", "states", "relations", "valuation")

    def __init__(self, agents: Iterable[str], states: Iterable[str],
                 relations: Mapping[str, Iterable[Pair]],
                 valuation: Mapping[str, Iterable[str]]):
        self.agents: FrozenSet[str] = frozenset(agents)
        self.states: FrozenSet[str] = frozenset(states)
        if set(relations) != self.agents:
            raise ValueError("relations must be defined for exactly the declared agents")
        rel: Relations = {}
        for a in self.agents:
            pairs = frozenset(tuple(p) for p in relations[a])
            for s, t in pairs:
                if s not in self.states or t not in self.states:
                    raise ValueError(f"relation endpoint ({s}, {t}) outside the state set")
            rel[a] = pairs
        self.relations = rel
        val: Dict[str, FrozenSet[str]] = {}
        for s, atoms in valuation.items():
            if s not in self.states:
                raise ValueError(f"valuation key {s!r} outside the state set")
            val[s] = frozenset(atoms)
        for s in self.states:
            val.setdefault(s, frozenset())
        self.valuation = val

    def successors(self, agent: str, state: str) -> FrozenSet[str]:
        if agent not in self.relations:
            raise ValueError(f"unknown agent {agent!r}")
        return frozenset(t for s, t in self.relations[agent] if s == state)

    def atoms(self) -> FrozenSet[str]:
        out: Set[str] = set()
        for atoms in self.valuation.values():
            out |= atoms
        return frozenset(out)

    def _key(self):
        return (self.agents, self.states,
                tuple(sorted((a, tuple(sorted(p))) for a, p in self.relations.items())),
                tuple(sorted((s, tuple(sorted(v))) for s, v in self.valuation.items())))

    def __eq__(self, other):
        return isinstance(other, KripkeModel) and self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    def __repr__(self):
        return f"KripkeModel(states={sorted(self.states)})"


class PointedKripkeModel:
    """A model with a designated set of states (empty only after failed update)."""

    __slots__ = ("model", "points")

    def __init__(self, model: KripkeModel, points: Iterable[str]):
        self.model = model
        self.points: FrozenSet[str] = frozenset(points)
        if not self.points <= model.states:
            raise ValueError("designated states must belong to the model")

    def single_point(self) -> str:
        if len(self.points) != 1:
            raise ValueError(f"expected a single designated state, got {sorted(self.points)}")
        return next(iter(self.points))

    def at(self, state: str) -> "PointedKripkeModel":
        return PointedKripkeModel(self.model, [state])

    def __eq__(self, other):
        return (isinstance(other, PointedKripkeModel)
                and self.model == other.model and self.points == other.points)

    def __hash__(self):
        return hash((self.model, self.points))

    def __repr__(self):
        return f"PointedKripkeModel(points={sorted(self.points)})"


def frame_class_holds(model: KripkeModel, cls: FrameClass) -> bool:
    """K always; K45 transitive+Euclidean; S5 additionally reflexive."""
    return all(relation_in_class(model.relations[a], model.states, cls)
               for a in model.agents)


def disjoint_union(m1: KripkeModel, m2: KripkeModel) -> Tuple[KripkeModel, Dict[str, str], Dict[str, str]]:
    """Union of renamed copies; returns the model and both state renamings."""
    if m1.agents != m2.agents:
        raise ValueError("disjoint union requires identical agent sets")
    ren1 = {s: s + "#1" for s in m1.states}
    ren2 = {s: s + "#2" for s in m2.states}
    states = set(ren1.values()) | set(ren2.values())
    relations = {a: {(ren1[s], ren1[t]) for s, t in m1.relations[a]}
                 | {(ren2[s], ren2[t]) for s, t in m2.relations[a]}
                 for a in m1.agents}
    valuation = {ren1[s]: m1.valuation[s] for s in m1.states}
    valuation.update({ren2[s]: m2.valuation[s] for s in m2.states})
    return KripkeModel(m1.agents, states, relations, valuation), ren1, ren2


def export_dot(pm: PointedKripkeModel) -> str:
    """Deterministic GraphViz text: atoms in node labels, designated states double-circled."""
    lines = ["digraph model {", "  rankdir=LR;"]
    for s in sorted(pm.model.states):
        atoms = " ".join(sorted(pm.model.valuation[s]))
        label = f"{s}: {atoms}" if atoms else s
        shape = "doublecircle" if s in pm.points else "circle"
        lines.append(f'  "{s}" [shape={shape}, label="{label}"];')
    edges = sorted((s, t, a) for a in pm.model.agents for s, t in pm.model.relations[a])
    for s, t, a in edges:
        lines.append(f'  "{s}" -> "{t}" [label="{a}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"


_MODEL_KEYS = {"agents", "states", "valuation", "relations", "points"}


def model_from_json(text: str) -> PointedKripkeModel:
    data = json.loads(text)
    if not isinstance(data, dict):
        raise ValueError("model JSON must be an object")
    unknown = set(data) - _MODEL_KEYS
    if unknown:
        raise ValueError(f"unknown model keys: {sorted(unknown)}")
    missing = _MODEL_KEYS - set(data)
    if missing:
        raise ValueError(f"missing model keys: {sorted(missing)}")
    if not data["states"]:
        raise ValueError("state set must be non-empty")
    if not data["agents"]:
        raise ValueError("agent set must be non-empty")
    relations = {a: [tuple(p) for p in pairs] for a, pairs in data["relations"].items()}
    for pairs in relations.values():
        if any(len(p) != 2 for p in pairs):
            raise ValueError("relation entries must be 2-element state arrays")
    model = KripkeModel(data["agents"], data["states"], relations, data["valuation"])
    return PointedKripkeModel(model, data["points"])


def model_to_json(pm: PointedKripkeModel) -> str:
    data = {
        "agents": sorted(pm.model.agents),
        "states": sorted(pm.model.states),
        "valuation": {s: sorted(pm.model.valuation[s]) for s in sorted(pm.model.states)},
        "relations": {a: [list(p) for p in sorted(pm.model.relations[a])]
                      for a in sorted(pm.model.agents)},
        "points": sorted(pm.points),
    }
    return json.dumps(data, indent=2, sort_keys=True) + "\n"
