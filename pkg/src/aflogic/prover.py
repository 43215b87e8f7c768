"""Decide validity of basic multi-agent modal formulae in K, K45 and S5.

The procedure is filtration-style type elimination.  A "type" is a truth
assignment to the atoms and box subformulae of the input; the canonical
accessibility relation of the target class connects the types, and types whose
refuted boxes have no surviving witness are discarded to a fixpoint.  The
input is satisfiable iff it holds at a surviving type, and the survivors form
a concrete countermodel in the class, which `find_model` exposes.

Canonical relations: in K a type sees every type satisfying the bodies of its
true boxes; in K45 and S5 the seen type must additionally carry the same box
signature for the agent (forcing transitivity and euclideanness), and in S5
types are pre-filtered so true boxes imply their bodies (reflexivity).

Everything is vectorised over the type space: the truth of a formula across
all 2^n types is held as one n-bit-indexed integer, so elimination rounds are
a handful of big-integer mask operations per box signature.
"""

from __future__ import annotations

from typing import Dict, List, Optional, Tuple

from .budget import Budget, ResourceExhausted
from .frames import FrameClass
from .kripke import KripkeModel, PointedKripkeModel
from .syntax import (And, Atom, Bottom, Box, Cover, Diamond, Formula, Iff,
                     Implies, Not, Or, Top, expand_cover, formula_sort_key,
                     print_formula, require_basic)

_CACHE_MAX = 200_000
_sat_cache: Dict[Tuple[Formula, FrameClass], bool] = {}

_MAX_SHAPES = 20
_EXTRACT_MAX_SHAPES = 14


def _core(f: Formula, memo: Dict[Formula, Formula] = None) -> Formula:
    """Lower a basic formula to the {true, false, atom, not, and, box} fragment."""
    if memo is None:
        memo = {}
    if f in memo:
        return memo[f]
    if isinstance(f, (Top, Bottom, Atom)):
        out = f
    elif isinstance(f, Not):
        out = Not(_core(f.body, memo))
    elif isinstance(f, And):
        out = And(_core(f.left, memo), _core(f.right, memo))
    elif isinstance(f, Or):
        out = Not(And(Not(_core(f.left, memo)), Not(_core(f.right, memo))))
    elif isinstance(f, Implies):
        out = Not(And(_core(f.left, memo), Not(_core(f.right, memo))))
    elif isinstance(f, Iff):
        left, right = _core(f.left, memo), _core(f.right, memo)
        out = And(Not(And(left, Not(right))), Not(And(right, Not(left))))
    elif isinstance(f, Box):
        out = Box(f.agent, _core(f.body, memo))
    elif isinstance(f, Diamond):
        out = Not(Box(f.agent, Not(_core(f.body, memo))))
    elif isinstance(f, Cover):
        out = _core(expand_cover(f.agent, f.members), memo)
    else:
        raise ValueError(f"prover requires a basic formula, got {print_formula(f)}")
    memo[f] = out
    return out


def _subterms(f: Formula, out: List[Formula], seen: set) -> None:
    if f in seen:
        return
    seen.add(f)
    if isinstance(f, Not):
        _subterms(f.body, out, seen)
    elif isinstance(f, And):
        _subterms(f.left, out, seen)
        _subterms(f.right, out, seen)
    elif isinstance(f, Box):
        _subterms(f.body, out, seen)
    out.append(f)  # children precede parents


class _TypeSpace:
    def __init__(self, core: Formula, cls: FrameClass, budget: Budget):
        self.cls = cls
        order: List[Formula] = []
        _subterms(core, order, set())
        unsorted_shapes = [g for g in order if isinstance(g, (Atom, Box))]
        n = len(unsorted_shapes)
        if n > _MAX_SHAPES:
            raise ResourceExhausted(f"type space needs 2^{n} assignments")
        shapes = sorted(unsorted_shapes, key=formula_sort_key)
        self.n = n
        self.size = 1 << n
        budget.spend(max(1, (self.size >> 6)) * max(1, len(order) // 8))
        self.full = (1 << self.size) - 1

        # one integer per formula: bit t is its truth at type t
        column: Dict[Formula, int] = {}
        for i, shape in enumerate(shapes):
            column[shape] = self._shape_column(i)
        for g in order:
            if isinstance(g, Top):
                column[g] = self.full
            elif isinstance(g, Bottom):
                column[g] = 0
            elif isinstance(g, (Atom, Box)):
                pass
            elif isinstance(g, Not):
                column[g] = column[g.body] ^ self.full
            else:  # And
                column[g] = column[g.left] & column[g.right]
        self.column = column
        self.shapes = shapes
        self.agents = sorted({g.agent for g in shapes if isinstance(g, Box)})
        self.boxes_by_agent = {
            a: [g for g in shapes if isinstance(g, Box) and g.agent == a]
            for a in self.agents}

        alive = self.full
        if cls is FrameClass.S5:
            for b in shapes:
                if isinstance(b, Box):
                    alive &= (column[b] ^ self.full) | column[b.body]
        self.initial_alive = alive

    def _shape_column(self, i: int) -> int:
        run = 1 << i                       # run length of equal bits
        block = ((1 << run) - 1) << run    # one period: `run` zeros then `run` ones
        reps = self.size // (run * 2)
        comb = ((1 << (reps * run * 2)) - 1) // ((1 << (run * 2)) - 1)
        return block * comb

    def eliminate(self, budget: Budget) -> int:
        """Mask of surviving types, as the greatest fixpoint."""
        alive = self.initial_alive
        changed = True
        while changed:
            changed = False
            budget.spend(max(1, self.size >> 6))
            kill = 0
            for agent in self.agents:
                boxes = self.boxes_by_agent[agent]
                kill |= self._kill_for_agent(agent, boxes, alive)
            if kill & alive:
                alive &= ~kill
                changed = True
        return alive

    def _kill_for_agent(self, agent: str, boxes: List[Box], alive: int) -> int:
        """Types whose refuted boxes lack a witness, found per realised signature."""
        col = self.column
        full = self.full
        kill = 0

        def visit(j: int, group: int, bodies: int, false_boxes: tuple) -> None:
            nonlocal kill
            if not group:
                return
            if j == len(boxes):
                pool = (alive if self.cls is FrameClass.K else group) & bodies
                for b in false_boxes:
                    if not pool & (col[b.body] ^ full):
                        kill |= group
                        return
                return
            b = boxes[j]
            visit(j + 1, group & col[b], bodies & col[b.body], false_boxes)
            visit(j + 1, group & (col[b] ^ full), bodies, false_boxes + (b,))

        visit(0, alive, full, ())
        return kill

    def truth(self, t: int, f: Formula) -> bool:
        return bool(self.column[f] >> t & 1)

    def model_of(self, alive: int, root: Formula) -> Optional[PointedKripkeModel]:
        designated_mask = alive & self.column[root]
        if not designated_mask:
            return None
        if self.n > _EXTRACT_MAX_SHAPES:
            raise ResourceExhausted(
                f"model extraction over 2^{self.n} types is out of bounds")
        alive_types = [t for t in range(self.size) if alive >> t & 1]
        states = {t: f"t{t}" for t in alive_types}
        relations = {}
        for agent in self.agents:
            boxes = self.boxes_by_agent[agent]
            pairs = set()
            for t in alive_types:
                for u in alive_types:
                    if self.cls is not FrameClass.K and any(
                            self.truth(t, b) != self.truth(u, b) for b in boxes):
                        continue
                    if all(self.truth(u, b.body) for b in boxes if self.truth(t, b)):
                        pairs.add((states[t], states[u]))
            relations[agent] = pairs
        atoms = [g for g in self.shapes if isinstance(g, Atom)]
        valuation = {states[t]: {g.name for g in atoms if self.truth(t, g)}
                     for t in alive_types}
        model = KripkeModel(self.agents, states.values(), relations, valuation)
        root_type = (designated_mask & -designated_mask).bit_length() - 1
        return PointedKripkeModel(model, [states[root_type]])


def _decide(f: Formula, cls: FrameClass, budget: Optional[Budget], want_model: bool):
    require_basic(f, "prover")
    key = (f, cls)
    if not want_model and key in _sat_cache:
        return _sat_cache[key]
    core = _core(f)
    b = Budget.ensure(budget)
    space = _TypeSpace(core, cls, b)
    alive = space.eliminate(b)
    result = bool(alive & space.column[core])
    if len(_sat_cache) > _CACHE_MAX:
        _sat_cache.clear()
    _sat_cache[key] = result
    if want_model:
        return space.model_of(alive, core)
    return result


def satisfiable(f: Formula, cls: FrameClass, budget: Optional[Budget] = None) -> bool:
    """True iff some pointed model of the class satisfies f."""
    return _decide(f, cls, budget, want_model=False)


def valid(f: Formula, cls: FrameClass, budget: Optional[Budget] = None) -> bool:
    """True iff f holds at every point of every model of the class."""
    return not satisfiable(Not(f), cls, budget)


def equiv(f: Formula, g: Formula, cls: FrameClass, budget: Optional[Budget] = None) -> bool:
    return valid(Iff(f, g), cls, budget)


def find_model(f: Formula, cls: FrameClass, budget: Optional[Budget] = None) -> Optional[PointedKripkeModel]:
    """A witness model in the class satisfying f at its point, or None."""
    return _decide(f, cls, budget, want_model=True)
