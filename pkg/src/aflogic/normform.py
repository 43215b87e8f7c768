"""Class-specific normal forms: DNF, alternating DNF, and explicit disjunctions.

A DNF formula is a disjunction of clauses, each a propositional part plus at
most one cover per agent whose members are again DNF formulas.  The
alternating variant forbids an agent's cover from reappearing at the top level
of its own members; K45 cluster uniformity (any successor has exactly the same
successor set) lets nested same-agent modal content be hoisted out.  Explicit
disjunctions are the S5 form: members are complete sign vectors over the atoms
and box shapes in play, so every entailment demanded by the explicitness
conditions is decided.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Set, Tuple

from . import prover
from .budget import Budget, ResourceExhausted
from .fold import s_and, s_and_all, s_not, s_or_all
from .frames import FrameClass
from .syntax import (BOTTOM, TOP, And, Atom, Bottom, Box, Cover, Diamond,
                     Formula, Iff, Implies, Not, Or, Top, big_and, big_or,
                     expand_cover, formula_agents, formula_sort_key,
                     is_propositional, print_formula, require_basic)


class NotConverted(RuntimeError):
    """The explicit-form saturation exceeded its split budget."""


@dataclass(frozen=True)
class DnfFormula:
    clauses: Tuple["DnfClause", ...]

    def to_formula(self) -> Formula:
        return big_or([c.to_formula() for c in self.clauses])

    def is_alternating(self, banned: Optional[str] = None) -> bool:
        return all(c.is_alternating(banned) for c in self.clauses)


@dataclass(frozen=True)
class DnfClause:
    pi: Formula
    covers: Tuple[Tuple[str, Tuple[DnfFormula, ...]], ...]  # sorted by agent

    def cover_map(self) -> Dict[str, Tuple[DnfFormula, ...]]:
        return dict(self.covers)

    def to_formula(self) -> Formula:
        parts: List[Formula] = [] if isinstance(self.pi, Top) else [self.pi]
        for agent, members in self.covers:
            parts.append(Cover(agent, frozenset(m.to_formula() for m in members)))
        return big_and(parts) if parts else TOP

    def is_alternating(self, banned: Optional[str] = None) -> bool:
        for agent, members in self.covers:
            if agent == banned:
                return False
            if not all(m.is_alternating(agent) for m in members):
                return False
        return True


def _clause(pi_lits: Iterable[Formula], covers: Dict[str, Tuple[DnfFormula, ...]]) -> DnfClause:
    pi = big_and(sorted(set(pi_lits), key=formula_sort_key))
    items = tuple((a, tuple(sorted(set(covers[a]), key=lambda m: formula_sort_key(m.to_formula()))))
                  for a in sorted(covers))
    return DnfClause(pi, items)


def _sorted_clauses(clauses: Iterable[DnfClause]) -> DnfFormula:
    uniq = sorted(set(clauses), key=lambda c: formula_sort_key(c.to_formula()))
    return DnfFormula(tuple(uniq))


# ---------------------------------------------------------------------------
# negation normal form and clause distribution


def _nnf(f: Formula, neg: bool) -> Formula:
    if isinstance(f, Top):
        return BOTTOM if neg else TOP
    if isinstance(f, Bottom):
        return TOP if neg else BOTTOM
    if isinstance(f, Atom):
        return Not(f) if neg else f
    if isinstance(f, Not):
        return _nnf(f.body, not neg)
    if isinstance(f, And):
        left, right = _nnf(f.left, neg), _nnf(f.right, neg)
        return s_or_all([left, right]) if neg else s_and(left, right)
    if isinstance(f, Or):
        left, right = _nnf(f.left, neg), _nnf(f.right, neg)
        return s_and(left, right) if neg else s_or_all([left, right])
    if isinstance(f, Implies):
        return _nnf(Or(Not(f.left), f.right), neg)
    if isinstance(f, Iff):
        return _nnf(And(Implies(f.left, f.right), Implies(f.right, f.left)), neg)
    if isinstance(f, Box):
        return Diamond(f.agent, _nnf(f.body, True)) if neg else Box(f.agent, _nnf(f.body, False))
    if isinstance(f, Diamond):
        return Box(f.agent, _nnf(f.body, True)) if neg else Diamond(f.agent, _nnf(f.body, False))
    if isinstance(f, Cover):
        return _nnf(expand_cover(f.agent, f.members), neg)
    raise ValueError(f"normal forms require a basic formula: {print_formula(f)}")


def _literal_clauses(f: Formula) -> List[List[Formula]]:
    """Distribute an NNF formula into clauses of literals; drops refuted clauses."""
    if isinstance(f, Bottom):
        return []
    if isinstance(f, Top):
        return [[]]
    if isinstance(f, Or):
        return _literal_clauses(f.left) + _literal_clauses(f.right)
    if isinstance(f, And):
        out = []
        for left in _literal_clauses(f.left):
            for right in _literal_clauses(f.right):
                out.append(left + right)
        return out
    return [[f]]


def _split_pi(lits: Sequence[Formula]):
    """Separate propositional literals from modal ones; None when contradictory."""
    pi: Set[Formula] = set()
    modal: List[Formula] = []
    for lit in lits:
        if isinstance(lit, (Atom, Not)):
            pi.add(lit)
        elif isinstance(lit, (Box, Diamond)):
            modal.append(lit)
        else:
            raise AssertionError(f"unexpected literal {print_formula(lit)}")
    for lit in pi:
        if isinstance(lit, Not) and lit.body in pi:
            return None
    return pi, modal


# ---------------------------------------------------------------------------
# disjunctive normal form (K)


_DNF_CACHE: Dict[Formula, DnfFormula] = {}
_CACHE_MAX = 50_000


def to_dnf(f: Formula, budget: Optional[Budget] = None) -> DnfFormula:
    """Equivalent disjunctive normal form (sound for every class, exact for K)."""
    require_basic(f, "to_dnf")
    if f in _DNF_CACHE:
        return _DNF_CACHE[f]
    budget = Budget.ensure(budget)
    result = _sorted_clauses(_dnf_clauses(f, budget))
    if len(_DNF_CACHE) > _CACHE_MAX:
        _DNF_CACHE.clear()
    _DNF_CACHE[f] = result
    return result


def _dnf_clauses(f: Formula, budget: Budget) -> List[DnfClause]:
    out: List[DnfClause] = []
    for lits in _literal_clauses(_nnf(f, False)):
        budget.spend()
        split = _split_pi(lits)
        if split is None:
            continue
        pi, modal = split
        boxes: Dict[str, List[Formula]] = {}
        diamonds: Dict[str, List[Formula]] = {}
        for lit in modal:
            (boxes if isinstance(lit, Box) else diamonds).setdefault(lit.agent, []).append(lit.body)
        out.extend(_assemble(pi, boxes, diamonds, to_dnf, budget))
    return out


def _assemble(pi, boxes, diamonds, convert, budget: Budget) -> List[DnfClause]:
    """Merge box/diamond literals into covers; box-only agents split two ways."""
    agents = sorted(set(boxes) | set(diamonds))
    options: List[List[Optional[Tuple[str, Tuple[DnfFormula, ...]]]]] = []
    for a in agents:
        phi = big_and(sorted(set(boxes.get(a, [])), key=formula_sort_key))
        phi_dnf = convert(phi, budget)
        if diamonds.get(a):
            members = {convert(s_and(phi, d), budget) for d in diamonds[a]}
            members.add(phi_dnf)
            if any(not m.clauses for m in members):
                return []  # an unrealisable member refutes the clause
            options.append([(a, tuple(members))])
        else:
            with_phi = None if not phi_dnf.clauses else (a, (phi_dnf,))
            choice = [(a, ())]
            if with_phi is not None:
                choice.append(with_phi)
            options.append(choice)
    clauses = []
    for combo in itertools.product(*options):
        budget.spend()
        covers = {a: members for a, members in combo}
        clauses.append(_clause(pi, covers))
    return clauses


# ---------------------------------------------------------------------------
# alternating disjunctive normal form (K45)


_ADNF_CACHE: Dict[Formula, DnfFormula] = {}


def to_adnf(f: Formula, budget: Optional[Budget] = None) -> DnfFormula:
    """Equivalent (in K45) alternating DNF: members never repeat their cover agent.

    Nested same-agent content is hoisted using cluster uniformity: on a
    transitive Euclidean frame every successor has exactly the source's
    successor set, so an agent-a modal formula has one truth value across the
    whole a-cluster, equal to its value at the source.
    """
    require_basic(f, "to_adnf")
    if f in _ADNF_CACHE:
        return _ADNF_CACHE[f]
    budget = Budget.ensure(budget)
    result = _sorted_clauses(_adnf_clauses(f, budget))
    if len(_ADNF_CACHE) > _CACHE_MAX:
        _ADNF_CACHE.clear()
    _ADNF_CACHE[f] = result
    return result


def _adnf_clauses(f: Formula, budget: Budget) -> List[DnfClause]:
    final: List[DnfClause] = []
    #  state: (pi literal set, pure boxes, pure diamonds, pending modal literals)
    start: List[Tuple[Set[Formula], Dict, Dict, List[Formula]]] = []
    for lits in _literal_clauses(_nnf(f, False)):
        split = _split_pi(lits)
        if split is None:
            continue
        pi, modal = split
        start.append((pi, {}, {}, modal))
    work = start
    while work:
        budget.spend()
        pi, boxes, diamonds, pending = work.pop()
        if not pending:
            final.extend(_assemble(pi, boxes, diamonds, to_adnf, budget))
            continue
        lit = pending[0]
        rest = pending[1:]
        agent = lit.agent
        body = to_adnf(lit.body, budget)
        parts = [_split_agent_cover(c, agent) for c in body.clauses]
        if isinstance(lit, Diamond):
            # <a>(delta & c)  <=>  c & <a>delta   (c constant across the cluster)
            for delta, cover_lits in parts:
                budget.spend()
                new_boxes = {a: list(v) for a, v in boxes.items()}
                new_diamonds = {a: list(v) for a, v in diamonds.items()}
                new_diamonds.setdefault(agent, []).append(delta)
                for kind, body_f in cover_lits:
                    target = new_boxes if kind == "box" else new_diamonds
                    target.setdefault(agent, []).append(body_f)
                work.append((set(pi), new_boxes, new_diamonds, list(rest)))
        else:
            # [a](\/ delta_i & c_i): case-split on which cluster facts c_i hold
            distinct = sorted({c for _d, cov in parts for c in _cover_formulas(cov, agent)},
                              key=formula_sort_key)
            for bits in itertools.product([True, False], repeat=len(distinct)):
                budget.spend()
                value = dict(zip(distinct, bits))
                kept = [delta for delta, cov in parts
                        if all(value[c] for c in _cover_formulas(cov, agent))]
                pos_lits: List[Tuple[str, Formula]] = []
                neg_branches: List[List[Tuple[str, Formula]]] = [[]]
                for c, bit in value.items():
                    if bit:
                        pos_lits.extend(_cover_literals(c))
                    else:
                        expanded = []
                        for option in _negated_cover_literals(c):
                            expanded.extend([base + [option] for base in neg_branches])
                        neg_branches = expanded
                for neg_lits in neg_branches:
                    new_boxes = {a: list(v) for a, v in boxes.items()}
                    new_diamonds = {a: list(v) for a, v in diamonds.items()}
                    new_boxes.setdefault(agent, []).append(
                        big_or([d for d in kept]))
                    for kind, body_f in pos_lits + neg_lits:
                        target = new_boxes if kind == "box" else new_diamonds
                        target.setdefault(agent, []).append(body_f)
                    work.append((set(pi), new_boxes, new_diamonds, list(rest)))
    return final


def _split_agent_cover(clause: DnfClause, agent: str) -> Tuple[Formula, List[Tuple[str, Formula]]]:
    """Split a clause into its agent-free part and the agent's cover literals."""
    keep: Dict[str, Tuple[DnfFormula, ...]] = {}
    cover_lits: List[Tuple[str, Formula]] = []
    for a, members in clause.covers:
        if a == agent:
            cover_lits = _cover_literals(Cover(a, frozenset(m.to_formula() for m in members)))
        else:
            keep[a] = members
    delta = _clause(() if isinstance(clause.pi, Top) else [clause.pi], keep).to_formula()
    return delta, cover_lits


def _cover_formulas(cover_lits: List[Tuple[str, Formula]], agent: str) -> List[Formula]:
    """Reassembled cover formula(s), used as case-split keys."""
    if not cover_lits:
        return []
    return [_cover_key(cover_lits, agent)]


def _cover_key(cover_lits, agent) -> Formula:
    parts = [(Box(agent, b) if kind == "box" else Diamond(agent, b)) for kind, b in cover_lits]
    return big_and(sorted(parts, key=formula_sort_key))


def _cover_literals(c: Formula) -> List[Tuple[str, Formula]]:
    """Flatten a cover (or conjunction of box/diamond literals) into literals."""
    if isinstance(c, Cover):
        members = sorted(c.members, key=formula_sort_key)
        out: List[Tuple[str, Formula]] = [("box", big_or(members))]
        out.extend(("diamond", m) for m in members)
        return out
    if isinstance(c, And):
        return _cover_literals(c.left) + _cover_literals(c.right)
    if isinstance(c, Box):
        return [("box", c.body)]
    if isinstance(c, Diamond):
        return [("diamond", c.body)]
    if isinstance(c, Top):
        return []
    raise AssertionError(f"unexpected cluster fact {print_formula(c)}")


def _negated_cover_literals(c: Formula) -> List[Tuple[str, Formula]]:
    """Literal alternatives for the negation of a conjunction of modal literals."""
    out: List[Tuple[str, Formula]] = []
    for kind, body in _cover_literals(c):
        if kind == "box":
            out.append(("diamond", s_not(body)))
        else:
            out.append(("box", s_not(body)))
    return out


# ---------------------------------------------------------------------------
# explicit disjunctions (S5)


@dataclass(frozen=True)
class ExplicitFormula:
    """One explicit disjunct: propositional part, current-state description,
    and one cover per agent with the description among its members."""

    pi: Formula
    gamma0: Formula
    covers: Tuple[Tuple[str, FrozenSet[Formula]], ...]  # sorted by agent

    def cover_map(self) -> Dict[str, FrozenSet[Formula]]:
        return dict(self.covers)

    def to_formula(self) -> Formula:
        parts: List[Formula] = [g for g in (self.pi, self.gamma0)
                                if not isinstance(g, Top)]
        for agent, members in self.covers:
            parts.append(Cover(agent, members))
        return big_and(parts)


@dataclass(frozen=True)
class ExplicitDisjunction:
    disjuncts: Tuple[ExplicitFormula, ...]

    def to_formula(self) -> Formula:
        return big_or([d.to_formula() for d in self.disjuncts])


DEFAULT_SPLIT_BUDGET = 200_000
DEFAULT_MAX_DISJUNCTS = 256


_EXPLICIT_CACHE: Dict[Formula, "ExplicitDisjunction"] = {}


def to_explicit(f: Formula, budget: Optional[Budget] = None,
                split_budget: int = DEFAULT_SPLIT_BUDGET,
                max_disjuncts: int = DEFAULT_MAX_DISJUNCTS) -> ExplicitDisjunction:
    """Equivalent (in S5) disjunction of explicit formulae.

    Members are complete sign vectors over the atoms and box shapes occurring
    in the clause, realised-member sets are enumerated per agent cluster, and
    the current-state description is a vector common to every cluster.  Inputs
    already in explicit shape are returned unchanged.  Raises NotConverted when
    the enumeration exceeds `split_budget`.
    """
    require_basic(f, "to_explicit")
    cacheable = (split_budget == DEFAULT_SPLIT_BUDGET
                 and max_disjuncts == DEFAULT_MAX_DISJUNCTS)
    if cacheable and f in _EXPLICIT_CACHE:
        return _EXPLICIT_CACHE[f]
    budget = Budget.ensure(budget)
    parsed = _try_parse_explicit_disjunction(f, budget)
    if parsed is not None:
        result = parsed
    else:
        counter = _SplitCounter(split_budget)
        disjuncts: List[ExplicitFormula] = []
        for clause in to_dnf(f, budget).clauses:
            disjuncts.extend(_explicit_of_clause(clause, budget, counter))
            if len(disjuncts) > max_disjuncts:
                raise NotConverted(
                    f"explicit form needs more than {max_disjuncts} disjuncts")
        seen: List[ExplicitFormula] = []
        for d in disjuncts:
            if d not in seen:
                seen.append(d)
        result = ExplicitDisjunction(tuple(seen))
    if cacheable:
        if len(_EXPLICIT_CACHE) > _CACHE_MAX:
            _EXPLICIT_CACHE.clear()
        _EXPLICIT_CACHE[f] = result
    return result


class _SplitCounter:
    __slots__ = ("left",)

    def __init__(self, limit: int):
        self.left = limit

    def spend(self, amount: int = 1) -> None:
        self.left -= amount
        if self.left < 0:
            raise NotConverted("explicit-form split budget exceeded")


def _box_core(f: Formula, memo: Optional[Dict[Formula, Formula]] = None) -> Formula:
    """Lower to the {true, false, atom, not, and, box} fragment."""
    if memo is None:
        memo = {}
    if f in memo:
        return memo[f]
    if isinstance(f, (Top, Bottom, Atom)):
        out = f
    elif isinstance(f, Not):
        out = Not(_box_core(f.body, memo))
    elif isinstance(f, And):
        out = And(_box_core(f.left, memo), _box_core(f.right, memo))
    elif isinstance(f, Or):
        out = Not(And(Not(_box_core(f.left, memo)), Not(_box_core(f.right, memo))))
    elif isinstance(f, Implies):
        out = Not(And(_box_core(f.left, memo), Not(_box_core(f.right, memo))))
    elif isinstance(f, Iff):
        out = _box_core(And(Implies(f.left, f.right), Implies(f.right, f.left)), memo)
    elif isinstance(f, Box):
        out = Box(f.agent, _box_core(f.body, memo))
    elif isinstance(f, Diamond):
        out = Not(Box(f.agent, Not(_box_core(f.body, memo))))
    elif isinstance(f, Cover):
        out = _box_core(expand_cover(f.agent, f.members), memo)
    else:
        raise ValueError(f"explicit forms require a basic formula: {print_formula(f)}")
    memo[f] = out
    return out


def _collect_shapes(f: Formula, shapes: Set[Formula]) -> None:
    if isinstance(f, Atom):
        shapes.add(f)
    elif isinstance(f, Box):
        shapes.add(f)
        _collect_shapes(f.body, shapes)
    elif isinstance(f, Not):
        _collect_shapes(f.body, shapes)
    elif isinstance(f, And):
        _collect_shapes(f.left, shapes)
        _collect_shapes(f.right, shapes)


def _eval_vector(f: Formula, values: Dict[Formula, bool]) -> Optional[bool]:
    """Three-valued evaluation of a core formula over a partial shape assignment."""
    if isinstance(f, Top):
        return True
    if isinstance(f, Bottom):
        return False
    if isinstance(f, (Atom, Box)):
        return values.get(f)
    if isinstance(f, Not):
        inner = _eval_vector(f.body, values)
        return None if inner is None else not inner
    if isinstance(f, And):
        left = _eval_vector(f.left, values)
        right = _eval_vector(f.right, values)
        if left is False or right is False:
            return False
        if left is True and right is True:
            return True
        return None
    raise AssertionError(f"not a core formula: {print_formula(f)}")


class _VectorSpace:
    """Complete sign vectors over the shapes of one clause."""

    def __init__(self, members: List[Formula], budget: Budget, counter: _SplitCounter):
        self.budget = budget
        self.counter = counter
        shapes: Set[Formula] = set()
        self.member_cores = [_box_core(m) for m in members]
        for core in self.member_cores:
            _collect_shapes(core, shapes)
        self.shapes: List[Formula] = sorted(shapes, key=formula_sort_key)
        self._sat_cache: Dict[Tuple[bool, ...], bool] = {}

    def vector_formula(self, vec: Tuple[bool, ...]) -> Formula:
        parts = [s if bit else Not(s) for s, bit in zip(self.shapes, vec)]
        return big_and(parts)

    def _vector_sat(self, vec: Tuple[bool, ...]) -> bool:
        if vec not in self._sat_cache:
            self._sat_cache[vec] = prover.satisfiable(
                self.vector_formula(vec), FrameClass.S5, self.budget)
        return self._sat_cache[vec]

    def vectors_of(self, core: Formula) -> List[Tuple[bool, ...]]:
        """All satisfiable complete vectors entailing the member."""
        out: List[Tuple[bool, ...]] = []

        def extend(i: int, values: Dict[Formula, bool]):
            self.counter.spend()
            if _eval_vector(core, values) is False:
                return
            if i == len(self.shapes):
                vec = tuple(values[s] for s in self.shapes)
                if self._vector_sat(vec):
                    out.append(vec)
                return
            for bit in (True, False):
                values[self.shapes[i]] = bit
                extend(i + 1, values)
            del values[self.shapes[i]]

        extend(0, {})
        return out

    def value(self, vec: Tuple[bool, ...], f: Formula) -> bool:
        values = dict(zip(self.shapes, vec))
        result = _eval_vector(f, values)
        assert result is not None
        return result


def _explicit_of_clause(clause: DnfClause, budget: Budget,
                        counter: _SplitCounter) -> List[ExplicitFormula]:
    cover_map = {a: [m.to_formula() for m in members] for a, members in clause.covers}
    # agents constrained only through box shapes inside members still need a
    # cover (padded with a trivial member), or the description loses them
    probe = _VectorSpace([m for ms in cover_map.values() for m in ms],
                         budget, counter)
    for shape in probe.shapes:
        if isinstance(shape, Box) and shape.agent not in cover_map:
            cover_map[shape.agent] = [TOP]
    agents = sorted(cover_map)
    if not agents:
        if isinstance(clause.pi, Bottom):
            return []
        return [ExplicitFormula(clause.pi, TOP, ())]
    all_members = [m for ms in cover_map.values() for m in ms]
    space = _VectorSpace(all_members, budget, counter)
    member_vectors = {a: [space.vectors_of(space.member_cores[all_members.index(m)])
                          for m in cover_map[a]]
                      for a in agents}
    choices: List[List[Tuple[Tuple[bool, ...], ...]]] = []
    for a in agents:
        valid = _valid_clusters(space, a, member_vectors[a], counter)
        if not valid:
            return []
        choices.append(valid)
    out: List[ExplicitFormula] = []
    for combo in itertools.product(*choices):
        counter.spend()
        common = set(combo[0])
        for rs in combo[1:]:
            common &= set(rs)
        for v0 in sorted(common):
            if not prover.satisfiable(s_and(clause.pi, space.vector_formula(v0)),
                                      FrameClass.S5, budget):
                continue
            covers = tuple((a, frozenset(space.vector_formula(v) for v in rs))
                           for a, rs in zip(agents, combo))
            out.append(ExplicitFormula(clause.pi, space.vector_formula(v0), covers))
    return out


def _valid_clusters(space: _VectorSpace, agent: str,
                    member_vecs: List[List[Tuple[bool, ...]]],
                    counter: _SplitCounter) -> List[Tuple[Tuple[bool, ...], ...]]:
    """Realisable vector sets for one agent's cover.

    A realised set lies within one box-signature group, every vector satisfies
    the bodies of the signature's true boxes (cluster uniformity), every false
    box has a refuting vector, and every original member is represented.
    """
    boxes = [s for s in space.shapes if isinstance(s, Box) and s.agent == agent]
    pool = sorted({v for vecs in member_vecs for v in vecs})
    by_sig: Dict[Tuple[bool, ...], List[Tuple[bool, ...]]] = {}
    for v in pool:
        sig = tuple(space.value(v, b) for b in boxes)
        by_sig.setdefault(sig, []).append(v)
    valid: List[Tuple[Tuple[bool, ...], ...]] = []
    for sig, group in sorted(by_sig.items()):
        true_bodies = [b.body for b, bit in zip(boxes, sig) if bit]
        false_bodies = [b.body for b, bit in zip(boxes, sig) if not bit]
        filtered = [v for v in group
                    if all(space.value(v, body) for body in true_bodies)]
        if not filtered:
            continue
        counter.spend(1 << len(filtered))
        for r in range(1, len(filtered) + 1):
            for subset in itertools.combinations(filtered, r):
                if any(all(space.value(v, body) for v in subset)
                       for body in false_bodies):
                    continue
                if any(not any(v in subset for v in vecs) for vecs in member_vecs):
                    continue
                valid.append(subset)
    return valid


# ---------------------------------------------------------------------------
# explicitness checking


def _flatten_and(f: Formula) -> List[Formula]:
    if isinstance(f, And):
        return _flatten_and(f.left) + _flatten_and(f.right)
    return [f]


def _flatten_or(f: Formula) -> List[Formula]:
    if isinstance(f, Or):
        return _flatten_or(f.left) + _flatten_or(f.right)
    return [f]


def parse_explicit_formula(f: Formula, agents: Optional[Iterable[str]] = None) -> ExplicitFormula:
    """Recover (pi, gamma0, covers) from a formula in explicit shape.

    Raises ValueError when the formula does not have the shape: a conjunction
    of propositional literals, one candidate gamma0 that is a member of every
    cover, and at most one cover per agent.
    """
    conjuncts = _flatten_and(f)
    cover_map: Dict[str, FrozenSet[Formula]] = {}
    rest: List[Formula] = []
    for g in conjuncts:
        if isinstance(g, Cover):
            if g.agent in cover_map:
                raise ValueError(f"two covers for agent {g.agent!r}")
            cover_map[g.agent] = g.members
        else:
            rest.append(g)
    if agents is not None and set(agents) != set(cover_map):
        raise ValueError(f"covers present for {sorted(cover_map)}, expected {sorted(set(agents))}")
    if not cover_map:
        if not all(is_propositional(g) for g in rest):
            raise ValueError("no covers and a non-propositional conjunct; not explicit shape")
        return ExplicitFormula(big_and(rest) if rest else TOP, TOP, ())
    shared = None
    for members in cover_map.values():
        shared = set(members) if shared is None else shared & set(members)
    candidates = sorted(shared or (), key=formula_sort_key)
    for gamma0 in candidates:
        needed = _flatten_and(gamma0)
        pool = list(rest)
        ok = True
        for part in needed:
            if part in pool:
                pool.remove(part)
            elif isinstance(part, Top):
                continue
            else:
                ok = False
                break
        if ok and all(is_propositional(g) for g in pool):
            covers = tuple((a, cover_map[a]) for a in sorted(cover_map))
            return ExplicitFormula(big_and(pool) if pool else TOP, gamma0, covers)
    raise ValueError("no gamma0 candidate shared by every cover; not explicit shape")


def _conditions_hold(parsed: ExplicitFormula, budget: Optional[Budget]) -> bool:
    from .syntax import subformulae  # local to avoid polluting module namespace
    members_by_agent = {a: sorted(ms, key=formula_sort_key) for a, ms in parsed.covers}
    psi: Set[Formula] = set()
    for ms in members_by_agent.values():
        for m in ms:
            psi |= subformulae(m)
    for a, ms in members_by_agent.items():
        for gamma in ms:
            for p in psi:
                if not (prover.valid(Implies(gamma, p), FrameClass.S5, budget)
                        or prover.valid(Implies(gamma, Not(p)), FrameClass.S5, budget)):
                    return False
    for a, ms in members_by_agent.items():
        boxes = [p for p in psi if isinstance(p, Box) and p.agent == a]
        for box in boxes:
            everyone = all(prover.valid(Implies(g, box.body), FrameClass.S5, budget)
                           for g in ms)
            for gamma in ms:
                holds = prover.valid(Implies(gamma, box), FrameClass.S5, budget)
                if holds != everyone:
                    return False
    return True


def is_explicit(f: Formula, agents: Optional[Iterable[str]] = None,
                budget: Optional[Budget] = None) -> bool:
    """Both explicitness conditions, decided by the prover.

    Raises ValueError when f is not even of the explicit shape.
    """
    require_basic(f, "is_explicit")
    parsed = parse_explicit_formula(f, agents)
    return _conditions_hold(parsed, budget)


def _try_parse_explicit_disjunction(f: Formula, budget: Budget) -> Optional[ExplicitDisjunction]:
    if isinstance(f, Bottom):
        return ExplicitDisjunction(())
    disjuncts = []
    for g in _flatten_or(f):
        try:
            parsed = parse_explicit_formula(g)
        except ValueError:
            return None
        if not _conditions_hold(parsed, budget):
            return None
        disjuncts.append(parsed)
    return ExplicitDisjunction(tuple(disjuncts))
