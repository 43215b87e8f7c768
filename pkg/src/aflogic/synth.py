"""Synthesise an action formula achieving an epistemic goal wherever achievable.

The construction follows the class normal form of the goal: a disjunction
becomes a choice, and a clause becomes a guarded composition of learning
actions, one per cover, each learning the choice of the actions synthesised
for the cover's members.  Guards are achievability conditions reduced to basic
formulae, so synthesised actions contain no refinement quantifiers.  The
contracts are: every successful execution satisfies the goal, and wherever the
goal is achievable the action executes successfully and achieves it.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Optional

from .action import execute
from .budget import Budget
from .check import eval_basic, sample_model
from .frames import FrameClass
from .kripke import frame_class_holds, model_to_json
from .normform import DnfFormula, to_adnf, to_dnf, to_explicit
from .reduction import reduce_formula
from .syntax import (BOTTOM, TOP, ActionFormula, Formula, Learn, RefDiamond,
                     Test, action_agents, big_choice, big_compose,
                     formula_agents, formula_atoms, formula_sort_key,
                     print_action, require_basic)
from .tau import tau


def synthesize(goal: Formula, cls: FrameClass, budget: Optional[Budget] = None) -> ActionFormula:
    """An action formula that achieves `goal` exactly where it is achievable."""
    require_basic(goal, "synthesize")
    budget = Budget.ensure(budget)
    memo: Dict[Formula, ActionFormula] = {}
    s5_memo: Dict = {}

    def guard(f: Formula) -> Formula:
        return reduce_formula(RefDiamond(f), cls, budget, agents=formula_agents(goal))

    def synth(f: Formula) -> ActionFormula:
        if f in memo:
            return memo[f]
        budget.spend()
        if cls is FrameClass.S5:
            result = synth_s5(f)
        else:
            form = to_dnf(f, budget) if cls is FrameClass.K else to_adnf(f, budget)
            result = synth_clauses(form)
        memo[f] = result
        return result

    def synth_clauses(form: DnfFormula) -> ActionFormula:
        if not form.clauses:
            return Test(BOTTOM)
        branches = []
        for clause in form.clauses:
            parts: List[ActionFormula] = [Test(guard(clause.to_formula()))]
            for agent, members in clause.covers:
                if not members:
                    # an empty cover asks the agent to consider nothing possible
                    parts.append(Learn(frozenset([agent]), Test(BOTTOM), Test(BOTTOM)))
                    continue
                sub = sorted({synth(m.to_formula()) for m in members},
                             key=print_action)
                chosen = big_choice(sub)
                parts.append(Learn(frozenset([agent]), chosen, chosen))
            branches.append(big_compose(parts))
        return big_choice(branches)

    def synth_s5(f: Formula) -> ActionFormula:
        # Nested learnings, never compositions: a composed guard test is
        # unsound in S5, where the test's reflexive skip point leaks unguarded
        # worlds into every rebuilt cluster.  Each learning's first operand is
        # the construction for the current-state description one level down,
        # so the worlds along the designated chain carry fully rebuilt
        # clusters; they join each cover as its gamma0 member.
        disjunction = to_explicit(f, budget)
        if not disjunction.disjuncts:
            return Test(BOTTOM)
        return big_choice([build_disjunct(d, TOP) for d in disjunction.disjuncts])

    def build_disjunct(d, extra_guard: Formula) -> ActionFormula:
        from .fold import s_and
        key = (d, extra_guard)
        if key in s5_memo:
            return s5_memo[key]
        budget.spend()
        own_guard = s_and(extra_guard, guard(d.to_formula()))
        if not d.covers:
            result: ActionFormula = Test(own_guard)
        else:
            inner = to_explicit(d.gamma0, budget)
            if not inner.disjuncts:
                result = Test(BOTTOM)
            else:
                acc = big_choice([build_disjunct(e, own_guard)
                                  for e in inner.disjuncts])
                for agent, members in d.covers:
                    sub = sorted({synth(m) for m in members}, key=print_action)
                    acc = Learn(frozenset([agent]), acc, big_choice(sub))
                result = acc
        s5_memo[key] = result
        return result

    return synth(goal)


@dataclass
class SynthReport:
    """Outcome counts of a randomised contract check, plus any counterexamples."""

    trials: int
    achievable: int = 0
    successes: int = 0
    goal_after_success: int = 0
    counterexamples: List[dict] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.counterexamples

    def render(self) -> str:
        lines = [
            f"trials: {self.trials}",
            f"goal achievable: {self.achievable}",
            f"executions succeeded: {self.successes}",
            f"goal after success: {self.goal_after_success}",
            f"{len(self.counterexamples)} counterexamples",
        ]
        for ce in self.counterexamples:
            lines.append(f"-- {ce['reason']}")
            lines.append(ce["model"].strip())
        return "\n".join(lines)


def verify_synthesis(goal: Formula, alpha: ActionFormula, cls: FrameClass,
                     trials: int, seed: int,
                     budget: Optional[Budget] = None) -> SynthReport:
    """Randomised check of both synthesis contracts; deterministic in seed.

    Necessity: a successful execution always yields the goal.  Sufficiency:
    wherever the reduced achievability formula holds, execution succeeds and
    yields the goal.
    """
    require_basic(goal, "verify_synthesis")
    budget = Budget.ensure(budget)
    agents = sorted(formula_agents(goal) | action_agents(alpha)) or ["a"]
    atoms = sorted(formula_atoms(goal)) or ["p"]
    achievable_formula = reduce_formula(RefDiamond(goal), cls, budget, agents=agents)
    pam = tau(alpha, cls, agents, budget, minimize=True)
    report = SynthReport(trials=trials)
    for i in range(trials):
        pm = sample_model(cls, 4, agents, atoms, seed * 7919 + i)
        achievable = eval_basic(pm, achievable_formula)
        if achievable:
            report.achievable += 1
        result = execute(pm, pam, sat=lambda s, pre: eval_basic(pm.at(s), pre))
        succeeded = bool(result.model.states) and bool(result.points) \
            and frame_class_holds(result.model, cls)
        if succeeded:
            report.successes += 1
            achieved = eval_basic(result, goal)
            if achieved:
                report.goal_after_success += 1
            else:
                report.counterexamples.append({
                    "reason": f"necessity: successful execution refutes goal (trial {i})",
                    "model": model_to_json(pm),
                })
        if achievable and not (succeeded and eval_basic(result, goal)):
            report.counterexamples.append({
                "reason": f"sufficiency: goal achievable but not achieved (trial {i})",
                "model": model_to_json(pm),
            })
    return report
