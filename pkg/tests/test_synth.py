import pytest

from aflogic import (Atom, Bottom, Box, Choice, Compose, FrameClass, Learn,
                     Test, check, parse_formula, print_action, synthesize,
                     tau, verify_synthesis)
from aflogic.check import sample_formula

P, Q = Atom("p"), Atom("q")
K, K45, S5 = FrameClass.K, FrameClass.K45, FrameClass.S5
AG = ["a", "b"]


def test_propositional_goal_is_bare_test():
    assert synthesize(P, K) == Test(P)


def test_bottom_goal_never_executes():
    alpha = synthesize(Bottom(), K)
    assert alpha == Test(Bottom())
    report = verify_synthesis(Bottom(), alpha, K, trials=20, seed=3)
    assert report.ok
    assert report.successes == 0


def test_knowledge_goal_k_structure():
    goal = Box("a", P)
    alpha = synthesize(goal, K)
    # one branch teaches a the fact, the other empties a's beliefs
    branches = []
    def flatten(x):
        if isinstance(x, Choice):
            flatten(x.left)
            flatten(x.right)
        else:
            branches.append(x)
    flatten(alpha)
    texts = [print_action(b) for b in branches]
    assert any("L{a}(?p)" in t for t in texts)
    assert any("?false" in t for t in texts)
    report = verify_synthesis(goal, alpha, K, trials=50, seed=7)
    assert report.ok


def test_contracts_hold_across_classes():
    goals = ["[a] p", "<a> p & <a> ~p", "p & [b] (p | q)", "~[a] q"]
    for cls in (K, K45, S5):
        for text in goals:
            goal = parse_formula(text, AG)
            alpha = synthesize(goal, cls)
            report = verify_synthesis(goal, alpha, cls, trials=40, seed=11)
            assert report.ok, (cls, text, report.render())


def test_s5_nested_learning_regression():
    # [b]~p once failed: a top-most guard test leaks unguarded worlds in S5
    goal = parse_formula("[b] ~p", AG)
    alpha = synthesize(goal, S5)
    report = verify_synthesis(goal, alpha, S5, trials=60, seed=5)
    assert report.ok, report.render()


def test_wrong_action_yields_counterexample():
    from aflogic import Top
    goal = Box("a", P)
    report = verify_synthesis(goal, Test(Top()), K, trials=60, seed=9)
    assert not report.ok
    assert any("necessity" in ce["reason"] or "sufficiency" in ce["reason"]
               for ce in report.counterexamples)
    assert all("states" in ce["model"] for ce in report.counterexamples)


def test_verify_deterministic():
    goal = parse_formula("[a] p", AG)
    alpha = synthesize(goal, K)
    r1 = verify_synthesis(goal, alpha, K, trials=30, seed=21)
    r2 = verify_synthesis(goal, alpha, K, trials=30, seed=21)
    assert r1.achievable == r2.achievable
    assert r1.successes == r2.successes
    assert r1.render() == r2.render()


def test_random_goal_contracts():
    for cls in (K, K45, S5):
        verified = 0
        seed = 8000
        while verified < 12:
            goal = sample_formula(2, AG, ["p", "q"], seed)
            seed += 1
            assert seed < 8200
            try:
                alpha = synthesize(goal, cls)
                report = verify_synthesis(goal, alpha, cls, trials=25, seed=13)
            except Exception as exc:
                from aflogic import NotConverted, ResourceExhausted
                if isinstance(exc, (NotConverted, ResourceExhausted)):
                    continue
                raise
            assert report.ok, (cls, print_formula(goal), report.render())
            verified += 1
