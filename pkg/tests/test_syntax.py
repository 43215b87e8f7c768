import pytest

from aflogic import (And, Atom, Bottom, Box, Cover, Diamond, DynBox, Learn,
                     Not, ParseError, RefBox, Test, Top, expand_cover,
                     is_b_restricted, is_basic, modal_depth, parse_action,
                     parse_formula, print_action, print_formula, subformulae)
from aflogic.check import sample_action, sample_formula

P, Q = Atom("p"), Atom("q")


def test_parse_conjunction_with_box():
    f = parse_formula("p & [a]q", ["a"])
    assert f == And(P, Box("a", Q))


def test_parse_learning_box():
    f = parse_formula("[L{ed}(?p)] [ed] p", ["ed", "james", "tim"])
    learn = Learn(frozenset(["ed"]), Test(P), Test(P))
    assert f == DynBox(learn, Box("ed", P))


def test_parse_unknown_bracket_content_fails():
    with pytest.raises(ParseError):
        parse_formula("[zz] p", ["a"])


def test_parse_error_carries_position():
    with pytest.raises(ParseError) as exc:
        parse_formula("p &", ["a"])
    assert exc.value.line == 1


def test_parse_unknown_agent_in_learn_set():
    with pytest.raises(ParseError):
        parse_action("L{zz}(?p)", ["a"])


def test_precedence():
    f = parse_formula("~p & q | r -> s <-> t", ["a"])
    assert print_formula(f) == "~p & q | r -> s <-> t"
    g = parse_formula("p -> q -> r", ["a"])
    assert print_formula(g) == "p -> q -> r"
    assert g.right.left == Q  # right-associated


def test_action_precedence():
    a = parse_action("?p ; ?q + ?r", ["x"])
    assert print_action(a) == "?p ; ?q + ?r"
    # ";" binds tighter than "+"
    assert a.left.left == Test(P)


def test_learning_sugar():
    a = parse_action("L{a}(?p)", ["a"])
    assert a.left == a.right
    b = parse_action("L{a,b}(?p, ?q)", ["a", "b"])
    assert b.group == frozenset(["a", "b"])
    assert b.left != b.right


def test_refinement_quantifiers():
    f = parse_formula("[*] p & <*> q", ["a"])
    assert isinstance(f.left, RefBox)


def test_print_examples():
    assert print_formula(P) == "p"
    assert print_formula(Box("a", Not(P))) == "[a] ~p"
    assert print_action(Learn(frozenset(["ed"]), Test(P), Test(P))) == "L{ed}(?p)"


def test_round_trip_random():
    agents, atoms = ["a", "b"], ["p", "q"]
    for seed in range(120):
        f = sample_formula(3, agents, atoms, seed, dynamic=2, refinement=1)
        assert parse_formula(print_formula(f), agents) == f
    for seed in range(60):
        action = sample_action(3, agents, atoms, seed)
        assert parse_action(print_action(action), agents) == action


def test_modal_depth_examples():
    assert modal_depth(P) == 0
    assert modal_depth(Box("a", P)) == 1
    assert modal_depth(Diamond("a", And(P, Box("b", Q)))) == 2
    assert modal_depth(Cover("a", frozenset())) == 1
    with pytest.raises(ValueError):
        modal_depth(RefBox(P))


def test_expand_cover():
    assert expand_cover("a", [P]) == And(Box("a", P), Diamond("a", P))
    assert expand_cover("a", []) == Box("a", Bottom())


def test_cover_depth_invariant():
    for seed in range(40):
        members = [sample_formula(1, ["a"], ["p", "q"], seed * 3 + i) for i in range(2)]
        cover = Cover("a", frozenset(members))
        assert modal_depth(cover) == modal_depth(expand_cover("a", members))


def test_b_restricted():
    assert is_b_restricted(Box("a", P), ["a"])
    assert not is_b_restricted(Box("b", P), ["a"])
    # inner b sits under the a-box, so only the top layer counts
    assert is_b_restricted(And(P, Box("a", Box("b", P))), ["a"])


def test_b_restricted_full_agent_set_is_no_restriction():
    agents, atoms = ["a", "b"], ["p", "q"]
    for seed in range(40):
        f = sample_formula(2, agents, atoms, seed)
        assert is_b_restricted(f, agents)


def test_subformulae():
    assert subformulae(P) == {P}
    assert subformulae(Box("a", P)) == {Box("a", P), P}
    assert subformulae(And(P, Q)) == {And(P, Q), P, Q}


def test_is_basic():
    assert is_basic(Box("a", P))
    assert not is_basic(DynBox(Test(P), P))
