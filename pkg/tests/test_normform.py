import pytest

from aflogic import (Atom, Bottom, Box, Cover, Diamond, FrameClass, Not,
                     ResourceExhausted, Top, equiv, is_explicit, to_adnf,
                     to_dnf, to_explicit)
from aflogic.check import sample_formula
from aflogic.normform import parse_explicit_formula
from aflogic.syntax import And, big_and

P, Q = Atom("p"), Atom("q")
K, K45, S5 = FrameClass.K, FrameClass.K45, FrameClass.S5

AGENTS, ATOMS = ["a", "b"], ["p", "q"]


def _verified_samples(count, convert, cls, start_seed=0):
    """Yield (formula, converted) pairs whose equivalence the prover can afford."""
    produced = 0
    seed = start_seed
    while produced < count:
        f = sample_formula(2, AGENTS, ATOMS, seed)
        seed += 1
        assert seed < start_seed + 6 * count, "too many resource-capped samples"
        d = convert(f)
        try:
            ok = equiv(f, d.to_formula(), cls)
        except ResourceExhausted:
            continue
        yield f, d, ok
        produced += 1


def test_dnf_examples():
    d = to_dnf(Diamond("a", P))
    assert len(d.clauses) == 1
    ((agent, members),) = d.clauses[0].covers
    assert agent == "a"
    member_formulas = {m.to_formula() for m in members}
    assert member_formulas == {P, Top()}

    d2 = to_dnf(Box("a", P))
    assert len(d2.clauses) == 2
    member_sets = sorted(tuple(sorted(str(m.to_formula()) for m in ms))
                         for c in d2.clauses for a, ms in c.covers)
    assert frozenset() in {frozenset(ms) for c in d2.clauses for a, ms in c.covers} or \
        any(not ms for c in d2.clauses for a, ms in c.covers)

    d3 = to_dnf(P)
    assert len(d3.clauses) == 1
    assert d3.clauses[0].pi == P
    assert d3.clauses[0].covers == ()


def test_dnf_box_two_disjunct_shape():
    d = to_dnf(Box("a", P))
    cover_sizes = sorted(len(ms) for c in d.clauses for _a, ms in c.covers)
    assert cover_sizes == [0, 1]
    assert equiv(Box("a", P), d.to_formula(), K)


def test_dnf_bottom_is_empty():
    assert to_dnf(Bottom()).clauses == ()


def test_dnf_semantic_preservation():
    for f, d, ok in _verified_samples(60, to_dnf, K):
        assert ok, f"dnf changed meaning of {f}"


def test_adnf_alternation_structural():
    for seed in range(60):
        f = sample_formula(2, AGENTS, ATOMS, seed)
        assert to_adnf(f).is_alternating()


def test_adnf_semantic_preservation():
    for f, d, ok in _verified_samples(60, to_adnf, K45):
        assert ok, f"adnf changed meaning of {f}"
        assert d.is_alternating()


def test_adnf_absorbs_nested_same_agent():
    # double diamonds collapse under transitivity and euclideanness
    f = Diamond("a", Diamond("a", P))
    d = to_adnf(f)
    assert d.is_alternating()
    assert equiv(f, d.to_formula(), K45)


def test_adnf_propositional_identity():
    assert to_adnf(P).to_formula() == P


def test_explicit_examples():
    e = to_explicit(Bottom())
    assert e.disjuncts == ()
    assert e.to_formula() == Bottom()

    f = And(Box("a", P), P)
    e2 = to_explicit(f)
    assert e2.disjuncts
    assert equiv(f, e2.to_formula(), S5)
    for d in e2.disjuncts:
        assert is_explicit(d.to_formula())


def test_explicit_idempotent_and_preserving():
    count = 0
    seed = 0
    while count < 30:
        f = sample_formula(2, AGENTS, ATOMS, seed)
        seed += 1
        assert seed < 200
        try:
            e = to_explicit(f)
            assert equiv(f, e.to_formula(), S5)
        except (ResourceExhausted, Exception) as exc:
            from aflogic import NotConverted
            if isinstance(exc, (ResourceExhausted, NotConverted)):
                continue
            raise
        again = to_explicit(e.to_formula())
        assert again.to_formula() == e.to_formula()
        count += 1


def test_is_explicit_trivial_example():
    f = big_and([P, Top(), Cover("a", frozenset([Top()]))])
    assert is_explicit(f)


def test_is_explicit_condition_one_fails():
    # gamma = p does not decide q, so condition 1 fails
    f = big_and([Top(), P, Cover("a", frozenset([P, Q]))])
    parsed = parse_explicit_formula(f)
    assert parsed.gamma0 == P
    assert not is_explicit(f)


def test_is_explicit_shape_mismatch():
    f = big_and([P, Cover("a", frozenset([Q])), Cover("b", frozenset([P]))])
    with pytest.raises(ValueError):
        is_explicit(f)  # no shared gamma0 candidate


def test_explicit_gamma0_is_member_everywhere():
    f = And(Box("a", P), Diamond("b", Q))
    try:
        e = to_explicit(f)
    except ResourceExhausted:
        pytest.skip("resource capped")
    for d in e.disjuncts:
        for _agent, members in d.covers:
            assert d.gamma0 in members
