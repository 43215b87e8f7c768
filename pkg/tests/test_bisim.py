import pytest

from aflogic import (Atom, FrameClass, KripkeModel, Not, PointedKripkeModel,
                     am_bisimilar, am_n_bisimilar, b_bisimilar, bisimilar,
                     check, eval_basic, execute, modal_depth, n_bisimilar,
                     parse_action, refines, tau)
from aflogic.bisim import am_quotient
from aflogic.check import sample_action_model, sample_formula, sample_model

P = Atom("p")
K, K45, S5 = FrameClass.K, FrameClass.K45, FrameClass.S5


def chain(atoms_by_state):
    states = [f"c{i}" for i in range(len(atoms_by_state))]
    edges = {(states[i], states[i + 1]) for i in range(len(states) - 1)}
    model = KripkeModel(["a"], states, {"a": edges},
                        {s: v for s, v in zip(states, atoms_by_state)})
    return PointedKripkeModel(model, [states[0]])


def test_bisimilar_reflexive(m0):
    assert bisimilar(m0, m0)


def test_bisimilar_duplicate_state(m0):
    universal = {(x, y) for x in ("u1", "u2", "u3") for y in ("u1", "u2", "u3")}
    agents = sorted(m0.model.agents)
    tripled = KripkeModel(agents, ["u1", "u2", "u3"],
                          {a: universal for a in agents},
                          {"u1": ["p"], "u2": [], "u3": ["p"]})
    assert bisimilar(m0, PointedKripkeModel(tripled, ["u1"]))


def test_bisimilar_atoms_differ(m0):
    assert not bisimilar(m0, m0.at("w2"))


def test_n_bisimilar_chains():
    two = chain([["p"], ["q"]])
    three = chain([["p"], ["q"], ["r"]])
    assert n_bisimilar(two, three, 0)
    assert n_bisimilar(two, three, 1)
    assert not n_bisimilar(two, three, 2)


def test_n_bisimilar_zero_checks_atoms(m0):
    assert n_bisimilar(m0, m0.at("w1"), 0)
    assert not n_bisimilar(m0, m0.at("w2"), 0)


def test_bisimilar_implies_n_bisimilar(m0):
    for seed in range(20):
        pm1 = sample_model(K, 4, ["a"], ["p"], seed)
        pm2 = sample_model(K, 4, ["a"], ["p"], seed + 500)
        if bisimilar(pm1, pm2):
            for n in range(6):
                assert n_bisimilar(pm1, pm2, n)


def test_n_bisim_monotone():
    for seed in range(30):
        pm1 = sample_model(K, 4, ["a", "b"], ["p"], seed)
        pm2 = sample_model(K, 4, ["a", "b"], ["p"], seed + 500)
        for n in (3, 2, 1):
            if n_bisimilar(pm1, pm2, n):
                assert n_bisimilar(pm1, pm2, n - 1)


def test_formula_agreement_of_bisimilar_models():
    agents, atoms = ["a", "b"], ["p"]
    pairs = 0
    for seed in range(60):
        pm1 = sample_model(K, 4, agents, atoms, seed)
        pm2 = sample_model(K, 4, agents, atoms, seed + 500)
        if not bisimilar(pm1, pm2):
            continue
        pairs += 1
        for fseed in range(100):
            f = sample_formula(2, agents, atoms, fseed)
            assert eval_basic(pm1, f) == eval_basic(pm2, f)
        if pairs >= 3:
            break


def test_depth_bounded_agreement():
    agents, atoms = ["a"], ["p", "q"]
    for seed in range(40):
        pm1 = sample_model(K, 3, agents, atoms, seed)
        pm2 = sample_model(K, 3, agents, atoms, seed + 500)
        for n in (1, 2):
            if n_bisimilar(pm1, pm2, n):
                for fseed in range(60):
                    f = sample_formula(n, agents, atoms, fseed)
                    assert modal_depth(f) <= n
                    assert eval_basic(pm1, f) == eval_basic(pm2, f)


def test_b_bisimilar_empty_group(m0):
    assert b_bisimilar(m0, m0.at("w2"), [])


def test_b_bisimilar_full_group(m0):
    assert b_bisimilar(m0, m0, sorted(m0.model.agents))


def test_b_restricted_agreement():
    from aflogic import is_b_restricted
    agents, atoms = ["a", "b"], ["p"]
    hits = 0
    for seed in range(80):
        pm1 = sample_model(K, 4, agents, atoms, seed)
        pm2 = sample_model(K, 4, agents, atoms, seed + 700)
        if bisimilar(pm1, pm2):
            continue  # want strictly partial agreement cases too
        if not b_bisimilar(pm1, pm2, ["a"]):
            continue
        hits += 1
        for fseed in range(200):
            f = sample_formula(2, agents, atoms, fseed)
            if is_b_restricted(f, ["a"]):
                assert eval_basic(pm1, f) == eval_basic(pm2, f)
        if hits >= 2:
            break


def test_refines_preorder(m0):
    assert refines(m0, m0)


def test_refines_execution_results(m0):
    pam = tau(parse_action("L{ed}(?p)", sorted(m0.model.agents)), K,
              sorted(m0.model.agents))
    result = execute(m0, pam, lambda s, pre: eval_basic(m0.at(s), pre))
    assert result.points
    assert refines(result.at(result.single_point()), m0)


def test_refines_fails_without_matching_successors(m0):
    lonely = KripkeModel(sorted(m0.model.agents), ["v"],
                         {a: [] for a in m0.model.agents}, {"v": ["p"]})
    assert not refines(m0, PointedKripkeModel(lonely, ["v"]))
    # the refinement direction deletes successors, so the converse holds
    assert refines(PointedKripkeModel(lonely, ["v"]), m0)


def test_am_bisimilar_examples():
    a = tau(parse_action("?p", ["a"]), K, ["a"])
    assert am_bisimilar(a, a, K)
    doubled = tau(parse_action("?~~p", ["a"]), K, ["a"])
    assert am_bisimilar(a, doubled, K)
    q = tau(parse_action("?q", ["a"]), K, ["a"])
    assert not am_bisimilar(a, q, K)


def test_am_n_bisimilar_examples():
    a = tau(parse_action("?p", ["a"]), K, ["a"])
    q = tau(parse_action("?q", ["a"]), K, ["a"])
    assert am_n_bisimilar(a, tau(parse_action("?~~p", ["a"]), K, ["a"]), 0, K)
    assert not am_n_bisimilar(a, q, 0, K)


def test_am_bisimilar_implies_bounded():
    for seed in range(15):
        a1 = sample_action_model(K, 3, ["a"], ["p"], seed)
        a2 = sample_action_model(K, 3, ["a"], ["p"], seed + 300)
        if am_bisimilar(a1, a2, K):
            for n in range(4):
                assert am_n_bisimilar(a1, a2, n, K)


def test_am_quotient_bisimilar():
    for cls in (K, K45, S5):
        for seed in range(10):
            pam = sample_action_model(cls, 4, ["a", "b"], ["p"], seed)
            small = am_quotient(pam, cls)
            assert len(small.model.points) <= len(pam.model.points)
            assert am_bisimilar(small, pam, cls)


def test_execution_congruence_across_classes():
    # bisimilar pointed models agree on checks after any shared action
    agents = ["a", "b"]
    for seed in range(10):
        pm = sample_model(S5, 4, agents, ["p"], seed)
        from aflogic import disjoint_union
        union, ren1, _ = disjoint_union(pm.model, pm.model)
        copy = PointedKripkeModel(union, [ren1[pm.single_point()]])
        from aflogic.check import sample_action
        action = sample_action(2, agents, ["p"], seed)
        f = sample_formula(1, agents, ["p"], seed)
        from aflogic import DynBox
        g = DynBox(action, f)
        assert check(pm, g, S5) == check(copy, g, S5)
