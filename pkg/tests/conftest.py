import pytest

from aflogic import KripkeModel, PointedKripkeModel, parse_action

GRANT_AGENTS = ["ed", "james", "tim"]

GRANT_ALPHA = ("L{ed}(?p) ; "
               "L{james}(L{ed}(?p) + L{ed}(?~p) + L{tim}(?p) + L{tim}(?~p)) ; "
               "L{tim}((?~p ; L{james}(?~p)) + ?true)")


@pytest.fixture
def m0():
    """Two worlds, universal relations for three agents, p true at w1 only."""
    universal = {(x, y) for x in ("w1", "w2") for y in ("w1", "w2")}
    model = KripkeModel(GRANT_AGENTS, ["w1", "w2"],
                        {a: universal for a in GRANT_AGENTS},
                        {"w1": ["p"], "w2": []})
    return PointedKripkeModel(model, ["w1"])


@pytest.fixture
def grant_alpha():
    return parse_action(GRANT_ALPHA, GRANT_AGENTS)
