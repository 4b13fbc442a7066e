import random
from pathlib import Path

import pytest

import checks
from argcalc.argdb import argument, argument_oracle, conditional_argument
from argcalc.logic import FALSE, Not, Var, equivalent, formula_size, implies, neg, parse_formula
from argcalc.network import (
    evidence_term,
    is_observable_leaf,
    parse_network,
    push_evidence_to_leaves,
    to_database,
)
from argcalc.propagation import (
    PropagationError,
    conditional_from_propagation,
    negated_evidence_argument,
    propagate,
)
from argcalc.testing import chain_network, random_network

DATA = Path(__file__).resolve().parent.parent / "data"


@pytest.fixture(scope="module")
def sprinkler():
    return parse_network((DATA / "sprinkler.net").read_text())


@pytest.fixture(scope="module")
def circuit():
    return parse_network((DATA / "circuit.net").read_text())


def test_prior_arguments_on_sprinkler_network(sprinkler):
    result = propagate(sprinkler, {})
    assert str(result[("wet_grass", True)]) == "a1 & a3 | a2 & a4 | a5"
    assert result[("wet_grass", False)] is FALSE
    assert str(result[("wet_shoes", True)]) == "a1 & a3 & a6 | a2 & a4 & a6 | a5 & a6"
    assert result.messages.message_count == 2 * len(sprinkler.edges)


def test_leaf_evidence_on_sprinkler_network(sprinkler):
    result = propagate(sprinkler, {"wet_shoes": False})
    db = to_database(sprinkler)
    delta = parse_formula("!wet_shoes")
    for (node, v), f in result.arguments.items():
        lit = Var(node) if v else Not(Var(node))
        assert equivalent(f, argument(db, implies(delta, lit)))
    against = negated_evidence_argument(result, "rain")
    assert equivalent(against, argument(db, neg(delta)))
    cond = conditional_from_propagation(result, ("rain", False))
    assert equivalent(cond, conditional_argument(db, Not(Var("rain")), delta))


def test_circuit_against_argument_through_propagation(circuit):
    ev = {"A": False, "B": True, "C": True, "F": False}
    net, pushed = push_evidence_to_leaves(circuit, ev)
    result = propagate(net, pushed)
    against = negated_evidence_argument(result, "D")
    assert str(against) == "OK_X & OK_Z | OK_Y & OK_Z"


def test_rejects_bad_inputs(sprinkler):
    with pytest.raises(PropagationError):
        propagate(sprinkler, {"wet_grass": True})
    with pytest.raises(PropagationError):
        propagate(sprinkler, {"snow": True})
    loop = parse_network(
        "lang A: a\nnode x {\n - : a ; false\n}\n"
        "node y parents: x {\n x : a ; false\n !x : false ; false\n}\n"
        "node z parents: x y {\n x, y : a ; false\n x, !y : false ; false\n"
        " !x, y : false ; false\n !x, !y : false ; false\n}\n"
    )
    with pytest.raises(PropagationError):
        propagate(loop, {})
    result = propagate(sprinkler, {"wet_shoes": True})
    with pytest.raises(PropagationError):
        negated_evidence_argument(result, "wet_shoes")


def test_random_polytrees_with_leaf_evidence():
    rng = random.Random(17)
    total = 0
    for _ in range(40):
        net = random_network(rng, rng.randint(1, 7), singly_connected=True)
        leaves = [n for n in net.nodes if is_observable_leaf(net, n)]
        ev = {n: rng.random() < 0.5 for n in leaves if rng.random() < 0.6}
        bad, count = checks.propagation_matches_oracle(net, ev)
        assert bad == []
        total += count
    assert total > 0


def test_random_polytrees_with_pushed_evidence():
    rng = random.Random(29)
    for _ in range(30):
        net = random_network(rng, rng.randint(2, 6), singly_connected=True)
        ev = {n: rng.random() < 0.5 for n in rng.sample(net.nodes, rng.randint(1, 2))}
        pushed, new_ev = push_evidence_to_leaves(net, ev)
        bad, _ = checks.propagation_matches_oracle(pushed, new_ev)
        assert bad == []
        # arguments for the original literals are those of the original database
        result = propagate(pushed, new_ev)
        db = to_database(net)
        delta = evidence_term(ev)
        for node in net.nodes:
            if node in ev:
                continue
            assert equivalent(result[(node, True)], argument_oracle(db, implies(delta, Var(node))))


def test_forest_uses_evidence_from_other_components():
    net = parse_network(
        "lang A: a b c\n"
        "node x {\n - : a ; false\n}\n"
        "node y parents: x {\n x : b ; false\n !x : false ; false\n}\n"
        "node z {\n - : c ; false\n}\n"
    )
    result = propagate(net, {"y": False})
    # observing !y contradicts a & b, so a & b argues for anything, z included
    assert equivalent(result[("z", True)], parse_formula("c | a & b"))
    assert equivalent(result[("z", False)], parse_formula("a & b"))
    bad, _ = checks.propagation_matches_oracle(net, {"y": False})
    assert bad == []


def test_shared_construction_matches_canonical():
    rng = random.Random(2)
    for _ in range(20):
        net = random_network(rng, rng.randint(2, 6), singly_connected=True)
        a = propagate(net, {}, canonical=True)
        b = propagate(net, {}, canonical=False)
        for key in a.arguments:
            assert equivalent(a[key], b[key])


def test_chain_cost_is_linear_in_shared_mode():
    sizes = []
    for n in (10, 20, 40):
        result = propagate(chain_network(n), {}, canonical=False)
        state = result.messages
        messages = [f for d in (state.pi_messages, state.lambda_messages) for m in d.values() for f in m.values()]
        sizes.append(formula_size(*result.arguments.values(), *messages))
    assert sizes[2] <= 2.5 * 4 * sizes[0]
    assert sizes[1] <= 2.5 * 2 * sizes[0]
