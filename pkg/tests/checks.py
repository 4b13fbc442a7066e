"""Property checks shared by the unit suites and the acceptance run.

Each check returns a list of human-readable violations (empty when the
property holds).
"""

from __future__ import annotations

import random

import oracles
from argcalc.argdb import (
    argument,
    argument_oracle,
    conditional_argument,
    is_sufficient_argument,
    negative_influence,
    plus_independent,
    positive_influence,
    plus_independent_by_disjunction,
    validate_database,
)
from argcalc.logic import FALSE, TRUE, Not, Var, conj, disj, entails, equivalent, implies, neg
from argcalc.network import d_separated, evidence_term, to_database
from argcalc.propagation import propagate
from argcalc.testing import random_formula


def _pair(rng: random.Random, db):
    return random_formula(rng, db.domain, 2), random_formula(rng, db.domain, 2)


def arguments_match_oracle(db, rng: random.Random, trials: int = 3) -> list[str]:
    bad = []
    for _ in range(trials):
        phi = random_formula(rng, db.domain, 3)
        if not equivalent(argument(db, phi), argument_oracle(db, phi)):
            bad.append(f"argument mismatch for {phi}")
    return bad


def argument_algebra(db, rng: random.Random) -> list[str]:
    bad = []
    if not equivalent(argument(db, TRUE), TRUE):
        bad.append("argument(true) is not true")
    if not equivalent(argument(db, FALSE), FALSE):
        bad.append("argument(false) is not false")
    phi, psi = _pair(rng, db)
    if not equivalent(argument(db, conj(phi, psi)), conj(argument(db, phi), argument(db, psi))):
        bad.append(f"conjunction rule fails for {phi}, {psi}")
    # an equivalent rewriting of phi gets an equivalent argument
    twin = neg(neg(disj(conj(phi, psi), conj(phi, neg(psi)))))
    if not equivalent(argument(db, phi), argument(db, twin)):
        bad.append(f"equivalent sentences get different arguments: {phi}")
    return bad


def disjunction_lower_bound(db, rng: random.Random) -> list[str]:
    phi, psi = _pair(rng, db)
    if entails(disj(argument(db, phi), argument(db, psi)), argument(db, disj(phi, psi))):
        return []
    return [f"disjunction lower bound fails for {phi}, {psi}"]


def disjunction_rule(db, rng: random.Random) -> list[str]:
    """The disjunction rule for the two extreme sufficient arguments and one in between."""
    phi, psi = _pair(rng, db)
    lower = conditional_argument(db, psi, phi)
    upper = argument(db, implies(phi, psi))
    against = argument(db, neg(phi))
    a = sorted(db.assumptions)
    middle = disj(lower, conj(upper, random_formula(rng, a, 2)))
    bad = []
    for alpha in (lower, upper, middle):
        if not is_sufficient_argument(db, alpha, psi, phi):
            bad.append(f"{alpha} should be sufficient for {psi} given {phi}")
        if not equivalent(upper, disj(alpha, against)):
            bad.append(f"disjunction rule fails for {alpha}, {psi} given {phi}")
    return bad


def influence_characterization(db, rng: random.Random) -> list[str]:
    """No positive (negative) influence iff the conditional argument is weaker (stronger)."""
    phi, psi = _pair(rng, db)
    bad = []
    cond, plain = conditional_argument(db, psi, phi), argument(db, psi)
    if equivalent(positive_influence(db, phi, psi), FALSE) != entails(cond, plain):
        bad.append(f"positive influence characterization fails for {phi}, {psi}")
    if equivalent(negative_influence(db, phi, psi), FALSE) != entails(plain, cond):
        bad.append(f"negative influence characterization fails for {phi}, {psi}")
    return bad


def _split(rng: random.Random, names, sizes):
    names = list(names)
    rng.shuffle(names)
    out, pos = [], 0
    for s in sizes:
        out.append(names[pos:pos + s])
        pos += s
    return out


def graphoid(db, rng: random.Random) -> list[str]:
    """Symmetry, and the combined decomposition/contraction law."""
    n = len(db.domain)
    bad = []
    # symmetry over a random split
    ni = rng.randint(1, max(1, n - 2))
    nj = rng.randint(1, n - ni)
    nk = rng.randint(0, n - ni - nj)
    I, J, K = _split(rng, db.domain, (ni, nj, nk))
    if plus_independent(db, I, K, J) != plus_independent(db, J, K, I):
        bad.append(f"symmetry fails for I={I} K={K} J={J}")
    # +Ind(I,K,J) & +Ind(L,K u I,J)  <=>  +Ind(I u L,K,J)
    if n >= 3:
        nk = rng.randint(0, n - 3)
        I, L, J, K = _split(rng, db.domain, (1, 1, 1, nk))
        left = plus_independent(db, I, K, J) and plus_independent(db, L, K + I, J)
        right = plus_independent(db, I + L, K, J)
        if left != right:
            bad.append(f"contraction/decomposition fails for I={I} L={L} K={K} J={J}")
    return bad


def disjunctive_independence(db, rng: random.Random) -> list[str]:
    n = len(db.domain)
    ni = rng.randint(1, max(1, n - 1))
    nj = rng.randint(1, n - ni)
    nk = rng.randint(0, n - ni - nj)
    I, J, K = _split(rng, db.domain, (ni, nj, nk))
    if plus_independent(db, I, K, J) != plus_independent_by_disjunction(db, I, K, J):
        return [f"disjunctive characterization fails for I={I} K={K} J={J}"]
    return []


def reference_agreement(db, rng: random.Random) -> list[str]:
    """The default reading agrees with the all-sentences reference."""
    n = len(db.domain)
    ni = rng.randint(1, max(1, min(2, n - 1)))
    nj = rng.randint(1, n - ni)
    nk = rng.randint(0, n - ni - nj)
    I, J, K = _split(rng, db.domain, (ni, nj, nk))
    if plus_independent(db, I, K, J) != oracles.plus_independent_reference(db, I, K, J):
        return [f"reading disagrees with reference for I={I} K={K} J={J}"]
    return []


# ---------------------------------------------------------------------------
# networks


def network_local_properties(net) -> list[str]:
    """Validity, table entries as sufficient arguments, local +independence."""
    db = to_database(net)
    bad = []
    if validate_database(db) is not None:
        bad.append("corresponding database is not an argument database")
    for node, table in net.tables.items():
        for row in table.row_order:
            given = table.row_term(row)
            for v in (True, False):
                lit = Var(node) if v else Not(Var(node))
                if not is_sufficient_argument(db, table.entry(row, v), lit, given):
                    bad.append(f"Q({row}, {lit}) is not a sufficient argument at {node}")
        others = [m for m in net.nodes if m != node and m not in net.descendants(node) and m not in table.parents]
        if others and not plus_independent(db, [node], list(table.parents), others):
            bad.append(f"{node} depends on its non-descendants given its parents")
    return bad


def dsep_soundness(net, rng: random.Random, trials: int = 4) -> tuple[list[str], int]:
    """d-separation implies +independence; also returns how many cases were d-separated."""
    db = to_database(net)
    bad, separated = [], 0
    parents = {n: net.parents(n) for n in net.nodes}
    for _ in range(trials):
        nodes = net.nodes[:]
        rng.shuffle(nodes)
        if len(nodes) < 2:
            break
        ni = 2 if len(nodes) > 3 and rng.random() < 0.3 else 1
        I, J = nodes[:ni], [nodes[ni]]
        K = nodes[ni + 1:ni + 1 + rng.randint(0, len(nodes) - ni - 1)]
        verdict = d_separated(net, I, K, J)
        if verdict != oracles.d_separated(parents, I, K, J):
            bad.append(f"d-separation disagrees with the moral-graph oracle for I={I} K={K} J={J}")
        if verdict:
            separated += 1
            if not plus_independent(db, I, K, J):
                bad.append(f"d-separated but dependent: I={I} K={K} J={J}")
    return bad, separated


def propagation_matches_oracle(net, evidence) -> tuple[list[str], int]:
    """Every propagated literal argument against the enumeration oracle."""
    result = propagate(net, evidence)
    db = to_database(net)
    delta = evidence_term(evidence)
    bad = []
    if result.messages.message_count != 2 * len(net.edges):
        bad.append(f"{result.messages.message_count} messages on {len(net.edges)} edges")
    for (node, v), f in result.arguments.items():
        lit = Var(node) if v else Not(Var(node))
        if not equivalent(f, argument_oracle(db, implies(delta, lit))):
            bad.append(f"propagated argument for {lit} differs from the oracle")
    return bad, len(result.arguments)
