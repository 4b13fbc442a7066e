"""Random instance generators shared by the property suites and the acceptance run."""

from __future__ import annotations

import random
from typing import Sequence

from .argdb import ArgumentDatabase, Sentence
from .logic import FALSE, TRUE, Formula, Iff, Not, Var, Vocabulary, conj, disj, neg


def random_formula(rng: random.Random, names: Sequence[str], depth: int = 3) -> Formula:
    """A random formula using every connective; leaves drawn from ``names``."""
    if depth <= 0 or rng.random() < 0.25:
        roll = rng.random()
        if roll < 0.05:
            return TRUE
        if roll < 0.1:
            return FALSE
        v = Var(rng.choice(names))
        return Not(v) if rng.random() < 0.4 else v
    kind = rng.choice(("not", "and", "or", "or", "and", "implies", "iff"))
    if kind == "not":
        return Not(random_formula(rng, names, depth - 1))
    lhs = random_formula(rng, names, depth - 1)
    rhs = random_formula(rng, names, depth - 1)
    if kind == "and":
        return lhs & rhs
    if kind == "or":
        return lhs | rhs
    if kind == "implies":
        return lhs >> rhs
    return Iff(lhs, rhs)


def random_term(rng: random.Random, names: Sequence[str], max_len: int = 2) -> Formula:
    chosen = rng.sample(list(names), rng.randint(1, min(max_len, len(names))))
    return conj(*(Var(n) if rng.random() < 0.7 else Not(Var(n)) for n in chosen))


def random_database(
    rng: random.Random,
    max_domain: int = 4,
    max_assumptions: int = 4,
    max_sentences: int = 6,
) -> ArgumentDatabase:
    """A random argument database.

    Antecedents are short terms and consequents random domain formulas; a
    candidate whose assumption projection is not valid is rejected and redrawn.
    """
    from .argdb import validate_database

    while True:
        domain = [f"x{i}" for i in range(1, rng.randint(2, max_domain) + 1)]
        assumptions = [f"a{i}" for i in range(1, rng.randint(1, max_assumptions) + 1)]
        vocab = Vocabulary(domain, assumptions)
        sentences = []
        for _ in range(rng.randint(1, max_sentences)):
            alpha = random_term(rng, assumptions)
            phi = random_formula(rng, domain, depth=2)
            sentences.append(Sentence(alpha, phi))
        db = ArgumentDatabase(vocab, sentences)
        if validate_database(db) is None:
            return db


def random_exclusive_pair(rng: random.Random, names: Sequence[str]) -> tuple[Formula, Formula]:
    """Two assumption formulas whose conjunction is unsatisfiable."""
    roll = rng.random()
    pos = random_term(rng, names) if roll < 0.8 else FALSE
    if rng.random() < 0.35:
        return pos, FALSE
    other = random_term(rng, names)
    if rng.random() < 0.5:
        return FALSE if pos is FALSE else pos, conj(other, neg(pos))
    return disj(pos, FALSE), conj(neg(pos), other)


def random_dag(rng: random.Random, n: int, max_parents: int = 2, singly_connected: bool = False) -> dict[str, list[str]]:
    """Parent lists over nodes ``v1..vn`` in a random topological order."""
    names = [f"v{i}" for i in range(1, n + 1)]
    parents: dict[str, list[str]] = {name: [] for name in names}
    component = {name: name for name in names}

    def find(x):
        while component[x] != x:
            component[x] = component[component[x]]
            x = component[x]
        return x

    for idx, child in enumerate(names):
        candidates = names[:idx]
        rng.shuffle(candidates)
        want = rng.randint(0, min(max_parents, len(candidates)))
        for p in candidates:
            if len(parents[child]) >= want:
                break
            if singly_connected:
                if find(p) == find(child):
                    continue
                component[find(p)] = find(child)
            parents[child].append(p)
    return parents


def random_network(
    rng: random.Random,
    n: int,
    assumptions: Sequence[str] = ("b1", "b2", "b3", "b4"),
    max_parents: int = 2,
    singly_connected: bool = False,
):
    """A random argument network with exclusive table rows."""
    from .network import ArgumentNetwork, NodeTable, rows_for

    dag = random_dag(rng, n, max_parents, singly_connected)
    tables = []
    for name, ps in dag.items():
        rows = {}
        for row in rows_for(len(ps)):
            rows[row] = random_exclusive_pair(rng, assumptions)
        tables.append(NodeTable(name, tuple(ps), rows))
    return ArgumentNetwork(tuple(assumptions), tables)


def chain_network(length: int, shared: bool = False):
    """A pure chain ``c1 -> c2 -> ... -> cn``.

    Each node gets its own assumption pair unless ``shared`` is set, in which
    case every table reuses the same three assumptions.
    """
    from .network import ArgumentNetwork, NodeTable

    tables = []
    assumptions: list[str] = []
    for k in range(1, length + 1):
        if shared:
            up, down = ("u", "d") if k > 1 else ("r", "s")
        else:
            up, down = f"u{k}", f"d{k}"
        for a in (up, down):
            if a not in assumptions:
                assumptions.append(a)
        if k == 1:
            tables.append(NodeTable("c1", (), {(): (Var(up), FALSE)}))
        else:
            rows = {(True,): (Var(up), FALSE), (False,): (FALSE, Var(down))}
            tables.append(NodeTable(f"c{k}", (f"c{k - 1}",), rows))
    return ArgumentNetwork(tuple(assumptions), tables)


__all__ = [
    "random_formula",
    "random_term",
    "random_database",
    "random_exclusive_pair",
    "random_dag",
    "random_network",
    "chain_network",
]
