"""Argument networks: a DAG over domain propositions with assumption tables.

Each node carries a table with one row per instantiation of its parents and
two columns, the assumption formulas arguing for the node being true and
false under that row.  The two entries of a row must be jointly
unsatisfiable.
"""

from __future__ import annotations

import itertools
import re
from collections import deque
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from .argdb import ArgumentDatabase, Sentence
from .logic import (
    FALSE,
    TRUE,
    Formula,
    FormulaSyntaxError,
    Var,
    Vocabulary,
    conj,
    implies,
    is_satisfiable,
    parse_formula,
    term,
)

Row = tuple[bool, ...]
Evidence = Mapping[str, bool]


class NetworkError(ValueError):
    """Malformed network text or structure."""


def rows_for(n_parents: int) -> list[Row]:
    """Parent instantiations in table order (all-true row first)."""
    return list(itertools.product((True, False), repeat=n_parents))


@dataclass
class NodeTable:
    name: str
    parents: tuple[str, ...]
    rows: dict[Row, tuple[Formula, Formula]]
    row_order: list[Row] | None = None

    def __post_init__(self):
        self.parents = tuple(self.parents)
        if self.row_order is None:
            self.row_order = [r for r in rows_for(len(self.parents)) if r in self.rows]

    def entry(self, row: Row, value: bool) -> Formula:
        pos, negative = self.rows[row]
        return pos if value else negative

    def row_term(self, row: Row) -> Formula:
        return term(zip(self.parents, row))


class ArgumentNetwork:
    """Nodes in declaration order, each with its parents and table."""

    def __init__(self, assumptions: Sequence[str], tables: Iterable[NodeTable]):
        self.assumptions = tuple(assumptions)
        self.tables: dict[str, NodeTable] = {}
        for t in tables:
            if t.name in self.tables:
                raise NetworkError(f"duplicate node {t.name!r}")
            self.tables[t.name] = t
        self.children: dict[str, list[str]] = {n: [] for n in self.tables}
        for t in self.tables.values():
            for p in t.parents:
                if p not in self.tables:
                    raise NetworkError(f"node {t.name!r} has unknown parent {p!r}")
                self.children[p].append(t.name)

    @property
    def nodes(self) -> list[str]:
        return list(self.tables)

    def parents(self, node: str) -> tuple[str, ...]:
        return self.tables[node].parents

    @property
    def edges(self) -> list[tuple[str, str]]:
        return [(p, n) for n, t in self.tables.items() for p in t.parents]

    @property
    def vocabulary(self) -> Vocabulary:
        return Vocabulary(tuple(self.tables), self.assumptions)

    def is_leaf(self, node: str) -> bool:
        return not self.children[node]

    def topological_order(self) -> list[str]:
        indegree = {n: len(t.parents) for n, t in self.tables.items()}
        queue = deque(n for n in self.tables if indegree[n] == 0)
        order = []
        while queue:
            n = queue.popleft()
            order.append(n)
            for c in self.children[n]:
                indegree[c] -= 1
                if indegree[c] == 0:
                    queue.append(c)
        if len(order) != len(self.tables):
            raise NetworkError("network graph has a cycle")
        return order

    def descendants(self, node: str) -> set[str]:
        seen: set[str] = set()
        stack = list(self.children[node])
        while stack:
            n = stack.pop()
            if n not in seen:
                seen.add(n)
                stack.extend(self.children[n])
        return seen

    def __repr__(self):
        return f"ArgumentNetwork(nodes={self.nodes}, A={list(self.assumptions)})"


# ---------------------------------------------------------------------------
# text format

_NODE = re.compile(
    r"node\s+(?P<name>[A-Za-z_][A-Za-z0-9_]*)\s*(?:parents\s*:\s*(?P<parents>[^{]*))?\{(?P<body>[^}]*)\}",
    re.S,
)


def _strip_comments(text: str) -> str:
    return re.sub(r"#[^\n]*", "", text)


def _format_row(parents: Sequence[str], row: Row) -> str:
    if not parents:
        return "-"
    return ", ".join(p if v else "!" + p for p, v in zip(parents, row))


def _parse_row_literals(row_text: str, parents: tuple[str, ...], node: str) -> Row:
    row_text = row_text.strip()
    if row_text == "-":
        if parents:
            raise NetworkError(f"node {node!r}: '-' row given for a node with parents")
        return ()
    values: dict[str, bool] = {}
    for raw in row_text.split(","):
        lit = raw.strip()
        value = True
        if lit.startswith("!"):
            value, lit = False, lit[1:].strip()
        if lit not in parents:
            raise NetworkError(f"node {node!r}: row literal {raw.strip()!r} is not a parent")
        if lit in values:
            raise NetworkError(f"node {node!r}: parent {lit!r} repeated in a row")
        values[lit] = value
    if len(values) != len(parents):
        raise NetworkError(f"node {node!r}: row {row_text!r} does not instantiate every parent")
    return tuple(values[p] for p in parents)


def parse_network(text: str) -> ArgumentNetwork:
    """Parse a ``lang A:`` header followed by ``node`` blocks."""
    text = _strip_comments(text)
    assumptions: list[str] = []
    for m in re.finditer(r"lang\s+A\s*:([^\n]*)", text):
        assumptions += [n for n in re.split(r"[\s,]+", m.group(1).strip()) if n]
    remainder = re.sub(r"lang\s+[LA]\s*:[^\n]*", "", text)
    blocks = list(_NODE.finditer(remainder))
    leftover = _NODE.sub("", remainder).strip()
    if leftover:
        raise NetworkError(f"unexpected text outside node blocks: {leftover.splitlines()[0]!r}")
    names = [b.group("name") for b in blocks]
    for n in names:
        if names.count(n) > 1:
            raise NetworkError(f"duplicate node {n!r}")
    try:
        Vocabulary(names, assumptions)
    except ValueError as exc:
        raise NetworkError(str(exc)) from None
    tables = []
    for b in blocks:
        name = b.group("name")
        parents = tuple(p for p in re.split(r"[\s,]+", (b.group("parents") or "").strip()) if p)
        for p in parents:
            if p not in names:
                raise NetworkError(f"node {name!r} has unknown parent {p!r}")
        rows: dict[Row, tuple[Formula, Formula]] = {}
        order: list[Row] = []
        for line in b.group("body").splitlines():
            line = line.strip()
            if not line:
                continue
            if ":" not in line or ";" not in line:
                raise NetworkError(f"node {name!r}: malformed row {line!r}")
            lits, entries = line.split(":", 1)
            pos_text, neg_text = entries.split(";", 1)
            row = _parse_row_literals(lits, parents, name)
            if row in rows:
                raise NetworkError(f"node {name!r}: duplicate row ({_format_row(parents, row)})")
            try:
                pos = parse_formula(pos_text, assumptions)
                negative = parse_formula(neg_text, assumptions)
            except FormulaSyntaxError as exc:
                raise NetworkError(f"node {name!r}: {exc}") from None
            rows[row] = (pos, negative)
            order.append(row)
        for row in rows_for(len(parents)):
            if row not in rows:
                raise NetworkError(f"node {name!r}: missing table row ({_format_row(parents, row)})")
        tables.append(NodeTable(name, parents, rows, order))
    return ArgumentNetwork(assumptions, tables)


def format_network(net: ArgumentNetwork) -> str:
    lines = [f"lang A: {' '.join(net.assumptions)}"]
    for t in net.tables.values():
        head = f"node {t.name}"
        if t.parents:
            head += f" parents: {' '.join(t.parents)}"
        lines.append(head + " {")
        for row in t.row_order:
            pos, negative = t.rows[row]
            lines.append(f"  {_format_row(t.parents, row)} : {pos} ; {negative}")
        lines.append("}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# validation and compilation

@dataclass(frozen=True)
class NetworkViolation:
    message: str
    node: str | None = None
    row: str | None = None

    def __str__(self):
        if self.node is None:
            return self.message
        if self.row is None:
            return f"node {self.node}: {self.message}"
        return f"node {self.node}, row ({self.row}): {self.message}"


def validate_network(net: ArgumentNetwork) -> NetworkViolation | None:
    """First structural problem found, or ``None``."""
    try:
        net.topological_order()
    except NetworkError as exc:
        return NetworkViolation(str(exc))
    allowed = set(net.assumptions)
    for t in net.tables.values():
        for row in rows_for(len(t.parents)):
            if row not in t.rows:
                return NetworkViolation("missing table row", t.name, _format_row(t.parents, row))
        for row in t.row_order:
            pos, negative = t.rows[row]
            shown = _format_row(t.parents, row)
            stray = (pos.variables | negative.variables) - allowed
            if stray:
                return NetworkViolation(f"entry mentions non-assumption {', '.join(sorted(stray))}", t.name, shown)
            if is_satisfiable(conj(pos, negative)):
                return NetworkViolation("row entries are not exclusive", t.name, shown)
    return None


def to_database(net: ArgumentNetwork) -> ArgumentDatabase:
    """One sentence ``Q(row, lit) => (row => lit)`` per non-false table entry.

    Domain variables are eliminated in reverse topological order.
    """
    sentences = []
    for t in net.tables.values():
        for row in t.row_order:
            for value in (True, False):
                q = t.entry(row, value)
                if q is FALSE:
                    continue
                lit = Var(t.name) if value else ~Var(t.name)
                consequent = implies(t.row_term(row), lit) if t.parents else lit
                sentences.append(Sentence(q, consequent))
    order = list(reversed(net.topological_order()))
    return ArgumentDatabase(net.vocabulary, sentences, elimination_order=order)


# ---------------------------------------------------------------------------
# graph structure

def _check_nodes(net: ArgumentNetwork, *groups: Iterable[str]) -> list[set[str]]:
    out = []
    seen: set[str] = set()
    for g in groups:
        g = set(g)
        unknown = g - set(net.tables)
        if unknown:
            raise NetworkError(f"unknown nodes: {', '.join(sorted(unknown))}")
        if g & seen:
            raise NetworkError("node sets are not disjoint")
        seen |= g
        out.append(g)
    return out


def d_separated(net: ArgumentNetwork, I: Iterable[str], K: Iterable[str], J: Iterable[str]) -> bool:
    """Whether ``K`` d-separates ``I`` from ``J`` (reachability over trails)."""
    I, K, J = _check_nodes(net, I, K, J)
    # nodes with a descendant in K (including K itself) open colliders
    opens = set()
    stack = list(K)
    while stack:
        n = stack.pop()
        if n not in opens:
            opens.add(n)
            stack.extend(net.parents(n))
    # states: (node, arrived_from_child) -- "up" when coming from a child
    frontier = deque((n, True) for n in I)
    visited: set[tuple[str, bool]] = set()
    while frontier:
        node, up = frontier.popleft()
        if (node, up) in visited:
            continue
        visited.add((node, up))
        if node in J and node not in K:
            return False
        if up:
            if node in K:
                continue
            for p in net.parents(node):
                frontier.append((p, True))
            for c in net.children[node]:
                frontier.append((c, False))
        else:
            if node not in K:
                for c in net.children[node]:
                    frontier.append((c, False))
            if node in opens:
                for p in net.parents(node):
                    frontier.append((p, True))
    return True


def d_separated_by_paths(net: ArgumentNetwork, I: Iterable[str], K: Iterable[str], J: Iterable[str]) -> bool:
    """The same test by enumerating every simple trail; exponential, for checking."""
    I, K, J = _check_nodes(net, I, K, J)
    opens = {n for n in net.tables if n in K or net.descendants(n) & K}

    def active(trail: list[str]) -> bool:
        for a, b, c in zip(trail, trail[1:], trail[2:]):
            collider = a in net.parents(b) and c in net.parents(b)
            if collider and b not in opens:
                return False
            if not collider and b in K:
                return False
        return True

    def walk(trail: list[str]) -> bool:
        last = trail[-1]
        if len(trail) > 1 and last in J:
            return active(trail)
        for m in list(net.parents(last)) + net.children[last]:
            if m in trail:
                continue
            trail.append(m)
            # prune as soon as the prefix is blocked
            if active(trail[-3:]) and walk(trail):
                return True
            trail.pop()
        return False

    return not any(walk([i]) for i in I)


def components(net: ArgumentNetwork) -> list[list[str]]:
    """Connected components of the undirected skeleton, in declaration order."""
    seen: set[str] = set()
    out = []
    for start in net.tables:
        if start in seen:
            continue
        comp = []
        stack = [start]
        seen.add(start)
        while stack:
            n = stack.pop()
            comp.append(n)
            for m in list(net.parents(n)) + net.children[n]:
                if m not in seen:
                    seen.add(m)
                    stack.append(m)
        order = {n: i for i, n in enumerate(net.tables)}
        out.append(sorted(comp, key=order.__getitem__))
    return out


def is_singly_connected(net: ArgumentNetwork) -> bool:
    """Whether the undirected skeleton is a forest."""
    parent = {n: n for n in net.tables}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for a, b in net.edges:
        ra, rb = find(a), find(b)
        if ra == rb:
            return False
        parent[ra] = rb
    return True


# ---------------------------------------------------------------------------
# evidence

def parse_evidence(text: str, net: ArgumentNetwork | None = None) -> dict[str, bool]:
    """``"rain, !wet_grass"`` -> ``{"rain": True, "wet_grass": False}``."""
    evidence: dict[str, bool] = {}
    for raw in text.split(","):
        lit = raw.strip()
        if not lit:
            continue
        value = True
        if lit.startswith("!"):
            value, lit = False, lit[1:].strip()
        if net is not None and lit not in net.tables:
            raise NetworkError(f"evidence names unknown node {lit!r}")
        if lit in evidence:
            raise NetworkError(f"node {lit!r} observed twice")
        evidence[lit] = value
    return evidence


def evidence_term(evidence: Evidence) -> Formula:
    return term(evidence) if evidence else TRUE


def is_observable_leaf(net: ArgumentNetwork, node: str) -> bool:
    return net.is_leaf(node) and len(net.parents(node)) == 1


def push_evidence_to_leaves(net: ArgumentNetwork, evidence: Evidence) -> tuple[ArgumentNetwork, dict[str, bool]]:
    """Move observations on non-leaf (or multi-parent) nodes onto fresh leaves.

    Each such node ``i`` gets a child ``obs_i`` that copies its value; the
    observation moves to ``obs_i``.  Arguments for the original literals are
    unchanged.
    """
    for n in evidence:
        if n not in net.tables:
            raise NetworkError(f"evidence names unknown node {n!r}")
    moving = [n for n in evidence if not is_observable_leaf(net, n)]
    if not moving:
        return net, dict(evidence)
    taken = set(net.tables) | set(net.assumptions)
    tables = list(net.tables.values())
    new_evidence: dict[str, bool] = {}
    for n, value in evidence.items():
        if n not in moving:
            new_evidence[n] = value
            continue
        fresh = f"obs_{n}"
        k = 1
        while fresh in taken:
            k += 1
            fresh = f"obs_{n}_{k}"
        taken.add(fresh)
        rows = {(True,): (TRUE, FALSE), (False,): (FALSE, TRUE)}
        tables.append(NodeTable(fresh, (n,), rows))
        new_evidence[fresh] = value
    return ArgumentNetwork(net.assumptions, tables), new_evidence
