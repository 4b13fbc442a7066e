"""Prime implicates and prime implicants by iterated consensus.

A formula is first turned into an equivalent clause set by distribution
(no auxiliary variables, subsumed clauses dropped as they appear).  Tison's
method then closes the set under consensus one variable at a time.  Prime
implicants are the complements of the prime implicates of the negation.

Internally a clause is a pair of bit masks ``(positive, negative)`` over a
per-call variable index.
"""

from __future__ import annotations

import re
from typing import Iterable, Sequence

from .logic import FALSE, TRUE, Formula, Not, Sort, Var, Vocabulary, conj, disj

Literal = tuple[str, bool]
_Mask = tuple[int, int]


def natural_key(name: str):
    return [int(p) if p.isdigit() else p for p in re.split(r"(\d+)", name)]


class _Cube:
    """A set of literals with no complementary pair, in canonical order."""

    __slots__ = ("literals", "_key")
    joiner = ""
    empty = ""

    def __init__(self, literals: Iterable[Literal] = ()):
        lits = []
        seen: dict[str, bool] = {}
        for name, value in literals:
            value = bool(value)
            if name in seen:
                if seen[name] != value:
                    raise ValueError(f"complementary literals on {name!r}")
                continue
            seen[name] = value
            lits.append((name, value))
        lits.sort(key=lambda lit: (natural_key(lit[0]), not lit[1]))
        self.literals: tuple[Literal, ...] = tuple(lits)
        self._key = frozenset(lits)

    def __eq__(self, other):
        return type(self) is type(other) and self._key == other._key

    def __hash__(self):
        return hash((type(self).__name__, self._key))

    def __iter__(self):
        return iter(self.literals)

    def __len__(self):
        return len(self.literals)

    def __contains__(self, lit):
        return lit in self._key

    @property
    def variables(self) -> frozenset[str]:
        return frozenset(name for name, _ in self.literals)

    def subsumes(self, other: "_Cube") -> bool:
        return self._key <= other._key

    def ordered(self, order: Sequence[str]) -> tuple[Literal, ...]:
        pos = {n: i for i, n in enumerate(order)}
        return tuple(sorted(self.literals, key=lambda lit: (pos.get(lit[0], len(pos)), natural_key(lit[0]))))

    def _literal_formulas(self):
        return [Var(n) if v else Not(Var(n)) for n, v in self.literals]

    def __str__(self):
        if not self.literals:
            return self.empty
        return self.joiner.join(n if v else "!" + n for n, v in self.literals)

    def __repr__(self):
        return f"{type(self).__name__}({str(self)!r})"


class Clause(_Cube):
    """Disjunction of literals; the empty clause is ``false``."""

    __slots__ = ()
    joiner = " | "
    empty = "false"

    def to_formula(self) -> Formula:
        return disj(*self._literal_formulas())

    def negated(self) -> "Term":
        return Term((n, not v) for n, v in self.literals)


class Term(_Cube):
    """Conjunction of literals; the empty term is ``true``."""

    __slots__ = ()
    joiner = " & "
    empty = "true"

    def to_formula(self) -> Formula:
        return conj(*self._literal_formulas())

    def negated(self) -> Clause:
        return Clause((n, not v) for n, v in self.literals)


# ---------------------------------------------------------------------------
# bit-mask machinery

def _variable_order(names: Iterable[str], order: Sequence[str] | None) -> list[str]:
    names = set(names)
    head = [n for n in (order or ()) if n in names]
    rest = sorted(names - set(head), key=natural_key)
    return head + rest


def _reduce(clauses: Iterable[_Mask]) -> list[_Mask]:
    """Drop duplicate and subsumed clauses."""
    unique = sorted(set(clauses), key=lambda c: (c[0] | c[1]).bit_count())
    kept: list[_Mask] = []
    for p, n in unique:
        for kp, kn in kept:
            if kp & ~p == 0 and kn & ~n == 0:
                break
        else:
            kept.append((p, n))
    return kept


def _product(left: list[_Mask], right: list[_Mask]) -> list[_Mask]:
    out = []
    for p1, n1 in left:
        for p2, n2 in right:
            p, n = p1 | p2, n1 | n2
            if p & n == 0:
                out.append((p, n))
    return _reduce(out)


def _clauses(f: Formula, bit: dict[str, int]) -> tuple[list[_Mask], list[_Mask]]:
    """Clause sets for ``f`` and for ``!f`` by distribution."""
    memo: dict[tuple[int, bool], list[_Mask]] = {}

    def cnf(g: Formula, positive: bool) -> list[_Mask]:
        key = (id(g), positive)
        hit = memo.get(key)
        if hit is not None:
            return hit
        op = g.op
        if op == "const":
            r = [] if (g is TRUE) == positive else [(0, 0)]
        elif op == "var":
            b = bit[g.name]
            r = [(b, 0)] if positive else [(0, b)]
        elif op == "not":
            r = cnf(g.args[0], not positive)
        elif (op == "and") == positive and op in ("and", "or"):
            r = _reduce(c for a in g.args for c in cnf(a, positive))
        elif op in ("and", "or"):
            r = [(0, 0)]
            for a in g.args:
                r = _product(r, cnf(a, positive))
        elif op == "implies":
            lhs, rhs = g.args
            if positive:
                r = _product(cnf(lhs, False), cnf(rhs, True))
            else:
                r = _reduce(cnf(lhs, True) + cnf(rhs, False))
        else:
            lhs, rhs = g.args
            if positive:
                r = _reduce(_product(cnf(lhs, False), cnf(rhs, True)) + _product(cnf(lhs, True), cnf(rhs, False)))
            else:
                r = _reduce(_product(cnf(lhs, True), cnf(rhs, True)) + _product(cnf(lhs, False), cnf(rhs, False)))
        memo[key] = r
        return r

    return cnf(f, True), cnf(f, False)


def _consensus_closure(clauses: list[_Mask], nbits: int) -> list[_Mask]:
    """Tison's method: resolve on each variable once, in index order."""
    current = _reduce(clauses)
    for i in range(nbits):
        if (0, 0) in current:
            return [(0, 0)]
        b = 1 << i
        pos = [c for c in current if c[0] & b]
        if not pos:
            continue
        negs = [c for c in current if c[1] & b]
        if not negs:
            continue
        resolvents = []
        for p1, n1 in pos:
            for p2, n2 in negs:
                p, n = (p1 | p2) & ~b, (n1 | n2) & ~b
                if p & n == 0:
                    resolvents.append((p, n))
        if resolvents:
            current = _reduce(current + resolvents)
    if (0, 0) in current:
        return [(0, 0)]
    return current


def _decode(masks: list[_Mask], names: list[str], cls):
    cubes = []
    for p, n in masks:
        lits = [(names[i], True) for i in range(len(names)) if p >> i & 1]
        lits += [(names[i], False) for i in range(len(names)) if n >> i & 1]
        cubes.append(cls(lits))
    return cubes


def canonical_sort(cubes: Iterable[_Cube], order: Sequence[str] | None = None) -> list:
    """Literals by ``order`` (then natural name order); cubes lexicographically."""
    cubes = list(cubes)
    names = _variable_order({n for c in cubes for n in c.variables}, order)
    pos = {n: i for i, n in enumerate(names)}

    def key(cube):
        return sorted((pos[n], not v) for n, v in cube.literals)

    return sorted(cubes, key=key)


def _primes(f: Formula, order: Sequence[str] | None, want_implicants: bool):
    names = _variable_order(f.variables, order)
    bit = {n: 1 << i for i, n in enumerate(names)}
    pos_cnf, neg_cnf = _clauses(f, bit)
    if want_implicants:
        closed = _consensus_closure(neg_cnf, len(names))
        result = [c.negated() for c in _decode(closed, names, Clause)]
    else:
        closed = _consensus_closure(pos_cnf, len(names))
        result = _decode(closed, names, Clause)
    return canonical_sort(result, order)


def prime_implicates(f: Formula, order: Sequence[str] | None = None) -> list[Clause]:
    """All prime implicates of ``f`` in canonical order.

    A valid ``f`` has none; an unsatisfiable ``f`` has exactly the empty clause.
    """
    return _primes(f, order, want_implicants=False)


def prime_implicants(f: Formula, order: Sequence[str] | None = None) -> list[Term]:
    """All prime implicants of ``f`` in canonical order.

    A valid ``f`` yields the empty term; an unsatisfiable ``f`` yields none.
    """
    return _primes(f, order, want_implicants=True)


def terms_formula(terms: Iterable[Term], order: Sequence[str] | None = None) -> Formula:
    """Disjunction of ``terms`` with literals laid out in ``order``."""
    parts = []
    for t in terms:
        lits = t.ordered(order) if order else t.literals
        parts.append(conj(*(Var(n) if v else Not(Var(n)) for n, v in lits)))
    return disj(*parts) if parts else FALSE


def clauses_formula(clauses: Iterable[Clause], order: Sequence[str] | None = None) -> Formula:
    parts = []
    for c in clauses:
        lits = c.ordered(order) if order else c.literals
        parts.append(disj(*(Var(n) if v else Not(Var(n)) for n, v in lits)))
    return conj(*parts) if parts else TRUE


def blake(f: Formula, order: Sequence[str] | None = None) -> Formula:
    """Blake canonical form: the disjunction of all prime implicants."""
    return terms_formula(prime_implicants(f, order), order)


def restrict_to_language(clauses: Iterable[_Cube], vocab: Vocabulary, sort: Sort = Sort.ASSUMPTION) -> list:
    """The clauses mentioning only variables of the given sort."""
    allowed = set(vocab.names(sort))
    return [c for c in clauses if c.variables <= allowed]
