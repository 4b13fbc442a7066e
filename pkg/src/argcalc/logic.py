"""Propositional formulas over a two-sorted vocabulary.

Formulas are immutable and hash-consed: building the same structure twice
returns the same object, so structural equality is identity and subterms
are shared.  Two families of constructors exist:

* ``And``, ``Or``, ``Not``, ``Implies``, ``Iff`` build nodes exactly as
  written (the parser uses these, so printing round-trips);
* ``conj``, ``disj``, ``neg`` fold constants and are used by the algebraic
  operations (cofactoring, forgetting, argument construction).

Satisfiability is decided by a small DPLL search over a definitional
(Tseitin) clause translation.
"""

from __future__ import annotations

import enum
import re
import threading
import weakref
from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping

__all__ = [
    "Sort",
    "Vocabulary",
    "Formula",
    "TRUE",
    "FALSE",
    "Var",
    "Not",
    "And",
    "Or",
    "Implies",
    "Iff",
    "conj",
    "disj",
    "neg",
    "implies",
    "term",
    "FormulaSyntaxError",
    "EvaluationError",
    "parse_formula",
    "evaluate",
    "cofactor",
    "forget",
    "find_model",
    "is_satisfiable",
    "entails",
    "equivalent",
    "nodes_created",
    "formula_size",
]

IDENTIFIER = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")
RESERVED = frozenset({"true", "false"})


class Sort(enum.Enum):
    DOMAIN = "L"
    ASSUMPTION = "A"


@dataclass(frozen=True)
class Vocabulary:
    """Disjoint domain (L) and assumption (A) variable names, in declaration order."""

    domain: tuple[str, ...] = ()
    assumptions: tuple[str, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "domain", tuple(self.domain))
        object.__setattr__(self, "assumptions", tuple(self.assumptions))
        seen = set()
        for name in self.domain + self.assumptions:
            if not IDENTIFIER.match(name) or name in RESERVED:
                raise ValueError(f"invalid variable name {name!r}")
            if name in seen:
                raise ValueError(f"variable {name!r} declared twice")
            seen.add(name)

    @property
    def order(self) -> tuple[str, ...]:
        return self.domain + self.assumptions

    def __contains__(self, name: str) -> bool:
        return name in self.domain or name in self.assumptions

    def sort(self, name: str) -> Sort:
        if name in self.domain:
            return Sort.DOMAIN
        if name in self.assumptions:
            return Sort.ASSUMPTION
        raise KeyError(name)

    def names(self, sort: Sort) -> tuple[str, ...]:
        return self.domain if sort is Sort.DOMAIN else self.assumptions

    def extend(self, domain: Iterable[str] = (), assumptions: Iterable[str] = ()) -> "Vocabulary":
        return Vocabulary(self.domain + tuple(domain), self.assumptions + tuple(assumptions))


# ---------------------------------------------------------------------------
# Formula nodes

_CONST, _VAR, _NOT, _AND, _OR, _IMPLIES, _IFF = (
    "const", "var", "not", "and", "or", "implies", "iff",
)

_table: "weakref.WeakValueDictionary[tuple, Formula]" = weakref.WeakValueDictionary()
_lock = threading.Lock()
_created = 0


class Formula:
    """An immutable, interned propositional formula node.

    Do not instantiate directly; use the module constructors.
    """

    __slots__ = ("op", "args", "name", "_vars", "__weakref__")

    op: str
    args: tuple["Formula", ...]
    name: str | None

    def __new__(cls, op, args=(), name=None):
        global _created
        key = (op, name, args)
        with _lock:
            node = _table.get(key)
            if node is None:
                node = object.__new__(cls)
                node.op = op
                node.args = args
                node.name = name
                node._vars = None
                _table[key] = node
                _created += 1
        return node

    def __reduce__(self):
        return (Formula, (self.op, self.args, self.name))

    # Structural equality is identity thanks to interning; keep the default
    # object __eq__/__hash__.

    def __and__(self, other: "Formula") -> "Formula":
        return And(self, other)

    def __or__(self, other: "Formula") -> "Formula":
        return Or(self, other)

    def __invert__(self) -> "Formula":
        return Not(self)

    def __rshift__(self, other: "Formula") -> "Formula":
        return Implies(self, other)

    @property
    def variables(self) -> frozenset[str]:
        if self._vars is None:
            if self.op == _VAR:
                found = frozenset((self.name,))
            else:
                found = frozenset().union(*(a.variables for a in self.args)) if self.args else frozenset()
            self._vars = found
        return self._vars

    def is_const(self) -> bool:
        return self.op == _CONST

    def __str__(self) -> str:
        return _print(self)

    def __repr__(self) -> str:
        return f"<Formula {_print(self)}>"


TRUE = Formula(_CONST, (), "true")
FALSE = Formula(_CONST, (), "false")


def nodes_created() -> int:
    """Number of distinct formula nodes interned since import (monotone counter)."""
    return _created


def formula_size(*formulas: Formula) -> int:
    """Arity-weighted size of the shared DAG under ``formulas``.

    A node with ``l`` arguments counts ``l`` units (leaves count one); shared
    subterms are counted once.
    """
    seen: set[int] = set()
    total = 0
    stack = list(formulas)
    while stack:
        g = stack.pop()
        if id(g) in seen:
            continue
        seen.add(id(g))
        total += max(1, len(g.args))
        stack.extend(g.args)
    return total


def Var(name: str) -> Formula:
    if not IDENTIFIER.match(name) or name in RESERVED:
        raise ValueError(f"invalid variable name {name!r}")
    return Formula(_VAR, (), name)


def Not(arg: Formula) -> Formula:
    return Formula(_NOT, (arg,))


def And(*args: Formula) -> Formula:
    if not args:
        return TRUE
    if len(args) == 1:
        return args[0]
    return Formula(_AND, tuple(args))


def Or(*args: Formula) -> Formula:
    if not args:
        return FALSE
    if len(args) == 1:
        return args[0]
    return Formula(_OR, tuple(args))


def Implies(lhs: Formula, rhs: Formula) -> Formula:
    return Formula(_IMPLIES, (lhs, rhs))


def Iff(lhs: Formula, rhs: Formula) -> Formula:
    return Formula(_IFF, (lhs, rhs))


# -- constant-folding constructors ------------------------------------------

def neg(f: Formula) -> Formula:
    if f is TRUE:
        return FALSE
    if f is FALSE:
        return TRUE
    if f.op == _NOT:
        return f.args[0]
    return Not(f)


def conj(*args: Formula, flatten: bool = True) -> Formula:
    """Conjunction with constants folded and duplicates dropped.

    Nested conjunctions are spliced in unless ``flatten`` is false, which
    keeps shared subformulas shared.
    """
    out: list[Formula] = []
    seen: set[int] = set()
    for a in args:
        if a is FALSE:
            return FALSE
        if a is TRUE:
            continue
        parts = a.args if flatten and a.op == _AND else (a,)
        for p in parts:
            if id(p) not in seen:
                seen.add(id(p))
                out.append(p)
    return And(*out)


def disj(*args: Formula, flatten: bool = True) -> Formula:
    out: list[Formula] = []
    seen: set[int] = set()
    for a in args:
        if a is TRUE:
            return TRUE
        if a is FALSE:
            continue
        parts = a.args if flatten and a.op == _OR else (a,)
        for p in parts:
            if id(p) not in seen:
                seen.add(id(p))
                out.append(p)
    return Or(*out)


def implies(lhs: Formula, rhs: Formula) -> Formula:
    if lhs is FALSE or rhs is TRUE:
        return TRUE
    if lhs is TRUE:
        return rhs
    if rhs is FALSE:
        return neg(lhs)
    return Implies(lhs, rhs)


def _iff(lhs: Formula, rhs: Formula) -> Formula:
    if lhs is TRUE:
        return rhs
    if rhs is TRUE:
        return lhs
    if lhs is FALSE:
        return neg(rhs)
    if rhs is FALSE:
        return neg(lhs)
    if lhs is rhs:
        return TRUE
    return Iff(lhs, rhs)


def term(literals: Mapping[str, bool] | Iterable[tuple[str, bool]]) -> Formula:
    """Conjunction of literals given as ``{name: value}`` or ``(name, value)`` pairs."""
    items = literals.items() if isinstance(literals, Mapping) else literals
    return conj(*(Var(n) if v else Not(Var(n)) for n, v in items))


# ---------------------------------------------------------------------------
# Printing

_PREC = {_IFF: 1, _IMPLIES: 2, _OR: 3, _AND: 4, _NOT: 5, _VAR: 6, _CONST: 6}
_SYMBOL = {_AND: " & ", _OR: " | ", _IMPLIES: " => ", _IFF: " <=> "}


def _print(f: Formula) -> str:
    op = f.op
    if op in (_CONST, _VAR):
        return f.name
    if op == _NOT:
        inner = f.args[0]
        s = _print(inner)
        return "!" + (f"({s})" if _PREC[inner.op] < _PREC[_NOT] else s)
    prec = _PREC[op]
    parts = []
    for idx, a in enumerate(f.args):
        s = _print(a)
        p = _PREC[a.op]
        if op == _IMPLIES:
            wrap = p <= prec if idx == 0 else p < prec
        else:
            # and/or children of the same connective keep their grouping;
            # iff is printed non-associatively
            wrap = p <= prec
        parts.append(f"({s})" if wrap else s)
    return _SYMBOL[op].join(parts)


# ---------------------------------------------------------------------------
# Parsing

class FormulaSyntaxError(ValueError):
    """Malformed formula text; ``position`` is a 0-based character offset."""

    def __init__(self, message: str, position: int, text: str = ""):
        self.position = position
        self.text = text
        super().__init__(f"{message} at position {position}")


_TOKEN = re.compile(r"\s*(?:(?P<id>[A-Za-z_][A-Za-z0-9_]*)|(?P<op><=>|=>|[!&|()]))")


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    # strip line comments but keep offsets stable
    text = re.sub(r"#[^\n]*", lambda m: " " * len(m.group()), text)
    tokens = []
    pos = 0
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if m is None:
            start = pos + (len(text[pos:]) - len(text[pos:].lstrip()))
            raise FormulaSyntaxError(f"unexpected character {text[start]!r}", start, text)
        kind = "id" if m.group("id") else "op"
        tokens.append((kind, m.group(kind), m.start(kind)))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str, vocab: Vocabulary | Iterable[str] | None):
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0
        if vocab is None:
            self.names = None
        elif isinstance(vocab, Vocabulary):
            self.names = set(vocab.order)
        else:
            self.names = set(vocab)

    def peek(self):
        return self.tokens[self.i]

    def take(self, value=None):
        tok = self.tokens[self.i]
        if value is not None and tok[1] != value:
            found = tok[1] or "end of input"
            raise FormulaSyntaxError(f"expected {value!r}, found {found!r}", tok[2], self.text)
        self.i += 1
        return tok

    def parse(self) -> Formula:
        f = self.iff()
        tok = self.peek()
        if tok[0] != "end":
            raise FormulaSyntaxError(f"unexpected token {tok[1]!r}", tok[2], self.text)
        return f

    def iff(self):
        f = self.imp()
        while self.peek()[1] == "<=>":
            self.take()
            f = Iff(f, self.imp())
        return f

    def imp(self):
        lhs = self.disj()
        if self.peek()[1] == "=>":
            self.take()
            return Implies(lhs, self.imp())
        return lhs

    def disj(self):
        parts = [self.conj()]
        while self.peek()[1] == "|":
            self.take()
            parts.append(self.conj())
        return Or(*parts)

    def conj(self):
        parts = [self.unary()]
        while self.peek()[1] == "&":
            self.take()
            parts.append(self.unary())
        return And(*parts)

    def unary(self):
        tok = self.peek()
        if tok[1] == "!":
            self.take()
            return Not(self.unary())
        if tok[1] == "(":
            self.take()
            f = self.iff()
            self.take(")")
            return f
        if tok[0] == "id":
            self.take()
            name = tok[1]
            if name == "true":
                return TRUE
            if name == "false":
                return FALSE
            if self.names is not None and name not in self.names:
                raise FormulaSyntaxError(f"undeclared identifier {name!r}", tok[2], self.text)
            return Var(name)
        found = tok[1] or "end of input"
        raise FormulaSyntaxError(f"unexpected {found!r}", tok[2], self.text)


def parse_formula(text: str, vocab: Vocabulary | Iterable[str] | None = None) -> Formula:
    """Parse ``text``; when ``vocab`` is given every identifier must be declared in it."""
    return _Parser(text, vocab).parse()


# ---------------------------------------------------------------------------
# Semantics

class EvaluationError(ValueError):
    pass


def evaluate(f: Formula, assignment: Mapping[str, bool]) -> bool:
    cache: dict[int, bool] = {}

    def ev(g: Formula) -> bool:
        key = id(g)
        if key in cache:
            return cache[key]
        op = g.op
        if op == _CONST:
            r = g is TRUE
        elif op == _VAR:
            try:
                r = bool(assignment[g.name])
            except KeyError:
                raise EvaluationError(f"no value for variable {g.name!r}") from None
        elif op == _NOT:
            r = not ev(g.args[0])
        elif op == _AND:
            r = all(ev(a) for a in g.args)
        elif op == _OR:
            r = any(ev(a) for a in g.args)
        elif op == _IMPLIES:
            r = (not ev(g.args[0])) or ev(g.args[1])
        else:
            r = ev(g.args[0]) == ev(g.args[1])
        cache[key] = r
        return r

    return ev(f)


def _substitute(f: Formula, values: Mapping[str, bool]) -> Formula:
    """Replace variables by constants, folding constants bottom-up."""
    if not values or not (f.variables & values.keys()):
        return f
    cache: dict[int, Formula] = {}

    def sub(g: Formula) -> Formula:
        if not (g.variables & values.keys()):
            return g
        key = id(g)
        hit = cache.get(key)
        if hit is not None:
            return hit
        op = g.op
        if op == _VAR:
            r = TRUE if values[g.name] else FALSE
        elif op == _NOT:
            r = neg(sub(g.args[0]))
        elif op == _AND:
            r = conj(*(sub(a) for a in g.args))
        elif op == _OR:
            r = disj(*(sub(a) for a in g.args))
        elif op == _IMPLIES:
            r = implies(sub(g.args[0]), sub(g.args[1]))
        else:
            r = _iff(sub(g.args[0]), sub(g.args[1]))
        cache[key] = r
        return r

    return sub(f)


def cofactor(f: Formula, var: str, value: bool) -> Formula:
    """Shannon restriction of ``f`` on ``var`` with constant folding."""
    return _substitute(f, {var: value})


def forget(f: Formula, variables: Iterable[str], mode: str = "existential") -> Formula:
    """Eliminate ``variables`` by Shannon expansion.

    ``existential`` disjoins the two cofactors, ``universal`` conjoins them.
    """
    if mode not in ("existential", "universal"):
        raise ValueError(f"unknown forgetting mode {mode!r}")
    combine = disj if mode == "existential" else conj
    for v in variables:
        if v in f.variables:
            f = combine(cofactor(f, v, True), cofactor(f, v, False))
    return f


# -- satisfiability ---------------------------------------------------------

def _tseitin(f: Formula) -> tuple[list[list[int]], dict[str, int]]:
    """Definitional clause form; returns clauses and the variable-name index."""
    index: dict[int, int] = {}
    names: dict[str, int] = {}
    clauses: list[list[int]] = []
    counter = [0]

    def fresh() -> int:
        counter[0] += 1
        return counter[0]

    def enc(g: Formula) -> int:
        key = id(g)
        if key in index:
            return index[key]
        op = g.op
        if op == _VAR:
            v = names.get(g.name)
            if v is None:
                v = names[g.name] = fresh()
            index[key] = v
            return v
        if op == _NOT:
            lit = -enc(g.args[0])
            index[key] = lit
            return lit
        if op == _CONST:
            v = fresh()
            clauses.append([v] if g is TRUE else [-v])
            index[key] = v
            return v
        kids = [enc(a) for a in g.args]
        v = fresh()
        if op == _AND:
            for k in kids:
                clauses.append([-v, k])
            clauses.append([v] + [-k for k in kids])
        elif op == _OR:
            for k in kids:
                clauses.append([v, -k])
            clauses.append([-v] + kids)
        elif op == _IMPLIES:
            a, b = kids
            clauses.extend([[-v, -a, b], [v, a], [v, -b]])
        else:
            a, b = kids
            clauses.extend([[-v, -a, b], [-v, a, -b], [v, a, b], [v, -a, -b]])
        index[key] = v
        return v

    root = enc(f)
    clauses.append([root])
    return clauses, names


def _dpll(clauses: list[list[int]]) -> dict[int, bool] | None:
    """Iterative DPLL with unit propagation over occurrence lists."""
    nvars = max((abs(l) for c in clauses for l in c), default=0)
    value: list[int] = [0] * (nvars + 1)  # 0 unassigned, 1 true, -1 false
    occurs: dict[int, list[list[int]]] = {}
    for c in clauses:
        for l in c:
            occurs.setdefault(-l, []).append(c)  # keyed by the literal that falsifies l

    def lit_val(l: int) -> int:
        v = value[abs(l)]
        return v if l > 0 else -v

    trail: list[int] = []

    def assign(l: int) -> bool:
        """Set literal ``l`` true and propagate; False on conflict."""
        queue = [l]
        while queue:
            x = queue.pop()
            cur = lit_val(x)
            if cur == 1:
                continue
            if cur == -1:
                return False
            value[abs(x)] = 1 if x > 0 else -1
            trail.append(abs(x))
            # clauses containing -x may have become unit or empty
            for c in occurs.get(x, ()):
                unassigned = None
                count = 0
                sat = False
                for y in c:
                    yv = lit_val(y)
                    if yv == 1:
                        sat = True
                        break
                    if yv == 0:
                        count += 1
                        unassigned = y
                        if count > 1:
                            break
                if sat or count > 1:
                    continue
                if count == 0:
                    return False
                queue.append(unassigned)
        return True

    def undo(mark: int) -> None:
        while len(trail) > mark:
            value[trail.pop()] = 0

    for c in clauses:
        if not c:
            return None
        if len(c) == 1 and not assign(c[0]):
            return None

    def choose() -> int | None:
        best = None
        best_size = None
        for c in clauses:
            free = []
            sat = False
            for y in c:
                yv = lit_val(y)
                if yv == 1:
                    sat = True
                    break
                if yv == 0:
                    free.append(y)
            if sat:
                continue
            if best is None or len(free) < best_size:
                best, best_size = free[0], len(free)
                if best_size <= 2:
                    break
        return best

    stack: list[tuple[int, int, bool]] = []  # (trail mark, literal, flipped)
    while True:
        lit = choose()
        if lit is None:
            return {v: value[v] == 1 for v in range(1, nvars + 1)}
        stack.append((len(trail), lit, False))
        if assign(lit):
            continue
        while True:
            if not stack:
                return None
            mark, lit, flipped = stack.pop()
            undo(mark)
            if flipped:
                continue
            stack.append((mark, -lit, True))
            if assign(-lit):
                break


def find_model(f: Formula) -> dict[str, bool] | None:
    """A satisfying assignment over ``f``'s variables, or ``None``."""
    if f is TRUE:
        return {}
    if f is FALSE:
        return None
    clauses, names = _tseitin(f)
    model = _dpll(clauses)
    if model is None:
        return None
    return {name: model.get(idx, False) for name, idx in names.items()}


def is_satisfiable(f: Formula) -> bool:
    return find_model(f) is not None


def entails(f: Formula, g: Formula) -> bool:
    """``f |= g``, i.e. ``f & !g`` is unsatisfiable."""
    if f is FALSE or g is TRUE or f is g:
        return True
    return not is_satisfiable(And(f, Not(g)))


def equivalent(f: Formula, g: Formula) -> bool:
    return f is g or (entails(f, g) and entails(g, f))


def iter_assignments(names: Iterable[str]) -> Iterator[dict[str, bool]]:
    """All total assignments over ``names`` (first name varies slowest)."""
    names = list(names)
    n = len(names)
    for bits in range(1 << n):
        yield {name: bool((bits >> (n - 1 - k)) & 1) for k, name in enumerate(names)}
