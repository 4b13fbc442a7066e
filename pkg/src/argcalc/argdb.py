"""Argument databases and the argument calculus built on them.

An argument database is a set of sentences ``alpha => phi`` where ``alpha``
ranges over assumption variables and ``phi`` over domain variables.  The
argument for a domain sentence is the weakest assumption sentence that,
together with the database, entails it; it is computed by universally
forgetting every domain variable from ``database => phi`` and returned in
Blake canonical form.
"""

from __future__ import annotations

import itertools
import re
import threading
from dataclasses import dataclass, field
from typing import Callable, Iterable, Iterator, Sequence

from .logic import (
    TRUE,
    Formula,
    FormulaSyntaxError,
    Sort,
    Vocabulary,
    conj,
    disj,
    entails,
    equivalent,
    find_model,
    forget,
    implies,
    neg,
    parse_formula,
    term,
)
from .primes import blake

MAX_ORACLE_VARIABLES = 24
MAX_INSTANTIATION_BITS = 16


class DatabaseError(ValueError):
    """Malformed or ill-sorted database input."""


class SortError(DatabaseError):
    pass


class GuardError(ValueError):
    """A brute-force computation would exceed its size guard."""


@dataclass(frozen=True)
class Sentence:
    antecedent: Formula
    consequent: Formula

    def formula(self) -> Formula:
        return implies(self.antecedent, self.consequent)

    def __str__(self):
        return f"{self.antecedent} :- {self.consequent}"


@dataclass(frozen=True)
class Violation:
    """Why a database is not an argument database."""

    message: str
    witness: dict[str, bool] = field(default_factory=dict)

    def __str__(self):
        if not self.witness:
            return self.message
        shown = ", ".join(f"{k}={'T' if v else 'F'}" for k, v in self.witness.items())
        return f"{self.message} (witness: {shown})"


def _check_sort(f: Formula, vocab: Vocabulary, sort: Sort, what: str) -> None:
    allowed = set(vocab.names(sort))
    stray = sorted(f.variables - allowed)
    if stray:
        raise SortError(f"{what} {f} mentions {', '.join(stray)} outside language {sort.value}")


class ArgumentDatabase:
    """Sentences ``antecedent => consequent`` over a two-sorted vocabulary.

    Computed arguments are memoized per database; the memo is guarded by a
    lock so a database can be shared between threads.
    """

    def __init__(
        self,
        vocab: Vocabulary,
        sentences: Iterable[Sentence | tuple[Formula, Formula]] = (),
        elimination_order: Sequence[str] | None = None,
    ):
        self.vocab = vocab
        items = []
        for s in sentences:
            if not isinstance(s, Sentence):
                s = Sentence(*s)
            _check_sort(s.antecedent, vocab, Sort.ASSUMPTION, "antecedent")
            _check_sort(s.consequent, vocab, Sort.DOMAIN, "consequent")
            items.append(s)
        self.sentences: tuple[Sentence, ...] = tuple(items)
        if elimination_order is None:
            elimination_order = vocab.domain
        if sorted(elimination_order) != sorted(vocab.domain):
            raise ValueError("elimination order must list every domain variable once")
        self.elimination_order = tuple(elimination_order)
        self.conjunction: Formula = conj(*(s.formula() for s in self.sentences))
        self._memo: dict[Formula, Formula] = {}
        self._lock = threading.Lock()

    @property
    def domain(self) -> tuple[str, ...]:
        return self.vocab.domain

    @property
    def assumptions(self) -> tuple[str, ...]:
        return self.vocab.assumptions

    def __len__(self):
        return len(self.sentences)

    def __iter__(self):
        return iter(self.sentences)

    def __repr__(self):
        return f"ArgumentDatabase({len(self.sentences)} sentences, L={list(self.domain)}, A={list(self.assumptions)})"


# ---------------------------------------------------------------------------
# text format

_LANG = re.compile(r"\s*lang\s+([LA])\s*:(.*)\Z")


def _strip_comment(line: str) -> str:
    return line.split("#", 1)[0]


def parse_database(text: str) -> ArgumentDatabase:
    """Read ``lang L:``/``lang A:`` headers followed by ``alpha :- phi`` lines."""
    langs: dict[str, list[str]] = {"L": [], "A": []}
    rows: list[tuple[int, str, str]] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = _strip_comment(raw).strip()
        if not line:
            continue
        m = _LANG.match(line)
        if m:
            langs[m.group(1)].extend(n for n in re.split(r"[\s,]+", m.group(2).strip()) if n)
            continue
        if ":-" not in line:
            raise DatabaseError(f"line {lineno}: expected 'lang' header or 'alpha :- phi'")
        lhs, rhs = line.split(":-", 1)
        rows.append((lineno, lhs, rhs))
    try:
        vocab = Vocabulary(langs["L"], langs["A"])
    except ValueError as exc:
        raise DatabaseError(str(exc)) from None
    sentences = []
    for lineno, lhs, rhs in rows:
        try:
            alpha = parse_formula(lhs, vocab.assumptions)
            phi = parse_formula(rhs, vocab.domain)
        except FormulaSyntaxError as exc:
            raise DatabaseError(f"line {lineno}: {exc}") from None
        sentences.append(Sentence(alpha, phi))
    return ArgumentDatabase(vocab, sentences)


def format_database(db: ArgumentDatabase) -> str:
    lines = [f"lang L: {' '.join(db.domain)}", f"lang A: {' '.join(db.assumptions)}"]
    lines += [str(s) for s in db.sentences]
    return "\n".join(lines) + "\n"


def parse_domain_formula(db: ArgumentDatabase, text: str) -> Formula:
    return parse_formula(text, db.domain)


# ---------------------------------------------------------------------------
# validity

def validate_database(db: ArgumentDatabase) -> Violation | None:
    """``None`` when no invalid assumption sentence is entailed, else a witness.

    The witness is an assumption assignment under which the database has no
    domain model.
    """
    projection = forget(db.conjunction, db.elimination_order, "existential")
    model = find_model(neg(projection))
    if model is None:
        return None
    witness = {n: model[n] for n in db.assumptions if n in model}
    return Violation("database entails an invalid assumption sentence", witness)


# ---------------------------------------------------------------------------
# arguments

def _require_domain(db: ArgumentDatabase, phi: Formula, what: str = "query") -> None:
    _check_sort(phi, db.vocab, Sort.DOMAIN, what)


def argument(db: ArgumentDatabase, phi: Formula) -> Formula:
    """The argument for domain sentence ``phi``, in Blake form."""
    _require_domain(db, phi)
    with db._lock:
        hit = db._memo.get(phi)
    if hit is not None:
        return hit
    weakest = forget(implies(db.conjunction, phi), db.elimination_order, "universal")
    result = blake(weakest, db.assumptions)
    with db._lock:
        db._memo[phi] = result
    return result


def truth_table(f: Formula, names: Sequence[str]) -> int:
    """Bit ``x`` of the result is the value of ``f`` at assignment ``x``.

    Variable ``names[j]`` takes value ``(x >> j) & 1``.
    """
    n = len(names)
    size = 1 << n
    full = (1 << size) - 1
    base: dict[str, int] = {}
    for j, name in enumerate(names):
        block = 1 << j
        t = ((1 << block) - 1) << block
        length = block << 1
        while length < size:
            t |= t << length
            length <<= 1
        base[name] = t & full
    cache: dict[int, int] = {}

    def tt(g: Formula) -> int:
        key = id(g)
        if key in cache:
            return cache[key]
        op = g.op
        if op == "const":
            r = full if g is TRUE else 0
        elif op == "var":
            r = base[g.name]
        elif op == "not":
            r = full ^ tt(g.args[0])
        elif op == "and":
            r = full
            for a in g.args:
                r &= tt(a)
        elif op == "or":
            r = 0
            for a in g.args:
                r |= tt(a)
        elif op == "implies":
            r = (full ^ tt(g.args[0])) | tt(g.args[1])
        else:
            r = full ^ (tt(g.args[0]) ^ tt(g.args[1]))
        cache[key] = r
        return r

    return tt(f)


def argument_oracle(db: ArgumentDatabase, phi: Formula) -> Formula:
    """The argument for ``phi`` by exhaustive enumeration.

    Returns the disjunction of the full assumption terms under which every
    domain model of the database satisfies ``phi``.
    """
    _require_domain(db, phi)
    nl, na = len(db.domain), len(db.assumptions)
    if nl + na > MAX_ORACLE_VARIABLES:
        raise GuardError(f"{nl + na} variables exceed the oracle guard of {MAX_ORACLE_VARIABLES}")
    counter = truth_table(conj(db.conjunction, neg(phi)), db.domain + db.assumptions)
    chunk = (1 << (1 << nl)) - 1
    included = []
    for a in range(1 << na):
        if (counter >> (a << nl)) & chunk == 0:
            included.append(term((name, bool(a >> j & 1)) for j, name in enumerate(db.assumptions)))
    return disj(*included)


Arguer = Callable[[ArgumentDatabase, Formula], Formula]


def conditional_argument(db: ArgumentDatabase, psi: Formula, phi: Formula, argue: Arguer = argument) -> Formula:
    """Argument for ``psi`` given observation ``phi``.

    ``argue`` computes plain arguments; pass ``argument_oracle`` for the
    enumeration route.
    """
    _require_domain(db, psi)
    _require_domain(db, phi, "condition")
    return blake(conj(argue(db, implies(phi, psi)), neg(argue(db, neg(phi)))), db.assumptions)


def is_sufficient_argument(db: ArgumentDatabase, alpha: Formula, psi: Formula, phi: Formula) -> bool:
    """Whether ``alpha`` lies between the conditional argument and the argument for ``phi => psi``."""
    _check_sort(alpha, db.vocab, Sort.ASSUMPTION, "argument")
    lower = conditional_argument(db, psi, phi)
    upper = argument(db, implies(phi, psi))
    return entails(lower, alpha) and entails(alpha, upper)


def positive_influence(db: ArgumentDatabase, phi: Formula, psi: Formula) -> Formula:
    combined = conj(argument(db, implies(phi, psi)), neg(argument(db, neg(phi))), neg(argument(db, psi)))
    return blake(combined, db.assumptions)


def negative_influence(db: ArgumentDatabase, phi: Formula, psi: Formula) -> Formula:
    return argument(db, conj(psi, neg(phi)))


# ---------------------------------------------------------------------------
# independence
#
# Observed sets (J, K) range over full instantiations.  The target set I
# ranges over full clauses: since arguments distribute over conjunction this
# covers every sentence about I.  ``targets="instantiations"`` switches the
# target side to full instantiations as well.

TARGETS = ("clauses", "instantiations")


def instantiations(names: Sequence[str]) -> Iterator[dict[str, bool]]:
    """Every full instantiation of ``names``, positive literals first."""
    for values in itertools.product((True, False), repeat=len(names)):
        yield dict(zip(names, values))


def full_clauses(names: Sequence[str]) -> Iterator[Formula]:
    """Every disjunction with exactly one literal per variable of ``names``."""
    for inst in instantiations(names):
        yield disj(*(literal(n, v) for n, v in inst.items()))


def literal(name: str, value: bool) -> Formula:
    return term({name: value})


def _targets(names: Sequence[str], targets: str) -> Iterator[Formula]:
    if targets == "clauses":
        return full_clauses(names)
    if targets == "instantiations":
        return (term(inst) for inst in instantiations(names))
    raise ValueError(f"targets must be one of {TARGETS}")


def _check_sets(db: ArgumentDatabase, *groups: Sequence[str]) -> None:
    seen: set[str] = set()
    domain = set(db.domain)
    for g in groups:
        for name in g:
            if name not in domain:
                raise SortError(f"{name!r} is not a domain variable")
            if name in seen:
                raise ValueError(f"variable sets are not disjoint ({name!r} repeats)")
            seen.add(name)
    if len(seen) > MAX_INSTANTIATION_BITS:
        raise GuardError(f"{len(seen)} variables exceed the instantiation guard of {MAX_INSTANTIATION_BITS}")


def _nonempty(**groups: Sequence[str]) -> None:
    for label, g in groups.items():
        if not g:
            raise ValueError(f"{label} must be nonempty")


@dataclass(frozen=True)
class Witness:
    """Target sentence and observations at which an independence test fails."""

    i: Formula
    j: Formula
    k: Formula = TRUE

    def __str__(self):
        return f"I=[{self.i}] K=[{self.k}] J=[{self.j}]"


def plus_dependence_witness(
    db: ArgumentDatabase,
    I: Sequence[str],
    K: Sequence[str],
    J: Sequence[str],
    targets: str = "clauses",
    argue: Arguer = argument,
) -> Witness | None:
    """First case violating ``+Ind(I, K, J)``, or ``None`` when independent."""
    I, K, J = list(I), list(K), list(J)
    _nonempty(I=I, J=J)
    _check_sets(db, I, K, J)
    for k_inst in instantiations(K):
        k_term = term(k_inst)
        for target in _targets(I, targets):
            given_k = conditional_argument(db, target, k_term, argue)
            for j_inst in instantiations(J):
                j_term = term(j_inst)
                given_kj = conditional_argument(db, target, conj(k_term, j_term), argue)
                if not entails(given_kj, given_k):
                    return Witness(target, j_term, k_term)
    return None


def plus_independent(
    db: ArgumentDatabase,
    I: Sequence[str],
    K: Sequence[str],
    J: Sequence[str],
    targets: str = "clauses",
    argue: Arguer = argument,
) -> bool:
    """Whether ``I`` is +independent from ``J`` given ``K`` (``K`` may be empty).

    No observation about ``J`` may strengthen, beyond what ``K`` already gives,
    the conditional argument for any sentence about ``I``.
    """
    return plus_dependence_witness(db, I, K, J, targets, argue) is None


def minus_dependence_witness(
    db: ArgumentDatabase, I: Sequence[str], J: Sequence[str], targets: str = "clauses", argue: Arguer = argument
) -> Witness | None:
    I, J = list(I), list(J)
    _nonempty(I=I, J=J)
    _check_sets(db, I, J)
    for target in _targets(I, targets):
        plain = argue(db, target)
        for j_inst in instantiations(J):
            j_term = term(j_inst)
            if not entails(plain, conditional_argument(db, target, j_term, argue)):
                return Witness(target, j_term)
    return None


def minus_independent(
    db: ArgumentDatabase, I: Sequence[str], J: Sequence[str], targets: str = "clauses", argue: Arguer = argument
) -> bool:
    """Whether no observation about ``J`` weakens the argument for any sentence about ``I``."""
    return minus_dependence_witness(db, I, J, targets, argue) is None


def plus_independent_by_disjunction(
    db: ArgumentDatabase,
    I: Sequence[str],
    K: Sequence[str],
    J: Sequence[str],
    targets: str = "clauses",
) -> bool:
    """Disjunctive characterization of conditional +independence.

    For every instantiation of ``K`` and targets over ``I`` and ``J``, the
    argument for ``K => I | J`` must split into those for ``K => I`` and
    ``K => J``.
    """
    I, K, J = list(I), list(K), list(J)
    _nonempty(I=I, J=J)
    _check_sets(db, I, K, J)
    j_targets = list(_targets(J, targets))
    for k_inst in instantiations(K):
        k_term = term(k_inst)
        for i_target in _targets(I, targets):
            left = argument(db, implies(k_term, i_target))
            for j_target in j_targets:
                joint = argument(db, implies(k_term, disj(i_target, j_target)))
                split = disj(left, argument(db, implies(k_term, j_target)))
                if not equivalent(joint, split):
                    return False
    return True
