"""Applications of arguments: retraction, ATMS labels and kernel diagnoses.

Each quantity has two routes, one through arguments and one straight from
prime implicates of the database.  Both are exposed so callers (and the test
suite) can compare them.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .argdb import Arguer, ArgumentDatabase, Sentence, argument
from .logic import (
    TRUE,
    Formula,
    Var,
    Vocabulary,
    conj,
    disj,
    entails,
    equivalent,
    forget,
    is_satisfiable,
    neg,
    parse_formula,
)
from .primes import (
    Clause,
    Term,
    canonical_sort,
    clauses_formula,
    natural_key,
    prime_implicants,
    prime_implicates,
    restrict_to_language,
)


# ---------------------------------------------------------------------------
# plain databases


@dataclass(frozen=True)
class WrappedDatabase:
    """A plain database with one fresh assumption per sentence."""

    db: ArgumentDatabase
    labels: tuple[str, ...]
    originals: tuple[Formula, ...]

    def sentence(self, label: str) -> Formula:
        return self.originals[self.labels.index(label)]

    def __len__(self):
        return len(self.labels)


def _fresh_prefix(taken: set[str]) -> str:
    prefix = "a"
    while any(n.startswith(prefix) and n[len(prefix):].isdigit() for n in taken):
        prefix += "_"
    return prefix


def wrap_plain_database(sentences: Iterable[Formula | str], domain: Sequence[str] = ()) -> WrappedDatabase:
    """Turn ``phi_1..phi_n`` into ``a_i => phi_i`` with fresh ``a_1..a_n``.

    ``domain`` may list extra domain variables so later queries can mention
    them.  If the sentences already use names like ``a3`` the assumption
    prefix is lengthened (``a_1``, ``a__1``, ...).
    """
    originals = tuple(parse_formula(s) if isinstance(s, str) else s for s in sentences)
    names: list[str] = list(domain)
    for f in originals:
        names.extend(sorted(f.variables - set(names), key=natural_key))
    prefix = _fresh_prefix(set(names))
    labels = tuple(f"{prefix}{i}" for i in range(1, len(originals) + 1))
    vocab = Vocabulary(tuple(names), labels)
    db = ArgumentDatabase(vocab, [Sentence(Var(a), f) for a, f in zip(labels, originals)])
    return WrappedDatabase(db, labels, originals)


def _with_domain(db: ArgumentDatabase, phi: Formula) -> ArgumentDatabase:
    missing = sorted(phi.variables - set(db.domain), key=natural_key)
    if not missing:
        return db
    return ArgumentDatabase(db.vocab.extend(domain=missing), db.sentences)


def database_entails(wrapped: WrappedDatabase, phi: Formula) -> bool:
    """Whether the original sentences entail ``phi``, decided through its argument."""
    db = _with_domain(wrapped.db, phi)
    everything = conj(*(Var(a) for a in wrapped.labels))
    return entails(everything, argument(db, phi))


@dataclass(frozen=True)
class RetractionCandidate:
    """Sentences to drop (``retract``) and to keep for consistency with an observation."""

    retract: tuple[str, ...]
    keep: tuple[str, ...]

    def describe(self, wrapped: WrappedDatabase) -> str:
        def show(labels):
            return "[" + ", ".join(str(wrapped.sentence(a)) for a in labels) + "]"

        return f"retract: {show(self.retract)} keep: {show(self.keep)}"


def retraction_candidates(
    wrapped: WrappedDatabase, obs: Formula, argue: Arguer = argument
) -> list[RetractionCandidate]:
    """Minimal ways of making the database consistent with ``obs``.

    One candidate per prime implicant of the negated argument against the
    observation.  An observation that is already consistent yields the single
    empty candidate.  Candidates are ordered by retract-set size, then
    lexicographically by sentence position.
    """
    db = _with_domain(wrapped.db, obs)
    everything = conj(*(Var(a) for a in wrapped.labels))
    if is_satisfiable(conj(db.conjunction, everything, obs)):
        return [RetractionCandidate((), ())]
    position = {a: i for i, a in enumerate(wrapped.labels)}
    out = []
    for t in prime_implicants(neg(argue(db, neg(obs))), wrapped.labels):
        retract = sorted((n for n, v in t if not v), key=position.__getitem__)
        keep = sorted((n for n, v in t if v), key=position.__getitem__)
        out.append(RetractionCandidate(tuple(retract), tuple(keep)))
    out.sort(key=lambda c: (len(c.retract), [position[a] for a in c.retract], [position[a] for a in c.keep]))
    return out


def remaining_sentences(wrapped: WrappedDatabase, candidate: RetractionCandidate) -> list[Formula]:
    return [f for a, f in zip(wrapped.labels, wrapped.originals) if a not in candidate.retract]


# ---------------------------------------------------------------------------
# labels and minimal supports


def atms_label(db: ArgumentDatabase, phi: Formula) -> list[Term]:
    """The label of ``phi``: prime implicants of its argument."""
    return prime_implicants(argument(db, phi), db.assumptions)


def minimal_supports(db: ArgumentDatabase, phi: Formula) -> list[Clause]:
    """Prime implicates of ``database & !phi`` that the database alone does not entail."""
    order = db.assumptions + db.domain
    implicates = prime_implicates(conj(db.conjunction, neg(phi)), order)
    return [c for c in implicates if not entails(db.conjunction, c.to_formula())]


def label_from_supports(db: ArgumentDatabase, phi: Formula) -> list[Term]:
    """The label read off the assumption-only minimal supports."""
    supports = restrict_to_language(minimal_supports(db, phi), db.vocab)
    return canonical_sort((c.negated() for c in supports), db.assumptions)


# ---------------------------------------------------------------------------
# assumption consequences and diagnoses


def strongest_assumption_consequence(
    db: ArgumentDatabase, observation: Formula = TRUE, method: str = "forget"
) -> Formula:
    """The strongest assumption sentence entailed by ``database & observation``.

    ``method="forget"`` projects out the domain variables; ``"implicates"``
    conjoins the assumption-only prime implicates.  Both return clause form.
    """
    base = conj(db.conjunction, observation)
    if method == "forget":
        projected = forget(base, db.domain, "existential")
        clauses = prime_implicates(projected, db.assumptions)
    elif method == "implicates":
        clauses = restrict_to_language(prime_implicates(base, db.assumptions + db.domain), db.vocab)
    else:
        raise ValueError(f"unknown method {method!r}")
    return clauses_formula(canonical_sort(clauses, db.assumptions), db.assumptions)


def kernel_diagnoses(db: ArgumentDatabase, obs: Formula) -> list[Term]:
    """Prime implicants of the negated argument against ``obs``."""
    return prime_implicants(neg(argument(db, neg(obs))), db.assumptions)


def kernel_diagnoses_direct(db: ArgumentDatabase, obs: Formula) -> list[Term]:
    """Kernel diagnoses from the assumption-only prime implicates of ``database & obs``."""
    consequence = strongest_assumption_consequence(db, obs, method="implicates")
    return prime_implicants(consequence, db.assumptions)


def same_cubes(left: Iterable, right: Iterable) -> bool:
    return set(left) == set(right)


def consequence_paths_agree(db: ArgumentDatabase, observation: Formula = TRUE) -> bool:
    a = strongest_assumption_consequence(db, observation, "forget")
    b = strongest_assumption_consequence(db, observation, "implicates")
    return equivalent(a, b)


def covers(terms: Sequence[Term], f: Formula) -> bool:
    """Whether the disjunction of ``terms`` is equivalent to ``f``."""
    return equivalent(disj(*(t.to_formula() for t in terms)), f)


__all__ = [
    "WrappedDatabase",
    "wrap_plain_database",
    "database_entails",
    "RetractionCandidate",
    "retraction_candidates",
    "remaining_sentences",
    "atms_label",
    "minimal_supports",
    "label_from_supports",
    "strongest_assumption_consequence",
    "kernel_diagnoses",
    "kernel_diagnoses_direct",
    "consequence_paths_agree",
    "same_cubes",
    "covers",
]
