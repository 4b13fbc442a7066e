"""Command-line interface.

``--db`` accepts an argument database (``lang L:`` / ``lang A:`` headers and
``alpha :- phi`` lines), an argument network (``node`` blocks) or a plain
list of domain sentences, one per line, which is wrapped with one fresh
assumption per sentence.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
from dataclasses import dataclass
from typing import Sequence

from . import apps
from .argdb import (
    ArgumentDatabase,
    GuardError,
    argument,
    argument_oracle,
    conditional_argument,
    literal,
    minus_dependence_witness,
    parse_database,
    plus_dependence_witness,
    validate_database,
)
from .logic import FALSE, Formula, equivalent, implies, neg, parse_formula
from .network import (
    ArgumentNetwork,
    d_separated,
    d_separated_by_paths,
    evidence_term,
    is_singly_connected,
    parse_evidence,
    parse_network,
    push_evidence_to_leaves,
    to_database,
    validate_network,
)
from .primes import blake, prime_implicants
from .propagation import conditional_from_propagation, negated_evidence_argument, propagate

EXIT_OK, EXIT_EMPTY, EXIT_INPUT, EXIT_MISMATCH = 0, 1, 2, 3


class InputError(Exception):
    pass


class Mismatch(Exception):
    pass


# ---------------------------------------------------------------------------
# loading


@dataclass
class Source:
    db: ArgumentDatabase
    net: ArgumentNetwork | None = None
    wrapped: apps.WrappedDatabase | None = None

    @property
    def polytree(self) -> bool:
        return self.net is not None and is_singly_connected(self.net)


def _plain_sentences(text: str) -> apps.WrappedDatabase:
    domain: list[str] = []
    sentences = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        m = re.match(r"lang\s+L\s*:(.*)\Z", line)
        if m:
            domain += [n for n in re.split(r"[\s,]+", m.group(1).strip()) if n]
            continue
        sentences.append(parse_formula(line, domain or None))
    return apps.wrap_plain_database(sentences, domain)


def load(path: str) -> Source:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from exc
    if re.search(r"^\s*node\s+\w", text, re.M):
        net = parse_network(text)
        bad = validate_network(net)
        if bad is not None:
            raise InputError(f"invalid network: {bad}")
        return Source(to_database(net), net=net)
    if ":-" in text or re.search(r"^\s*lang\s+A\s*:", text, re.M):
        db = parse_database(text)
        bad = validate_database(db)
        if bad is not None:
            raise InputError(f"invalid database: {bad}")
        return Source(db)
    wrapped = _plain_sentences(text)
    return Source(wrapped.db, wrapped=wrapped)


def _wrapped_view(src: Source) -> apps.WrappedDatabase:
    """The database as sentences tagged by one assumption each."""
    if src.wrapped is not None:
        return src.wrapped
    labels, originals = [], []
    for s in src.db:
        ante = s.antecedent
        if ante.op != "var" or ante.name in labels:
            raise InputError("retraction needs one distinct assumption variable per sentence")
        labels.append(ante.name)
        originals.append(s.consequent)
    if sorted(labels) != sorted(src.db.assumptions):
        raise InputError("retraction needs every assumption to tag exactly one sentence")
    return apps.WrappedDatabase(src.db, tuple(labels), tuple(originals))


def _names(text: str | None) -> list[str]:
    return [n for n in re.split(r"[\s,]+", text or "") if n]


def _literals(f: Formula) -> dict[str, bool] | None:
    """``f`` as a consistent conjunction of literals, else ``None``."""
    parts = f.args if f.op == "and" else (f,)
    out: dict[str, bool] = {}
    for p in parts:
        if p.op == "var":
            name, value = p.name, True
        elif p.op == "not" and p.args[0].op == "var":
            name, value = p.args[0].name, False
        else:
            return None
        if out.get(name, value) != value:
            return None
        out[name] = value
    return out


# ---------------------------------------------------------------------------
# argument routes


def _oracle(db: ArgumentDatabase, phi: Formula) -> Formula:
    return blake(argument_oracle(db, phi), db.assumptions)


def _propagation_query(src: Source, phi: Formula):
    """``(evidence, literal)`` when ``phi`` is ``term => literal`` over nodes."""
    if not src.polytree:
        return None
    if phi.op == "implies":
        evidence, target = _literals(phi.args[0]), _literals(phi.args[1])
    else:
        evidence, target = {}, _literals(phi)
    if evidence is None or target is None or len(target) != 1:
        return None
    (node, value), = target.items()
    if node in evidence:
        return None
    return evidence, (node, value)


def _propagated(src: Source, evidence: dict[str, bool]):
    net, ev = push_evidence_to_leaves(src.net, evidence)
    return propagate(net, ev)


def compute_argument(src: Source, phi: Formula, oracle: bool) -> tuple[Formula, str]:
    if oracle:
        return _oracle(src.db, phi), "oracle"
    query = _propagation_query(src, phi)
    if query is not None:
        evidence, lit = query
        result = _propagated(src, evidence)
        return blake(result[lit], src.db.assumptions), "propagation"
    return argument(src.db, phi), "forgetting"


def compute_conditional(src: Source, psi: Formula, phi: Formula, oracle: bool) -> tuple[Formula, str]:
    if oracle:
        return conditional_argument(src.db, psi, phi, _oracle), "oracle"
    query = _propagation_query(src, implies(phi, psi))
    if query is not None and query[0]:
        evidence, lit = query
        result = _propagated(src, evidence)
        return blake(conditional_from_propagation(result, lit), src.db.assumptions), "propagation"
    return conditional_argument(src.db, psi, phi), "forgetting"


def compute_against(src: Source, obs: Formula, oracle: bool) -> tuple[Formula, str]:
    """The argument for ``!obs``."""
    if oracle:
        return _oracle(src.db, neg(obs)), "oracle"
    evidence = _literals(obs) if src.polytree else None
    if evidence:
        free = [n for n in src.net.tables if n not in evidence]
        if free:
            result = _propagated(src, evidence)
            return negated_evidence_argument(result, free[0]), "propagation"
    return argument(src.db, neg(obs)), "forgetting"


# ---------------------------------------------------------------------------
# commands; each returns (lines, method, data, exit code)


def _checked(args, compute, same=equivalent):
    value, method = compute(args.oracle)
    if args.check:
        other, other_method = compute(not args.oracle)
        if not same(value, other):
            raise Mismatch(f"{method} and {other_method} disagree: {value} vs {other}")
    return value, method


def _formula_lines(f: Formula, order: Sequence[str]) -> list[str]:
    if f is FALSE:
        return ["false"]
    return [str(t) for t in prime_implicants(f, order)]


def cmd_argue(args, src: Source):
    phi = parse_formula(args.query, src.db.domain)
    value, method = _checked(args, lambda o: compute_argument(src, phi, o))
    lines = _formula_lines(value, src.db.assumptions)
    data = {"argument": str(value), "implicants": lines if value is not FALSE else []}
    return lines, method, data, EXIT_EMPTY if value is FALSE else EXIT_OK


def cmd_condition(args, src: Source):
    psi = parse_formula(args.target, src.db.domain)
    phi = parse_formula(args.given, src.db.domain)
    value, method = _checked(args, lambda o: compute_conditional(src, psi, phi, o))
    lines = _formula_lines(value, src.db.assumptions)
    data = {"argument": str(value), "implicants": lines if value is not FALSE else []}
    return lines, method, data, EXIT_EMPTY if value is FALSE else EXIT_OK


def cmd_independent(args, src: Source):
    I, J, K = _names(args.i), _names(args.j), _names(args.k)
    if args.flavor == "minus" and K:
        raise InputError("--k is only meaningful with --flavor plus")

    def compute(oracle):
        argue = _oracle if oracle else argument
        if args.flavor == "plus":
            w = plus_dependence_witness(src.db, I, K, J, args.targets, argue)
        else:
            w = minus_dependence_witness(src.db, I, J, args.targets, argue)
        return w, "oracle" if oracle else "forgetting"

    witness, method = _checked(args, compute, same=lambda a, b: (a is None) == (b is None))
    if witness is None:
        return ["yes"], method, {"independent": True}, EXIT_OK
    data = {
        "independent": False,
        "witness": {"i": str(witness.i), "j": str(witness.j), "k": str(witness.k)},
    }
    return ["no", f"witness: {witness}"], method, data, EXIT_OK


def _terms_result(terms, method, key):
    lines = [str(t) for t in terms]
    return lines, method, {key: lines}, EXIT_OK if terms else EXIT_EMPTY


def cmd_label(args, src: Source):
    phi = parse_formula(args.query, src.db.domain)

    def compute(oracle):
        arg, method = compute_argument(src, phi, oracle)
        return prime_implicants(arg, src.db.assumptions), method

    terms, method = _checked(args, compute, same=apps.same_cubes)
    return _terms_result(terms, method, "label")


def cmd_diagnose(args, src: Source):
    obs = parse_formula(args.obs, src.db.domain)

    def compute(oracle):
        against, method = compute_against(src, obs, oracle)
        return prime_implicants(neg(against), src.db.assumptions), method

    terms, method = _checked(args, compute, same=apps.same_cubes)
    return _terms_result(terms, method, "diagnoses")


def cmd_retract(args, src: Source):
    wrapped = _wrapped_view(src)
    obs = parse_formula(args.obs, None)

    def compute(oracle):
        argue = _oracle if oracle else argument
        return apps.retraction_candidates(wrapped, obs, argue), "oracle" if oracle else "forgetting"

    found, method = _checked(args, compute, same=lambda a, b: a == b)
    lines = [c.describe(wrapped) for c in found]
    data = {
        "candidates": [
            {
                "retract": [str(wrapped.sentence(a)) for a in c.retract],
                "keep": [str(wrapped.sentence(a)) for a in c.keep],
            }
            for c in found
        ]
    }
    return lines, method, data, EXIT_OK if found else EXIT_EMPTY


def cmd_dsep(args, src: Source):
    if src.net is None:
        raise InputError("dsep needs a network file")
    I, J, K = _names(args.i), _names(args.j), _names(args.k)

    def compute(oracle):
        if oracle:
            return d_separated_by_paths(src.net, I, K, J), "path enumeration"
        return d_separated(src.net, I, K, J), "reachability"

    verdict, method = _checked(args, compute, same=lambda a, b: a == b)
    return ["yes" if verdict else "no"], method, {"d_separated": verdict}, EXIT_OK


def cmd_propagate(args, src: Source):
    if src.net is None:
        raise InputError("propagate needs a network file")
    evidence = parse_evidence(args.evidence, src.net)
    delta = evidence_term(evidence)
    order = src.db.assumptions

    def compute(oracle):
        if src.polytree and not oracle:
            net, ev = push_evidence_to_leaves(src.net, evidence)
            result = propagate(net, ev)
            free = [n for n in src.net.tables if n not in evidence]
            against = negated_evidence_argument(result, free[0]) if free else FALSE
            rows = {}
            for n in free:
                for v in (True, False):
                    rows[(n, v)] = (
                        blake(result[(n, v)], order),
                        against,
                        conditional_from_propagation(result, (n, v)),
                    )
            return rows, "propagation"
        argue = _oracle if oracle else argument
        against = argue(src.db, neg(delta))
        rows = {}
        for n in src.net.tables:
            if n in evidence:
                continue
            for v in (True, False):
                lit = literal(n, v)
                rows[(n, v)] = (
                    argue(src.db, implies(delta, lit)),
                    against,
                    conditional_argument(src.db, lit, delta, argue),
                )
        return rows, "oracle" if oracle else "forgetting"

    def same(a, b):
        return a.keys() == b.keys() and all(
            all(equivalent(x, y) for x, y in zip(a[k], b[k])) for k in a
        )

    rows, method = _checked(args, compute, same=same)
    lines, data = [], []
    for (n, v), (arg, against, cond) in rows.items():
        name = n if v else "!" + n
        lines += [
            f"literal {name}",
            f"  argument: {arg}",
            f"  against evidence: {against}",
            f"  conditional: {cond}",
        ]
        data.append({"literal": name, "argument": str(arg), "against_evidence": str(against), "conditional": str(cond)})
    return lines, method, {"literals": data}, EXIT_OK


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--oracle", action="store_true", help="use the brute-force path")
    common.add_argument("--check", action="store_true", help="run both paths and fail on disagreement")
    common.add_argument("--format", choices=("text", "json"), default="text")

    parser = argparse.ArgumentParser(prog="argcalc", description="Propositional argument calculus.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, help_text, db_flag="--db"):
        p = sub.add_parser(name, parents=[common], help=help_text)
        p.add_argument(db_flag, dest="source", required=True, metavar="FILE")
        p.set_defaults(func=func)
        return p

    p = add("argue", cmd_argue, "argument for a domain sentence")
    p.add_argument("--query", required=True)
    p = add("condition", cmd_condition, "conditional argument")
    p.add_argument("--target", required=True)
    p.add_argument("--given", required=True)
    p = add("independent", cmd_independent, "+/- independence test")
    p.add_argument("--i", required=True, metavar="VARS")
    p.add_argument("--j", required=True, metavar="VARS")
    p.add_argument("--k", default="", metavar="VARS")
    p.add_argument("--flavor", choices=("plus", "minus"), default="plus")
    p.add_argument("--targets", choices=("clauses", "instantiations"), default="clauses")
    p = add("label", cmd_label, "ATMS label of a sentence")
    p.add_argument("--query", required=True)
    p = add("diagnose", cmd_diagnose, "kernel diagnoses of an observation")
    p.add_argument("--obs", required=True)
    p = add("retract", cmd_retract, "minimal retractions restoring consistency")
    p.add_argument("--obs", required=True)
    p = add("dsep", cmd_dsep, "d-separation test", db_flag="--net")
    p.add_argument("--i", required=True, metavar="VARS")
    p.add_argument("--j", required=True, metavar="VARS")
    p.add_argument("--k", default="", metavar="VARS")
    p = add("propagate", cmd_propagate, "propagate evidence through a network", db_flag="--net")
    p.add_argument("--evidence", default="")
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        src = load(args.source)
        lines, method, data, code = args.func(args, src)
    except Mismatch as exc:
        print(f"mismatch: {exc}", file=sys.stderr)
        return EXIT_MISMATCH
    except (InputError, GuardError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    if args.format == "json":
        doc = {"command": args.command, "method": method, "checked": args.check, **data}
        print(json.dumps(doc, indent=2))
    else:
        print(f"# method: {method}")
        for line in lines:
            print(line)
    return code


if __name__ == "__main__":
    sys.exit(main())
