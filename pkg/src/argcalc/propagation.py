"""Symbolic polytree propagation of arguments.

For every unobserved node ``i`` and value ``v`` the run computes the
argument for ``evidence => (i = v)`` as ``pi_i(v) | lambda_i(v)``:

* ``pi_i(v)`` collects what the ancestors' side argues,
  ``AND over parent rows u of [Q(u, v) | OR over parents j of pi_{j,i}(!u_j)]``;
* ``lambda_i(v)`` collects the children's side, ``OR over children k of
  lambda_{k,i}(v)``;
* the message from parent ``j`` to child ``i`` is
  ``pi_{j,i}(w) = pi_j(w) | OR over other children k of lambda_{k,j}(w)``;
* the message from child ``k`` to parent ``i`` is ``Q_k(!v, !o)`` when ``k``
  is an observed leaf with value ``o``, and otherwise
  ``AND over values x of k of [lambda_k(!x) | AND over rows u of k with
  u_i = !v of (Q_k(u, !x) | OR over other parents j of pi_{j,k}(!u_j))]``.

Every formula lives in the assumption language.  Messages are put in Blake
form as they cross an edge unless ``canonical=False``.

Scheduling is a two-phase sweep per connected component (collect toward a
root, then distribute), so each edge carries exactly one message in each
direction.  On a forest, evidence in another component contributes its
negated-evidence argument disjunctively.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping

from .logic import FALSE, Formula, conj, disj, neg
from .network import ArgumentNetwork, components, is_observable_leaf, is_singly_connected
from .primes import blake

Literal = tuple[str, bool]


class PropagationError(ValueError):
    """The network or evidence is outside what the polytree algorithm accepts."""


@dataclass
class MessageState:
    """Every message and fused quantity produced by one run.

    ``pi_messages[(j, i)]`` and ``lambda_messages[(k, i)]`` map a value of the
    sender-side node (``j`` for pi, ``i`` for lambda) to a formula.
    """

    pi_messages: dict[tuple[str, str], dict[bool, Formula]] = field(default_factory=dict)
    lambda_messages: dict[tuple[str, str], dict[bool, Formula]] = field(default_factory=dict)
    pi: dict[str, dict[bool, Formula]] = field(default_factory=dict)
    lam: dict[str, dict[bool, Formula]] = field(default_factory=dict)

    @property
    def message_count(self) -> int:
        return len(self.pi_messages) + len(self.lambda_messages)


@dataclass
class PropagationResult:
    network: ArgumentNetwork
    evidence: dict[str, bool]
    arguments: dict[Literal, Formula]
    messages: MessageState

    def __getitem__(self, literal: Literal) -> Formula:
        return self.arguments[literal]


class _Run:
    def __init__(self, net: ArgumentNetwork, evidence: Mapping[str, bool], canonical: bool):
        self.net = net
        self.evidence = dict(evidence)
        self.canonical = canonical
        self.state = MessageState()

    def _canon(self, f: Formula) -> Formula:
        return blake(f, self.net.assumptions) if self.canonical else f

    # without canonicalization, sub-arguments are referenced rather than copied
    def _and(self, *args: Formula) -> Formula:
        return conj(*args, flatten=self.canonical)

    def _or(self, *args: Formula) -> Formula:
        return disj(*args, flatten=self.canonical)

    # -- fused quantities ---------------------------------------------------

    def pi(self, i: str) -> dict[bool, Formula]:
        hit = self.state.pi.get(i)
        if hit is not None:
            return hit
        t = self.net.tables[i]
        incoming = [self.state.pi_messages[(j, i)] for j in t.parents]
        out = {}
        for v in (True, False):
            rows = []
            for row in t.row_order:
                alternatives = [t.entry(row, v)]
                alternatives += [msg[not u] for msg, u in zip(incoming, row)]
                rows.append(self._or(*alternatives))
            out[v] = self._canon(self._and(*rows))
        self.state.pi[i] = out
        return out

    def lam(self, i: str) -> dict[bool, Formula]:
        hit = self.state.lam.get(i)
        if hit is not None:
            return hit
        incoming = [self.state.lambda_messages[(k, i)] for k in self.net.children[i]]
        out = {v: self._canon(self._or(*(msg[v] for msg in incoming))) for v in (True, False)}
        self.state.lam[i] = out
        return out

    # -- messages -----------------------------------------------------------

    def send_pi(self, j: str, i: str) -> None:
        pi_j = self.pi(j)
        others = [self.state.lambda_messages[(k, j)] for k in self.net.children[j] if k != i]
        msg = {w: self._canon(self._or(pi_j[w], *(m[w] for m in others))) for w in (True, False)}
        self.state.pi_messages[(j, i)] = msg

    def send_lambda(self, k: str, i: str) -> None:
        t = self.net.tables[k]
        if k in self.evidence:
            o = self.evidence[k]
            msg = {v: t.entry((not v,), not o) for v in (True, False)}
        else:
            lam_k = self.lam(k)
            idx = t.parents.index(i)
            others = [(pos, self.state.pi_messages[(j, k)]) for pos, j in enumerate(t.parents) if j != i]
            msg = {}
            for v in (True, False):
                per_value = []
                for x in (True, False):
                    rows = []
                    for row in t.row_order:
                        if row[idx] == v:
                            continue
                        alternatives = [t.entry(row, not x)]
                        alternatives += [m[not row[pos]] for pos, m in others]
                        rows.append(self._or(*alternatives))
                    per_value.append(self._or(lam_k[not x], self._and(*rows)))
                msg[v] = self._and(*per_value)
        self.state.lambda_messages[(k, i)] = {v: self._canon(f) for v, f in msg.items()}

    def send(self, sender: str, receiver: str) -> None:
        if sender in self.net.parents(receiver):
            self.send_pi(sender, receiver)
        else:
            self.send_lambda(sender, receiver)

    # -- schedule -----------------------------------------------------------

    def neighbours(self, n: str) -> list[str]:
        return list(self.net.parents(n)) + list(self.net.children[n])

    def sweep(self, nodes: list[str]) -> None:
        root = next((n for n in nodes if n not in self.evidence), nodes[0])
        order = [root]
        towards_root: dict[str, str | None] = {root: None}
        for n in order:
            for m in self.neighbours(n):
                if m not in towards_root:
                    towards_root[m] = n
                    order.append(m)
        for n in reversed(order[1:]):
            self.send(n, towards_root[n])
        for n in order:
            for m in self.neighbours(n):
                if towards_root.get(m) == n:
                    self.send(n, m)


def _check_inputs(net: ArgumentNetwork, evidence: Mapping[str, bool]) -> None:
    if not is_singly_connected(net):
        raise PropagationError("network is multiply connected; use the forgetting or oracle path")
    for n in evidence:
        if n not in net.tables:
            raise PropagationError(f"evidence names unknown node {n!r}")
        if not is_observable_leaf(net, n):
            raise PropagationError(
                f"observed node {n!r} is not a single-parent leaf; apply push_evidence_to_leaves first"
            )


def propagate(net: ArgumentNetwork, evidence: Mapping[str, bool], canonical: bool = True) -> PropagationResult:
    """Arguments for ``evidence => lit`` for every literal of every unobserved node.

    ``evidence`` must sit on single-parent leaves (see
    ``network.push_evidence_to_leaves``).  Empty evidence yields the plain
    arguments for each literal.
    """
    _check_inputs(net, evidence)
    run = _Run(net, evidence, canonical)
    comps = components(net)
    for comp in comps:
        run.sweep(comp)

    # a component's own negated-evidence argument, used by the other components
    against: list[Formula] = []
    comp_of: dict[str, int] = {}
    for idx, comp in enumerate(comps):
        for n in comp:
            comp_of[n] = idx
        probe = next((n for n in comp if n not in evidence), None)
        if probe is None or not any(n in evidence for n in comp):
            against.append(FALSE)
            continue
        pi, lam = run.pi(probe), run.lam(probe)
        against.append(run._canon(run._and(run._or(pi[True], lam[True]), run._or(pi[False], lam[False]))))

    arguments: dict[Literal, Formula] = {}
    for n in net.tables:
        if n in evidence:
            continue
        pi, lam = run.pi(n), run.lam(n)
        elsewhere = [f for idx, f in enumerate(against) if idx != comp_of[n]]
        for v in (True, False):
            arguments[(n, v)] = run._canon(run._or(pi[v], lam[v], *elsewhere))
    return PropagationResult(net, dict(evidence), arguments, run.state)


def negated_evidence_argument(result: PropagationResult, node: str) -> Formula:
    """Argument against the evidence, read off any unobserved node."""
    if node in result.evidence:
        raise PropagationError(f"node {node!r} is observed")
    if (node, True) not in result.arguments:
        raise PropagationError(f"unknown node {node!r}")
    combined = conj(result.arguments[(node, True)], result.arguments[(node, False)])
    return blake(combined, result.network.assumptions)


def conditional_from_propagation(result: PropagationResult, literal: Literal) -> Formula:
    """Conditional argument for ``literal`` given the evidence."""
    node, value = literal
    against = negated_evidence_argument(result, node)
    return blake(conj(result.arguments[(node, value)], neg(against)), result.network.assumptions)

