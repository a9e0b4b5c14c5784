"""Rewrite sequences denoted by certificates.

The canonical order concatenates split premises and interleaves lift children
round-robin (one step per unfinished child per round, left to right). A
premise with infinitely many steps absorbs every later premise.
"""

from __future__ import annotations

from . import _dovetail, _graph
from ._dovetail import Par, Schedule, Seq
from .errors import NotOmega, WrongKind
from .proofs import ProofCert, require_validated
from .terms import Position, truncation_equal
from .trs import FiniteReduction, Step, Trs, replay

MAX_POLLS = 1_000_000


def schedule_of(cert: ProofCert) -> Schedule:
    nodes = {}
    for nid, node in cert.nodes.items():
        if node.kind == "root":
            nodes[nid] = Seq((Step((), node.rule, node.subst),))
        elif node.kind == "lift":
            nodes[nid] = Par(node.children)
        elif node.kind == "split":
            nodes[nid] = Seq(node.premises)
        else:
            nodes[nid] = Seq(())
    return Schedule(nodes)


def seq_is_finite(cert: ProofCert, node: str | None = None) -> tuple[bool, int | None]:
    """Whether the subgraph below ``node`` is acyclic, with its step count if so."""
    start = cert.root if node is None else node
    ids, index, succs = cert.indexed()
    reach = _reachable_from(index[start], succs)
    cyclic = _graph.cyclic_nodes(len(ids), succs)
    if reach & cyclic:
        return False, None
    count: dict[int, int] = {}
    for comp in _graph.sccs(len(ids), succs):  # sinks first
        for i in comp:
            if i in reach:
                own = 1 if cert.nodes[ids[i]].kind == "root" else 0
                count[i] = own + sum(count[s] for s in succs[i])
    return True, count[index[start]]


def _reachable_from(i: int, succs: list[list[int]]) -> set[int]:
    seen = {i}
    stack = [i]
    while stack:
        for s in succs[stack.pop()]:
            if s not in seen:
                seen.add(s)
                stack.append(s)
    return seen


def _require_rewrite_kind(cert: ProofCert) -> None:
    require_validated(cert)
    if cert.kind == "ieq":
        raise WrongKind("equational certificates do not denote rewrite sequences")


def canonical_prefix(cert: ProofCert, k: int) -> FiniteReduction:
    """The first ``k`` steps of the canonical sequence (fewer if it is shorter)."""
    _require_rewrite_kind(cert)
    stream = schedule_of(cert).stream(cert.root)
    return FiniteReduction(cert.source, tuple(_dovetail.take(stream, k)))


def _is_omega_type(cert: ProofCert, sched: Schedule) -> bool:
    """No split reaches a cycle in one premise and has steps in a later one."""
    ids, index, succs = cert.indexed()
    cyclic = _graph.cyclic_nodes(len(ids), succs)
    infinite = {}
    for nid in cert.nodes:
        reach = _reachable_from(index[nid], succs)
        infinite[nid] = any(i in cyclic and sched.has_steps(ids[i]) for i in reach)
    for node in cert.nodes.values():
        if node.kind != "split":
            continue
        for i, p in enumerate(node.premises):
            if infinite[p] and any(sched.has_steps(q) for q in node.premises[i + 1 :]):
                return False
    return True


def steps_at_depth(cert: ProofCert, n: int) -> list[tuple[Position, int]]:
    """Steps of the canonical sequence at positions of length <= n, in order.

    For sequences longer than omega the order is the round-robin order of the
    depth-restricted streams; steps at depth <= n always come out finitely.
    """
    _require_rewrite_kind(cert)
    sched = schedule_of(cert)
    if _is_omega_type(cert, sched):
        steps = _dovetail.prefix_to_depth(sched, cert.root, n, MAX_POLLS)
    else:
        steps = _dovetail.shallow_steps(sched, cert.root, n, MAX_POLLS)
    return [(s.pos, s.rule) for s in steps if len(s.pos) <= n]


def prefix_agreement(cert: ProofCert, n: int, trs: Trs) -> tuple[FiniteReduction, bool]:
    """Shortest canonical prefix holding every step of depth <= n, and whether
    its end agrees with the target up to depth n."""
    _require_rewrite_kind(cert)
    if cert.kind != "ired":
        raise WrongKind("prefix agreement is defined for ired certificates")
    sched = schedule_of(cert)
    if not _is_omega_type(cert, sched):
        raise NotOmega("a premise with infinitely many steps is followed by further steps")
    steps = _dovetail.prefix_to_depth(sched, cert.root, n, MAX_POLLS)
    red = FiniteReduction(cert.source, tuple(steps))
    return red, truncation_equal(replay(red, trs), cert.target, n)
