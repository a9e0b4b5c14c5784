"""Regular proof-tree certificates for ired (⟶∞), ibi (↠) and ieq (=∞).

A certificate is a finite graph of split / lift / id / root nodes, each
labelled with a source and target term. Back-edges make the graph denote an
infinite (regular) proof tree.
"""

from __future__ import annotations

import re
from collections.abc import Mapping
from dataclasses import dataclass, field, replace
from typing import Any

from . import _graph
from .errors import FormatError, NoMatch, NotValidated, WrongKind
from .terms import FUN, VAR, Node, Term, parse_term, substitute
from .trs import Trs, match_pattern

KINDS = ("ired", "ibi", "ieq")
NODE_KINDS = ("split", "lift", "id", "root")
MARKED_ON_CYCLE = "marked Lift on cycle"


@dataclass(frozen=True)
class ProofNode:
    kind: str
    source: Term
    target: Term
    premises: tuple[str, ...] = ()
    children: tuple[str, ...] = ()
    marked: bool = False
    rule: int | None = None
    subst: Mapping[str, Term] | None = field(default=None, compare=False)
    reversed: bool = False

    def successors(self) -> tuple[str, ...]:
        return self.premises if self.kind == "split" else self.children


@dataclass
class ProofCert:
    """A certificate; ``validated`` is set by a successful check_valid."""

    kind: str
    nodes: dict[str, ProofNode]
    root: str
    validated: bool = field(default=False, compare=False, repr=False)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise FormatError(f"unknown relation kind {self.kind!r}")
        if self.root not in self.nodes:
            raise FormatError(f"root {self.root!r} is not a node")
        for nid, node in self.nodes.items():
            for s in node.successors():
                if s not in self.nodes:
                    raise FormatError(f"node {nid} references unknown node {s}")

    @property
    def source(self) -> Term:
        return self.nodes[self.root].source

    @property
    def target(self) -> Term:
        return self.nodes[self.root].target

    def indexed(self) -> tuple[list[str], dict[str, int], list[list[int]]]:
        """Node ids in natural order, their indices and successor lists."""
        ids = sorted(self.nodes, key=natural_key)
        index = {n: i for i, n in enumerate(ids)}
        succs = [[index[s] for s in self.nodes[n].successors()] for n in ids]
        return ids, index, succs

    def __len__(self):
        return len(self.nodes)


def natural_key(s: str) -> tuple:
    return tuple(int(p) if p.isdigit() else p for p in re.split(r"(\d+)", s))


def require_validated(cert: ProofCert) -> None:
    if not cert.validated:
        raise NotValidated("run check_valid on the certificate first")


# -- building -----------------------------------------------------------------------


class CertBuilder:
    """Incremental construction with forward references for back-edges."""

    def __init__(self, kind: str, trs: Trs | None = None, prefix: str = "n"):
        self.kind = kind
        self.trs = trs
        self.prefix = prefix
        self.nodes: dict[str, ProofNode] = {}
        self.count = 0
        self._identity: dict[tuple, str] = {}

    def term(self, t: Term | str) -> Term:
        if isinstance(t, Term):
            return t
        if self.trs is None:
            raise ValueError("textual terms need a TRS signature")
        return parse_term(t, self.trs.signature)

    def reserve(self) -> str:
        nid = f"{self.prefix}{self.count}"
        self.count += 1
        return nid

    def _put(self, nid: str | None, node: ProofNode) -> str:
        nid = nid or self.reserve()
        self.nodes[nid] = node
        return nid

    def split(self, src, tgt, premises, nid: str | None = None) -> str:
        return self._put(nid, ProofNode("split", self.term(src), self.term(tgt), tuple(premises)))

    def lift(self, src, tgt, children, marked: bool = False, nid: str | None = None) -> str:
        node = ProofNode("lift", self.term(src), self.term(tgt), children=tuple(children), marked=marked)
        return self._put(nid, node)

    def ident(self, t, nid: str | None = None) -> str:
        t = self.term(t)
        return self._put(nid, ProofNode("id", t, t))

    def root(self, src, tgt, rule: int, subst=None, reversed: bool = False, nid: str | None = None) -> str:
        node = ProofNode("root", self.term(src), self.term(tgt), rule=rule, subst=subst, reversed=reversed)
        return self._put(nid, node)

    def identity_lift(self, t, marked: bool = False) -> str:
        """Canonical identity below the root: Id on variables, else a lift of identities."""
        t = self.term(t)
        if t.is_var:
            return self.ident(t)
        return self.lift(t, t, [self.identity_split(a) for a in t.args], marked=marked)

    def identity_split(self, t) -> str:
        """Canonical proof of t ⟶∞ t (regular even for infinite t)."""
        t = self.term(t)
        key = t.key()
        if key in self._identity:
            return self._identity[key]
        sid = self.reserve()
        self._identity[key] = sid
        self.nodes[sid] = ProofNode("split", t, t, (self.identity_lift(t),))
        return sid

    def build(self, root: str) -> ProofCert:
        reach = _reachable(self.nodes, root)
        return ProofCert(self.kind, {n: self.nodes[n] for n in self.nodes if n in reach}, root)


def _reachable(nodes: Mapping[str, ProofNode], root: str) -> set[str]:
    seen = {root}
    stack = [root]
    while stack:
        for s in nodes[stack.pop()].successors():
            if s not in seen:
                seen.add(s)
                stack.append(s)
    return seen


# -- validity ---------------------------------------------------------------------


@dataclass(frozen=True)
class Verdict:
    ok: bool
    node: str | None = None
    clause: str | None = None
    message: str = ""

    def __bool__(self):
        return self.ok

    def __str__(self):
        if self.ok:
            return "ok"
        return f"node {self.node}: clause ({self.clause}) {self.message}"


def root_substitution(node: ProofNode, trs: Trs) -> dict[str, Term]:
    """The node's substitution, inferred from the redex side when absent."""
    rule = trs.rule(node.rule)
    if node.subst is not None:
        return dict(node.subst)
    redex = node.target if node.reversed else node.source
    return match_pattern(redex, rule.lhs)


def _check_root(node: ProofNode, trs: Trs) -> str | None:
    if node.rule is None or not 0 <= node.rule < len(trs.rules):
        return f"rule index {node.rule} out of range"
    rule = trs.rules[node.rule]
    try:
        sigma = root_substitution(node, trs)
    except NoMatch as e:
        return f"lhs does not match: {e}"
    lhs, rhs = substitute(rule.lhs, sigma), substitute(rule.rhs, sigma)
    if node.reversed:
        lhs, rhs = rhs, lhs
    if lhs != node.source or rhs != node.target:
        return "root step endpoints do not match the rule instance"
    return None


def _check_lift(node: ProofNode, cert: ProofCert) -> str | None:
    s, t = node.source, node.target
    if s.is_var or t.is_var or s.head != t.head or s.arity != t.arity:
        return "source and target must share a head symbol"
    if len(node.children) != s.arity:
        return f"expected {s.arity} children, found {len(node.children)}"
    for si, ti, c in zip(s.args, t.args, node.children):
        child = cert.nodes[c]
        if child.kind != "split":
            return f"child {c} is a {child.kind}, expected a split"
        if child.source != si or child.target != ti:
            return f"child {c} does not prove the argument relation"
    return None


def _check_split(nid: str, node: ProofNode, cert: ProofCert) -> str | None:
    prem = [cert.nodes[p] for p in node.premises]
    for p, pn in zip(node.premises, prem):
        if pn.kind == "split":
            return f"premise {p} is a split"
    if not prem:
        return None if node.source == node.target else "empty split needs bisimilar endpoints"
    if prem[0].source != node.source:
        return "first premise does not start at the split source"
    for a, b in zip(prem, prem[1:]):
        if a.target != b.source:
            return "premises do not chain"
    if prem[-1].target != node.target:
        return "last premise does not end at the split target"
    if cert.kind == "ired":
        for p, pn in zip(node.premises[:-1], prem[:-1]):
            if pn.kind == "lift" and not pn.marked:
                return f"non-final lift {p} must be marked"
        last = prem[-1]
        if last.kind == "root":
            return "final premise must be a lift or id"
        if last.kind == "lift" and last.marked:
            return f"final lift {node.premises[-1]} must be unmarked"
    return None


def check_valid(cert: ProofCert, trs: Trs) -> Verdict:
    """Check local validity of every node and, for ired, mark-acyclicity."""
    violations: list[tuple[str, str, str]] = []
    reach = _reachable(cert.nodes, cert.root)
    for nid in cert.nodes:
        if nid not in reach:
            violations.append((nid, "reach", "node unreachable from root"))
    if cert.nodes[cert.root].kind != "split":
        violations.append((cert.root, "c", "certificate root must be a split"))
    final_use: dict[str, set[bool]] = {}
    for nid, node in cert.nodes.items():
        if node.kind == "split":
            for i, p in enumerate(node.premises):
                final_use.setdefault(p, set()).add(i == len(node.premises) - 1)
    for nid, node in cert.nodes.items():
        msg: str | None = None
        clause = ""
        if node.kind == "root":
            clause, msg = "a", _check_root(node, trs)
            if msg is None and node.reversed and cert.kind != "ieq":
                clause, msg = "d", "backward root steps are only allowed in ieq"
        elif node.kind == "lift":
            clause, msg = "b", _check_lift(node, cert)
            if msg is None and node.marked and cert.kind != "ired":
                clause, msg = "d", "marks are only allowed in ired"
            if msg is None and cert.kind == "ired" and final_use.get(nid) == {True, False}:
                clause, msg = "c", "lift shared between final and non-final premise positions"
        elif node.kind == "id":
            if node.source != node.target:
                clause, msg = "id", "id node with distinct endpoints"
        elif node.kind == "split":
            clause, msg = "c", _check_split(nid, node, cert)
        else:
            clause, msg = "c", f"unknown node kind {node.kind}"
        if msg is not None:
            violations.append((nid, clause, msg))
    if cert.kind == "ired":
        ids, index, succs = cert.indexed()
        for i in _graph.cyclic_nodes(len(ids), succs):
            node = cert.nodes[ids[i]]
            if node.kind == "lift" and node.marked:
                violations.append((ids[i], "e", MARKED_ON_CYCLE))
    if violations:
        nid, clause, msg = min(violations, key=lambda v: natural_key(v[0]))
        return Verdict(False, nid, clause, msg)
    cert.validated = True
    return Verdict(True)


# -- canonicity and conversions ----------------------------------------------------------


_CANONICAL_SHAPE = re.compile(r"(LR)*[LI]")


def is_canonical(cert: ProofCert) -> bool:
    """Every split matches (marked-lift ; root)* ; (lift | id), ids only on variables.

    Adjacent lifts are fused and a root without a preceding lift gets an
    identity lift inserted before the shape is matched.
    """
    require_validated(cert)
    if cert.kind != "ired":
        raise WrongKind("canonicity is defined for ired certificates")
    for node in cert.nodes.values():
        if node.kind == "id" and not (node.source.is_var and node.target.is_var):
            return False
        if node.kind != "split":
            continue
        tokens = ""
        for p in node.premises:
            k = cert.nodes[p].kind
            if k == "lift":
                if not tokens.endswith("L"):
                    tokens += "L"
            elif k == "root":
                if not tokens.endswith("L"):
                    tokens += "L"
                tokens += "R"
            else:
                tokens += "I"
        if not _CANONICAL_SHAPE.fullmatch(tokens):
            return False
    return True


def forget_marks(cert: ProofCert) -> ProofCert:
    if cert.kind != "ired":
        raise WrongKind(f"forget_marks expects ired, got {cert.kind}")
    nodes = {n: replace(v, marked=False) if v.kind == "lift" else v for n, v in cert.nodes.items()}
    return ProofCert("ibi", nodes, cert.root)


def embed_ieq(cert: ProofCert) -> ProofCert:
    if cert.kind != "ibi":
        raise WrongKind(f"embed_ieq expects ibi, got {cert.kind}")
    return ProofCert("ieq", dict(cert.nodes), cert.root)


def _labels(cert: ProofCert, ids: list[str]) -> list[tuple]:
    out = []
    for n in ids:
        v = cert.nodes[n]
        out.append((v.kind, v.marked, v.rule, v.reversed, v.source.key(), v.target.key()))
    return out


def cert_equal(a: ProofCert, b: ProofCert) -> bool:
    """Bisimilarity of the two node graphs (term payloads compared up to bisimilarity)."""
    if a.kind != b.kind:
        return False
    ids_a, idx_a, succ_a = a.indexed()
    ids_b, idx_b, succ_b = b.indexed()
    off = len(ids_a)
    labels = _labels(a, ids_a) + _labels(b, ids_b)
    succs = succ_a + [[s + off for s in ss] for ss in succ_b]
    block = _graph.refine(labels, succs)
    return block[idx_a[a.root]] == block[off + idx_b[b.root]]


def cert_fingerprint(cert: ProofCert) -> tuple:
    """Key equal for two certificates iff cert_equal holds (same kind)."""
    ids, index, succs = cert.indexed()
    return (cert.kind, _graph.canonical_encoding(index[cert.root], _labels(cert, ids), succs))


def mark_nesting_depth(cert: ProofCert) -> int:
    """Most marked lifts met on a path through the condensation DAG."""
    if cert.kind != "ired":
        raise WrongKind("nesting depth is defined for ired certificates")
    require_validated(cert)
    ids, index, succs = cert.indexed()
    comps = _graph.sccs(len(ids), succs)
    comp_of = {}
    for c, members in enumerate(comps):
        for m in members:
            comp_of[m] = c
    best = [0] * len(comps)
    for c, members in enumerate(comps):  # sinks first
        weight = sum(1 for m in members if cert.nodes[ids[m]].kind == "lift" and cert.nodes[ids[m]].marked)
        below = [best[comp_of[s]] for m in members for s in succs[m] if comp_of[s] != c]
        best[c] = weight + max(below, default=0)
    return max(best, default=0)


# -- JSON ---------------------------------------------------------------------------


_NODE_FIELDS = {
    "split": {"premises"},
    "lift": {"children", "marked"},
    "id": set(),
    "root": {"rule", "subst", "reversed"},
}


def load_term_table(doc: Mapping[str, Any]) -> dict[str, Term]:
    """Decode a ``terms`` table into one Term per id."""
    if not isinstance(doc, Mapping):
        raise FormatError("terms must be an object")
    ids = list(doc)
    index = {t: i for i, t in enumerate(ids)}
    table: list[Node] = []
    for tid in ids:
        entry = doc[tid]
        if not isinstance(entry, Mapping):
            raise FormatError(f"term {tid} must be an object")
        keys = set(entry)
        if keys == {"var"}:
            table.append((VAR, str(entry["var"]), ()))
        elif keys in ({"sym", "args"}, {"sym"}):
            args = entry.get("args", [])
            try:
                table.append((FUN, str(entry["sym"]), tuple(index[a] for a in args)))
            except KeyError as e:
                raise FormatError(f"term {tid} references unknown term {e}") from None
        else:
            raise FormatError(f"term {tid} has fields {sorted(keys)}")
    return {tid: Term.build(table, index[tid]) for tid in ids}


class TermTable:
    """Accumulates terms for serialization, one entry per graph node."""

    def __init__(self):
        self.entries: dict[str, dict] = {}
        self.by_key: dict[tuple, str] = {}

    def add(self, t: Term) -> str:
        key = t.key()
        if key in self.by_key:
            return self.by_key[key]
        base = len(self.entries)
        names = [f"t{base + i}" for i in range(len(t.nodes))]
        for name, (kind, lab, ch) in zip(names, t.nodes):
            if kind == VAR:
                self.entries[name] = {"var": lab}
            else:
                self.entries[name] = {"sym": lab, "args": [names[c] for c in ch]}
        self.by_key[key] = names[0]
        return names[0]


def cert_to_json(cert: ProofCert) -> dict:
    table = TermTable()
    nodes = {}
    for nid in sorted(cert.nodes, key=natural_key):
        v = cert.nodes[nid]
        d: dict[str, Any] = {"kind": v.kind, "source": table.add(v.source), "target": table.add(v.target)}
        if v.kind == "split":
            d["premises"] = list(v.premises)
        elif v.kind == "lift":
            d["children"] = list(v.children)
            if cert.kind == "ired":
                d["marked"] = v.marked
        elif v.kind == "root":
            d["rule"] = v.rule
            if v.subst is not None:
                d["subst"] = {x: table.add(u) for x, u in sorted(v.subst.items())}
            if v.reversed:
                d["reversed"] = True
        nodes[nid] = d
    return {"kind": cert.kind, "terms": table.entries, "nodes": nodes, "root": cert.root}


def cert_from_json(doc: Mapping[str, Any]) -> ProofCert:
    if not isinstance(doc, Mapping) or set(doc) != {"kind", "terms", "nodes", "root"}:
        raise FormatError("certificate needs exactly the fields kind, terms, nodes, root")
    terms = load_term_table(doc["terms"])

    def term(tid):
        if tid not in terms:
            raise FormatError(f"unknown term id {tid!r}")
        return terms[tid]

    nodes = {}
    if not isinstance(doc["nodes"], Mapping):
        raise FormatError("nodes must be an object")
    for nid, d in doc["nodes"].items():
        if not isinstance(d, Mapping) or d.get("kind") not in NODE_KINDS:
            raise FormatError(f"node {nid} has no valid kind")
        kind = d["kind"]
        extra = set(d) - {"kind", "source", "target"} - _NODE_FIELDS[kind]
        if extra or not {"source", "target"} <= set(d):
            raise FormatError(f"node {nid}: unexpected or missing fields {sorted(extra)}")
        subst = d.get("subst")
        nodes[nid] = ProofNode(
            kind,
            term(d["source"]),
            term(d["target"]),
            premises=tuple(d.get("premises", ())),
            children=tuple(d.get("children", ())),
            marked=bool(d.get("marked", False)),
            rule=d.get("rule"),
            subst=None if subst is None else {x: term(u) for x, u in subst.items()},
            reversed=bool(d.get("reversed", False)),
        )
        if kind == "root" and not isinstance(d.get("rule"), int):
            raise FormatError(f"node {nid}: root needs an integer rule index")
    return ProofCert(doc["kind"], nodes, doc["root"])
