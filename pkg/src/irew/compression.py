"""Compression of ired certificates to length-at-most-omega form.

An ored node proves ``source ->≤ω target`` as a finite prefix from the source
followed by either nothing (the prefix ends at the target) or a lift whose
children relate the arguments. Compression builds ored nodes lazily and
hash-conses them by the operation that produced them, so regular certificates
yield regular ored graphs.
"""

from __future__ import annotations

import os
import sys
from collections import deque
from collections.abc import Callable, Hashable, Iterator, Mapping
from dataclasses import dataclass, field
from typing import Any

from . import _graph
from .errors import FormatError, NoMatch, NotLeftLinear, NotValidated, ResourceExceeded, WrongKind
from .proofs import ProofCert, TermTable, Verdict, load_term_table, natural_key, require_validated
from .sequences import step_from_json, step_to_json
from .terms import VAR, Term, format_term, substitute
from .trs import FiniteReduction, Step, Trs, apply_step, is_left_linear, match_pattern, replay_terms

DEFAULT_MAX_NODES = 10**6

sys.setrecursionlimit(max(sys.getrecursionlimit(), 20000))


@dataclass(frozen=True)
class OredNode:
    source: Term
    target: Term
    prefix: tuple[Step, ...] = ()
    lift: tuple[str, tuple[str, ...]] | None = None  # (head, child ids)


@dataclass
class OredCert:
    nodes: dict[str, OredNode]
    root: str
    validated: bool = field(default=False, compare=False, repr=False)

    def __post_init__(self):
        if self.root not in self.nodes:
            raise FormatError(f"root {self.root!r} is not a node")
        for nid, node in self.nodes.items():
            for c in node.lift[1] if node.lift else ():
                if c not in self.nodes:
                    raise FormatError(f"node {nid} references unknown node {c}")

    @property
    def source(self) -> Term:
        return self.nodes[self.root].source

    @property
    def target(self) -> Term:
        return self.nodes[self.root].target

    def __len__(self):
        return len(self.nodes)


def max_nodes_from_env() -> int:
    raw = os.environ.get("IREW_MAX_NODES")
    if raw is None:
        return DEFAULT_MAX_NODES
    try:
        value = int(raw)
    except ValueError:
        raise FormatError(f"IREW_MAX_NODES must be an integer, got {raw!r}") from None
    if value <= 0:
        raise FormatError("IREW_MAX_NODES must be positive")
    return value


# -- validation ---------------------------------------------------------------------


def _check_node(node: OredNode, cert: OredCert, trs: Trs) -> str | None:
    try:
        mid = replay_terms(FiniteReduction(node.source, node.prefix), trs)[-1]
    except Exception as e:  # ReplayError carries the failing index
        return f"prefix does not replay: {e}"
    if node.lift is None:
        return None if mid == node.target else "prefix end is not bisimilar to the target"
    head, children = node.lift
    for t, what in ((mid, "prefix end"), (node.target, "target")):
        if t.is_var or t.head != head or t.arity != len(children):
            return f"{what} is not headed by {head}/{len(children)}"
    for c, m, t in zip(children, mid.args, node.target.args):
        child = cert.nodes[c]
        if child.source != m or child.target != t:
            return f"child {c} does not relate the matching arguments"
    return None


def validate_ored(cert: OredCert, trs: Trs) -> Verdict:
    """Check prefix replay, chaining and head/child agreement of every node."""
    bad = []
    for nid, node in cert.nodes.items():
        msg = _check_node(node, cert, trs)
        if msg is not None:
            bad.append((nid, msg))
    if bad:
        nid, msg = min(bad, key=lambda v: natural_key(v[0]))
        return Verdict(False, nid, "ored", msg)
    cert.validated = True
    return Verdict(True)


def _require_valid(cert: OredCert) -> None:
    if not cert.validated:
        raise NotValidated("run validate_ored on the ored certificate first")


def ored_equal(a: OredCert, b: OredCert) -> bool:
    """Bisimilarity of rooted ored graphs (labels: endpoints, prefix, lift head)."""
    ids = [("a", n) for n in a.nodes] + [("b", n) for n in b.nodes]
    index = {x: i for i, x in enumerate(ids)}
    labels, succs = [], []
    for side, n in ids:
        node = (a if side == "a" else b).nodes[n]
        head = None if node.lift is None else node.lift[0]
        labels.append((node.source.key(), node.target.key(), tuple((s.pos, s.rule) for s in node.prefix), head))
        succs.append([index[(side, c)] for c in (node.lift[1] if node.lift else ())])
    block = _graph.refine(labels, succs)
    return block[index[("a", a.root)]] == block[index[("b", b.root)]]


# -- lazy construction ----------------------------------------------------------------

Content = tuple[tuple[Step, ...], Term, "tuple[str, tuple[int, ...]] | None"]


class _Store:
    """Hash-consed lazy ored nodes; content is computed on first demand."""

    def __init__(self, trs: Trs, cap: int):
        self.trs = trs
        self.cap = cap
        self.memo: dict[Hashable, int] = {}
        self.src: list[Term] = []
        self.tgt: list[Term] = []
        self.thunks: list[Callable[[], Content] | None] = []
        self.content: list[Content | None] = []
        self.idents: set[int] = set()
        self.forcing: set[int] = set()

    def new(self, key: Hashable, src: Term, tgt: Term, thunk: Callable[[], Content]) -> int:
        if key in self.memo:
            return self.memo[key]
        if len(self.src) >= self.cap:
            raise ResourceExceeded(f"compression exceeded {self.cap} ored nodes")
        i = len(self.src)
        self.memo[key] = i
        self.src.append(src)
        self.tgt.append(tgt)
        self.thunks.append(thunk)
        self.content.append(None)
        return i

    def force(self, i: int) -> Content:
        c = self.content[i]
        if c is not None:
            return c
        if i in self.forcing:
            raise ResourceExceeded("compression reached an unguarded cycle")
        self.forcing.add(i)
        try:
            c = self.thunks[i]()
        finally:
            self.forcing.discard(i)
        self.content[i] = c
        self.thunks[i] = None
        return c

    # building blocks

    def ident(self, u: Term) -> int:
        i = self.new(("id", u.key()), u, u, lambda: ((), u, None))
        self.idents.add(i)
        return i

    def lifted(self, i: int) -> tuple[tuple[Step, ...], Term, str, tuple[int, ...]]:
        """Content with an explicit lift; a lift-free node gets identity children."""
        prefix, mid, lift = self.force(i)
        if lift is not None:
            return prefix, mid, lift[0], lift[1]
        if mid.is_var:
            raise NoMatch("a variable has no arguments to lift")
        return prefix, mid, mid.head, tuple(self.ident(a) for a in mid.args)

    def match(self, i: int, pattern: Term, pn: int = 0) -> tuple[list[Step], dict[str, int]]:
        """Split node i at a finite linear pattern: a finite reduction to an
        instance of the pattern and one residual node per variable."""
        kind, lab, ch = pattern.nodes[pn]
        if kind == VAR:
            return [], {lab: i}
        prefix, _mid, head, kids = self.lifted(i)
        if head != lab or len(kids) != len(ch):
            raise NoMatch(f"expected {lab}/{len(ch)}, found {head}/{len(kids)}")
        steps = list(prefix)
        residuals: dict[str, int] = {}
        for k, (kid, pc) in enumerate(zip(kids, ch), start=1):
            sub_steps, sub_res = self.match(kid, pattern, pc)
            steps.extend(st.shifted((k,)) for st in sub_steps)
            residuals.update(sub_res)
        return steps, residuals

    def rstep(self, i: int, rule_index: int) -> int:
        rule = self.trs.rules[rule_index]
        sigma = match_pattern(self.tgt[i], rule.lhs)
        tgt = substitute(rule.rhs, sigma)

        def thunk() -> Content:
            steps, res = self.match(i, rule.lhs)
            tau = {x: self.src[r] for x, r in res.items()}
            steps.append(Step((), rule_index))
            rhs = rule.rhs
            if rhs.is_var:
                pre, mid, lift = self.force(res[rhs.root[1]])
                return tuple(steps) + pre, mid, lift
            return tuple(steps), substitute(rhs, tau), self._rhs_lift(i, rule_index, 0, tau, sigma, res)

        return self.new(("rstep", i, rule_index), self.src[i], tgt, thunk)

    def _rhs_lift(self, i, rule_index, rn, tau, sigma, res) -> tuple[str, tuple[int, ...]]:
        rhs = self.trs.rules[rule_index].rhs
        _, head, ch = rhs.nodes[rn]
        return head, tuple(self._rhs_node(i, rule_index, c, tau, sigma, res) for c in ch)

    def _rhs_node(self, i, rule_index, rn, tau, sigma, res) -> int:
        rhs = self.trs.rules[rule_index].rhs
        kind, lab, _ = rhs.nodes[rn]
        if kind == VAR:
            return res[lab]
        sub = rhs.at_node(rn)
        if not sub.variables():
            return self.ident(sub)
        src, tgt = substitute(sub, tau), substitute(sub, sigma)
        return self.new(
            ("rhs", i, rule_index, rn),
            src,
            tgt,
            lambda: ((), src, self._rhs_lift(i, rule_index, rn, tau, sigma, res)),
        )

    def mred1(self, i: int, st: Step) -> int:
        if not st.pos:
            return self.rstep(i, st.rule)
        tgt = apply_step(self.tgt[i], Step(st.pos, st.rule), self.trs)

        def thunk() -> Content:
            prefix, mid, lift = self.force(i)
            if lift is None:
                return prefix + (st,), apply_step(mid, st, self.trs), None
            head, kids = lift
            k = st.pos[0] - 1
            kids = kids[:k] + (self.mred1(kids[k], Step(st.pos[1:], st.rule)),) + kids[k + 1 :]
            return prefix, mid, (head, kids)

        return self.new(("mred", i, st.pos, st.rule), self.src[i], tgt, thunk)

    def compose(self, i: int, j: int) -> int:
        if i in self.idents:
            return j
        if j in self.idents:
            return i

        def thunk() -> Content:
            pre_j, _mid_j, lift_j = self.force(j)
            cur = i
            for st in pre_j:
                cur = self.mred1(cur, Step(st.pos, st.rule))
            if lift_j is None:
                return self.force(cur)
            prefix, mid, head, kids = self.lifted(cur)
            return prefix, mid, (head, tuple(self.compose(d, e) for d, e in zip(kids, lift_j[1])))

        return self.new(("comp", i, j), self.src[i], self.tgt[j], thunk)


    def materialize(self, root: int) -> OredCert:
        order = [root]
        seen = {root}
        queue = deque([root])
        while queue:
            i = queue.popleft()
            _, _, lift = self.force(i)
            for c in lift[1] if lift else ():
                if c not in seen:
                    seen.add(c)
                    order.append(c)
                    queue.append(c)
        return _quotient(self, order, root)


class _Compressor(_Store):
    def __init__(self, cert: ProofCert, trs: Trs, cap: int):
        super().__init__(trs, cap)
        self.cert = cert

    def lift_node(self, nid: str) -> int:
        """A marked lift as an ored node with an empty prefix."""
        node = self.cert.nodes[nid]

        def thunk() -> Content:
            kids = tuple(self.pending(self.ident(self.cert.nodes[c].source), c) for c in node.children)
            return (), node.source, (node.source.head, kids)

        return self.new(("lift", nid), node.source, node.target, thunk)

    def pending(self, i: int, nid: str) -> int:
        """Node i followed by the split ``nid`` of the certificate."""
        node = self.cert.nodes[nid]

        def thunk() -> Content:
            cur = i
            premises = node.premises
            for p in premises[:-1]:
                pn = self.cert.nodes[p]
                if pn.kind == "root":
                    cur = self.rstep(cur, pn.rule)
                elif pn.kind == "lift":
                    cur = self.compose(cur, self.lift_node(p))
            if not premises or self.cert.nodes[premises[-1]].kind == "id":
                return self.force(cur)
            last = self.cert.nodes[premises[-1]]
            prefix, mid, head, kids = self.lifted(cur)
            return prefix, mid, (head, tuple(self.pending(d, z) for d, z in zip(kids, last.children)))

        return self.new(("pend", i, nid), self.src[i], node.target, thunk)

def _quotient(store: _Store, order: list[int], root: int) -> OredCert:
    """Merge bisimilar nodes and name the survivors o0, o1, ... in BFS order."""
    index = {i: k for k, i in enumerate(order)}
    labels, succs = [], []
    for i in order:
        prefix, _, lift = store.content[i]
        labels.append(
            (
                store.src[i].key(),
                store.tgt[i].key(),
                tuple((s.pos, s.rule) for s in prefix),
                None if lift is None else lift[0],
            )
        )
        succs.append([index[c] for c in lift[1]] if lift else [])
    block = _graph.refine(labels, succs)
    names: dict[int, str] = {}
    for k in range(len(order)):
        names.setdefault(block[k], f"o{len(names)}")
    nodes: dict[str, OredNode] = {}
    for k, i in enumerate(order):
        name = names[block[k]]
        if name in nodes:
            continue
        prefix, _, lift = store.content[i]
        out_lift = None if lift is None else (lift[0], tuple(names[block[index[c]]] for c in lift[1]))
        steps = tuple(Step(s.pos, s.rule) for s in prefix)
        nodes[name] = OredNode(store.src[i], store.tgt[i], steps, out_lift)
    return OredCert(nodes, names[block[index[root]]])


def compress(cert: ProofCert, trs: Trs, max_nodes: int | None = None) -> OredCert:
    """An ored certificate with the same endpoints as a valid ired certificate."""
    if not is_left_linear(trs):
        raise NotLeftLinear("compression needs a left-linear system")
    require_validated(cert)
    if cert.kind != "ired":
        raise WrongKind(f"compression expects an ired certificate, got {cert.kind}")
    cap = max_nodes if max_nodes is not None else max_nodes_from_env()
    comp = _Compressor(cert, trs, cap)
    root = comp.pending(comp.ident(cert.source), cert.root)
    out = comp.materialize(root)
    verdict = validate_ored(out, trs)
    assert verdict, f"compression produced an invalid ored certificate: {verdict}"
    return out


def ored_match_split(
    cert: OredCert, pattern: Term, trs: Trs, node: str | None = None
) -> tuple[FiniteReduction, dict[str, OredCert]]:
    """Finite reduction from the node's source to an instance of a finite linear
    pattern, and one residual ored certificate per pattern variable."""
    _require_valid(cert)
    names = [n for n in pattern.nodes if n[0] == VAR]
    if len({n[1] for n in names}) != len(names) or not pattern.is_finite():
        raise NoMatch("the pattern must be finite and linear")
    store = _Store(trs, max_nodes_from_env())
    loaded = _load(store, cert)
    steps, res = store.match(loaded[cert.root if node is None else node], pattern)
    source = cert.nodes[cert.root if node is None else node].source
    out = {}
    for x, r in res.items():
        sub = store.materialize(r)
        validate_ored(sub, trs)
        out[x] = sub
    return FiniteReduction(source, tuple(Step(s.pos, s.rule) for s in steps)), out


def _load(store: _Store, cert: OredCert) -> dict[str, int]:
    """Register a materialized certificate's nodes as already-forced store nodes."""
    ids = {}
    for nid, node in cert.nodes.items():
        ids[nid] = store.new(("loaded", nid), node.source, node.target, lambda: None)
    for nid, node in cert.nodes.items():
        mid = replay_terms(FiniteReduction(node.source, node.prefix), store.trs)[-1]
        lift = None if node.lift is None else (node.lift[0], tuple(ids[c] for c in node.lift[1]))
        store.content[ids[nid]] = (node.prefix, mid, lift)
    return ids


# -- linearization ------------------------------------------------------------------


def _stepful(cert: OredCert) -> set[str]:
    """Nodes from which some prefix step is reachable."""
    live = {n for n, v in cert.nodes.items() if v.prefix}
    changed = True
    while changed:
        changed = False
        for n, v in cert.nodes.items():
            if n not in live and v.lift and any(c in live for c in v.lift[1]):
                live.add(n)
                changed = True
    return live


def dovetail(cert: OredCert) -> Iterator[Step]:
    """Level-order dovetailing: each node occurrence emits its prefix, then its
    children are queued behind every occurrence already waiting."""
    _require_valid(cert)
    live = _stepful(cert)
    queue = deque([(cert.root, ())]) if cert.root in live else deque()
    while queue:
        nid, path = queue.popleft()
        node = cert.nodes[nid]
        for st in node.prefix:
            yield st.shifted(path)
        if node.lift:
            for k, c in enumerate(node.lift[1], start=1):
                if c in live:
                    queue.append((c, path + (k,)))


def linearize(cert: OredCert, k: int) -> FiniteReduction:
    """The first ``k`` steps of the dovetailed sequence."""
    steps = []
    for st in dovetail(cert):
        if len(steps) >= k:
            break
        steps.append(st)
    return FiniteReduction(cert.source, tuple(steps))


# -- JSON ---------------------------------------------------------------------------


def ored_to_json(cert: OredCert, trs: Trs | None = None) -> dict:
    reserved = set(trs.signature.symbols) | set(trs.signature.variables) if trs else set()
    table = TermTable()
    nodes = {}
    for nid in sorted(cert.nodes, key=natural_key):
        v = cert.nodes[nid]
        nodes[nid] = {
            "source": table.add(v.source),
            "target": table.add(v.target),
            "prefix": [step_to_json(s, reserved) for s in v.prefix],
            "lift": None if v.lift is None else {"head": v.lift[0], "children": list(v.lift[1])},
        }
    return {"terms": table.entries, "nodes": nodes, "root": cert.root}


def ored_from_json(doc: Mapping[str, Any], trs: Trs) -> OredCert:
    if not isinstance(doc, Mapping) or set(doc) != {"terms", "nodes", "root"}:
        raise FormatError("ored certificate needs exactly the fields terms, nodes, root")
    terms = load_term_table(doc["terms"])
    if not isinstance(doc["nodes"], Mapping):
        raise FormatError("nodes must be an object")
    nodes = {}
    for nid, d in doc["nodes"].items():
        if not isinstance(d, Mapping) or set(d) != {"source", "target", "prefix", "lift"}:
            raise FormatError(f"node {nid}: expected fields source, target, prefix, lift")
        for f in ("source", "target"):
            if d[f] not in terms:
                raise FormatError(f"node {nid}: unknown term id {d[f]!r}")
        if not isinstance(d["prefix"], list):
            raise FormatError(f"node {nid}: prefix must be a list")
        prefix = tuple(step_from_json(s, trs.signature, f"node {nid}") for s in d["prefix"])
        lift = d["lift"]
        if lift is not None:
            if not isinstance(lift, Mapping) or set(lift) != {"head", "children"}:
                raise FormatError(f"node {nid}: lift needs exactly head and children")
            if not isinstance(lift["head"], str) or not isinstance(lift["children"], list):
                raise FormatError(f"node {nid}: malformed lift")
            lift = (lift["head"], tuple(lift["children"]))
        nodes[nid] = OredNode(terms[d["source"]], terms[d["target"]], prefix, lift)
    return OredCert(nodes, doc["root"])


def format_ored(cert: OredCert, trs: Trs | None = None) -> str:
    """One line per node, for human inspection."""
    reserved = set(trs.signature.symbols) | set(trs.signature.variables) if trs else set()
    lines = []
    for nid in sorted(cert.nodes, key=natural_key):
        v = cert.nodes[nid]
        steps = " ".join(f"{list(s.pos)}:{s.rule}" for s in v.prefix) or "-"
        lift = "" if v.lift is None else f" lift {v.lift[0]}({', '.join(v.lift[1])})"
        lines.append(f"{nid}: {format_term(v.source, reserved)} => {format_term(v.target, reserved)} [{steps}]{lift}")
    return "\n".join(lines)
