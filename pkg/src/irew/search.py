"""Bounded goal-directed search for certificates.

A goal asks for a split proving ``s R t``. It is closed by a back-edge to an
in-progress ancestor with the same endpoints (for ired only when no marked
lift lies in between), or expanded into a segment: up to ``max_segment`` root
steps joined by lift bridges and followed by a final lift, id or nothing.
Iterative deepening on goal nesting keeps the search fair; the goal and term
counters are global, so larger budgets replay smaller runs before going on.
"""

from __future__ import annotations

from collections.abc import Iterator
from dataclasses import dataclass, field, replace

from .proofs import CertBuilder, ProofCert, ProofNode, check_valid, embed_ieq
from .terms import FUN, VAR, Term, substitute
from .trs import Trs


@dataclass(frozen=True)
class SearchBudget:
    max_goals: int = 2000
    max_segment: int = 4
    max_new_terms: int = 5000

    def __post_init__(self):
        for name in ("max_goals", "max_segment", "max_new_terms"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")


@dataclass(frozen=True)
class Exhausted:
    """No certificate within the budget; never a disproof."""

    reason: str
    goals: int
    terms: int
    depth: int

    def __bool__(self):
        return False

    def __str__(self):
        return f"exhausted ({self.reason}): {self.goals} goals, {self.terms} terms, depth {self.depth}"


# -- plans: proofs under construction ------------------------------------------------


@dataclass
class SplitPlan:
    gid: int
    source: Term
    target: Term
    premises: list = field(default_factory=list)


# premise plans: ("root", src, tgt, rule, sigma, reversed) | ("lift", src, tgt, children, marked)
#                | ("id", t) | ("identity_lift", t)
# child plans:   SplitPlan | ("ref", gid, mirrored) | ("identity", t)


class _OutOfBudget(Exception):
    def __init__(self, reason: str):
        self.reason = reason


@dataclass
class _Frame:
    key: tuple
    gid: int
    marks: int
    source: Term
    target: Term


def partial_match(pattern: Term, u: Term) -> dict[str, Term] | None:
    """Bind pattern variables to the subterms of u at their positions.

    Symbols of u below the root may differ from the pattern's; the root must
    agree. None when a variable position is missing in u or when non-linear
    occurrences get different subterms.
    """
    kind, lab, ch = pattern.root
    if kind == VAR:
        return {lab: u}
    uk, ul, uch = u.root
    if uk != FUN or ul != lab or len(uch) != len(ch):
        return None
    sigma: dict[str, Term] = {}
    stack = [(0, 0)]
    while stack:
        pn, un = stack.pop()
        kind, lab, ch = pattern.nodes[pn]
        if kind == VAR:
            if un is None:
                return None
            val = u.at_node(un)
            if lab in sigma and sigma[lab] != val:
                return None
            sigma[lab] = val
            continue
        uch = u.nodes[un][2] if un is not None else ()
        for k, c in enumerate(ch):
            stack.append((c, uch[k] if k < len(uch) else None))
    return sigma


class _Search:
    def __init__(self, trs: Trs, kind: str, budget: SearchBudget):
        self.trs = trs
        self.kind = kind
        self.budget = budget
        self.goals = 0
        self.terms: set[tuple] = set()
        self.next_gid = 0
        self.closed: dict[tuple, SplitPlan] = {}
        self.limit = 0
        self.cut = False
        self.directions = (False, True) if kind == "ieq" else (False,)

    # bookkeeping

    def note_term(self, t: Term) -> None:
        self.terms.add(t.key())
        if len(self.terms) > self.budget.max_new_terms:
            raise _OutOfBudget("max_new_terms")

    def goal_key(self, s: Term, t: Term) -> tuple:
        return (s.key(), t.key())

    # goals

    def solve(self, s: Term, t: Term, stack: list[_Frame], marks: int):
        """A child plan for ``s R t`` and the open ancestor ids it relies on, or None."""
        key = self.goal_key(s, t)
        if s == t:
            return ("identity", s), frozenset()
        for fr in reversed(stack):
            if fr.key == key and (self.kind != "ired" or fr.marks == marks):
                return ("ref", fr.gid, False), frozenset({fr.gid})
        if self.kind == "ieq":
            mirror = (key[1], key[0])
            for fr in reversed(stack):
                if fr.key == mirror:
                    return ("ref", fr.gid, True), frozenset({fr.gid})
        if key in self.closed:
            return self.closed[key], frozenset()
        if len(stack) >= self.limit:
            self.cut = True
            return None
        self.goals += 1
        if self.goals > self.budget.max_goals:
            raise _OutOfBudget("max_goals")
        gid = self.next_gid
        self.next_gid += 1
        frame = _Frame(key, gid, marks, s, t)
        stack.append(frame)
        try:
            for premises, hyps in self.expansions(s, t, stack, marks):
                plan = SplitPlan(gid, s, t, premises)
                hyps = hyps - {gid}
                if not hyps:
                    self.closed[key] = plan
                return plan, hyps
        finally:
            stack.pop()
        return None

    def expansions(self, s: Term, t: Term, stack, marks) -> Iterator[tuple[list, frozenset]]:
        for k in range(self.budget.max_segment + 1):
            for items in self.segments(s, t, k):
                got = self.discharge(items, t, stack, marks, k)
                if got is not None:
                    yield got

    # segments

    def segments(self, u: Term, t: Term, k: int) -> Iterator[list]:
        """Sequences of k root steps from u: bridge and root items, last item the end term."""
        if k == 0:
            yield [("end", u)]
            return
        last = k == 1
        seen = set()
        for rule_index, rule in enumerate(self.trs.rules):
            for rev in self.directions:
                frm, to = (rule.rhs, rule.lhs) if rev else (rule.lhs, rule.rhs)
                if not to.variables() <= frm.variables():
                    continue
                left = partial_match(frm, u)
                choices = [left] if left is not None else []
                if last:
                    right = partial_match(to, t)
                    if right is not None:
                        missing = frm.variables() - set(right)
                        if not missing:
                            choices.append(right)
                        elif left is not None and missing <= set(left):
                            choices.append({**{x: left[x] for x in missing}, **right})
                for sigma in choices:
                    sigma = {x: sigma[x] for x in frm.variables()}
                    src, tgt = substitute(frm, sigma), substitute(to, sigma)
                    if src.is_var or src.head != u.head or src.arity != u.arity:
                        continue
                    sig_key = (rule_index, rev, tuple(sorted((x, v.key()) for x, v in sigma.items())))
                    if sig_key in seen:
                        continue
                    seen.add(sig_key)
                    self.note_term(src)
                    self.note_term(tgt)
                    step = ("root", src, tgt, rule_index, sigma, rev)
                    for rest in self.segments(tgt, t, k - 1):
                        yield [("bridge", u, src), step] + rest

    def discharge(self, items: list, t: Term, stack, marks, k: int):
        """Turn a segment into premises by solving its bridges and final relation."""
        premises: list = []
        hyps: frozenset = frozenset()
        for item in items:
            if item[0] == "root":
                premises.append(item)
                continue
            if item[0] == "bridge":
                _, u, v = item
                if u == v:
                    continue
                got = self.bridge(u, v, stack, marks, marked=self.kind == "ired")
            else:
                u = item[1]
                if u == t:
                    if k == 0 or self.kind == "ired":
                        premises.append(("id", u) if u.is_var or k == 0 else ("identity_lift", u))
                    continue
                got = self.bridge(u, t, stack, marks, marked=False)
            if got is None:
                return None
            more, h = got
            premises.extend(more)
            hyps |= h
        return premises, hyps

    def bridge(self, u: Term, v: Term, stack, marks, marked: bool):
        """Lift premises from u to v: one lift, or for ieq a detour through an ancestor."""
        if u.is_var or v.is_var or u.head != v.head or u.arity != v.arity:
            return None
        got = self.lift(u, v, stack, marks + marked, marked)
        if got is not None:
            lift, hyps = got
            return [lift], hyps
        if self.kind == "ieq":
            return self.detour(u, v, stack, marks)
        return None

    def lift(self, u: Term, v: Term, stack, child_marks: int, marked: bool, fixed: dict | None = None):
        children = []
        hyps: frozenset = frozenset()
        for i, (a, b) in enumerate(zip(u.args, v.args)):
            if fixed and i in fixed:
                children.append(fixed[i])
                continue
            got = self.solve(a, b, stack, child_marks)
            if got is None:
                return None
            children.append(got[0])
            hyps |= got[1]
        return ("lift", u, v, children, marked), hyps

    def detour(self, u: Term, v: Term, stack, marks):
        """u ↓ u[i:=s] ↓ v[i:=t] ↓ v where (s, t) or (t, s) is an open ancestor goal."""
        for i in range(u.arity):
            for fr in reversed(stack):
                for mirrored in (False, True):
                    s, t = (fr.target, fr.source) if mirrored else (fr.source, fr.target)
                    mid_u = _replace_arg(u, i, s)
                    mid_v = _replace_arg(v, i, t)
                    premises, hyps = [], frozenset({fr.gid})
                    ok = True
                    if mid_u != u:
                        got = self.lift(u, mid_u, stack, marks, False, fixed=_identities(u, i))
                        ok = got is not None
                        if ok:
                            premises.append(got[0])
                            hyps |= got[1]
                    if ok:
                        got = self.lift(mid_u, mid_v, stack, marks, False, fixed={i: ("ref", fr.gid, mirrored)})
                        ok = got is not None
                        if ok:
                            premises.append(got[0])
                            hyps |= got[1]
                    if ok and mid_v != v:
                        got = self.lift(mid_v, v, stack, marks, False, fixed=_identities(v, i))
                        ok = got is not None
                        if ok:
                            premises.append(got[0])
                            hyps |= got[1]
                    if ok:
                        return premises, hyps
        return None

    # driver

    def run(self, s: Term, t: Term):
        depth = 0
        try:
            while True:
                depth += 1
                self.limit = depth
                self.cut = False
                got = self.solve_root(s, t)
                if got is not None:
                    return got, depth
                if not self.cut:
                    return Exhausted("search space exhausted", self.goals, len(self.terms), depth), depth
        except _OutOfBudget as e:
            return Exhausted(e.reason, self.goals, len(self.terms), depth), depth

    def solve_root(self, s: Term, t: Term):
        # The root must be a split even when the endpoints coincide.
        self.note_term(s)
        self.note_term(t)
        if s == t:
            return SplitPlan(-1, s, t, [("id", s)])
        got = self.solve(s, t, [], 0)
        return None if got is None else got[0]


def _replace_arg(u: Term, i: int, a: Term) -> Term:
    args = list(u.args)
    args[i] = a
    return Term.fun(u.head, *args)


def _identities(u: Term, i: int) -> dict:
    return {j: ("identity", a) for j, a in enumerate(u.args) if j != i}


# -- materialization -------------------------------------------------------------------


class _Emitter:
    def __init__(self, kind: str, trs: Trs):
        self.b = CertBuilder(kind, trs)
        self.split_ids: dict[int, str] = {}
        self.mirror_of: dict[str, str] = {}
        self.pending_mirrors: list[str] = []

    def split(self, plan: SplitPlan) -> str:
        nid = self.b.reserve()
        if plan.gid >= 0:
            self.split_ids[plan.gid] = nid
        premises = [self.premise(p) for p in plan.premises]
        self.b.split(plan.source, plan.target, premises, nid=nid)
        return nid

    def premise(self, p) -> str:
        tag = p[0]
        if tag == "root":
            _, src, tgt, rule, sigma, rev = p
            return self.b.root(src, tgt, rule, sigma, reversed=rev)
        if tag == "lift":
            _, src, tgt, children, marked = p
            return self.b.lift(src, tgt, [self.child(c) for c in children], marked=marked)
        if tag == "id":
            return self.b.ident(p[1])
        return self.b.identity_lift(p[1])

    def child(self, c) -> str:
        if isinstance(c, SplitPlan):
            return self.split(c)
        if c[0] == "identity":
            return self.b.identity_split(c[1])
        _, gid, mirrored = c
        nid = self.split_ids[gid]
        return self.mirror(nid) if mirrored else nid

    def mirror(self, nid: str) -> str:
        """Id of the mirror image of ``nid``; built once the graph is complete."""
        if nid not in self.mirror_of:
            mid = self.b.reserve()
            self.mirror_of[nid] = mid
            self.mirror_of[mid] = nid
            self.pending_mirrors.append(nid)
        return self.mirror_of[nid]

    def finish_mirrors(self) -> None:
        while self.pending_mirrors:
            nid = self.pending_mirrors.pop()
            node = self.b.nodes[nid]
            mid = self.mirror_of[nid]
            if node.kind == "split":
                premises = tuple(self.mirror(p) for p in reversed(node.premises))
                self.b.nodes[mid] = ProofNode("split", node.target, node.source, premises)
            elif node.kind == "lift":
                kids = tuple(self.mirror(c) for c in node.children)
                self.b.nodes[mid] = ProofNode("lift", node.target, node.source, children=kids)
            elif node.kind == "root":
                self.b.nodes[mid] = ProofNode(
                    "root", node.target, node.source, rule=node.rule, subst=node.subst, reversed=not node.reversed
                )
            else:
                self.b.nodes[mid] = node


def search_proof(
    s: Term, t: Term, kind: str, trs: Trs, budget: SearchBudget | None = None
) -> ProofCert | Exhausted:
    """A certificate for ``s R t`` found within the budget, or Exhausted.

    For ieq a forward-only (ibi) search runs first, with its own budget; its
    certificates embed into ieq and it avoids the branching on step
    direction. The bidirectional search runs only when it fails.
    """
    if kind not in ("ired", "ibi", "ieq"):
        raise ValueError(f"unknown relation kind {kind!r}")
    budget = budget or SearchBudget()
    if kind != "ieq":
        return _search_kind(s, t, kind, trs, budget)
    forward = _search_kind(s, t, "ibi", trs, budget)
    if not isinstance(forward, Exhausted):
        cert = embed_ieq(forward)
        check_valid(cert, trs)
        return cert
    full = _search_kind(s, t, "ieq", trs, budget)
    if isinstance(full, Exhausted):
        return replace(full, goals=full.goals + forward.goals, terms=max(full.terms, forward.terms))
    return full


def _search_kind(s: Term, t: Term, kind: str, trs: Trs, budget: SearchBudget) -> ProofCert | Exhausted:
    search = _Search(trs, kind, budget)
    result, _depth = search.run(s, t)
    if isinstance(result, Exhausted):
        return result
    em = _Emitter(kind, trs)
    root = em.split(result)
    em.finish_mirrors()
    cert = em.b.build(root)
    verdict = check_valid(cert, trs)
    assert verdict, f"search produced an invalid certificate: {verdict}"
    return cert
