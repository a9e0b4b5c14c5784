"""Finite rewrite sequences: projections, permutation equivalence, correspondence
with certificates and the canonical tree of a sequence."""

from __future__ import annotations

import itertools
from collections import Counter
from collections.abc import Iterable, Iterator, Mapping, Sequence
from dataclasses import dataclass
from functools import lru_cache
from typing import Any

from .errors import FormatError, InvalidWitness, WrongKind
from .proofs import CertBuilder, ProofCert, cert_equal, check_valid, require_validated
from .semantics import schedule_of
from .terms import Position, Signature, Term, format_term, parallel, parse_term, substitute
from .trs import (
    FiniteReduction,
    Step,
    Trs,
    apply_step,
    redexes_to_depth,
    replay_terms,
    step_substitution,
)


@dataclass(frozen=True, order=True)
class RuleApplication:
    rule: int
    pos: Position

    def __post_init__(self):
        object.__setattr__(self, "pos", tuple(self.pos))


@dataclass(frozen=True)
class PermutationWitness:
    """``mapping[i]`` is the index in T of step i of S."""

    mapping: tuple[int, ...]

    def inverse(self) -> tuple[int, ...]:
        inv = [0] * len(self.mapping)
        for i, j in enumerate(self.mapping):
            inv[j] = i
        return tuple(inv)


@dataclass(frozen=True)
class ProjectionResult:
    applications: tuple[RuleApplication, ...]
    embedding: tuple[int, ...]


def rulapp(red: FiniteReduction) -> list[RuleApplication]:
    return [RuleApplication(s.rule, s.pos) for s in red.steps]


def project(red: FiniteReduction, apps: Iterable[RuleApplication], trs: Trs) -> ProjectionResult:
    """Subsequence of the rule applications of ``red`` that lie in ``apps``."""
    replay_terms(red, trs)
    wanted = set(apps)
    picked = [(i, a) for i, a in enumerate(rulapp(red)) if a in wanted]
    return ProjectionResult(tuple(a for _, a in picked), tuple(i for i, _ in picked))


# -- permutation equivalence -----------------------------------------------------


def _witness_ok(s_apps: Sequence[RuleApplication], t_apps: Sequence[RuleApplication], f: Sequence[int]) -> bool:
    if len(f) != len(s_apps) or sorted(f) != list(range(len(t_apps))):
        return False
    if any(s_apps[i] != t_apps[f[i]] for i in range(len(f))):
        return False
    for i, k in itertools.combinations(range(len(f)), 2):
        if f[i] > f[k] and not parallel(s_apps[i].pos, s_apps[k].pos):
            return False
    return True


def witnesses(s: FiniteReduction, t: FiniteReduction, trs: Trs) -> Iterator[PermutationWitness]:
    """Every bijection with equal applications under f whose swapped pairs are parallel."""
    replay_terms(s, trs)
    replay_terms(t, trs)
    if s.source != t.source or len(s) != len(t):
        return
    sa, ta = rulapp(s), rulapp(t)
    if Counter(sa) != Counter(ta):
        return
    n = len(sa)
    f: list[int] = []
    used = [False] * n

    def extend() -> Iterator[PermutationWitness]:
        i = len(f)
        if i == n:
            yield PermutationWitness(tuple(f))
            return
        for j in range(n):
            if used[j] or ta[j] != sa[i]:
                continue
            if any(f[k] > j and not parallel(sa[k].pos, sa[i].pos) for k in range(i)):
                continue
            used[j] = True
            f.append(j)
            yield from extend()
            f.pop()
            used[j] = False

    yield from extend()


def permutation_equiv_bruteforce(s: FiniteReduction, t: FiniteReduction, trs: Trs) -> PermutationWitness | None:
    return next(witnesses(s, t, trs), None)


def permute_prefix(
    s: FiniteReduction, t: FiniteReduction, w: PermutationWitness, kappa: int
) -> FiniteReduction:
    """Steps of T whose partner in S lies before index ``kappa``, in T's order."""
    if not _witness_ok(rulapp(s), rulapp(t), w.mapping) or s.source != t.source:
        raise InvalidWitness("mapping is not a permutation witness for these sequences")
    if not 0 <= kappa <= len(s):
        raise InvalidWitness(f"index {kappa} outside 0..{len(s)}")
    inv = w.inverse()
    return FiniteReduction(t.source, tuple(t.steps[j] for j in range(len(t)) if inv[j] < kappa))


# -- canonical trees ----------------------------------------------------------------


def canonical_tree_of(red: FiniteReduction, trs: Trs) -> ProofCert:
    """The canonical ired certificate of a finite sequence.

    Root steps split the sequence; the steps between them form (marked) lifts
    whose children are built recursively from the argument subsequences.
    """
    replay_terms(red, trs)
    b = CertBuilder("ired", trs, prefix="t")

    def build(src: Term, steps: tuple[Step, ...]) -> str:
        if not steps:
            return b.identity_split(src)
        premises = []
        cur = src
        segment: list[Step] = []
        for st in steps + (None,):
            if st is not None and st.pos:
                segment.append(st)
                continue
            final = st is None
            if cur.is_var:
                premises.append(b.ident(cur))
            else:
                nid, cur = lift(cur, tuple(segment), marked=not final)
                premises.append(nid)
            segment = []
            if not final:
                sigma = step_substitution(cur, st, trs)
                rule = trs.rules[st.rule]
                nxt = substitute(rule.rhs, sigma)
                premises.append(b.root(cur, nxt, st.rule, sigma))
                cur = nxt
        return b.split(src, cur, premises)

    def lift(src: Term, steps: tuple[Step, ...], marked: bool) -> tuple[str, Term]:
        children = []
        targets = []
        for i, arg in enumerate(src.args, start=1):
            sub = tuple(Step(st.pos[1:], st.rule, st.subst) for st in steps if st.pos[0] == i)
            child = build(arg, sub)
            children.append(child)
            targets.append(b.nodes[child].target)
        tgt = Term.fun(src.head, *targets)
        return b.lift(src, tgt, children, marked=marked), tgt

    cert = b.build(build(red.source, red.steps))
    verdict = check_valid(cert, trs)
    assert verdict, f"canonical tree failed validation: {verdict}"
    return cert


def permutation_equiv(s: FiniteReduction, t: FiniteReduction, trs: Trs) -> bool:
    """Decide equivalence by comparing canonical trees."""
    return s.source == t.source and cert_equal(canonical_tree_of(s, trs), canonical_tree_of(t, trs))


# -- correspondence -----------------------------------------------------------------


def interleavings(children: Sequence[Sequence[Any]]) -> Iterator[tuple[tuple[int, Any], ...]]:
    """All order-preserving merges of the child sequences, as (child, item) pairs."""
    total = sum(len(c) for c in children)
    idx = [0] * len(children)
    out: list[tuple[int, Any]] = []

    def go() -> Iterator[tuple[tuple[int, Any], ...]]:
        if len(out) == total:
            yield tuple(out)
            return
        for c, seq in enumerate(children):
            if idx[c] < len(seq):
                out.append((c, seq[idx[c]]))
                idx[c] += 1
                yield from go()
                idx[c] -= 1
                out.pop()

    yield from go()


def is_interleaving(merged: Sequence[Any], children: Sequence[Sequence[Any]]) -> bool:
    """Whether ``merged`` is an order-preserving merge of ``children`` (memoized DP)."""
    children = [tuple(c) for c in children]
    if len(merged) != sum(len(c) for c in children):
        return False

    @lru_cache(maxsize=None)
    def go(state: tuple[int, ...]) -> bool:
        k = sum(state)
        if k == len(merged):
            return True
        for c, i in enumerate(state):
            if i < len(children[c]) and children[c][i] == merged[k]:
                if go(state[:c] + (i + 1,) + state[c + 1 :]):
                    return True
        return False

    return go(tuple(0 for _ in children))


def corresponds_finite(red: FiniteReduction, cert: ProofCert, trs: Trs) -> bool:
    """Whether the finite sequence decomposes along the certificate.

    Split: concatenation of premise sequences; Root: the single root step;
    Lift: an interleaving of the children's sequences; Id: empty.
    """
    require_validated(cert)
    if cert.kind == "ieq":
        raise WrongKind("equational certificates do not denote rewrite sequences")
    replay_terms(red, trs)
    if red.source != cert.source:
        return False
    sched = schedule_of(cert)

    @lru_cache(maxsize=None)
    def corr(nid: str, apps: tuple[RuleApplication, ...]) -> bool:
        node = cert.nodes[nid]
        if not apps:
            return not sched.has_steps(nid)
        if node.kind == "id":
            return False
        if node.kind == "root":
            return len(apps) == 1 and apps[0] == RuleApplication(node.rule, ())
        if node.kind == "lift":
            if any(not a.pos or a.pos[0] > len(node.children) for a in apps):
                return False
            parts = [
                tuple(RuleApplication(a.rule, a.pos[1:]) for a in apps if a.pos[0] == i)
                for i in range(1, len(node.children) + 1)
            ]
            return all(corr(c, part) for c, part in zip(node.children, parts))
        return split(node.premises, apps)

    @lru_cache(maxsize=None)
    def split(premises: tuple[str, ...], apps: tuple[RuleApplication, ...]) -> bool:
        if not premises:
            return not apps
        head, rest = premises[0], premises[1:]
        return any(corr(head, apps[:cut]) and split(rest, apps[cut:]) for cut in range(len(apps) + 1))

    return corr(cert.root, tuple(rulapp(red)))


# -- enumeration ----------------------------------------------------------------------


def enumerate_sequences(source: Term, trs: Trs, length: int) -> Iterator[FiniteReduction]:
    """Every replayable sequence of exactly ``length`` steps from a finite source."""
    def go(t: Term, steps: tuple[Step, ...]) -> Iterator[FiniteReduction]:
        if len(steps) == length:
            yield FiniteReduction(source, steps)
            return
        for pos, rule in redexes_to_depth(t, trs, len(t)):
            st = Step(pos, rule)
            yield from go(apply_step(t, st, trs), steps + (st,))

    yield from go(source, ())


def enumerate_terms(sig: Signature, max_nodes: int) -> Iterator[Term]:
    """Finite ground terms over ``sig`` with at most ``max_nodes`` nodes."""
    syms = sorted(sig.symbols.items())

    @lru_cache(maxsize=None)
    def exact(n: int) -> tuple[Term, ...]:
        out = []
        for f, k in syms:
            if k == 0:
                if n == 1:
                    out.append(Term.fun(f))
                continue
            for sizes in _compositions(n - 1, k):
                for args in itertools.product(*(exact(m) for m in sizes)):
                    out.append(Term.fun(f, *args))
        return tuple(out)

    for n in range(1, max_nodes + 1):
        yield from exact(n)


def _compositions(total: int, parts: int) -> Iterator[tuple[int, ...]]:
    if parts == 0:
        if total == 0:
            yield ()
        return
    for first in range(1, total - parts + 2):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


# -- JSON ---------------------------------------------------------------------------


def step_to_json(st: Step, reserved: set[str] = frozenset()) -> dict:
    doc: dict[str, Any] = {"pos": list(st.pos), "rule": st.rule}
    if st.subst is not None:
        doc["subst"] = {x: format_term(u, reserved) for x, u in sorted(st.subst.items())}
    return doc


def step_from_json(sd: Any, sig: Signature, where: str = "step") -> Step:
    if not isinstance(sd, Mapping) or not {"pos", "rule"} <= set(sd) <= {"pos", "rule", "subst"}:
        raise FormatError(f"{where}: expected fields pos, rule and optional subst")
    pos, rule = sd["pos"], sd["rule"]
    if not isinstance(pos, list) or not all(isinstance(p, int) and not isinstance(p, bool) for p in pos):
        raise FormatError(f"{where}: pos must be a list of integers")
    if not isinstance(rule, int) or isinstance(rule, bool) or rule < 0:
        raise FormatError(f"{where}: rule must be a non-negative integer")
    if any(p < 1 for p in pos):
        raise FormatError(f"{where}: positions are 1-based")
    subst = None
    if "subst" in sd:
        if not isinstance(sd["subst"], Mapping) or not all(isinstance(v, str) for v in sd["subst"].values()):
            raise FormatError(f"{where}: subst must map variables to term text")
        subst = {x: parse_term(v, sig) for x, v in sd["subst"].items()}
    return Step(tuple(pos), rule, subst)


def _reserved(trs: Trs | None) -> set[str]:
    return set(trs.signature.symbols) | set(trs.signature.variables) if trs else set()


def seq_to_json(red: FiniteReduction, trs: Trs | None = None) -> dict:
    reserved = _reserved(trs)
    return {
        "source": format_term(red.source, reserved),
        "steps": [step_to_json(st, reserved) for st in red.steps],
    }


def seq_from_json(doc: Mapping[str, Any], sig: Signature) -> FiniteReduction:
    if not isinstance(doc, Mapping) or set(doc) != {"source", "steps"}:
        raise FormatError("a sequence needs exactly the fields 'source' and 'steps'")
    if not isinstance(doc["steps"], list):
        raise FormatError("'steps' must be a list")
    if not isinstance(doc["source"], str):
        raise FormatError("'source' must be term text")
    steps = tuple(step_from_json(sd, sig, f"step {i}") for i, sd in enumerate(doc["steps"]))
    return FiniteReduction(parse_term(doc["source"], sig), steps)
