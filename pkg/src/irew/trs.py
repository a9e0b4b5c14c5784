"""Rewrite rules, matching modulo bisimilarity and replayable finite reductions."""

from __future__ import annotations

from collections.abc import Iterator, Mapping, Sequence
from dataclasses import dataclass, field

from .errors import (
    FormatError,
    InvalidPosition,
    NoMatch,
    ReplayError,
    SubstMismatch,
    TermSyntaxError,
)
from .terms import (
    VAR,
    Position,
    Signature,
    Substitution,
    Term,
    format_term,
    node_at,
    parse_with_inference,
    positions,
    replace_at,
    subterm_at,
    substitute,
    tokenize,
)


@dataclass(frozen=True)
class Rule:
    lhs: Term
    rhs: Term
    name: str | None = None

    def __post_init__(self):
        if self.lhs.is_var:
            raise FormatError("rule left-hand side is a variable")
        if not self.lhs.is_finite():
            raise FormatError("rule left-hand side must be finite")
        extra = self.rhs.variables() - self.lhs.variables()
        if extra:
            raise FormatError(f"rhs variables not in lhs: {sorted(extra)}")

    def is_left_linear(self) -> bool:
        names = [n[1] for n in self.lhs.nodes if n[0] == VAR]
        return len(names) == len(set(names))

    def __str__(self):
        return f"{self.lhs} -> {self.rhs}"


@dataclass(frozen=True)
class Trs:
    signature: Signature
    rules: tuple[Rule, ...]

    def __post_init__(self):
        object.__setattr__(self, "rules", tuple(self.rules))

    def rule(self, i: int) -> Rule:
        if not 0 <= i < len(self.rules):
            raise IndexError(f"rule index {i} out of range")
        return self.rules[i]

    def parse(self, text: str) -> Term:
        from .terms import parse_term

        return parse_term(text, self.signature)


@dataclass(frozen=True)
class Step:
    """A rewrite step: position (1-based), rule index, optional substitution."""

    pos: Position
    rule: int
    subst: Mapping[str, Term] | None = field(default=None, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "pos", tuple(self.pos))
        if any(i < 1 for i in self.pos):
            raise InvalidPosition(f"positions are 1-based: {list(self.pos)}")

    def shifted(self, prefix: Position) -> "Step":
        return Step(tuple(prefix) + self.pos, self.rule, self.subst)

    def __repr__(self):
        return f"Step({list(self.pos)}, {self.rule})"


@dataclass(frozen=True)
class FiniteReduction:
    source: Term
    steps: tuple[Step, ...] = ()
    # (trs, terms) of the last successful replay; reductions are immutable
    _replayed: tuple | None = field(default=None, compare=False, repr=False, hash=False)

    def __post_init__(self):
        object.__setattr__(self, "steps", tuple(self.steps))

    def __len__(self):
        return len(self.steps)


# -- matching and steps -----------------------------------------------------------


def match_pattern(t: Term, pattern: Term) -> dict[str, Term]:
    """Substitution sigma with pattern.sigma bisimilar to t; non-linear via bisimilarity."""
    sigma: dict[str, Term] = {}
    bound_node: dict[str, int] = {}
    stack = [(0, 0)]
    while stack:
        pn, tn = stack.pop()
        kind, lab, ch = pattern.nodes[pn]
        if kind == VAR:
            if lab in sigma:
                if bound_node[lab] != tn and sigma[lab] != t.at_node(tn):
                    raise NoMatch(f"non-linear occurrences of {lab} differ")
            else:
                sigma[lab] = t.at_node(tn)
                bound_node[lab] = tn
            continue
        tk, tlab, tch = t.nodes[tn]
        if tk == VAR or tlab != lab or len(tch) != len(ch):
            raise NoMatch(f"symbol clash: {lab} against {tlab}")
        stack.extend(zip(ch, tch))
    return sigma


def step_substitution(t: Term, step: Step, trs: Trs) -> dict[str, Term]:
    """Match the rule of ``step`` at its position, checking any recorded subst."""
    rule = trs.rule(step.rule)
    sigma = match_pattern(subterm_at(t, step.pos), rule.lhs)
    if step.subst is not None:
        if set(step.subst) != set(sigma):
            raise SubstMismatch(f"substitution domain {sorted(step.subst)} != {sorted(sigma)}")
        for x, u in step.subst.items():
            if u != sigma[x]:
                raise SubstMismatch(f"substitution for {x} does not match the redex")
    return sigma


def apply_step(t: Term, step: Step, trs: Trs) -> Term:
    sigma = step_substitution(t, step, trs)
    return replace_at(t, step.pos, substitute(trs.rules[step.rule].rhs, sigma))


def replay_terms(red: FiniteReduction, trs: Trs) -> list[Term]:
    """All terms of the reduction, source first."""
    if red._replayed is not None and red._replayed[0] is trs:
        return list(red._replayed[1])
    out = [red.source]
    for i, step in enumerate(red.steps):
        try:
            out.append(apply_step(out[-1], step, trs))
        except (InvalidPosition, NoMatch, SubstMismatch, IndexError) as e:
            raise ReplayError(i, str(e)) from e
    object.__setattr__(red, "_replayed", (trs, tuple(out)))
    return out


def replay(red: FiniteReduction, trs: Trs) -> Term:
    return replay_terms(red, trs)[-1]


def is_left_linear(trs: Trs) -> bool:
    return all(r.is_left_linear() for r in trs.rules)


def redexes_to_depth(t: Term, trs: Trs, n: int) -> list[tuple[Position, int]]:
    """Redex occurrences at positions of length <= n: lexicographic, then rule order."""
    out = []
    for p in positions(t, n):
        sub = subterm_at(t, p)
        for i, rule in enumerate(trs.rules):
            try:
                match_pattern(sub, rule.lhs)
            except NoMatch:
                continue
            out.append((p, i))
    return out


def root_redexes(t: Term, trs: Trs) -> Iterator[tuple[int, dict[str, Term]]]:
    for i, rule in enumerate(trs.rules):
        try:
            yield i, match_pattern(t, rule.lhs)
        except NoMatch:
            continue


def position_resolves(t: Term, p: Position) -> bool:
    try:
        node_at(t, p)
    except InvalidPosition:
        return False
    return True


# -- TRS files ------------------------------------------------------------------


def parse_trs(text: str) -> Trs:
    """Parse ``(VAR x y) (RULES lhs -> rhs ...)``; arities are inferred from first use."""
    toks = tokenize(text)
    i = 0

    def expect(tok: str) -> None:
        nonlocal i
        if i >= len(toks) or toks[i] != tok:
            found = toks[i] if i < len(toks) else "end of input"
            raise TermSyntaxError(f"expected {tok!r}, found {found!r}")
        i += 1

    expect("(")
    expect("VAR")
    variables = []
    while i < len(toks) and toks[i] != ")":
        variables.append(toks[i])
        i += 1
    expect(")")
    expect("(")
    expect("RULES")
    arities: dict[str, int] = {}
    base = Signature({}, frozenset(variables))
    pairs = []
    while i < len(toks) and toks[i] != ")":
        lhs, i = parse_with_inference(toks, i, base, arities)
        expect("->")
        rhs, i = parse_with_inference(toks, i, base, arities)
        pairs.append((lhs, rhs))
    expect(")")
    if i != len(toks):
        raise TermSyntaxError(f"trailing input at {toks[i]!r}")
    sig = Signature(arities, frozenset(variables))
    return Trs(sig, tuple(Rule(lhs, rhs) for lhs, rhs in pairs))


def format_trs(trs: Trs) -> str:
    reserved = set(trs.signature.symbols) | set(trs.signature.variables)
    lines = [f"(VAR {' '.join(sorted(trs.signature.variables))})", "(RULES"]
    for r in trs.rules:
        lines.append(f"  {format_term(r.lhs, reserved)} -> {format_term(r.rhs, reserved)}")
    lines.append(")")
    return "\n".join(lines) + "\n"


def make_trs(rules: Sequence[tuple[str, str]], variables: Sequence[str] = ("x", "y", "z")) -> Trs:
    """Build a TRS from textual rule pairs, inferring arities."""
    body = " ".join(f"{lhs} -> {rhs}" for lhs, rhs in rules)
    return parse_trs(f"(VAR {' '.join(variables)}) (RULES {body})")


def with_symbols(trs: Trs, extra: Mapping[str, int]) -> Trs:
    """The same rules over a signature extended by ``extra``."""
    return Trs(trs.signature.merged(Signature(extra)), trs.rules)


def instantiate(rule: Rule, sigma: Substitution, reversed_: bool = False) -> tuple[Term, Term]:
    lhs, rhs = substitute(rule.lhs, sigma), substitute(rule.rhs, sigma)
    return (rhs, lhs) if reversed_ else (lhs, rhs)
