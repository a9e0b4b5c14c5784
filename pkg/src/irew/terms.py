"""Rational terms as rooted term graphs.

A term is a finite graph of variable and function nodes; cycles denote
infinite (rational) terms. Semantic equality is bisimilarity: ``s == t`` holds
iff the two graphs unfold to the same possibly infinite tree.
"""

from __future__ import annotations

import itertools
import re
from collections.abc import Iterator, Mapping
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Union

from . import _graph
from .errors import (
    ArityMismatch,
    InvalidPosition,
    TermSyntaxError,
    UnboundBinder,
    UnknownSymbol,
)

VAR = 0
FUN = 1

# A node is (VAR, name, ()) or (FUN, symbol, child ids).
Node = tuple[int, str, tuple[int, ...]]
Position = tuple[int, ...]
Substitution = Mapping[str, "Term"]


@dataclass(frozen=True)
class Signature:
    symbols: Mapping[str, int] = field(default_factory=dict)
    variables: frozenset[str] = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "symbols", dict(self.symbols))
        object.__setattr__(self, "variables", frozenset(self.variables))
        clash = set(self.symbols) & self.variables
        if clash:
            raise ArityMismatch(f"names declared both as symbol and variable: {sorted(clash)}")

    def arity(self, sym: str) -> int:
        try:
            return self.symbols[sym]
        except KeyError:
            raise UnknownSymbol(sym) from None

    def merged(self, other: "Signature") -> "Signature":
        syms = dict(self.symbols)
        for s, k in other.symbols.items():
            if syms.setdefault(s, k) != k:
                raise ArityMismatch(f"symbol {s} used with arities {syms[s]} and {k}")
        return Signature(syms, self.variables | other.variables)


class Term:
    """Immutable rooted term graph; every node is reachable from the root.

    Nodes are numbered in depth-first preorder from the root (node 0).
    """

    __slots__ = ("nodes", "_key", "_args")

    def __init__(self, nodes: tuple[Node, ...]):
        self.nodes = nodes
        self._key: tuple | None = None
        self._args: tuple["Term", ...] | None = None

    # -- construction -------------------------------------------------------

    @staticmethod
    def build(nodes: Mapping[int, Node] | list[Node], root: int) -> "Term":
        """Compact the graph reachable from ``root`` into a Term."""
        order: dict[int, int] = {}
        seq: list[int] = []
        stack = [root]
        while stack:
            n = stack.pop()
            if n in order:
                continue
            order[n] = len(seq)
            seq.append(n)
            stack.extend(reversed(nodes[n][2]))
        return Term(
            tuple((nodes[n][0], nodes[n][1], tuple(order[c] for c in nodes[n][2])) for n in seq)
        )

    @staticmethod
    def var(name: str) -> "Term":
        return Term(((VAR, name, ()),))

    @staticmethod
    def fun(sym: str, *args: "Term") -> "Term":
        table: list[Node] = [(FUN, sym, ())]
        roots = []
        for a in args:
            roots.append(_append(table, a))
        table[0] = (FUN, sym, tuple(roots))
        return Term.build(table, 0)

    # -- inspection ---------------------------------------------------------

    @property
    def root(self) -> Node:
        return self.nodes[0]

    @property
    def is_var(self) -> bool:
        return self.nodes[0][0] == VAR

    @property
    def head(self) -> str:
        """Root symbol or variable name."""
        return self.nodes[0][1]

    @property
    def arity(self) -> int:
        return len(self.nodes[0][2])

    def at_node(self, n: int) -> "Term":
        return self if n == 0 else Term.build(self.nodes, n)

    @property
    def args(self) -> tuple["Term", ...]:
        if self._args is None:
            self._args = tuple(self.at_node(c) for c in self.nodes[0][2])
        return self._args

    def is_finite(self) -> bool:
        return not _graph.cyclic_nodes(len(self.nodes), [n[2] for n in self.nodes])

    def variables(self) -> set[str]:
        return {n[1] for n in self.nodes if n[0] == VAR}

    def key(self) -> tuple:
        """Canonical key: equal iff bisimilar."""
        if self._key is None:
            labels = [(n[0], n[1], len(n[2])) for n in self.nodes]
            self._key = _graph.canonical_encoding(0, labels, [n[2] for n in self.nodes])
        return self._key

    def __eq__(self, other):
        if not isinstance(other, Term):
            return NotImplemented
        # identical node tables are trivially bisimilar
        return self is other or self.nodes == other.nodes or self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        return f"Term({format_term(self)!r})"

    def __str__(self):
        return format_term(self)

    def __len__(self):
        return len(self.nodes)


def _append(table: list[Node], t: Term) -> int:
    """Copy t's nodes into table; return the new id of t's root."""
    off = len(table)
    table.extend((k, lab, tuple(c + off for c in ch)) for k, lab, ch in t.nodes)
    return off


# -- positions -----------------------------------------------------------------


def node_at(t: Term, p: Position) -> int:
    n = 0
    for i in p:
        ch = t.nodes[n][2]
        if not 1 <= i <= len(ch):
            raise InvalidPosition(f"position {list(p)} does not resolve in {t}")
        n = ch[i - 1]
    return n


def subterm_at(t: Term, p: Position) -> Term:
    return t.at_node(node_at(t, p))


def positions(t: Term, n: int) -> Iterator[Position]:
    """Positions of length <= n in lexicographic (preorder) order."""
    stack: list[tuple[int, Position]] = [(0, ())]
    while stack:
        node, p = stack.pop()
        yield p
        if len(p) < n:
            ch = t.nodes[node][2]
            for i in range(len(ch), 0, -1):
                stack.append((ch[i - 1], p + (i,)))


def parallel(p: Position, q: Position) -> bool:
    k = min(len(p), len(q))
    return p[:k] != q[:k]


def replace_at(t: Term, p: Position, u: Term) -> Term:
    """t with the subterm at p replaced by u; the path to p is unshared first."""
    if not p:
        return u
    node_at(t, p)
    table = list(t.nodes)
    uroot = _append(table, u)
    cur_old = 0
    new_root = len(table)
    table.append(t.nodes[0])
    cur_new = new_root
    for depth, i in enumerate(p):
        kind, sym, ch = t.nodes[cur_old]
        ch = list(ch)
        nxt_old = ch[i - 1]
        if depth == len(p) - 1:
            ch[i - 1] = uroot
        else:
            ch[i - 1] = len(table)
            table.append(t.nodes[nxt_old])
        table[cur_new] = (kind, sym, tuple(ch))
        cur_new = ch[i - 1]
        cur_old = nxt_old
    return Term.build(table, new_root)


# -- comparison ----------------------------------------------------------------


def bisimilar(s: Term, t: Term) -> bool:
    """Partition refinement on the disjoint union of s and t."""
    off = len(s.nodes)
    labels = [(k, lab, len(ch)) for k, lab, ch in s.nodes] + [
        (k, lab, len(ch)) for k, lab, ch in t.nodes
    ]
    succs = [ch for _, _, ch in s.nodes] + [tuple(c + off for c in ch) for _, _, ch in t.nodes]
    block = _graph.refine(labels, succs)
    return block[0] == block[off]


def first_difference(s: Term, t: Term) -> int | None:
    """Least depth at which s and t differ, or None when bisimilar."""
    layer = {(0, 0)}
    seen: set[tuple[int, int]] = set()
    depth = 0
    while layer:
        nxt = set()
        for a, b in layer:
            na, nb = s.nodes[a], t.nodes[b]
            if na[0] != nb[0] or na[1] != nb[1] or len(na[2]) != len(nb[2]):
                return depth
            seen.add((a, b))
            for pair in zip(na[2], nb[2]):
                if pair not in seen:
                    nxt.add(pair)
        layer = nxt
        depth += 1
    return None


def truncation_equal(s: Term, t: Term, n: int) -> bool:
    """Labels agree at every position of length <= n."""
    if n < 0:
        raise ValueError("depth must be non-negative")
    d = first_difference(s, t)
    return d is None or d > n


def metric_distance(s: Term, t: Term, cap: int | None = None) -> Fraction:
    """2^-n for the least differing depth n; exactly 0 when bisimilar.

    Bisimilarity is decided exactly, so ``cap`` is accepted for interface
    compatibility and never changes the answer.
    """
    if cap is not None and cap < 0:
        raise ValueError("cap must be non-negative")
    d = first_difference(s, t)
    return Fraction(0) if d is None else Fraction(1, 2**d)


# -- substitution ----------------------------------------------------------------


def substitute(t: Term, sigma: Substitution) -> Term:
    """Redirect every variable node in dom(sigma) to the root of its image."""
    if not any(k == VAR and lab in sigma for k, lab, _ in t.nodes):
        return t
    table: list[Node] = []
    image = {x: _append(table, u) for x, u in sigma.items()}
    off = len(table)

    def target(c: int) -> int:
        k, lab, _ = t.nodes[c]
        if k == VAR and lab in image:
            return image[lab]
        return c + off

    table.extend((k, lab, tuple(target(c) for c in ch)) for k, lab, ch in t.nodes)
    return Term.build(table, target(0))


def compose_substitutions(sigma: Substitution, tau: Substitution) -> dict[str, Term]:
    """The substitution x -> substitute(sigma(x), tau), extended by tau."""
    out = {x: substitute(u, tau) for x, u in sigma.items()}
    for x, u in tau.items():
        out.setdefault(x, u)
    return out


# -- text syntax -------------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:([A-Za-z][A-Za-z0-9_]*)|(->)|(.))")


def tokenize(text: str) -> list[str]:
    out = []
    pos = 0
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            break
        tok = m.group(1) or m.group(2) or m.group(3)
        if tok is None:
            break
        if m.group(3) and tok not in "(),.":
            raise TermSyntaxError(f"unexpected character {tok!r} at offset {m.start(3)}")
        out.append(tok)
        pos = m.end()
    return out


class _Parser:
    """Recursive-descent parser over a token list.

    When ``infer`` is set, unknown identifiers that are not variables are
    accepted as symbols and their arity is fixed at first use.
    """

    def __init__(self, tokens: list[str], sig: Signature, infer: dict[str, int] | None = None):
        self.toks = tokens
        self.i = 0
        self.sig = sig
        self.infer = infer
        self.table: list[Node | None] = []
        self.binders: dict[str, int] = {}
        self.alias: dict[int, int] = {}
        self.closed: set[str] = set()

    def peek(self) -> str | None:
        return self.toks[self.i] if self.i < len(self.toks) else None

    def take(self, expected: str | None = None) -> str:
        tok = self.peek()
        if tok is None:
            raise TermSyntaxError("unexpected end of input")
        if expected is not None and tok != expected:
            raise TermSyntaxError(f"expected {expected!r}, found {tok!r}")
        self.i += 1
        return tok

    def ident(self) -> str:
        tok = self.take()
        if not tok[0].isalpha():
            raise TermSyntaxError(f"expected identifier, found {tok!r}")
        return tok

    def new(self) -> int:
        self.table.append(None)
        return len(self.table) - 1

    def term(self) -> int:
        name = self.ident()
        if name == "rec" and self.peek() not in ("(", ",", ")", None):
            binder = self.ident()
            if binder in self.binders:
                raise TermSyntaxError(f"binder {binder} shadows an enclosing binder")
            if binder in self.sig.symbols or binder in self.sig.variables:
                raise TermSyntaxError(f"binder {binder} clashes with a declared name")
            self.take(".")
            slot = self.new()
            self.binders[binder] = slot
            body = self.term()
            del self.binders[binder]
            self.closed.add(binder)
            self.alias[slot] = body
            return slot
        if name in self.binders:
            return self.binders[name]
        if name in self.sig.variables:
            n = self.new()
            self.table[n] = (VAR, name, ())
            return n
        args: list[int] = []
        if self.peek() == "(":
            self.take("(")
            args.append(self.term())
            while self.peek() == ",":
                self.take(",")
                args.append(self.term())
            self.take(")")
        self.check_symbol(name, len(args))
        n = self.new()
        self.table[n] = (FUN, name, tuple(args))
        return n

    def check_symbol(self, name: str, k: int) -> None:
        if name in self.sig.symbols:
            if self.sig.symbols[name] != k:
                raise ArityMismatch(f"{name} has arity {self.sig.symbols[name]}, used with {k}")
            return
        if name in self.closed:
            raise UnboundBinder(f"{name} used outside the scope of its rec")
        if self.infer is None:
            raise UnknownSymbol(name)
        if self.infer.setdefault(name, k) != k:
            raise ArityMismatch(f"{name} used with arities {self.infer[name]} and {k}")

    def resolve(self, n: int) -> int:
        seen = set()
        while n in self.alias:
            if n in seen:
                raise TermSyntaxError("unguarded recursion: binder body is a binder")
            seen.add(n)
            n = self.alias[n]
        return n

    def finish(self, root: int) -> Term:
        if self.peek() is not None:
            raise TermSyntaxError(f"trailing input at {self.peek()!r}")
        table = {}
        for i, node in enumerate(self.table):
            if node is not None:
                table[i] = (node[0], node[1], tuple(self.resolve(c) for c in node[2]))
        return Term.build(table, self.resolve(root))


def parse_term(text: str, sig: Signature) -> Term:
    p = _Parser(tokenize(text), sig)
    root = p.term()
    return p.finish(root)


def parse_with_inference(
    tokens: list[str], start: int, sig: Signature, infer: dict[str, int]
) -> tuple[Term, int]:
    """Parse one term from ``tokens[start:]``, inferring arities; returns (term, next index)."""
    p = _Parser(tokens, sig, infer)
    p.i = start
    root = p.term()
    end = p.i
    p.toks = tokens[:end]
    return p.finish(root), end


def format_term(t: Term, reserved: frozenset[str] | set[str] = frozenset()) -> str:
    """Print a term; cycles become ``rec`` binders at cycle entry nodes.

    Binder names avoid every label of t and every name in ``reserved``.
    """
    taken = {lab for _, lab, _ in t.nodes} | set(reserved)
    binder: dict[int, str] = {}
    on_path: set[int] = set()
    fresh = itertools.count()

    def go(n: int) -> str:
        if n in on_path:
            if n not in binder:
                binder[n] = f"\0{next(fresh)}\0"
            return binder[n]
        kind, lab, ch = t.nodes[n]
        if kind == VAR or not ch:
            return lab
        on_path.add(n)
        inner = f"{lab}({', '.join(go(c) for c in ch)})"
        on_path.discard(n)
        if n in binder:
            inner = f"rec {binder.pop(n)} . {inner}"
        return inner

    text = go(0)
    names = _binder_names(taken)
    rename: dict[str, str] = {}
    return re.sub("\0\\d+\0", lambda m: rename.setdefault(m.group(0), next(names)), text)


def _binder_names(taken: set[str]) -> Iterator[str]:
    i = 0
    while True:
        for base in ("X", "Y", "Z", "W"):
            name = base if i == 0 else f"{base}{i}"
            if name not in taken and name != "rec":
                yield name
        i += 1


TermLike = Union[Term, str]
