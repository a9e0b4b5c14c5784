"""Lazy extraction of step sequences from regular schedule graphs.

A schedule node is either a ``Seq`` (items run one after another; an item is a
step or another node) or a ``Par`` (children interleaved round-robin, child i
at relative position ``(i+1,)``). Certificates and compressed certificates
both translate into schedules.
"""

from __future__ import annotations

import math
import sys
from collections.abc import Hashable, Iterator, Mapping, Sequence
from dataclasses import dataclass

from .errors import NotProductive, ResourceExceeded
from .trs import Step

INF = math.inf

sys.setrecursionlimit(max(sys.getrecursionlimit(), 20000))


@dataclass(frozen=True)
class Seq:
    items: tuple  # of Step | node id


@dataclass(frozen=True)
class Par:
    children: tuple


class Schedule:
    def __init__(self, nodes: Mapping[Hashable, Seq | Par]):
        self.nodes = dict(nodes)
        self.min_depth = self._min_depths()

    def _min_depths(self) -> dict[Hashable, float]:
        """Least depth of any step reachable in each node (inf when stepless)."""
        md: dict[Hashable, float] = {n: INF for n in self.nodes}
        changed = True
        while changed:
            changed = False
            for n, node in self.nodes.items():
                if isinstance(node, Seq):
                    v = min(
                        (len(i.pos) if isinstance(i, Step) else md[i] for i in node.items),
                        default=INF,
                    )
                else:
                    v = 1 + min((md[c] for c in node.children), default=INF)
                if v < md[n]:
                    md[n] = v
                    changed = True
        return md

    def has_steps(self, n: Hashable) -> bool:
        return self.min_depth[n] < INF

    def stream(self, root: Hashable, restrict: int | None = None) -> "Stream":
        return Stream(self, root, restrict)


class Stream:
    """Iterator of steps with absolute positions.

    With ``restrict = n`` every part whose remaining steps all lie deeper than
    n is skipped, so the stream ends once no step of depth <= n remains.
    """

    def __init__(self, sched: Schedule, root: Hashable, restrict: int | None):
        self.sched = sched
        self.restrict = restrict
        self.first_polls: set[Hashable] = set()
        self.top = _make(self, root, ())

    def __iter__(self) -> Iterator[Step]:
        while True:
            s = self.next()
            if s is None:
                return
            yield s

    def next(self) -> Step | None:
        return self.top.next() if self.top is not None else None

    def residual(self) -> float:
        return self.top.residual() if self.top is not None else INF


def _make(stream: Stream, node: Hashable, prefix: tuple) -> "_Cursor | None":
    if not stream.sched.has_steps(node):
        return None
    if isinstance(stream.sched.nodes[node], Seq):
        return _SeqCursor(stream, node, prefix)
    return _ParCursor(stream, node, prefix)


class _Cursor:
    def __init__(self, stream: Stream, node: Hashable, prefix: tuple):
        self.stream = stream
        self.node = node
        self.prefix = prefix
        self.fresh = True

    def next(self) -> Step | None:
        if not self.fresh or self.stream.restrict is not None:
            return self._next()
        # A fresh cursor whose first poll reaches a fresh cursor of the same
        # node repeats itself forever without emitting a step.
        polls = self.stream.first_polls
        if self.node in polls:
            raise NotProductive(f"round-robin extraction loops at node {self.node!r}")
        polls.add(self.node)
        try:
            out = self._next()
        finally:
            polls.discard(self.node)
        self.fresh = False
        return out

    def _next(self) -> Step | None:
        raise NotImplementedError

    def residual(self) -> float:
        raise NotImplementedError


class _SeqCursor(_Cursor):
    def __init__(self, stream, node, prefix):
        super().__init__(stream, node, prefix)
        self.items: Sequence = stream.sched.nodes[node].items
        self.idx = 0
        self.cur: _Cursor | None = None

    def _static(self, item) -> float:
        if isinstance(item, Step):
            return len(self.prefix) + len(item.pos)
        return len(self.prefix) + self.stream.sched.min_depth[item]

    def residual(self) -> float:
        best = INF
        start = self.idx
        if self.cur is not None:
            best = self.cur.residual()
            start += 1
        for item in self.items[start:]:
            best = min(best, self._static(item))
        return best

    def _next(self) -> Step | None:
        limit = self.stream.restrict
        while self.idx < len(self.items):
            item = self.items[self.idx]
            if isinstance(item, Step):
                self.idx += 1
                return item.shifted(self.prefix)
            if self.cur is None:
                self.cur = _make(self.stream, item, self.prefix)
                if self.cur is None:
                    self.idx += 1
                    continue
            if limit is not None and self.cur.residual() > limit:
                step = None
            else:
                step = self.cur.next()
            if step is not None:
                return step
            self.cur = None
            self.idx += 1
        return None


class _ParCursor(_Cursor):
    def __init__(self, stream, node, prefix):
        super().__init__(stream, node, prefix)
        kids = stream.sched.nodes[node].children
        self.kids = kids
        self.cursors: list[_Cursor | None] = [None] * len(kids)
        self.done = [not stream.sched.has_steps(c) for c in kids]
        self.turn = 0

    def _child_residual(self, i: int) -> float:
        if self.done[i]:
            return INF
        if self.cursors[i] is not None:
            return self.cursors[i].residual()
        return len(self.prefix) + 1 + self.stream.sched.min_depth[self.kids[i]]

    def residual(self) -> float:
        return min((self._child_residual(i) for i in range(len(self.kids))), default=INF)

    def _next(self) -> Step | None:
        limit = self.stream.restrict
        for _ in range(len(self.kids)):
            i = self.turn
            self.turn = (self.turn + 1) % len(self.kids)
            if self.done[i]:
                continue
            if limit is not None and self._child_residual(i) > limit:
                self.done[i] = True
                continue
            if self.cursors[i] is None:
                self.cursors[i] = _make(self.stream, self.kids[i], self.prefix + (i + 1,))
            step = self.cursors[i].next()
            if step is not None:
                return step
            self.done[i] = True
        return None


def take(stream: Stream, k: int) -> list[Step]:
    out = []
    while len(out) < k:
        s = stream.next()
        if s is None:
            break
        out.append(s)
    return out


def shallow_steps(sched: Schedule, root: Hashable, n: int, max_polls: int = 1_000_000) -> list[Step]:
    """Steps of depth <= n, in stream order."""
    stream = sched.stream(root, restrict=n)
    out = []
    for polls, s in enumerate(stream):
        if polls > max_polls:
            raise ResourceExceeded("depth-restricted extraction did not finish")
        if len(s.pos) <= n:
            out.append(s)
    return out


def prefix_to_depth(sched: Schedule, root: Hashable, n: int, max_steps: int = 1_000_000) -> list[Step]:
    """Shortest stream prefix after which no step of depth <= n remains."""
    stream = sched.stream(root)
    out = []
    while stream.residual() <= n:
        s = stream.next()
        if s is None:
            break
        out.append(s)
        if len(out) > max_steps:
            raise ResourceExceeded("prefix did not reach the requested depth")
    return out
