"""Generic algorithms on finite graphs with ordered successor lists."""

from __future__ import annotations

from collections.abc import Hashable, Sequence


def refine(labels: Sequence[Hashable], succs: Sequence[Sequence[int]]) -> list[int]:
    """Coarsest partition compatible with labels and ordered successors.

    Returns a block number per node; two nodes share a block iff they are
    bisimilar. Signature-based (Moore) refinement: each round splits blocks by
    the tuple of successor blocks until the block count is stable.
    """
    block = _renumber(labels)
    count = len(set(block))
    while True:
        sigs = [(block[i], tuple(block[c] for c in succs[i])) for i in range(len(labels))]
        new = _renumber(sigs)
        new_count = len(set(new))
        if new_count == count:
            return new
        block, count = new, new_count


def _renumber(keys: Sequence[Hashable]) -> list[int]:
    ids: dict[Hashable, int] = {}
    return [ids.setdefault(k, len(ids)) for k in keys]


def _dag_blocks(labels: Sequence[Hashable], succs: Sequence[Sequence[int]]) -> list[int] | None:
    """Bisimilarity blocks by hash-consing in post-order; None if the graph has a cycle."""
    n = len(labels)
    state = [0] * n  # 0 new, 1 on path, 2 done
    block = [0] * n
    ids: dict[tuple, int] = {}
    for start in range(n):
        if state[start]:
            continue
        stack = [(start, False)]
        while stack:
            v, expanded = stack.pop()
            if expanded:
                block[v] = ids.setdefault((labels[v], tuple(block[c] for c in succs[v])), len(ids))
                state[v] = 2
                continue
            if state[v] == 2:
                continue
            state[v] = 1
            stack.append((v, True))
            for c in succs[v]:
                if state[c] == 1:
                    return None
                if state[c] == 0:
                    stack.append((c, False))
    return block


def canonical_encoding(
    root: int, labels: Sequence[Hashable], succs: Sequence[Sequence[int]]
) -> tuple:
    """A representation-independent key of the graph rooted at ``root``.

    The graph is quotiented by bisimilarity and the quotient is numbered in
    depth-first preorder, so bisimilar rooted graphs get equal keys.
    """
    block = _dag_blocks(labels, succs)
    if block is None:
        block = refine(labels, succs)
    rep: dict[int, int] = {}
    for i, b in enumerate(block):
        rep.setdefault(b, i)
    order: dict[int, int] = {}
    out: list = []
    stack = [block[root]]
    while stack:
        b = stack.pop()
        if b in order:
            continue
        order[b] = len(order)
        out.append(b)
        i = rep[b]
        stack.extend(reversed([block[c] for c in succs[i]]))
    return tuple(
        (labels[rep[b]], tuple(order[block[c]] for c in succs[rep[b]])) for b in out
    )


def sccs(n: int, succs: Sequence[Sequence[int]]) -> list[list[int]]:
    """Strongly connected components (iterative Tarjan), in reverse topological order."""
    index = [-1] * n
    low = [0] * n
    on_stack = [False] * n
    stack: list[int] = []
    result: list[list[int]] = []
    counter = 0
    for start in range(n):
        if index[start] != -1:
            continue
        work = [(start, 0)]
        while work:
            v, i = work.pop()
            if i == 0:
                index[v] = low[v] = counter
                counter += 1
                stack.append(v)
                on_stack[v] = True
            recurse = False
            for j in range(i, len(succs[v])):
                w = succs[v][j]
                if index[w] == -1:
                    work.append((v, j + 1))
                    work.append((w, 0))
                    recurse = True
                    break
                if on_stack[w]:
                    low[v] = min(low[v], index[w])
            if recurse:
                continue
            if low[v] == index[v]:
                comp = []
                while True:
                    w = stack.pop()
                    on_stack[w] = False
                    comp.append(w)
                    if w == v:
                        break
                result.append(comp)
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[v])
    return result


def cyclic_nodes(n: int, succs: Sequence[Sequence[int]]) -> set[int]:
    """Nodes lying on some cycle (nontrivial SCC or self-loop)."""
    out: set[int] = set()
    for comp in sccs(n, succs):
        if len(comp) > 1 or comp[0] in succs[comp[0]]:
            out.update(comp)
    return out
