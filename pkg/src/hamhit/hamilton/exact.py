"""Complete backtracking search for Hamilton cycles through forced edges."""

from __future__ import annotations

from ..graph import Graph
from .core import (
    CycleCertificate,
    HamiltonResult,
    Refuted,
    Status,
    as_forced,
    reduce_instance,
    verify_cycle,
)

DEFAULT_BUDGET = 10**7


class _OutOfBudget(Exception):
    pass


def exact_hamilton(g: Graph, forced=None, budget: int | None = DEFAULT_BUDGET) -> HamiltonResult:
    """Decide whether ``g`` has a Hamilton cycle containing every forced edge.

    Returns FOUND with a certificate, NONE when the search space is exhausted,
    or UNKNOWN when more than ``budget`` search-tree nodes would be needed
    (``budget=None`` means unlimited).
    """
    fs = as_forced(g, forced)
    try:
        red = reduce_instance(g, fs)
    except Refuted as exc:
        return HamiltonResult(Status.NONE, stats={"nodes": 0}, reason=str(exc))

    n = g.n
    usable = [sorted(a) for a in red.usable]
    locked = red.locked
    # start where choices are fewest
    start = min(range(n), key=lambda v: (-len(locked[v]), len(usable[v]), v))
    visited = [False] * n
    visited[start] = True
    path = [start]
    nodes = [0]
    limit = budget

    def free_count(u: int, end: int) -> int:
        c = 0
        for x in usable[u]:
            if not visited[x] or x == end or x == start:
                c += 1
        return c

    def closes(end: int) -> bool:
        if start not in red.usable[end]:
            return False
        return verify_cycle(g, path, fs)

    def dfs(end: int, prev: int) -> bool:
        nodes[0] += 1
        if limit is not None and nodes[0] > limit:
            raise _OutOfBudget
        if len(path) == n:
            return closes(end)
        # locked edges of ``end`` leading back into the path are only legal to the predecessor
        forced_next = None
        for w in locked[end]:
            if w == prev:
                continue
            if visited[w]:
                return False
            forced_next = w
            break
        if forced_next is not None:
            cands = [forced_next]
        else:
            cands = [w for w in usable[end] if not visited[w]]
            cands.sort(key=lambda w: free_count(w, w))
        for w in cands:
            visited[w] = True
            path.append(w)
            ok = True
            # ``end`` stops being available to its unvisited neighbours
            for u in usable[end]:
                if not visited[u] and free_count(u, w) < 2:
                    ok = False
                    break
            if ok and dfs(w, end):
                return True
            path.pop()
            visited[w] = False
        return False

    try:
        found = dfs(start, -1)
    except _OutOfBudget:
        return HamiltonResult(Status.UNKNOWN, stats={"nodes": nodes[0]}, reason="node budget exhausted")
    except RecursionError:
        return HamiltonResult(Status.UNKNOWN, stats={"nodes": nodes[0]}, reason="recursion limit")
    if found:
        return HamiltonResult(Status.FOUND, CycleCertificate(tuple(path)), {"nodes": nodes[0]})
    return HamiltonResult(Status.NONE, stats={"nodes": nodes[0]}, reason="search exhausted")
