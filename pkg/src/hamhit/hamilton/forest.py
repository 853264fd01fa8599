"""Linear forests: spanning path covers and endpoint reduction by rotations."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from ..graph import Edge, Graph, GraphInputError, canonical


@dataclass(frozen=True)
class LinearForest:
    """Vertex-disjoint paths, each stored as a vertex sequence."""

    n: int
    paths: tuple[tuple[int, ...], ...]

    @classmethod
    def of(cls, n: int, paths: Sequence[Sequence[int]]) -> "LinearForest":
        f = cls(n, tuple(tuple(int(v) for v in p) for p in paths if len(p)))
        seen: set[int] = set()
        for p in f.paths:
            for v in p:
                if v in seen or not (0 <= v < n):
                    raise GraphInputError(f"vertex {v} repeated or out of range")
                seen.add(v)
        return f

    @property
    def edges(self) -> frozenset[Edge]:
        return frozenset(canonical(p[i], p[i + 1]) for p in self.paths for i in range(len(p) - 1))

    @property
    def ends(self) -> list[int]:
        """Endpoint multiset, sorted; a one-vertex path contributes twice."""
        out = []
        for p in self.paths:
            out.extend((p[0], p[-1]))
        return sorted(out)

    def covered(self) -> set[int]:
        return {v for p in self.paths for v in p}

    def is_spanning(self) -> bool:
        return len(self.covered()) == self.n

    def has_isolated(self) -> bool:
        return any(len(p) == 1 for p in self.paths)

    def is_valid_in(self, g: Graph) -> bool:
        nbr = g.neighbor_sets
        return g.n == self.n and all(p[i + 1] in nbr[p[i]] for p in self.paths for i in range(len(p) - 1))

    def path_of(self, v: int) -> Optional[int]:
        for i, p in enumerate(self.paths):
            if v in p:
                return i
        return None


def spanning_linear_forest(g: Graph, max_paths: int, seed: int = 0) -> Optional[LinearForest]:
    """Greedy path cover of ``g`` with no one-vertex paths, or ``None``.

    Paths are grown from the vertex with fewest uncovered neighbours,
    extending both ends Warnsdorff-style; leftover single vertices are spliced
    into neighbouring paths and paths with adjacent endpoints are joined.
    """
    n = g.n
    nbr = g.adjacency
    if any(len(a) == 0 for a in nbr):
        raise GraphInputError("graph has an isolated vertex")
    gen = np.random.default_rng(seed)
    free = [len(a) for a in nbr]
    used = [False] * n

    def take(v: int) -> None:
        used[v] = True
        for w in nbr[v]:
            free[w] -= 1

    def step(end: int) -> Optional[int]:
        cands = [w for w in nbr[end] if not used[w]]
        if not cands:
            return None
        return min(cands, key=lambda w: (free[w], w))

    paths: list[list[int]] = []
    order = sorted(range(n), key=lambda v: (len(nbr[v]), gen.random()))
    for s in order:
        if used[s]:
            continue
        take(s)
        path = deque([s])
        for side in (1, 0):
            while True:
                end = path[-1] if side else path[0]
                w = step(end)
                if w is None:
                    break
                take(w)
                if side:
                    path.append(w)
                else:
                    path.appendleft(w)
        paths.append(list(path))

    paths = _absorb_singletons(g, paths)
    if paths is None:
        return None
    paths = _join_adjacent_ends(g, paths)
    if len(paths) > max_paths:
        return None
    return LinearForest.of(n, paths)


def _absorb_singletons(g: Graph, paths: list[list[int]]) -> Optional[list[list[int]]]:
    nbr = g.adjacency
    where = {}
    for i, p in enumerate(paths):
        for j, v in enumerate(p):
            where[v] = i
    pending = [p[0] for p in paths if len(p) == 1]
    paths = [p if len(p) > 1 else None for p in paths]
    for v in pending:
        where.pop(v, None)
    rounds = 0
    while pending:
        rounds += 1
        if rounds > 4 * g.n + 10:
            return None
        v = pending.pop()
        placed = False
        for u in nbr[v]:
            if u not in where:
                # two leftover singletons side by side become a path
                if u in pending:
                    pending.remove(u)
                    paths.append([v, u])
                    where[v] = where[u] = len(paths) - 1
                    placed = True
                    break
                continue
            i = where[u]
            p = paths[i]
            j = p.index(u)
            L = len(p) - 1
            if j == L:
                p.append(v)
            elif j == 0:
                p.insert(0, v)
            elif L - j >= 2:
                rest = p[j + 1:]
                paths[i] = p[: j + 1] + [v]
                paths.append(rest)
                for w in rest:
                    where[w] = len(paths) - 1
            elif j >= 2:
                rest = p[:j]
                paths[i] = [v] + p[j:]
                paths.append(rest)
                for w in rest:
                    where[w] = len(paths) - 1
            else:
                continue
            where[v] = i
            placed = True
            break
        if not placed:
            # fall back: bump the far end of a three-vertex path and retry with it
            for u in nbr[v]:
                if u in where and len(paths[where[u]]) == 3 and paths[where[u]][1] == u:
                    i = where[u]
                    a, _, b = paths[i]
                    paths[i] = [a, u, v]
                    where[v] = i
                    del where[b]
                    pending.insert(0, b)
                    placed = True
                    break
        if not placed:
            return None
    return [p for p in paths if p]


def _join_adjacent_ends(g: Graph, paths: list[list[int]]) -> list[list[int]]:
    nbr = g.neighbor_sets
    paths = [list(p) for p in paths]
    changed = True
    while changed and len(paths) > 1:
        changed = False
        head = {}
        for i, p in enumerate(paths):
            head.setdefault(p[0], i)
            head.setdefault(p[-1], i)
        for i, p in enumerate(paths):
            for end_first in (False, True):
                end = p[0] if end_first else p[-1]
                for w in nbr[end]:
                    j = head.get(w)
                    if j is None or j == i:
                        continue
                    q = paths[j]
                    a = p[::-1] if end_first else p
                    b = q if q[0] == w else q[::-1]
                    paths[i] = a + b
                    paths.pop(j)
                    changed = True
                    break
                if changed:
                    break
            if changed:
                break
    return paths


def reduce_endpoints(
    g: Graph,
    f: LinearForest,
    x: int,
    y: int,
    swap_budget: int = 64,
    *,
    max_states: int = 20_000,
) -> Optional[LinearForest]:
    """Remove ``x`` and ``y`` from the endpoint set by rotations and one join.

    Starting from the path ending at ``x``, the free end is moved by Pósa
    rotations inside its own path or by splitting another path at a
    neighbour; as soon as the free end is adjacent to ``y`` on a different
    path the two are joined. Every other endpoint is preserved. Returns
    ``None`` if no forest within ``swap_budget`` edge changes is found.
    """
    ends = f.ends
    if x == y:
        raise GraphInputError("x and y must differ")
    for v in (x, y):
        if v not in ends:
            raise GraphInputError(f"vertex {v} is not an endpoint")
    if not f.is_valid_in(g):
        raise GraphInputError("forest uses edges outside the graph")
    for a, b in ((x, y), (y, x)):
        out = _endpoint_search(g, f, a, b, swap_budget, max_states)
        if out is not None:
            return out
    return None


def _endpoint_search(g, f, x, y, budget, max_states):
    nbr = g.adjacency
    base_edges = f.edges
    # state: (paths tuple, index of active path, active end at the tail of that path, cost)
    start_paths = [list(p) for p in f.paths]
    ai = next(i for i, p in enumerate(start_paths) if x in (p[0], p[-1]))
    if start_paths[ai][-1] != x:
        start_paths[ai].reverse()
    if len(start_paths[ai]) == 1:
        return None  # an isolated vertex has no distinct second end
    queue = deque([(tuple(map(tuple, start_paths)), ai, 0)])
    seen = {(frozenset(base_edges), x)}
    explored = 0
    while queue:
        paths, ai, cost = queue.popleft()
        explored += 1
        if explored > max_states:
            return None
        act = paths[ai]
        z = act[-1]
        loc = {}
        for i, p in enumerate(paths):
            for j, v in enumerate(p):
                loc[v] = (i, j)
        # try to finish: z joined to y on another path
        if y in nbr[z]:
            i, j = loc[y]
            if i != ai and cost + 1 <= budget:
                q = paths[i]
                q = q if q[0] == y else q[::-1]
                new = [p for k, p in enumerate(paths) if k not in (ai, i)] + [act + q]
                out = LinearForest.of(f.n, new)
                if len(out.edges ^ base_edges) <= budget:
                    return out
        if cost + 2 + 1 > budget:
            continue
        for w in nbr[z]:
            i, j = loc[w]
            if i == ai:
                # rotation: z ~ act[j], break edge act[j] act[j+1]
                if j >= len(act) - 2:
                    continue
                new_act = act[: j + 1] + act[j + 1:][::-1]
                succ = list(paths)
                succ[ai] = tuple(new_act)
                ni = ai
            else:
                q = paths[i]
                L = len(q) - 1
                if j in (0, L):
                    continue  # joining two paths at non-target ends would drop an endpoint we must keep
                options = []
                if j >= 2:  # keep q[:j] as leftover, merged path act + q[j:]
                    options.append((act + q[j:], q[:j]))
                if L - j >= 2:
                    options.append((act + q[: j + 1][::-1], q[j + 1:][::-1]))
                for merged, left in options:
                    succ = [p for k, p in enumerate(paths) if k not in (ai, i)]
                    succ.append(tuple(merged))
                    # leftover becomes the active path with its new end at the tail
                    succ.append(tuple(left))
                    key = (frozenset(_edges(succ)), left[-1])
                    if key in seen:
                        continue
                    seen.add(key)
                    queue.append((tuple(succ), len(succ) - 1, cost + 2))
                continue
            key = (frozenset(_edges(succ)), succ[ni][-1])
            if key in seen:
                continue
            seen.add(key)
            queue.append((tuple(succ), ni, cost + 2))
    return None


def _edges(paths) -> set:
    return {canonical(p[k], p[k + 1]) for p in paths for k in range(len(p) - 1)}
