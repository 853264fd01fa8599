"""(D, m)-extendability of a bounded-degree subgraph and path extension that
preserves it."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Iterable, NamedTuple, Optional

from ..graph import Edge, Graph, GraphInputError, canonical

ENUMERATION_GUARD = 10**7


@dataclass(frozen=True)
class ExtendabilityQuery:
    g: Graph
    h_vertices: frozenset[int]
    h_edges: frozenset[Edge] = frozenset()
    D: int = 3
    m: int = 1
    allow_aux: bool = False  # permit H-edges that are not edges of g

    @classmethod
    def of(cls, g: Graph, vertices: Iterable[int], edges: Iterable = (), D: int = 3, m: int = 1, allow_aux=False):
        es = frozenset(canonical(int(a), int(b)) for a, b in edges)
        vs = frozenset(int(v) for v in vertices) | {v for e in es for v in e}
        return cls(g, vs, es, D, m, allow_aux)

    def h_degree(self) -> dict[int, int]:
        deg = {v: 0 for v in self.h_vertices}
        for a, b in self.h_edges:
            deg[a] += 1
            deg[b] += 1
        return deg

    def validate(self) -> dict[int, int]:
        n = self.g.n
        if self.D < 1 or self.m < 1:
            raise GraphInputError("D and m must be positive")
        for v in self.h_vertices:
            if not 0 <= v < n:
                raise GraphInputError(f"vertex {v} outside the host")
        if not self.allow_aux:
            for e in self.h_edges:
                if not self.g.has_edge(*e):
                    raise GraphInputError(f"H-edge {e} is not an edge of the host")
        deg = self.h_degree()
        if deg and max(deg.values()) > self.D:
            raise GraphInputError(f"max degree of H exceeds D={self.D}")
        return deg


class Extendability(NamedTuple):
    ok: bool
    witness: Optional[frozenset]


def enumeration_size(n: int, m: int) -> int:
    return sum(math.comb(n, i) for i in range(1, min(2 * m, n) + 1))


def is_extendable(q: ExtendabilityQuery) -> Extendability:
    """Check ``|Γ(S) \\ V(H)| >= (D-1)|S| - Σ_{u ∈ S ∩ V(H)} (d_H(u) - 1)``
    for all ``1 <= |S| <= 2m``, where ``Γ(S)`` is every vertex with a
    neighbour in ``S`` (members of ``S`` included)."""
    deg = q.validate()
    n = q.g.n
    if enumeration_size(n, q.m) > ENUMERATION_GUARD:
        raise GraphInputError("subset enumeration exceeds the guard")
    adj_mask = []
    for v in range(n):
        mask = 0
        for w in q.g.adjacency[v]:
            mask |= 1 << w
        adj_mask.append(mask)
    hmask = 0
    for v in q.h_vertices:
        hmask |= 1 << v
    credit = [0] * n  # d_H(u) - 1 for u in V(H)
    for v, dv in deg.items():
        credit[v] = dv - 1
    D1 = q.D - 1
    for size in range(1, min(2 * q.m, n) + 1):
        for S in itertools.combinations(range(n), size):
            gamma = 0
            rhs = D1 * size
            for v in S:
                gamma |= adj_mask[v]
                if hmask >> v & 1:
                    rhs -= credit[v]
            if (gamma & ~hmask).bit_count() < rhs:
                return Extendability(False, frozenset(S))
    return Extendability(True, None)


@dataclass
class PathSearch:
    path: Optional[list[int]]
    nodes: int = 0
    reason: str = ""
    extended: Optional[ExtendabilityQuery] = field(default=None, repr=False)

    @property
    def found(self) -> bool:
        return self.path is not None


def extend_path_search(
    q: ExtendabilityQuery, y: int, x: Optional[int] = None, length: int = 1, budget: int = 100_000
) -> PathSearch:
    """Backtracking search for a path from ``y`` with ``length`` edges whose
    other vertices lie outside ``V(H)`` (except the end ``x`` if given) such
    that ``H ∪ P`` is still (D, m)-extendable. Not finding one is a soft
    result."""
    deg = q.validate()
    g = q.g
    if length < 1:
        raise GraphInputError("length must be positive")
    if y not in q.h_vertices or deg[y] > q.D / 2:
        raise GraphInputError("y must be a vertex of H with d_H(y) <= D/2")
    if x is not None:
        if x == y or x not in q.h_vertices or deg[x] > q.D / 2:
            raise GraphInputError("x must be another vertex of H with d_H(x) <= D/2")
    fresh_needed = length - 1 if x is not None else length
    outside = [v for v in range(g.n) if v not in q.h_vertices]
    if fresh_needed > len(outside):
        return PathSearch(None, 0, "not enough vertices outside H")
    adj = [sorted(a) for a in g.adjacency]
    nodes = [0]
    path = [y]
    used = set(q.h_vertices)

    def accept() -> Optional[ExtendabilityQuery]:
        es = q.h_edges | {canonical(path[i], path[i + 1]) for i in range(len(path) - 1)}
        ext = ExtendabilityQuery(g, q.h_vertices | set(path), frozenset(es), q.D, q.m, q.allow_aux)
        try:
            ok = is_extendable(ext).ok
        except GraphInputError:
            return None
        return ext if ok else None

    def rec() -> Optional[ExtendabilityQuery]:
        nodes[0] += 1
        if nodes[0] > budget:
            return None
        end = path[-1]
        steps = len(path) - 1
        if steps == length:
            return accept()
        last = steps == length - 1
        if last and x is not None:
            if x in g.neighbor_sets[end]:
                path.append(x)
                out = accept()
                if out is None:
                    path.pop()
                return out
            return None
        for w in adj[end]:
            if w in used:
                continue
            used.add(w)
            path.append(w)
            out = rec()
            if out is not None:
                return out
            path.pop()
            used.discard(w)
        return None

    ext = rec()
    if ext is None:
        reason = "budget exhausted" if nodes[0] > budget else "no extendable path"
        return PathSearch(None, nodes[0], reason)
    return PathSearch(list(path), nodes[0], "", ext)
