"""Shared Hamilton-cycle types, certificate checking and the forced-edge
reduction used by both engines."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

from ..graph import INFINITY, Edge, Graph, GraphInputError, canonical, edge_distance


class Status(enum.Enum):
    FOUND = "found"
    NONE = "none"  # proven: no Hamilton cycle containing the forced edges
    UNKNOWN = "unknown"  # search gave up

    def to_json(self):
        return {Status.FOUND: True, Status.NONE: False, Status.UNKNOWN: "unknown"}[self]


@dataclass(frozen=True)
class ForcedEdgeSet:
    """Edges a Hamilton cycle is required to traverse.

    ``min_distance`` is the smallest pairwise edge distance in the host graph
    (``INFINITY`` for fewer than two edges), filled by :meth:`of`.
    """

    edges: frozenset[Edge] = frozenset()
    min_distance: float = INFINITY

    @classmethod
    def of(cls, g: Graph, edges: Iterable[Sequence[int]] = ()) -> "ForcedEdgeSet":
        es = frozenset(canonical(int(a), int(b)) for a, b in edges)
        for e in es:
            if not g.has_edge(*e):
                raise GraphInputError(f"forced edge {e} is not an edge of the graph")
        ordered = sorted(es)
        best = INFINITY
        for i, e1 in enumerate(ordered):
            for e2 in ordered[i + 1:]:
                best = min(best, edge_distance(g, e1, e2))
        return cls(es, best)

    def validate(self, *, max_size: Optional[float] = None, min_sep: Optional[int] = None) -> None:
        if max_size is not None and len(self.edges) > max_size:
            raise GraphInputError(f"{len(self.edges)} forced edges exceed bound {max_size}")
        if min_sep is not None and self.min_distance < min_sep:
            raise GraphInputError(
                f"forced edges only {self.min_distance} apart, need {min_sep}"
            )

    def __len__(self) -> int:
        return len(self.edges)

    def __iter__(self):
        return iter(sorted(self.edges))


def as_forced(g: Graph, forced) -> ForcedEdgeSet:
    if forced is None:
        return ForcedEdgeSet()
    if isinstance(forced, ForcedEdgeSet):
        for e in forced.edges:
            if not g.has_edge(*e):
                raise GraphInputError(f"forced edge {e} is not an edge of the graph")
        return forced
    es = frozenset(canonical(int(a), int(b)) for a, b in forced)
    for e in es:
        if not g.has_edge(*e):
            raise GraphInputError(f"forced edge {e} is not an edge of the graph")
    return ForcedEdgeSet(es)


@dataclass(frozen=True)
class CycleCertificate:
    sequence: tuple[int, ...]

    @property
    def edges(self) -> frozenset[Edge]:
        s = self.sequence
        if len(s) < 2:
            return frozenset()
        return frozenset(canonical(s[i], s[(i + 1) % len(s)]) for i in range(len(s)))


@dataclass
class HamiltonResult:
    status: Status
    certificate: Optional[CycleCertificate] = None
    stats: dict = field(default_factory=dict)
    reason: str = ""

    @property
    def found(self) -> bool:
        return self.status is Status.FOUND

    def to_dict(self) -> dict:
        return {
            "found": self.status.to_json(),
            "cycle": list(self.certificate.sequence) if self.certificate else [],
            "stats": dict(self.stats, reason=self.reason) if self.reason else dict(self.stats),
        }


def verify_cycle(g: Graph, cert: CycleCertificate | Sequence[int], forced=None) -> bool:
    """True iff ``cert`` visits every vertex once along edges of ``g`` and
    contains every forced edge."""
    seq = cert.sequence if isinstance(cert, CycleCertificate) else tuple(cert)
    n = g.n
    if n < 3 or len(seq) != n or len(set(seq)) != n:
        return False
    if any(not (0 <= v < n) for v in seq):
        return False
    nbr = g.neighbor_sets
    for i in range(n):
        if seq[(i + 1) % n] not in nbr[seq[i]]:
            return False
    if forced:
        fe = forced.edges if isinstance(forced, ForcedEdgeSet) else {canonical(*e) for e in forced}
        on_cycle = {canonical(seq[i], seq[(i + 1) % n]) for i in range(n)}
        if not fe <= on_cycle:
            return False
    return True


class Refuted(Exception):
    """Raised by :func:`reduce_instance` with a human-readable reason."""


@dataclass
class Reduction:
    """Usable and locked adjacency after forced-edge propagation.

    ``locked[v]`` holds the neighbours ``v`` must be joined to on any Hamilton
    cycle containing the forced edges; ``usable[v]`` is every edge that may
    still appear (a superset of ``locked[v]``).
    """

    n: int
    usable: list[set[int]]
    locked: list[set[int]]
    closed_cycle: bool = False

    def segment_from(self, v: int) -> list[int]:
        """Walk the locked segment starting at end ``v``."""
        out = [v]
        prev, cur = -1, v
        while True:
            nxt = [w for w in self.locked[cur] if w != prev]
            if not nxt or nxt[0] == v:
                return out
            prev, cur = cur, nxt[0]
            out.append(cur)


def reduce_instance(g: Graph, forced: ForcedEdgeSet) -> Reduction:
    """Propagate the constraints any Hamilton cycle through ``forced`` obeys.

    * a vertex with two usable edges must use both;
    * a vertex with two locked edges uses no other edge;
    * no vertex may carry three locked edges;
    * an edge joining the two ends of a locked segment shorter than ``n``
      would close a short cycle and is dropped.

    Every removal is forced, so the reduction preserves the set of valid
    Hamilton cycles. Raises :class:`Refuted` when none can exist.
    """
    n = g.n
    if n < 3:
        raise Refuted("fewer than three vertices")
    usable = [set(a) for a in g.adjacency]
    locked: list[set[int]] = [set() for _ in range(n)]
    parent = list(range(n))
    size = [1] * n
    # segment endpoints: for a segment root, the two ends
    ends: dict[int, tuple[int, int]] = {v: (v, v) for v in range(n)}
    closed = [False]

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    work: list[int] = list(range(n))
    queued = [True] * n

    def touch(v: int) -> None:
        if not queued[v]:
            queued[v] = True
            work.append(v)

    def drop(u: int, w: int) -> None:
        if w in locked[u]:
            raise Refuted(f"locked edge {canonical(u, w)} must be dropped")
        usable[u].discard(w)
        usable[w].discard(u)
        touch(u)
        touch(w)

    def lock(u: int, w: int) -> None:
        if w in locked[u]:
            return
        if w not in usable[u]:
            raise Refuted(f"edge {canonical(u, w)} required but unavailable")
        ru, rw = find(u), find(w)
        if ru == rw:
            if size[ru] == n and len(locked[u]) == 1 and len(locked[w]) == 1:
                locked[u].add(w)
                locked[w].add(u)
                closed[0] = True
                return
            raise Refuted(f"locked edges close a cycle shorter than {n}")
        locked[u].add(w)
        locked[w].add(u)
        if len(locked[u]) > 2 or len(locked[w]) > 2:
            v = u if len(locked[u]) > 2 else w
            raise Refuted(f"vertex {v} must use three or more edges")
        eu, ew = ends.pop(ru), ends.pop(rw)
        new_ends = (eu[0] if eu[1] == u else eu[1], ew[0] if ew[1] == w else ew[1])
        if size[ru] < size[rw]:
            ru, rw = rw, ru
        parent[rw] = ru
        size[ru] += size[rw]
        ends[ru] = new_ends
        a, b = new_ends
        if size[ru] < n and b in usable[a] and b not in locked[a]:
            drop(a, b)
        touch(u)
        touch(w)

    for u, w in sorted(forced.edges):
        lock(u, w)

    while work:
        v = work.pop()
        queued[v] = False
        if len(usable[v]) < 2:
            raise Refuted(f"vertex {v} has fewer than two usable edges")
        if len(usable[v]) == 2:
            for w in list(usable[v]):
                lock(v, w)
        if len(locked[v]) == 2:
            for w in list(usable[v] - locked[v]):
                drop(v, w)
        # re-check a segment's closing chord after other drops
        r = find(v)
        a, b = ends[r]
        if a != b and size[r] < n and b in usable[a] and b not in locked[a]:
            drop(a, b)
    return Reduction(n, usable, locked, closed[0])


def cut_vertex(adj: Sequence[Iterable[int]], n: int) -> Optional[int]:
    """An articulation point of the graph, or ``None`` (iterative Tarjan)."""
    if n < 3:
        return None
    disc = [-1] * n
    low = [0] * n
    timer = 0
    for root in range(n):
        if disc[root] != -1:
            continue
        disc[root] = low[root] = timer
        timer += 1
        children = 0
        stack = [(root, -1, iter(adj[root]))]
        while stack:
            v, parent, it = stack[-1]
            advanced = False
            for w in it:
                if disc[w] == -1:
                    disc[w] = low[w] = timer
                    timer += 1
                    if v == root:
                        children += 1
                    stack.append((w, v, iter(adj[w])))
                    advanced = True
                    break
                if w != parent:
                    low[v] = min(low[v], disc[w])
            if advanced:
                continue
            stack.pop()
            if stack:
                p = stack[-1][0]
                low[p] = min(low[p], low[v])
                if p != root and low[v] >= disc[p]:
                    return p
        if children > 1:
            return root
    return None


def quick_refutation(g: Graph, forced: ForcedEdgeSet) -> Optional[str]:
    """A sound reason why no Hamilton cycle through ``forced`` exists, if a
    cheap one is available."""
    try:
        red = reduce_instance(g, forced)
    except Refuted as exc:
        return str(exc)
    seen = {0}
    stack = [0]
    while stack:
        v = stack.pop()
        for w in red.usable[v]:
            if w not in seen:
                seen.add(w)
                stack.append(w)
    if len(seen) != g.n:
        return "disconnected"
    cv = cut_vertex(red.usable, g.n)
    if cv is not None:
        return f"cut vertex {cv}"
    side = bipartition(red.usable, g.n)
    if side is not None and 2 * sum(side) != g.n:
        return "bipartite with unequal sides"
    return None


def bipartition(adj: Sequence[Iterable[int]], n: int) -> Optional[list[int]]:
    """0/1 colouring if the graph is bipartite, else ``None``."""
    colour = [-1] * n
    for s in range(n):
        if colour[s] != -1:
            continue
        colour[s] = 0
        stack = [s]
        while stack:
            v = stack.pop()
            for w in adj[v]:
                if colour[w] == -1:
                    colour[w] = 1 - colour[v]
                    stack.append(w)
                elif colour[w] == colour[v]:
                    return None
    return colour
