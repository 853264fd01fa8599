"""Immutable simple undirected graphs and the primitives built on them.

Vertices are the integers ``0..n-1``. Edges are stored canonically as
``(u, v)`` with ``u < v``.
"""

from __future__ import annotations

import math
from collections import deque
from functools import cached_property
from typing import Iterable, NamedTuple, Sequence, TextIO

import numpy as np

#: Distance returned for vertices in different components.
INFINITY = math.inf

Edge = tuple[int, int]


class GraphInputError(ValueError):
    """Invalid vertex, edge or set argument, or a malformed edge-list file."""


def canonical(u: int, v: int) -> Edge:
    return (u, v) if u < v else (v, u)


class Graph:
    """Simple undirected graph on ``n`` vertices.

    Duplicate edges passed to the constructor are merged; loops and
    out-of-range endpoints raise :class:`GraphInputError`. Pass
    ``strict=True`` to reject duplicates instead of merging them.
    """

    __slots__ = ("n", "edges", "adjacency", "__dict__")

    def __init__(self, n: int, edges: Iterable[Sequence[int]] = (), *, strict: bool = False):
        if n < 0:
            raise GraphInputError(f"vertex count must be non-negative, got {n}")
        seen: set[Edge] = set()
        ordered: list[Edge] = []
        for e in edges:
            u, v = int(e[0]), int(e[1])
            if u == v:
                raise GraphInputError(f"self-loop at vertex {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise GraphInputError(f"edge ({u}, {v}) has an endpoint outside [0, {n})")
            c = canonical(u, v)
            if c in seen:
                if strict:
                    raise GraphInputError(f"duplicate edge {c}")
                continue
            seen.add(c)
            ordered.append(c)
        nbrs: list[list[int]] = [[] for _ in range(n)]
        for u, v in ordered:
            nbrs[u].append(v)
            nbrs[v].append(u)
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "edges", tuple(ordered))
        object.__setattr__(self, "adjacency", tuple(tuple(sorted(a)) for a in nbrs))

    def __setattr__(self, name, value):
        if name in ("n", "edges", "adjacency"):
            raise AttributeError("Graph is immutable")
        object.__setattr__(self, name, value)

    def __reduce__(self):
        return (Graph, (self.n, self.edges))

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={self.m})"

    def __eq__(self, other) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return self.n == other.n and self.edge_set == other.edge_set

    def __hash__(self) -> int:
        return hash((self.n, self.edge_set))

    @property
    def m(self) -> int:
        return len(self.edges)

    @cached_property
    def edge_set(self) -> frozenset[Edge]:
        return frozenset(self.edges)

    @cached_property
    def neighbor_sets(self) -> tuple[frozenset[int], ...]:
        return tuple(frozenset(a) for a in self.adjacency)

    @cached_property
    def degrees(self) -> np.ndarray:
        return np.array([len(a) for a in self.adjacency], dtype=np.int64)

    @cached_property
    def edge_array(self) -> np.ndarray:
        """Edges as an ``(m, 2)`` integer array, in construction order."""
        if not self.edges:
            return np.zeros((0, 2), dtype=np.int64)
        return np.array(self.edges, dtype=np.int64)

    def has_edge(self, u: int, v: int) -> bool:
        return v in self.neighbor_sets[u] if 0 <= u < self.n else False

    def min_degree(self) -> int:
        return int(self.degrees.min()) if self.n else 0

    def max_degree(self) -> int:
        return int(self.degrees.max()) if self.n else 0

    def regular_degree(self) -> int | None:
        """The common degree if the graph is regular, else ``None``."""
        if self.n == 0:
            return 0
        d = self.degrees
        return int(d[0]) if bool((d == d[0]).all()) else None

    def remove_edges(self, drop: Iterable[Sequence[int]]) -> "Graph":
        gone = {canonical(int(a), int(b)) for a, b in drop}
        return Graph(self.n, (e for e in self.edges if e not in gone))

    def induced(self, keep: Iterable[int]) -> tuple["Graph", list[int]]:
        """Induced subgraph relabelled to ``0..k-1``; also returns the old ids."""
        old = sorted(set(keep))
        new_of = {v: i for i, v in enumerate(old)}
        sub = [(new_of[u], new_of[v]) for u, v in self.edges if u in new_of and v in new_of]
        return Graph(len(old), sub), old


# ---------------------------------------------------------------------------
# primitives


def _check_vertex(g: Graph, v: int) -> None:
    if not (isinstance(v, (int, np.integer)) and 0 <= v < g.n):
        raise GraphInputError(f"vertex {v!r} outside [0, {g.n})")


def vertex_set(g: Graph, s: Iterable[int] | None) -> frozenset[int]:
    """Validate ``s`` against ``g`` and return it as a frozenset."""
    if s is None:
        return frozenset()
    out = frozenset(int(v) for v in s)
    for v in out:
        _check_vertex(g, v)
    return out


def degree(g: Graph, v: int) -> int:
    _check_vertex(g, v)
    return len(g.adjacency[v])


def bfs_distances(g: Graph, source: int, max_depth: int | None = None) -> dict[int, int]:
    """Distances from ``source`` to every vertex reachable within ``max_depth``."""
    _check_vertex(g, source)
    dist = {source: 0}
    queue = deque([source])
    adj = g.adjacency
    while queue:
        u = queue.popleft()
        du = dist[u]
        if max_depth is not None and du >= max_depth:
            continue
        for w in adj[u]:
            if w not in dist:
                dist[w] = du + 1
                queue.append(w)
    return dist


def bfs_distance(g: Graph, u: int, v: int) -> float:
    """Shortest-path length between ``u`` and ``v``; :data:`INFINITY` if disconnected."""
    _check_vertex(g, u)
    _check_vertex(g, v)
    if u == v:
        return 0
    dist = {u: 0}
    queue = deque([u])
    adj = g.adjacency
    while queue:
        x = queue.popleft()
        for w in adj[x]:
            if w not in dist:
                if w == v:
                    return dist[x] + 1
                dist[w] = dist[x] + 1
                queue.append(w)
    return INFINITY


def edge_distance(g: Graph, e1: Sequence[int], e2: Sequence[int]) -> float:
    for e in (e1, e2):
        if not g.has_edge(int(e[0]), int(e[1])):
            raise GraphInputError(f"edge {tuple(e)} not in graph")
    best = INFINITY
    for a in e1:
        for b in e2:
            best = min(best, bfs_distance(g, int(a), int(b)))
    return best


class Neighborhood(NamedTuple):
    gamma: frozenset[int]
    """Vertices with at least one neighbour in S (may include members of S)."""
    external: frozenset[int]
    """``gamma`` minus S."""


def neighborhood(g: Graph, s: Iterable[int]) -> Neighborhood:
    members = vertex_set(g, s)
    gamma: set[int] = set()
    for v in members:
        gamma.update(g.adjacency[v])
    gamma_f = frozenset(gamma)
    return Neighborhood(gamma_f, gamma_f - members)


def count_edges(g: Graph, s: Iterable[int], t: Iterable[int] | None = None) -> int:
    """``e(S)`` when ``t`` is None, otherwise ``e(S, T)`` for disjoint S, T."""
    s_set = vertex_set(g, s)
    nbr = g.neighbor_sets
    if t is None:
        return sum(len(nbr[v] & s_set) for v in s_set) // 2
    t_set = vertex_set(g, t)
    if s_set & t_set:
        raise GraphInputError("S and T must be disjoint")
    if len(s_set) > len(t_set):
        s_set, t_set = t_set, s_set
    return sum(len(nbr[v] & t_set) for v in s_set)


def is_connected(g: Graph) -> bool:
    if g.n <= 1:
        return True
    return len(bfs_distances(g, 0)) == g.n


# ---------------------------------------------------------------------------
# named graphs used throughout tests and the CLI


def cycle_graph(n: int) -> Graph:
    return Graph(n, [(i, (i + 1) % n) for i in range(n)])


def path_graph(n: int) -> Graph:
    return Graph(n, [(i, i + 1) for i in range(n - 1)])


def star_graph(leaves: int) -> Graph:
    return Graph(leaves + 1, [(0, i) for i in range(1, leaves + 1)])


def petersen_graph() -> Graph:
    outer = [(i, (i + 1) % 5) for i in range(5)]
    spokes = [(i, i + 5) for i in range(5)]
    inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    return Graph(10, outer + spokes + inner)


# ---------------------------------------------------------------------------
# edge-list text format


def parse_edge_list(text: str | TextIO) -> Graph:
    """Parse ``n m`` followed by ``m`` lines ``u v``. ``#`` starts a comment.

    Loops and duplicate edges are rejected. Errors carry the 1-based line number.
    """
    lines = text.splitlines() if isinstance(text, str) else text.read().splitlines()
    header: tuple[int, int] | None = None
    edges: list[Edge] = []
    seen: set[Edge] = set()
    for lineno, raw in enumerate(lines, start=1):
        body = raw.split("#", 1)[0].strip()
        if not body:
            continue
        parts = body.split()
        if len(parts) != 2:
            raise GraphInputError(f"line {lineno}: expected two integers, got {body!r}")
        try:
            a, b = int(parts[0]), int(parts[1])
        except ValueError:
            raise GraphInputError(f"line {lineno}: non-integer token in {body!r}") from None
        if header is None:
            if a < 0 or b < 0:
                raise GraphInputError(f"line {lineno}: negative header value")
            header = (a, b)
            continue
        n = header[0]
        if a == b:
            raise GraphInputError(f"line {lineno}: self-loop at vertex {a}")
        if not (0 <= a < n and 0 <= b < n):
            raise GraphInputError(f"line {lineno}: vertex out of range [0, {n})")
        c = canonical(a, b)
        if c in seen:
            raise GraphInputError(f"line {lineno}: duplicate edge {c}")
        seen.add(c)
        edges.append(c)
    if header is None:
        raise GraphInputError("line 1: missing 'n m' header")
    if len(edges) != header[1]:
        raise GraphInputError(
            f"line {len(lines)}: header declares {header[1]} edges, found {len(edges)}"
        )
    return Graph(header[0], edges)


def read_edge_list(path) -> Graph:
    with open(path, encoding="utf-8") as fh:
        return parse_edge_list(fh)


def format_edge_list(g: Graph) -> str:
    lines = [f"{g.n} {g.m}"]
    lines.extend(f"{u} {v}" for u, v in g.edges)
    return "\n".join(lines) + "\n"


def write_edge_list(g: Graph, path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(format_edge_list(g))
