"""Edge-disjoint Hamilton cycle packing: greedy peeling and an exhaustive
search for small graphs."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

from ..graph import Graph
from .core import CycleCertificate, HamiltonResult, Status, verify_cycle

EXHAUSTIVE_MAX_N = 9


class IndeterminateError(RuntimeError):
    """A Hamiltonicity decision was needed but the engine gave up."""

    def __init__(self, message: str, lo: Optional[int] = None, hi: Optional[int] = None):
        super().__init__(message)
        self.lo = lo
        self.hi = hi


@dataclass
class PackResult:
    status: Status
    cycles: list[CycleCertificate] = field(default_factory=list)
    failed_at: Optional[int] = None  # 0-based index of the cycle that could not be found
    reason: str = ""

    @property
    def found(self) -> bool:
        return self.status is Status.FOUND

    def to_dict(self) -> dict:
        return {
            "found": self.status.to_json(),
            "cycles": [list(c.sequence) for c in self.cycles],
            "failed_at": self.failed_at,
            "reason": self.reason,
        }


def pairwise_disjoint(cycles: list[CycleCertificate]) -> bool:
    seen: set = set()
    for c in cycles:
        e = c.edges
        if seen & e:
            return False
        seen |= e
    return True


def greedy_peel(g: Graph, k: int, solve: Callable[[Graph, int], HamiltonResult], attempt: int = 0) -> PackResult:
    """Find a Hamilton cycle, delete its edges, repeat ``k`` times.

    ``solve(graph, seed)`` is the single-cycle engine. A NONE answer on the
    untouched graph is a proof; later failures only reflect earlier choices.
    """
    if k < 1:
        raise ValueError("k must be at least 1")
    cur = g
    cycles: list[CycleCertificate] = []
    for i in range(k):
        res = solve(cur, attempt * 7919 + i)
        if res.status is Status.FOUND:
            cycles.append(res.certificate)
            cur = cur.remove_edges(res.certificate.edges)
            continue
        status = Status.NONE if (i == 0 and res.status is Status.NONE) else Status.UNKNOWN
        return PackResult(status, cycles, i, res.reason or "no cycle found")
    assert pairwise_disjoint(cycles)
    return PackResult(Status.FOUND, cycles)


def all_hamilton_cycles(g: Graph) -> list[CycleCertificate]:
    """Every Hamilton cycle once (rooted at 0, one direction)."""
    n = g.n
    if n < 3:
        return []
    nbr = g.neighbor_sets
    adj = [sorted(a) for a in g.adjacency]
    out = []
    path = [0]
    on = [False] * n
    on[0] = True

    def rec():
        v = path[-1]
        if len(path) == n:
            if 0 in nbr[v] and path[1] < path[-1]:
                out.append(CycleCertificate(tuple(path)))
            return
        for w in adj[v]:
            if not on[w]:
                on[w] = True
                path.append(w)
                rec()
                path.pop()
                on[w] = False

    rec()
    return out


def exhaustive_packing(g: Graph, k: int) -> PackResult:
    """Decide exactly whether ``k`` edge-disjoint Hamilton cycles exist."""
    if g.n > EXHAUSTIVE_MAX_N:
        raise ValueError(f"exhaustive packing limited to n <= {EXHAUSTIVE_MAX_N}")
    if g.m < k * g.n:
        return PackResult(Status.NONE, failed_at=None, reason="too few edges")
    cycles = all_hamilton_cycles(g)
    edge_sets = [c.edges for c in cycles]
    chosen: list[int] = []

    def rec(start: int, used: frozenset) -> bool:
        if len(chosen) == k:
            return True
        for i in range(start, len(cycles)):
            if used & edge_sets[i]:
                continue
            chosen.append(i)
            if rec(i + 1, used | edge_sets[i]):
                return True
            chosen.pop()
        return False

    if rec(0, frozenset()):
        picked = [cycles[i] for i in chosen]
        assert all(verify_cycle(g, c) for c in picked) and pairwise_disjoint(picked)
        return PackResult(Status.FOUND, picked)
    return PackResult(Status.NONE, reason="exhaustive search")
