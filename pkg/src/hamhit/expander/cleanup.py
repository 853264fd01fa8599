"""Removing low-degree vertices by bridging them with auxiliary edges, and
mapping a Hamilton cycle of the contracted graph back."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from ..graph import Edge, Graph, GraphInputError, bfs_distances, canonical, edge_distance, vertex_set
from ..hamilton.core import CycleCertificate, ForcedEdgeSet


class PreconditionError(GraphInputError):
    pass


class ContractViolation(ValueError):
    pass


@dataclass(frozen=True)
class ContractionPlan:
    """How ``G'`` was obtained from ``G``.

    ``labels[i]`` is the original id of vertex ``i`` of ``G'``. Auxiliary
    edges are stored in original ids and map to the removed vertex they
    stand in for.
    """

    removed: tuple[int, ...]
    choices: dict  # removed v -> (u, w), original ids
    aux: dict  # auxiliary edge (u, w) -> v, original ids
    labels: tuple[int, ...]

    def new_id(self) -> dict[int, int]:
        return {old: i for i, old in enumerate(self.labels)}

    def aux_edges_new(self) -> list[Edge]:
        idx = self.new_id()
        return sorted(canonical(idx[u], idx[w]) for u, w in self.aux)


def cleanup_contract(g: Graph, small: Iterable[int], min_sep: int = 3, min_small_dist: int = 4):
    """Delete each ``v`` in ``small`` and join two of its neighbours.

    Requires every small vertex to have degree at least 2 and every two
    small vertices to be more than ``min_small_dist`` apart. Returns
    ``(G', plan)``; ``plan.aux_edges_new()`` are the edges a Hamilton cycle of
    ``G'`` has to use, and they are checked to be pairwise at least
    ``min_sep`` apart in ``G'``.
    """
    xs = sorted(vertex_set(g, small))
    if not xs:
        return g, ContractionPlan((), {}, {}, tuple(range(g.n)))
    xset = set(xs)
    for v in xs:
        if len(g.adjacency[v]) < 2:
            raise PreconditionError(f"vertex {v} has degree below 2")
    for v in xs:
        for w, dist in bfs_distances(g, v, min_small_dist).items():
            if w != v and w in xset:
                raise PreconditionError(f"vertices {v} and {w} are only {dist} apart")
    choices = {}
    aux = {}
    for v in xs:
        u, w = sorted(g.adjacency[v])[:2]
        choices[v] = (u, w)
        aux[canonical(u, w)] = v
    labels = tuple(v for v in range(g.n) if v not in xset)
    idx = {old: i for i, old in enumerate(labels)}
    edges = [(idx[a], idx[b]) for a, b in g.edges if a not in xset and b not in xset]
    edges += [(idx[a], idx[b]) for a, b in aux]
    h = Graph(len(labels), edges)
    plan = ContractionPlan(tuple(xs), choices, aux, labels)
    fs = ForcedEdgeSet.of(h, plan.aux_edges_new())
    if fs.min_distance < min_sep:
        raise PreconditionError(f"auxiliary edges only {fs.min_distance} apart, need {min_sep}")
    return h, plan


def forced_edges(h: Graph, plan: ContractionPlan) -> ForcedEdgeSet:
    return ForcedEdgeSet.of(h, plan.aux_edges_new())


def decontract_cycle(cert: CycleCertificate, plan: ContractionPlan) -> CycleCertificate:
    """Replace each auxiliary edge ``uw`` on ``cert`` (ids of ``G'``) by the
    path ``u v w``; the result is in original ids."""
    seq = [plan.labels[i] for i in cert.sequence]
    if not plan.aux:
        return CycleCertificate(tuple(seq))
    L = len(seq)
    on_cycle = {canonical(seq[i], seq[(i + 1) % L]): i for i in range(L)}
    for e in plan.aux:
        if e not in on_cycle:
            raise ContractViolation(f"auxiliary edge {e} is not on the cycle")
    out = []
    for i in range(L):
        a, b = seq[i], seq[(i + 1) % L]
        out.append(a)
        v = plan.aux.get(canonical(a, b))
        if v is not None:
            out.append(v)
    return CycleCertificate(tuple(out))


def aux_distance(h: Graph, plan: ContractionPlan) -> float:
    es = plan.aux_edges_new()
    best = float("inf")
    for i, e in enumerate(es):
        for f in es[i + 1:]:
            best = min(best, edge_distance(h, e, f))
    return best
