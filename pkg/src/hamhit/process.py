"""The random subgraph process on a fixed base graph and its hitting times."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .graph import Graph, GraphInputError
from .hamilton.core import Status
from .hamilton.engine import Engine
from .hamilton.packing import IndeterminateError
from .seeding import rng


class EdgeProcess:
    """Edges of ``base`` revealed one at a time in a uniformly random order.

    The cursor only moves forward; degree counters and a degree histogram are
    kept for the prefix ``G_cursor`` so minimum-degree hitting times cost
    O(1) per edge.
    """

    def __init__(self, base: Graph, permutation: np.ndarray):
        perm = np.asarray(permutation, dtype=np.int64)
        if perm.shape != (base.m,) or not np.array_equal(np.sort(perm), np.arange(base.m)):
            raise GraphInputError("permutation must be a bijection on the edge indices")
        self.base = base
        self.permutation = perm
        self._ordered = base.edge_array[perm] if base.m else np.zeros((0, 2), dtype=np.int64)
        self.cursor = 0
        self.deg = np.zeros(base.n, dtype=np.int64)
        self.hist = [base.n]  # hist[j] = vertices of degree j in the prefix
        self.min_deg = 0
        self.tau: dict[int, int] = {0: 0}

    @property
    def n(self) -> int:
        return self.base.n

    @property
    def e_base(self) -> int:
        return self.base.m

    def ordered_edges(self) -> list[tuple[int, int]]:
        return [tuple(e) for e in self._ordered.tolist()]

    def advance(self) -> None:
        u, v = self._ordered[self.cursor]
        self.cursor += 1
        hist = self.hist
        for w in (int(u), int(v)):
            d = int(self.deg[w])
            hist[d] -= 1
            if d + 1 == len(hist):
                hist.append(0)
            hist[d + 1] += 1
            self.deg[w] = d + 1
        while hist[self.min_deg] == 0:
            self.min_deg += 1
            self.tau[self.min_deg] = self.cursor


def new_process(g: Graph, seed: int) -> EdgeProcess:
    if g.m < 1:
        raise GraphInputError("the base graph has no edges")
    return EdgeProcess(g, rng(seed).permutation(g.m))


def hitting_min_degree(proc: EdgeProcess, k: int) -> Optional[int]:
    """Smallest ``t`` with ``delta(G_t) >= k``; ``None`` if the base falls short."""
    if k < 1:
        raise GraphInputError("k must be at least 1")
    if proc.base.min_degree() < k:
        return None
    while k not in proc.tau:
        proc.advance()
    return proc.tau[k]


def snapshot(proc: EdgeProcess, t: int) -> Graph:
    if not (0 <= t <= proc.e_base):
        raise GraphInputError(f"t={t} outside [0, {proc.e_base}]")
    return Graph(proc.n, proc._ordered[:t].tolist(), strict=True)


def hitting_hamiltonicity(
    proc: EdgeProcess,
    solver: Optional[Engine] = None,
    k: int = 1,
    lower: Optional[int] = None,
) -> Optional[int]:
    """Smallest ``t >= lower`` such that ``G_t`` has ``k`` edge-disjoint
    Hamilton cycles, by bisection (the property is monotone in ``t``).

    ``lower`` defaults to ``tau_{2k}``. Returns ``None`` when the base graph
    itself fails; raises :class:`IndeterminateError` carrying the current
    bracket when a probe is inconclusive.
    """
    solver = solver or Engine()
    if k < 1:
        raise GraphInputError("k must be at least 1")
    m = proc.e_base
    if lower is None:
        lower = hitting_min_degree(proc, 2 * k)
        if lower is None:
            return None
    if not (0 <= lower <= m):
        raise GraphInputError(f"lower={lower} outside [0, {m}]")

    def probe(t: int) -> Optional[bool]:
        res = solver.pack(snapshot(proc, t), k)
        if res.status is Status.UNKNOWN:
            return None
        return res.status is Status.FOUND

    first = probe(lower)
    if first is None:
        raise IndeterminateError(f"probe at t={lower} inconclusive", lower, m)
    if first:
        return lower
    top = probe(m) if m != lower else False
    if top is None:
        raise IndeterminateError("probe on the base graph inconclusive", lower, m)
    if not top:
        return None
    lo, hi = lower, m  # lo fails, hi succeeds
    while hi - lo > 1:
        mid = (lo + hi) // 2
        r = probe(mid)
        if r is None:
            raise IndeterminateError(f"probe at t={mid} inconclusive", lo, hi)
        if r:
            hi = mid
        else:
            lo = mid
    return hi


@dataclass
class HittingReport:
    e_base: int
    tau_min_degree: dict[int, Optional[int]] = field(default_factory=dict)
    tau_hc: Optional[int] = None
    tau_khc: dict[int, Optional[int]] = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "e_base": self.e_base,
            "tau_min_degree": {str(k): v for k, v in sorted(self.tau_min_degree.items())},
            "tau_hc": self.tau_hc,
            "tau_khc": {str(k): v for k, v in sorted(self.tau_khc.items())},
        }


def sample_gp(g: Graph, p: float, seed: int) -> Graph:
    """Keep each edge independently with probability ``p``."""
    if not (0.0 <= p <= 1.0):
        raise GraphInputError("p must lie in [0, 1]")
    if g.m == 0:
        return Graph(g.n)
    keep = rng(seed).random(g.m) < p
    return Graph(g.n, g.edge_array[keep].tolist(), strict=True)


def sample_gm(g: Graph, m: int, seed: int) -> Graph:
    """Uniform subgraph with exactly ``m`` edges (a fresh process prefix)."""
    if not (0 <= m <= g.m):
        raise GraphInputError(f"m={m} outside [0, {g.m}]")
    if m == 0:
        return Graph(g.n)
    idx = rng(seed).permutation(g.m)[:m]
    return Graph(g.n, g.edge_array[np.sort(idx)].tolist(), strict=True)
