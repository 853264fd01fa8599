"""Probe policy combining the cheap refutations, the heuristic and the exact
search."""

from __future__ import annotations

from dataclasses import dataclass

from ..graph import Graph
from .core import HamiltonResult, Status, as_forced, quick_refutation
from .exact import DEFAULT_BUDGET, exact_hamilton
from .packing import EXHAUSTIVE_MAX_N, PackResult, exhaustive_packing, greedy_peel
from .posa import posa_hamilton

KINDS = ("auto", "exact", "posa")


@dataclass(frozen=True)
class Engine:
    """``auto``: sound refutation, then Pósa, then exact search with the full
    node budget when ``n <= exact_threshold`` and with ``large_budget`` above
    it; a search that runs out of budget is UNKNOWN."""

    kind: str = "auto"
    restarts: int = 50
    budget: int = DEFAULT_BUDGET
    exact_threshold: int = 24
    seed: int = 0
    pack_attempts: int = 5
    large_budget: int = 100_000

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown engine kind {self.kind!r}")

    def solve(self, g: Graph, forced=None, seed: int | None = None) -> HamiltonResult:
        seed = self.seed if seed is None else seed
        if self.kind == "exact":
            return exact_hamilton(g, forced, self.budget)
        if self.kind == "posa":
            return posa_hamilton(g, forced, self.restarts, seed)
        fs = as_forced(g, forced)
        if g.n < 3 or g.min_degree() < 2:
            return HamiltonResult(Status.NONE, reason="minimum degree below 2" if g.n >= 3 else "too small")
        why = quick_refutation(g, fs)
        if why is not None:
            return HamiltonResult(Status.NONE, reason=why)
        res = posa_hamilton(g, fs, self.restarts, seed)
        if res.status is not Status.UNKNOWN:
            return res
        budget = self.budget if g.n <= self.exact_threshold else self.large_budget
        out = exact_hamilton(g, fs, budget)
        if out.status is Status.UNKNOWN:
            out.stats.update(posa=res.stats)
        return out

    def pack(self, g: Graph, k: int) -> PackResult:
        """``k`` edge-disjoint Hamilton cycles, or a proof/indeterminate result."""
        if k < 1:
            raise ValueError("k must be at least 1")
        if g.n < 3 or g.min_degree() < 2 * k or g.m < k * g.n:
            return PackResult(Status.NONE, failed_at=0, reason="degree or edge count too small")
        last = None
        for attempt in range(max(1, self.pack_attempts if k > 1 else 1)):
            res = greedy_peel(g, k, lambda h, s: self.solve(h, seed=self.seed + s), attempt)
            if res.status is not Status.UNKNOWN:
                return res
            last = res
        if g.n <= EXHAUSTIVE_MAX_N:
            return exhaustive_packing(g, k)
        return last
