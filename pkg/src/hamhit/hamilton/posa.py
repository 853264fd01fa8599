"""Randomised Pósa rotation-extension with locked (forced) edges.

Locked edges are grouped into segments (maximal locked paths). The path is
always a concatenation of whole segments: extension appends a segment
atomically, and a rotation may only break an unlocked edge, so no locked edge
is ever lost.
"""

from __future__ import annotations

import numpy as np

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


class _Walk:
    def __init__(self, red, gen: np.random.Generator, debug: bool):
        self.n = red.n
        self.usable = [sorted(a - l) for a, l in zip(red.usable, red.locked)]
        self.usable_set = [set(u) for u in self.usable]
        self.locked = red.locked
        self.red = red
        self.gen = gen
        self.debug = debug
        self.rotations = 0
        self.extensions = 0

    # --- path bookkeeping -------------------------------------------------

    def start(self, v: int) -> None:
        n = self.n
        self.pos = [-1] * n
        self.path: list[int] = []
        self.free = [len(a) for a in self.usable]  # unvisited usable neighbours
        self._append_segment(v)

    def _mark(self, v: int) -> None:
        self.pos[v] = len(self.path)
        self.path.append(v)
        for w in self.usable[v]:
            self.free[w] -= 1

    def _append_segment(self, v: int) -> None:
        for w in self.red.segment_from(v):
            self._mark(w)

    def _reverse_from(self, i: int) -> None:
        """Reverse ``path[i:]`` in place."""
        p = self.path
        p[i:] = p[i:][::-1]
        for j in range(i, len(p)):
            self.pos[p[j]] = j

    def flip(self) -> None:
        self._reverse_from(0)

    def _check(self) -> None:
        p, pos = self.path, self.pos
        for v in p:
            for w in self.locked[v]:
                if pos[w] != -1:
                    assert abs(pos[v] - pos[w]) == 1 or (
                        len(p) == self.n and {pos[v], pos[w]} == {0, self.n - 1}
                    ), f"locked edge ({v}, {w}) broken"
                else:
                    assert pos[v] in (0, len(p) - 1), f"locked edge ({v}, {w}) dangling"

    # --- moves ------------------------------------------------------------

    def extend(self) -> bool:
        end = self.path[-1]
        cands = [w for w in self.usable[end] if self.pos[w] == -1]
        if not cands:
            return False
        best = min(self.free[w] for w in cands)
        pool = [w for w in cands if self.free[w] == best]
        w = pool[int(self.gen.integers(len(pool)))] if len(pool) > 1 else pool[0]
        self._append_segment(w)
        self.extensions += 1
        if self.debug:
            self._check()
        return True

    def pivots(self) -> list[int]:
        """Indices ``i`` such that rotating at ``path[i]`` is admissible."""
        p, pos = self.path, self.pos
        end = p[-1]
        k = len(p) - 1
        out = []
        for w in self.usable[end]:
            i = pos[w]
            if i == -1 or i >= k - 1:
                continue
            if p[i + 1] in self.locked[w]:
                continue
            out.append(i)
        return out

    def rotate(self, i: int) -> None:
        self._reverse_from(i + 1)
        self.rotations += 1
        if self.debug:
            self._check()

    def choose_pivot(self, piv: list[int], explore: float) -> int:
        """Prefer the rotation whose new endpoint has the most unvisited
        neighbours; ties (and an ``explore`` fraction of moves) are random."""
        p = self.path
        if self.gen.random() < explore:
            return piv[int(self.gen.integers(len(piv)))]
        scores = [self.free[p[i + 1]] for i in piv]
        best = max(scores)
        pool = [i for i, s in zip(piv, scores) if s == best]
        return pool[int(self.gen.integers(len(pool)))] if len(pool) > 1 else pool[0]

    def closing_pivots(self, piv: list[int]) -> list[int]:
        first = self.path[0]
        return [i for i in piv if first in self.usable_set[self.path[i + 1]]]

    def can_close(self) -> bool:
        p = self.path
        return p[0] in self.usable_set[p[-1]] or p[0] in self.locked[p[-1]]

    def break_cycle(self) -> bool:
        """The path closes into a non-spanning cycle: reopen it next to a
        vertex with an unvisited neighbour, making the path one longer."""
        p = self.path
        L = len(p)
        for j in self.gen.permutation(L):
            j = int(j)
            v = p[j]
            if self.free[v] == 0:
                continue
            # open the cycle at an unlocked edge at v so that v becomes the end
            if p[(j + 1) % L] not in self.locked[v]:
                new = p[j + 1:] + p[: j + 1]
            elif p[j - 1] not in self.locked[v]:
                new = (p[j:] + p[:j])[::-1]
            else:
                continue
            self.path = new
            for idx, u in enumerate(new):
                self.pos[u] = idx
            if self.debug:
                self._check()
            return True
        return False


def posa_hamilton(
    g: Graph,
    forced=None,
    restarts: int = 50,
    seed: int = 0,
    *,
    steps_per_restart: int | None = None,
    growth: float = 1.5,
    max_growth: float = 8.0,
    explore: float = 0.1,
    debug: bool = False,
) -> HamiltonResult:
    """Search for a Hamilton cycle containing every forced edge.

    A returned certificate is always verified. ``NONE`` is returned only when
    the forced-edge reduction proves infeasibility; an unsuccessful search is
    ``UNKNOWN`` and says nothing about existence.
    """
    fs = as_forced(g, forced)
    try:
        red = reduce_instance(g, fs)
    except Refuted as exc:
        return HamiltonResult(Status.NONE, stats={"restarts": 0}, reason=str(exc))
    n = g.n
    gen = np.random.default_rng(seed)
    walk = _Walk(red, gen, debug)
    seg_ends = [v for v in range(n) if len(red.locked[v]) < 2]
    if not seg_ends:  # the locked edges already form the Hamilton cycle
        cyc = red.segment_from(0)
        return _finish(g, fs, cyc, walk, 0)
    budget = steps_per_restart if steps_per_restart is not None else 20 * n + 200
    for r in range(max(1, restarts)):
        walk.start(seg_ends[int(gen.integers(len(seg_ends)))])
        steps = 0
        limit = int(budget * min(growth**r, max_growth))
        while steps < limit:
            steps += 1
            if walk.extend():
                continue
            spanning = len(walk.path) == n
            if walk.can_close():
                if spanning:
                    return _finish(g, fs, walk.path, walk, r)
                if walk.break_cycle():
                    continue
            piv = walk.pivots()
            if not piv:
                walk.flip()
                piv = walk.pivots()
                if not piv:
                    break
            if spanning:
                closing = walk.closing_pivots(piv)
                if closing:
                    walk.rotate(closing[int(gen.integers(len(closing)))])
                    continue
            if gen.random() < 0.05:
                walk.flip()
                continue
            walk.rotate(walk.choose_pivot(piv, explore))
    return HamiltonResult(
        Status.UNKNOWN,
        stats={"restarts": max(1, restarts), "rotations": walk.rotations, "extensions": walk.extensions},
        reason="restart budget exhausted",
    )


def _finish(g, fs, seq, walk, r) -> HamiltonResult:
    cert = CycleCertificate(tuple(seq))
    if not verify_cycle(g, cert, fs):  # pragma: no cover - guards engine bugs
        raise AssertionError("posa produced an invalid certificate")
    return HamiltonResult(
        Status.FOUND,
        cert,
        {"restarts": r + 1, "rotations": walk.rotations, "extensions": walk.extensions},
    )
