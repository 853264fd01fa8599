"""Searching for vertex sets that violate expansion or joinedness.

Exact mode enumerates every subset through bitmasks (vectorised with numpy,
so ``n <= 22``). Sampled mode tries uniform subsets per size class plus
adversarial candidates (BFS balls, low-degree unions, greedy growth); it can
refute but never certify.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Optional

import numpy as np

from ..graph import Graph, GraphInputError, neighborhood
from ..seeding import rng

EXACT_MAX_N = 22


@dataclass(frozen=True)
class SearchOutcome:
    witness: Optional[tuple]  # violating set, or (S, T) for joinedness
    checked: int
    exhaustive: bool


def _gamma_table(g: Graph) -> tuple[np.ndarray, np.ndarray]:
    n = g.n
    if n > EXACT_MAX_N:
        raise GraphInputError(f"exact enumeration limited to n <= {EXACT_MAX_N}")
    adj = np.zeros(n, dtype=np.uint32)
    for v in range(n):
        m = 0
        for w in g.adjacency[v]:
            m |= 1 << w
        adj[v] = m
    gamma = np.zeros(1 << n, dtype=np.uint32)
    for i in range(n):
        lo = 1 << i
        gamma[lo: 2 * lo] = gamma[:lo] | adj[i]
    idx = np.arange(1 << n, dtype=np.uint32)
    return idx, gamma


def _members(mask: int) -> frozenset[int]:
    return frozenset(i for i in range(mask.bit_length()) if mask >> i & 1)


def _size_classes(limit: int, cap: int = 24) -> list[int]:
    if limit <= cap:
        return list(range(1, limit + 1))
    grid = np.unique(np.round(np.geomspace(1, limit, cap)).astype(int))
    return [int(s) for s in grid]


def expansion_search(
    g: Graph,
    factor: float,
    max_size: float,
    allowed: Optional[Iterable[int]] = None,
    *,
    exact: bool,
    trials: int = 200,
    adversarial: int = 50,
    seed: int = 0,
) -> SearchOutcome:
    """Look for nonempty ``W ⊆ allowed`` with ``|W| <= max_size`` and
    ``|N(W)| < factor |W|``."""
    n = g.n
    allowed_set = frozenset(range(n)) if allowed is None else frozenset(allowed)
    limit = min(int(math.floor(max_size + 1e-9)), len(allowed_set))
    if limit < 1:
        return SearchOutcome(None, 0, True)
    if exact:
        idx, gamma = _gamma_table(g)
        amask = sum(1 << v for v in allowed_set)
        pc = np.bitwise_count(idx)
        ext = np.bitwise_count(gamma & ~idx)
        cand = (pc >= 1) & (pc <= limit) & ((idx & np.uint32(~amask & 0xFFFFFFFF)) == 0)
        bad = cand & (ext < factor * pc)
        checked = int(cand.sum())
        if not bad.any():
            return SearchOutcome(None, checked, True)
        hits = np.flatnonzero(bad)
        best = hits[np.lexsort((hits, pc[hits]))[0]]
        return SearchOutcome((_members(int(best)),), checked, True)

    gen = rng(seed, 0x5E75)
    pool = np.array(sorted(allowed_set), dtype=np.int64)
    adj = g.adjacency
    checked = 0

    def bad(w: frozenset) -> bool:
        return len(neighborhood(g, w).external) < factor * len(w)

    degs = g.degrees
    low_first = sorted(allowed_set, key=lambda v: (degs[v], v))
    for s in _size_classes(limit):
        cands: list[frozenset] = []
        for _ in range(trials):
            cands.append(frozenset(gen.choice(pool, size=s, replace=False).tolist()))
        cands.append(frozenset(low_first[:s]))
        for a in range(adversarial):
            start = int(pool[gen.integers(len(pool))])
            if a % 10 == 9 and s <= 200:
                cands.append(_greedy_grow(g, start, s, allowed_set))
            else:
                cands.append(_ball(adj, start, s, allowed_set))
        for w in cands:
            checked += 1
            if len(w) == s and bad(w):
                return SearchOutcome((w,), checked, False)
    return SearchOutcome(None, checked, False)


def _ball(adj, start: int, s: int, allowed: frozenset) -> frozenset:
    """First ``s`` allowed vertices met by BFS from ``start``."""
    out = [start] if start in allowed else []
    seen = {start}
    frontier = [start]
    while frontier and len(out) < s:
        nxt = []
        for u in frontier:
            for w in adj[u]:
                if w not in seen:
                    seen.add(w)
                    nxt.append(w)
                    if w in allowed and len(out) < s:
                        out.append(w)
        frontier = nxt
    return frozenset(out)


def _greedy_grow(g: Graph, start: int, s: int, allowed: frozenset) -> frozenset:
    """Grow from ``start`` adding the neighbour that keeps ``N(W)`` smallest."""
    adj = g.neighbor_sets
    w = {start}
    outside = set(adj[start])
    while len(w) < s:
        best, best_cost = None, None
        for v in outside:
            if v not in allowed or v in w:
                continue
            cost = len(adj[v] - w - outside)
            if best_cost is None or cost < best_cost:
                best, best_cost = v, cost
        if best is None:
            break
        w.add(best)
        outside |= adj[best]
        outside -= w
    return frozenset(w)


def joined_search(
    g: Graph,
    size: float,
    *,
    exact: bool,
    trials: int = 200,
    adversarial: int = 50,
    seed: int = 0,
    need: float = 1.0,
) -> SearchOutcome:
    """Look for disjoint ``S, T`` with ``|S|, |T| >= size`` and
    ``e(S, T) < need``.

    With ``need = 1`` it suffices to test ``|S| = |T| = s``: any violating
    pair contains a violating pair of exactly that size. Sets are nonempty,
    so ``s = max(1, ceil(size))``.
    """
    n = g.n
    s = max(1, math.ceil(size - 1e-9))
    if 2 * s > n:
        return SearchOutcome(None, 0, True)
    if need != 1.0:
        return _weighted_joined(g, s, need, trials, adversarial, seed)
    if exact:
        idx, gamma = _gamma_table(g)
        full = np.uint32((1 << n) - 1)
        pc = np.bitwise_count(idx)
        rest = full & ~(idx | gamma)
        cand = pc == s
        bad = cand & (np.bitwise_count(rest) >= s)
        checked = int(cand.sum())
        if not bad.any():
            return SearchOutcome(None, checked, True)
        best = int(np.flatnonzero(bad)[0])
        S = _members(best)
        T = frozenset(sorted(_members(int(rest[best])))[:s])
        return SearchOutcome((S, T), checked, True)

    gen = rng(seed, 0x701E)
    adj = g.adjacency
    allv = frozenset(range(n))
    checked = 0
    starts = []
    for _ in range(trials):
        starts.append(frozenset(gen.choice(n, size=s, replace=False).tolist()))
    for _ in range(adversarial):
        starts.append(_ball(adj, int(gen.integers(n)), s, allv))
    for S in starts:
        checked += 1
        if len(S) != s:
            continue
        rest = allv - S - neighborhood(g, S).external
        if len(rest) >= s:
            return SearchOutcome((S, frozenset(sorted(rest)[:s])), checked, False)
    return SearchOutcome(None, checked, False)


def _weighted_joined(g, s, need, trials, adversarial, seed) -> SearchOutcome:
    """Sampled check of ``e(S, T) >= need`` for disjoint sets of size ``s``;
    T is chosen greedily as the ``s`` vertices outside S with fewest edges
    into S, which is the worst case for the given S."""
    n = g.n
    gen = rng(seed, 0x3E11)
    nbr = g.neighbor_sets
    adj = g.adjacency
    allv = frozenset(range(n))
    starts = [frozenset(gen.choice(n, size=s, replace=False).tolist()) for _ in range(trials)]
    starts += [_ball(adj, int(gen.integers(n)), s, allv) for _ in range(adversarial)]
    checked = 0
    for S in starts:
        if len(S) != s:
            continue
        checked += 1
        outside = sorted(allv - S, key=lambda v: (len(nbr[v] & S), v))
        T = frozenset(outside[:s])
        e = sum(len(nbr[v] & S) for v in T)
        if e < need:
            return SearchOutcome((S, T), checked, False)
    return SearchOutcome(None, checked, False)
