"""Structural property verifiers for process snapshots.

Three suites: the sparse list (SMALL count, SMALL separation, joinedness,
expansion outside SMALL), the dense list (the same plus a maximum-degree
cap), and the per-round list for peel sequences ``G^(0) ⊇ G^(1) ⊇ ...``
together with the three edge-count estimates used alongside it.

Every check reports the raw quantity next to its bound. A failure always
carries a witness that graph-core primitives alone can re-check.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any, Optional, Sequence

from ..graph import Graph, GraphInputError, bfs_distances, count_edges, neighborhood
from ..seeding import rng
from .params import ExpanderParams, preset
from .sets import EXACT_MAX_N, _ball, _size_classes, expansion_search, joined_search

PASS = "pass"
FAIL = "fail"
VACUOUS = "vacuous"
PLAUSIBLE = "plausible"


def small_set(g: Graph, threshold: float) -> frozenset[int]:
    """Vertices of degree at most ``threshold``."""
    if threshold < 0:
        raise GraphInputError("threshold must be non-negative")
    return frozenset(int(v) for v in (g.degrees <= threshold).nonzero()[0])


@dataclass
class PropertyCheck:
    name: str
    status: str
    quantity: Any = None
    bound: Any = None
    witness: Any = None
    mode: str = "exact"

    @property
    def passed(self) -> bool:
        return self.status != FAIL

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "status": self.status,
            "quantity": _jsonable(self.quantity),
            "bound": _jsonable(self.bound),
            "witness": _jsonable(self.witness),
            "mode": self.mode,
        }


def _jsonable(x):
    if isinstance(x, (frozenset, set)):
        return sorted(x)
    if isinstance(x, (tuple, list)):
        return [_jsonable(y) for y in x]
    if isinstance(x, float) and not math.isfinite(x):
        return "inf" if x > 0 else "-inf"
    return x


@dataclass
class PropertyReport:
    suite: str
    checks: list[PropertyCheck] = field(default_factory=list)
    small: frozenset[int] = frozenset()
    thresholds: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def __getitem__(self, name: str) -> PropertyCheck:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def failures(self) -> list[PropertyCheck]:
        return [c for c in self.checks if not c.passed]

    def to_dict(self) -> dict:
        return {
            "suite": self.suite,
            "passed": self.passed,
            "small": sorted(self.small),
            "thresholds": {k: _jsonable(v) for k, v in self.thresholds.items()},
            "checks": [c.to_dict() for c in self.checks],
        }


# --- individual checks ----------------------------------------------------


def check_small_count(name: str, small: frozenset, n: int, exponent: float) -> PropertyCheck:
    bound = n**exponent
    ok = len(small) <= bound
    return PropertyCheck(name, PASS if ok else FAIL, len(small), bound, None if ok else small)


def check_separation(name: str, g: Graph, small: frozenset, min_dist: int) -> PropertyCheck:
    """Every two SMALL vertices are more than ``min_dist`` apart."""
    if len(small) < 2:
        return PropertyCheck(name, VACUOUS, None, min_dist)
    for u in sorted(small):
        dist = bfs_distances(g, u, min_dist)
        for v, dv in dist.items():
            if v != u and v in small:
                pair = (min(u, v), max(u, v))
                return PropertyCheck(name, FAIL, dv, min_dist, pair)
    return PropertyCheck(name, PASS, None, min_dist)


def check_max_degree(name: str, g: Graph, bound: float) -> PropertyCheck:
    if g.n == 0:
        return PropertyCheck(name, VACUOUS, 0, bound)
    v = int(g.degrees.argmax())
    top = int(g.degrees[v])
    ok = top <= bound
    return PropertyCheck(name, PASS if ok else FAIL, top, bound, None if ok else v)


def _mode(g: Graph, params: ExpanderParams, mode: str) -> bool:
    if mode == "auto":
        return g.n <= min(params.exact_max_n, EXACT_MAX_N)
    if mode == "exact":
        if g.n > EXACT_MAX_N:
            raise GraphInputError(f"exact mode needs n <= {EXACT_MAX_N}")
        return True
    if mode == "sampled":
        return False
    raise GraphInputError(f"unknown mode {mode!r}")


def check_joined(name: str, g: Graph, size: float, params: ExpanderParams, exact: bool, stream: int = 0) -> PropertyCheck:
    s = max(1, math.ceil(size - 1e-9))
    out = joined_search(
        g, size, exact=exact, trials=params.trials, adversarial=params.adversarial, seed=params.seed + stream
    )
    mode = "exact" if exact else "sampled"
    if 2 * s > g.n:
        return PropertyCheck(name, VACUOUS, None, size, mode=mode)
    if out.witness is not None:
        S, T = out.witness
        return PropertyCheck(name, FAIL, 0, 1, (S, T), mode)
    return PropertyCheck(name, PASS if exact else PLAUSIBLE, out.checked, size, mode=mode)


def check_expansion(
    name: str, g: Graph, factor: float, max_size: float, allowed, params: ExpanderParams, exact: bool, stream: int = 0
) -> PropertyCheck:
    mode = "exact" if exact else "sampled"
    allowed = frozenset(allowed)
    if min(math.floor(max_size + 1e-9), len(allowed)) < 1:
        return PropertyCheck(name, VACUOUS, None, max_size, mode=mode)
    out = expansion_search(
        g, factor, max_size, allowed, exact=exact,
        trials=params.trials, adversarial=params.adversarial, seed=params.seed + stream,
    )
    if out.witness is not None:
        (w,) = out.witness
        ext = len(neighborhood(g, w).external)
        return PropertyCheck(name, FAIL, ext, factor * len(w), w, mode)
    return PropertyCheck(name, PASS if exact else PLAUSIBLE, out.checked, factor, mode=mode)


# --- suites ---------------------------------------------------------------


def verify_sparse_properties(
    g: Graph, d: int, params: Optional[ExpanderParams] = None, mode: str = "auto"
) -> PropertyReport:
    """The sparse-regime list on a snapshot of a ``d``-regular base."""
    params = params or preset("asymptotic-sparse")
    n = g.n
    exact = _mode(g, params, mode)
    thr = d / params.small_div
    small = small_set(g, thr)
    c1 = params.C1
    rep = PropertyReport("sparse", small=small, thresholds={
        "small_threshold": thr, "C": params.C, "C1": c1,
        "small_bound": n**params.small_exp, "joined_size": params.p3_limit(n), "expansion_size": n / (2 * c1),
    })
    rep.checks.append(check_small_count("P1", small, n, params.small_exp))
    rep.checks.append(check_separation("P2", g, small, params.min_dist))
    rep.checks.append(check_joined("P3", g, params.p3_limit(n), params, exact, 1))
    large = frozenset(range(n)) - small
    rep.checks.append(check_expansion("P4", g, c1, n / (2 * c1), large, params, exact, 2))
    return rep


def verify_dense_properties(
    g: Graph, d: int, params: Optional[ExpanderParams] = None, mode: str = "auto"
) -> PropertyReport:
    """The dense-regime list: a degree cap plus the sparse list with a
    ``log n`` based SMALL threshold."""
    params = params or preset("asymptotic-dense")
    n = g.n
    exact = _mode(g, params, mode)
    logn = math.log(n) if n > 1 else 0.0
    thr = logn / params.small_div
    small = small_set(g, thr)
    c1 = params.C1
    rep = PropertyReport("dense", small=small, thresholds={
        "small_threshold": thr, "max_degree": params.maxdeg_factor * logn, "C": params.C, "C1": c1,
        "small_bound": n**params.small_exp, "joined_size": params.p3_limit(n), "expansion_size": n / (2 * c1),
    })
    rep.checks.append(check_max_degree("Q1", g, params.maxdeg_factor * logn))
    rep.checks.append(check_small_count("Q2", small, n, params.small_exp))
    rep.checks.append(check_separation("Q3", g, small, params.min_dist))
    rep.checks.append(check_joined("Q4", g, params.p3_limit(n), params, exact, 1))
    large = frozenset(range(n)) - small
    rep.checks.append(check_expansion("Q5", g, c1, n / (2 * c1), large, params, exact, 2))
    return rep


def d_hat(d: int, n: int) -> float:
    return min(float(d), 10 * math.log(n)) if n > 1 else float(d)


def verify_h_properties(
    graphs: Sequence[Graph],
    d: int,
    params: Optional[ExpanderParams] = None,
    k: Optional[int] = None,
    mode: str = "auto",
) -> PropertyReport:
    """Per-round checks on a peel sequence ``G^(0), ..., G^(k-1)``.

    Each ``G^(i+1)`` must be a subgraph of ``G^(i)`` on the same vertices.
    Besides the five per-round properties this reports whether each round
    removed exactly a 2-factor, and the three edge-count estimates on
    ``G^(0)``.
    """
    params = params or preset("asymptotic-h")
    graphs = list(graphs)
    if not graphs:
        raise GraphInputError("empty sequence")
    if k is not None and k != len(graphs):
        raise GraphInputError(f"expected {k} graphs, got {len(graphs)}")
    n = graphs[0].n
    for a, b in zip(graphs, graphs[1:]):
        if b.n != n or not b.edge_set <= a.edge_set:
            raise GraphInputError("sequence is not nested-decreasing")
    dh = d_hat(d, n)
    c1 = params.C1
    C = params.C
    small_thr = dh / params.small_div
    medium_thr = dh / params.medium_div
    rep = PropertyReport("h", small=small_set(graphs[0], small_thr), thresholds={
        "d_hat": dh, "small_threshold": small_thr, "medium_threshold": medium_thr, "C": C, "C1": c1,
        "small_bound": n**params.small_exp, "expansion_size": n / (2 * c1), "joined_size": n / (2 * c1),
    })
    for i, g in enumerate(graphs):
        exact = _mode(g, params, mode)
        small = small_set(g, small_thr)
        rep.checks.append(check_max_degree(f"H1[{i}]", g, dh))
        rep.checks.append(check_small_count(f"H2[{i}]", small, n, params.small_exp))
        rep.checks.append(check_separation(f"H3[{i}]", g, small, params.min_dist))
        large = frozenset(range(n)) - small
        rep.checks.append(check_expansion(f"H4[{i}]", g, c1, n / (2 * c1), large, params, exact, 10 * i + 1))
        rep.checks.append(check_joined(f"H5[{i}]", g, n / (2 * c1), params, exact, 10 * i + 2))
    for i, (a, b) in enumerate(zip(graphs, graphs[1:])):
        drop = a.degrees - b.degrees
        bad = [int(v) for v in (drop != 2).nonzero()[0]]
        rep.checks.append(PropertyCheck(
            f"peel[{i}]", FAIL if bad else PASS, int(drop.min()) if n else 0, 2, bad[0] if bad else None
        ))

    g0 = graphs[0]
    medium = small_set(g0, medium_thr)
    rep.checks.append(check_small_count("medium-count", medium, n, params.small_exp))
    rep.checks.append(_check_pair_edges(g0, dh, C, params))
    rep.checks.append(_check_few_edges_inside(g0, dh, C, c1, params))
    rep.checks.append(_check_edge_expansion(g0, dh, small_set(g0, small_thr), params))
    return rep


def _check_pair_edges(g: Graph, dh: float, C: float, params: ExpanderParams) -> PropertyCheck:
    """Disjoint S, T of size n / C^(1/3) span at least d_hat |S| / C edges."""
    n = g.n
    size = n / C ** (1 / 3)
    s = max(1, math.ceil(size - 1e-9))
    need = dh * s / C
    if 2 * s > n:
        return PropertyCheck("pair-edges", VACUOUS, None, need, mode="sampled")
    out = joined_search(g, size, exact=False, trials=params.trials, adversarial=params.adversarial,
                        seed=params.seed + 101, need=need)
    if out.witness is not None:
        S, T = out.witness
        return PropertyCheck("pair-edges", FAIL, count_edges(g, S, T), need, (S, T), "sampled")
    return PropertyCheck("pair-edges", PLAUSIBLE, out.checked, need, mode="sampled")


def _check_few_edges_inside(g: Graph, dh: float, C: float, c1: float, params: ExpanderParams) -> PropertyCheck:
    """Sets of size at most n / C^(1/8) span fewer than d_hat |S| / (11^6 C_1) edges."""
    n = g.n
    limit = int(math.floor(n / C ** (1 / 8) + 1e-9))
    limit = min(limit, n)
    if limit < 1:
        return PropertyCheck("few-edges-inside", VACUOUS, None, None, mode="sampled")
    gen = rng(params.seed, 0xFE17)
    adj = g.adjacency
    allv = frozenset(range(n))
    checked = 0
    for s in _size_classes(limit):
        bound = dh * s / (params.few_edges_div * c1)
        cands = [frozenset(gen.choice(n, size=s, replace=False).tolist()) for _ in range(params.trials)]
        cands += [_ball(adj, int(gen.integers(n)), s, allv) for _ in range(params.adversarial)]
        for S in cands:
            if len(S) != s:
                continue
            checked += 1
            e = count_edges(g, S)
            if e >= bound:
                return PropertyCheck("few-edges-inside", FAIL, e, bound, S, "sampled")
    return PropertyCheck("few-edges-inside", PLAUSIBLE, checked, None, mode="sampled")


def _check_edge_expansion(g: Graph, dh: float, small: frozenset, params: ExpanderParams) -> PropertyCheck:
    """Sets outside SMALL with |S| <= n/2 send at least factor * d_hat |S| edges out."""
    n = g.n
    pool = sorted(frozenset(range(n)) - small)
    limit = min(n // 2, len(pool))
    if limit < 1:
        return PropertyCheck("edge-expansion", VACUOUS, None, None, mode="sampled")
    gen = rng(params.seed, 0xED6E)
    adj = g.adjacency
    allowed = frozenset(pool)
    checked = 0
    for s in _size_classes(limit):
        bound = params.edge_exp_factor * dh * s
        cands = [frozenset(gen.choice(pool, size=s, replace=False).tolist()) for _ in range(params.trials)]
        cands += [_ball(adj, int(gen.choice(pool)), s, allowed) for _ in range(params.adversarial)]
        for S in cands:
            if len(S) != s:
                continue
            checked += 1
            comp = frozenset(range(n)) - S
            e = count_edges(g, S, comp) if comp else 0
            if e < bound:
                return PropertyCheck("edge-expansion", FAIL, e, bound, S, "sampled")
    return PropertyCheck("edge-expansion", PLAUSIBLE, checked, None, mode="sampled")
