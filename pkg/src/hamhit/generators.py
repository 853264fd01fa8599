"""Base graph families: random regular, complete, complete bipartite and the
bipartite-plus-regular composite that defeats the hitting-time property."""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass
from typing import Optional

import numpy as np

from .graph import Graph, GraphInputError
from .seeding import rng


class GenerationError(RuntimeError):
    """Random regular generation failed to produce a simple graph within budget."""


@dataclass(frozen=True)
class GenSpec:
    family: str
    n: int = 0
    d: int = 0
    a: int = 0
    b: int = 0
    c: float = 0.05
    seed: int = 0

    FAMILIES = ("regular", "complete", "complete-bipartite", "counterexample")

    def __post_init__(self):
        if self.family not in self.FAMILIES:
            raise GraphInputError(f"unknown family {self.family!r}")
        if self.family == "regular" and (self.n * self.d) % 2:
            raise GraphInputError("n*d must be even for a regular graph")
        if self.family == "complete-bipartite" and (self.a < 1 or self.b < 1):
            raise GraphInputError("part sizes must be positive")
        if self.family == "counterexample" and not (0 < self.c <= 1):
            raise GraphInputError("density constant c must lie in (0, 1]")

    def to_json(self) -> str:
        return json.dumps(asdict(self), sort_keys=True)

    @classmethod
    def from_dict(cls, data: dict) -> "GenSpec":
        keys = {"family", "n", "d", "a", "b", "c", "seed"}
        unknown = set(data) - keys
        if unknown:
            raise GraphInputError(f"unknown GenSpec keys: {sorted(unknown)}")
        return cls(**data)

    def build(self) -> Graph:
        if self.family == "regular":
            return random_regular(self.n, self.d, self.seed)
        if self.family == "complete":
            return complete(self.n)
        if self.family == "complete-bipartite":
            return complete_bipartite(self.a, self.b)
        return counterexample_graph(self.n, self.c, self.seed).graph


def complete(n: int) -> Graph:
    if n < 1:
        raise GraphInputError("complete graph needs n >= 1")
    return Graph(n, ((u, v) for u in range(n) for v in range(u + 1, n)))


def complete_bipartite(a: int, b: int) -> Graph:
    """K_{a,b} with the first part on ``0..a-1``."""
    if a < 1 or b < 1:
        raise GraphInputError("part sizes must be positive")
    return Graph(a + b, ((u, a + w) for u in range(a) for w in range(b)))


def random_regular(n: int, d: int, seed: int, switch_budget: Optional[int] = None) -> Graph:
    """Random simple ``d``-regular graph via the pairing model.

    A few whole-pairing rejections are tried first; if none is simple, loops
    and repeated pairs are repaired by random double-edge switches, which
    preserve every degree.
    """
    if not (0 < d < n):
        raise GraphInputError(f"need 0 < d < n, got n={n}, d={d}")
    if (n * d) % 2:
        raise GraphInputError("n*d must be even")
    gen = rng(seed)
    points = np.repeat(np.arange(n, dtype=np.int64), d)

    for _ in range(10):
        pairs = gen.permutation(points).reshape(-1, 2)
        lo = np.minimum(pairs[:, 0], pairs[:, 1])
        hi = np.maximum(pairs[:, 0], pairs[:, 1])
        if (lo != hi).all():
            keys = lo * n + hi
            if np.unique(keys).size == keys.size:
                return Graph(n, zip(lo.tolist(), hi.tolist()), strict=True)

    budget = 100 * n * d if switch_budget is None else switch_budget
    return _switch_repair(n, lo.tolist(), hi.tolist(), gen, budget)


def _switch_repair(n: int, us: list[int], vs: list[int], gen: np.random.Generator, budget: int) -> Graph:
    m = len(us)
    mult: dict[tuple[int, int], int] = {}
    for u, v in zip(us, vs):
        mult[(u, v)] = mult.get((u, v), 0) + 1

    def bad(i: int) -> bool:
        u, v = us[i], vs[i]
        return u == v or mult[(u, v)] > 1

    def key(a: int, b: int) -> tuple[int, int]:
        return (a, b) if a < b else (b, a)

    bad_idx = [i for i in range(m) if bad(i)]
    steps = 0
    while bad_idx:
        i = bad_idx.pop()
        if not bad(i):
            continue
        fixed = False
        while not fixed:
            if steps >= budget:
                raise GenerationError(f"switch budget {budget} exhausted")
            steps += 1
            j = int(gen.integers(m))
            if j == i:
                continue
            a, b = us[i], vs[i]
            c, d = us[j], vs[j]
            if gen.random() < 0.5:
                c, d = d, c
            e1, e2 = key(a, c), key(b, d)
            if e1[0] == e1[1] or e2[0] == e2[1] or e1 == e2:
                continue
            if mult.get(e1, 0) or mult.get(e2, 0):
                continue
            for old in ((us[i], vs[i]), (us[j], vs[j])):
                mult[old] -= 1
                if not mult[old]:
                    del mult[old]
            us[i], vs[i] = e1
            us[j], vs[j] = e2
            mult[e1] = 1
            mult[e2] = 1
            fixed = True
    return Graph(n, zip(us, vs), strict=True)


@dataclass(frozen=True)
class Composite:
    """Union of K_{|A|,|B|} with a random regular overlay on all vertices."""

    graph: Graph
    part_a: tuple[int, ...]
    part_b: tuple[int, ...]
    overlay_degree: int
    overlay: Graph


def overlay_degree(n: int, c: float) -> int:
    """``round(c n / log n)``, nudged down by one when ``n*d`` is odd."""
    d = int(round(c * n / math.log(n))) if n > 1 else 0
    if (n * d) % 2:
        d -= 1
    return max(d, 0)


def counterexample_graph(n: int, c: float, seed: int) -> Composite:
    if n < 3 or n % 3:
        raise GraphInputError("n must be a positive multiple of 3")
    if not (0 < c <= 1):
        raise GraphInputError("c must lie in (0, 1]")
    d = overlay_degree(n, c)
    if d >= n:
        raise GraphInputError("overlay degree must be below n")
    a = n // 3
    bip = complete_bipartite(a, n - a)
    overlay = random_regular(n, d, seed) if d > 0 else Graph(n)
    g = Graph(n, bip.edges + overlay.edges)
    return Composite(g, tuple(range(a)), tuple(range(a, n)), d, overlay)
