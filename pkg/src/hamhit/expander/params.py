"""Constants for the expander verifiers.

The asymptotic constants are astronomically large (``log C`` around
``10^21``), so ``C`` is stored through its logarithm. The asymptotic
presets make most size conditions vacuous at any feasible ``n``; the desk
presets scale them so the verifiers measure something.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, replace
from typing import Optional

from ..graph import GraphInputError

C1_RULES = ("sparse", "dense", "h")


def _safe_exp(x: float) -> float:
    try:
        return math.exp(x)
    except OverflowError:
        return math.inf


@dataclass(frozen=True)
class ExpanderParams:
    log_c: float
    c1: Optional[float] = None  # explicit override of the derived C_1
    rule: str = "sparse"
    small_div: float = 1e6  # SMALL: deg <= base / small_div
    medium_div: float = 1e5  # MEDIUM (peel sequences): deg <= d_hat / medium_div
    small_exp: float = 0.11  # |SMALL| <= n ** small_exp
    min_dist: int = 4  # SMALL vertices must be more than this far apart
    maxdeg_factor: float = 10.0  # dense: Delta <= maxdeg_factor * log n
    joined: str = "applied"  # "applied": n/(4 C_1); "strengthened": n/(4 C_1^3)
    few_edges_div: float = 11.0**6
    edge_exp_factor: float = 1e-5
    trials: int = 200
    adversarial: int = 50
    exact_max_n: int = 22
    seed: int = 0

    def __post_init__(self):
        if not self.log_c > -math.inf or math.isnan(self.log_c):
            raise GraphInputError("C must be positive")
        if self.rule not in C1_RULES:
            raise GraphInputError(f"unknown C_1 rule {self.rule!r}")
        if self.joined not in ("applied", "strengthened"):
            raise GraphInputError("joined must be 'applied' or 'strengthened'")
        if self.c1 is not None and self.c1 <= 0:
            raise GraphInputError("C_1 must be positive")

    @classmethod
    def from_c(cls, C: float, **kw) -> "ExpanderParams":
        if C <= 0:
            raise GraphInputError("C must be positive")
        return cls(log_c=math.log(C), **kw)

    @property
    def C(self) -> float:
        return _safe_exp(self.log_c)

    @property
    def C1(self) -> float:
        if self.c1 is not None:
            return self.c1
        if self.rule == "sparse":
            return _safe_exp(self.log_c / 10)
        if self.rule == "dense":
            return math.sqrt(max(self.log_c, 0.0)) / 1e10
        return self.log_c / 1000

    def small_limit(self, n: int, c: Optional[float] = None) -> float:
        """Largest set size in the expansion condition, ``n / 2C``."""
        return n / (2 * (self.C if c is None else c))

    def joined_limit(self, n: int, c: Optional[float] = None) -> float:
        """Smallest set size in the joinedness condition, ``n / 2C``."""
        return n / (2 * (self.C if c is None else c))

    def p3_limit(self, n: int) -> float:
        c1 = self.C1
        return n / (4 * c1) if self.joined == "applied" else n / (4 * c1**3)

    def to_dict(self) -> dict:
        out = asdict(self)
        out["C"] = self.C if math.isfinite(self.C) else "inf"
        out["C1"] = self.C1 if math.isfinite(self.C1) else "inf"
        return out

    @classmethod
    def from_dict(cls, data: dict) -> "ExpanderParams":
        data = dict(data)
        preset = data.pop("preset", None)
        base = PRESETS[preset] if preset else None
        if "C" in data:
            C = float(data.pop("C"))
            if C <= 0:
                raise GraphInputError("C must be positive")
            data["log_c"] = math.log(C)
        if "C1" in data:
            data["c1"] = data.pop("C1")
        fields = set(cls.__dataclass_fields__)
        unknown = set(data) - fields
        if unknown:
            raise GraphInputError(f"unknown parameter keys: {sorted(unknown)}")
        if base is not None:
            return replace(base, **data)
        if "log_c" not in data:
            raise GraphInputError("need C, log_c or preset")
        return cls(**data)


# constants chosen in the hitting-time proof: C_1 = 10^10, C = exp(C_1 * 10^11)
_ASYMPTOTIC_LOG_C = 1e21

PRESETS: dict[str, ExpanderParams] = {
    "asymptotic-sparse": ExpanderParams(log_c=_ASYMPTOTIC_LOG_C, rule="sparse", small_div=1e6),
    "asymptotic-dense": ExpanderParams(log_c=1e50 * math.log(10 * math.e), rule="dense", small_div=1e5),
    "asymptotic-h": ExpanderParams(log_c=1e15, rule="h", small_div=1e6, medium_div=1e5),
    # desk scale: thresholds that actually bite at n in the hundreds or thousands
    "desk-sparse": ExpanderParams(log_c=math.log(4.0), c1=2.0, rule="sparse", small_div=10.0, small_exp=0.5),
    "desk-dense": ExpanderParams(log_c=math.log(4.0), c1=2.0, rule="dense", small_div=10.0, small_exp=0.5),
    "desk-h": ExpanderParams(
        log_c=math.log(4.0), c1=2.0, rule="h", small_div=10.0, medium_div=5.0, small_exp=0.5,
        few_edges_div=2.0, edge_exp_factor=0.05,
    ),
}


def preset(name: str) -> ExpanderParams:
    try:
        return PRESETS[name]
    except KeyError:
        raise GraphInputError(f"unknown preset {name!r}; choose from {sorted(PRESETS)}") from None
