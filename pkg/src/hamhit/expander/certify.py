"""C-expander verdicts."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Union

from ..graph import Graph, GraphInputError
from .params import ExpanderParams
from .sets import EXACT_MAX_N, expansion_search, joined_search

CERTIFIED = "certified"
REFUTED = "refuted"
PLAUSIBLE = "plausible"


@dataclass(frozen=True)
class ExpanderVerdict:
    verdict: str
    condition: Optional[str] = None  # "expansion" or "joinedness" when refuted
    witness: Optional[tuple] = None
    checked: int = 0
    mode: str = "exact"

    @property
    def ok(self) -> bool:
        return self.verdict != REFUTED

    def to_dict(self) -> dict:
        return {
            "verdict": self.verdict,
            "condition": self.condition,
            "witness": [sorted(s) for s in self.witness] if self.witness else None,
            "checked": self.checked,
            "mode": self.mode,
        }


def is_c_expander(
    g: Graph,
    params: Union[ExpanderParams, float],
    mode: str = "auto",
    trials: Optional[int] = None,
    seed: Optional[int] = None,
    *,
    adversarial: Optional[int] = None,
) -> ExpanderVerdict:
    """Check ``|N(S)| >= C|S|`` for ``1 <= |S| <= n/2C`` and an edge between
    every two disjoint sets of size at least ``n/2C``.

    ``mode`` is ``exact`` (subset enumeration, ``n <= 22``), ``sampled`` or
    ``auto`` (exact when feasible).
    """
    if isinstance(params, ExpanderParams):
        C = params.C
        trials = params.trials if trials is None else trials
        adversarial = params.adversarial if adversarial is None else adversarial
        seed = params.seed if seed is None else seed
    else:
        C = float(params)
        if C <= 0:
            raise GraphInputError("C must be positive")
    trials = 200 if trials is None else trials
    adversarial = 50 if adversarial is None else adversarial
    seed = 0 if seed is None else seed
    if mode == "auto":
        mode = "exact" if g.n <= EXACT_MAX_N else "sampled"
    if mode not in ("exact", "sampled"):
        raise GraphInputError(f"unknown mode {mode!r}")
    exact = mode == "exact"
    if exact and g.n > EXACT_MAX_N:
        raise GraphInputError(f"exact mode needs n <= {EXACT_MAX_N}")
    n = g.n
    limit = n / (2 * C)
    exp = expansion_search(g, C, limit, exact=exact, trials=trials, adversarial=adversarial, seed=seed)
    if exp.witness is not None:
        return ExpanderVerdict(REFUTED, "expansion", exp.witness, exp.checked, mode)
    join = joined_search(g, limit, exact=exact, trials=trials, adversarial=adversarial, seed=seed)
    if join.witness is not None:
        return ExpanderVerdict(REFUTED, "joinedness", join.witness, exp.checked + join.checked, mode)
    return ExpanderVerdict(CERTIFIED if exact else PLAUSIBLE, None, None, exp.checked + join.checked, mode)
