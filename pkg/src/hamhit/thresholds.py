"""Closed-form quantities: low-degree moments, the tau_2 window, sharp
threshold probes, binomial tails and the elementary binomial estimates."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from decimal import Decimal, localcontext
from fractions import Fraction
from typing import Optional

from .graph import GraphInputError
from .seeding import rng


def _check(n: int, d: int, p: Optional[float] = None) -> None:
    if not (1 <= d < n):
        raise GraphInputError(f"need 1 <= d < n, got n={n}, d={d}")
    if p is not None and not (0.0 <= p <= 1.0):
        raise GraphInputError("p must lie in [0, 1]")


def _pow1m(p: float, e: int) -> float:
    """``(1-p)**e`` through ``log1p`` (with ``0**0 = 1``)."""
    if e == 0:
        return 1.0
    if p >= 1.0:
        return 0.0
    return math.exp(e * math.log1p(-p))


def low_degree_probability(d: int, p: float) -> float:
    """``P(Bin(d, p) <= 1) = (1-p)^d + d p (1-p)^(d-1)``."""
    if p >= 1.0:
        return 1.0 if d <= 1 else 0.0
    if p <= 0.0:
        return 1.0
    return math.exp((d - 1) * math.log1p(-p)) * ((1 - p) + d * p)


def expected_low_degree(n: int, d: int, p: float) -> float:
    """Expected number of vertices of degree at most one in ``G_p`` for a
    ``d``-regular base on ``n`` vertices."""
    _check(n, d, p)
    return n * low_degree_probability(d, p)


@dataclass(frozen=True)
class PairMoments:
    q: float  # P(X_u = 1)
    joint: float  # P(X_u = X_v = 1) for adjacent u, v
    covariance: float  # joint - q^2 = (d-1)^2 p^3 (1-p)^(2d-3)
    covariance_sum: float  # over all n d ordered adjacent pairs


def adjacent_pair_joint(n: int, d: int, p: float) -> PairMoments:
    """Joint low-degree probability of two adjacent vertices.

    The ``2d - 1`` edges at ``u`` or ``v`` are distinct, so with ``Y`` the
    state of ``uv``: both have degree at most one iff either ``uv`` is absent
    and each side has at most one of its ``d - 1`` other edges, or ``uv`` is
    present and all others are absent.
    """
    _check(n, d, p)
    if d < 2:
        raise GraphInputError("need d >= 2")
    a, b, c = 2 * d - 1, 2 * d - 2, 2 * d - 3
    joint = _pow1m(p, a) + a * p * _pow1m(p, b) + (d - 1) ** 2 * p * p * _pow1m(p, c)
    cov = (d - 1) ** 2 * p**3 * _pow1m(p, c)
    return PairMoments(low_degree_probability(d, p), joint, cov, n * d * cov)


def adjacent_pair_joint_exact(d: int, p: Fraction) -> Fraction:
    """Exact rational version of ``joint`` for rational ``p``."""
    q = 1 - p
    return q ** (2 * d - 1) + (2 * d - 1) * p * q ** (2 * d - 2) + (d - 1) ** 2 * p * p * q ** (2 * d - 3)


@dataclass(frozen=True)
class Tau2Window:
    n: int
    d: int
    p1: float
    p2: float
    p2_symbolic: str
    x: float  # log n / d
    hypothesis: bool  # d >= 10 log n
    sandwich: bool  # 0.95 x <= p1 <= x

    def to_dict(self) -> dict:
        return asdict(self)


P2_FACTOR = "1+10^(-10^10)"


def tau2_window(n: int, d: int) -> Tau2Window:
    """``p_1 = 1 - exp(-log n / d)`` and ``p_2 = (1 + 10^(-10^10)) p_1``.

    The factor in ``p_2`` is one to any floating precision, so ``p2`` equals
    ``p1`` numerically and is also given symbolically. The sandwich
    ``0.95 x <= p_1 <= x`` with ``x = log n / d`` is asserted whenever
    ``d >= 10 log n``.
    """
    _check(n, d)
    x = math.log(n) / d
    p1 = -math.expm1(-x)
    sandwich = 0.95 * x <= p1 <= x
    hyp = d >= 10 * math.log(n)
    if hyp:
        assert sandwich, (n, d, p1, x)
    return Tau2Window(n, d, p1, p1, f"({P2_FACTOR})*{p1!r}", x, hyp, sandwich)


REGIMES = ("sub-log", "c-log", "between-log-and-log2", "above-log2")


@dataclass(frozen=True)
class RegimeReport:
    n: int
    d: int
    epsilon: float
    regime: str
    p0: float
    lower: float  # probe where G_p should be non-Hamiltonian
    upper: float  # probe where G_p should be Hamiltonian
    correction: float  # log^2 n / (2 d^2)
    brackets_p0: bool
    delta: Optional[float] = None  # stand-in for omega(1) in the top regime
    flags: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        return asdict(self)


def sharp_threshold(
    n: int,
    d: int,
    epsilon: float,
    *,
    log_cut: float = 1.0,
    c_log_max: float = 10.0,
    log2_cut: float = 1.0,
    delta: float = 3.0,
) -> RegimeReport:
    """Regime of ``d`` relative to ``log n`` and ``log^2 n`` with the
    threshold ``p_0`` and the pair of probes on either side of it.

    Regimes: ``d < log_cut log n``; up to ``c_log_max log n``; below
    ``log2_cut log^2 n``; above. ``epsilon = 0`` gives the center probe twice.
    """
    _check(n, d)
    if not (0.0 <= epsilon < 1.0):
        raise GraphInputError("epsilon must lie in [0, 1)")
    if n < 3:
        raise GraphInputError("need n >= 3 so that log log n is defined")
    L = math.log(n)
    LL = math.log(L)
    corr = L * L / (2 * d * d)
    flags: list[str] = []
    used_delta = None
    if d < log_cut * L:
        regime = REGIMES[0]
        p0 = 1.0
        lower = -math.expm1(-(1 - epsilon) / (d - 1) * math.log(n * d)) if d > 1 else 1.0
        upper = -math.expm1(-(1 + epsilon) / (d - 1) * math.log(n * d)) if d > 1 else 1.0
        if d == 1:
            flags.append("d=1: probes undefined, reported as 1")
    elif d < c_log_max * L:
        regime = REGIMES[1]
        p0 = -math.expm1(-L / d)
        lower = -math.expm1(-L / d + epsilon)
        upper = -math.expm1(-L / d - epsilon)
    elif d < log2_cut * L * L:
        regime = REGIMES[2]
        p0 = -math.expm1(-L / d)
        lower = (L + LL) / d - (1 + epsilon) * corr
        upper = (L + LL) / d - (1 - epsilon) * corr
    else:
        regime = REGIMES[3]
        p0 = -math.expm1(-L / d)
        used_delta = delta
        lower = (L + LL - delta) / d
        upper = (L + LL + delta) / d
        flags.append("delta is an artifact stand-in for omega(1)")
    for name, v in (("lower", lower), ("upper", upper)):
        if not (0.0 <= v <= 1.0):
            flags.append(f"{name} probe outside [0, 1]")
    brackets = lower <= p0 <= upper
    return RegimeReport(n, d, epsilon, regime, p0, lower, upper, corr, brackets, used_delta, flags)


@dataclass(frozen=True)
class TailBound:
    n: int
    p: float
    t: int
    bound: float
    exact: Optional[float]


def binomial_tail(n_trials: int, p: float, t: int) -> TailBound:
    """``P(Bin(n, p) >= t) <= C(n, t) p^t``, with the exact tail when ``n <= 30``."""
    if not (0 <= t <= n_trials):
        raise GraphInputError("need 0 <= t <= n_trials")
    if not (0.0 <= p <= 1.0):
        raise GraphInputError("p must lie in [0, 1]")
    if t == 0:
        bound = 1.0
    elif p == 0.0:
        bound = 0.0
    else:
        bound = math.exp(_log_comb(n_trials, t) + t * math.log(p))
    exact = None
    if n_trials <= 30:
        pf = Fraction(p)
        exact = float(sum(math.comb(n_trials, j) * pf**j * (1 - pf) ** (n_trials - j) for j in range(t, n_trials + 1)))
    return TailBound(n_trials, p, t, bound, exact)


def _log_comb(n: int, k: int) -> float:
    return math.lgamma(n + 1) - math.lgamma(k + 1) - math.lgamma(n - k + 1)


@dataclass(frozen=True)
class MindegPrediction:
    n: int
    d: int
    p: float
    q: float
    mean: float
    diagonal: float  # n q (1 - q)
    pair_term: float  # n d (d-1)^2 p^3 (1-p)^(2d-3)
    variance: float

    def to_dict(self) -> dict:
        return asdict(self)


def mindeg_probability_report(n: int, d: int, p: float) -> MindegPrediction:
    """Mean and variance of the number of vertices of degree at most one in
    ``G_p``. The variance is the per-vertex diagonal plus the adjacent-pair
    covariances; non-adjacent vertices share no edge, so they are independent."""
    _check(n, d, p)
    q = low_degree_probability(d, p)
    pair = adjacent_pair_joint(n, d, p).covariance_sum if d >= 2 else 0.0
    diag = n * q * (1 - q)
    return MindegPrediction(n, d, p, q, n * q, diag, pair, diag + pair)


# --- the elementary estimates ----------------------------------------------

ESTIMATES = (1, 2, 3, 4, 5, 6)


@dataclass
class EstimateReport:
    trials: int
    checked: dict = field(default_factory=dict)
    violations: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def to_dict(self) -> dict:
        return {"trials": self.trials, "checked": self.checked, "violations": self.violations, "ok": self.ok}


def _dln(x: int) -> Decimal:
    return Decimal(x).ln()


# slack for cases of exact equality (e.g. s = i in estimate 5) lost to rounding
_TOL = Decimal("1e-40")


def check_estimates(trials: int, seed: int = 0, *, n_max: int = 200) -> EstimateReport:
    """Draw ``trials`` admissible tuples per estimate and test each
    inequality with integer arithmetic, or 50-digit decimals where an
    exponential is involved.

    Draw ranges: ``1 <= n <= n_max``. Estimate (4) reads its side condition
    as ``i0 <= k``. Estimate (6) is only drawn with ``s t >= 8 n`` and
    ``i <= s t / (8 n)``; below that the statement fails (e.g. ``s = t = 1``).
    """
    if trials < 1:
        raise GraphInputError("trials must be at least 1")
    gen = rng(seed, 0xE57)
    rep = EstimateReport(trials, {k: 0 for k in ESTIMATES})
    comb = math.comb

    def ri(lo: int, hi: int) -> int:
        return int(gen.integers(lo, hi + 1))

    with localcontext() as ctx:
        ctx.prec = 50
        for _ in range(trials):
            # (1) C(n,t) <= (en/t)^t
            n = ri(1, n_max)
            t = ri(1, n)
            lhs = _dln(comb(n, t))
            rhs = t * (1 + _dln(n) - _dln(t))
            rep.checked[1] += 1
            if lhs > rhs + _TOL:
                rep.violations.append({"estimate": 1, "n": n, "t": t})

            # (2) C(n-s,t) <= exp(-st/n) C(n,t)
            n = ri(1, n_max)
            s = ri(0, n)
            t = ri(0, n)
            lhs_i = comb(n - s, t)
            rep.checked[2] += 1
            if lhs_i:
                if _dln(lhs_i) > -Decimal(s * t) / n + _dln(comb(n, t)) + _TOL:
                    rep.violations.append({"estimate": 2, "n": n, "s": s, "t": t})

            # (3) 1-p <= exp(-p) <= 1-p+p^2/2 on [0,1]; p drawn on a dyadic grid including 0 and 1
            num = ri(0, 2**20)
            pd = Decimal(num) / Decimal(2**20)
            e = (-pd).exp()
            rep.checked[3] += 1
            if not (1 - pd <= e <= 1 - pd + pd * pd / 2):
                rep.violations.append({"estimate": 3, "p": str(pd)})

            # (4) sum_{i=i0}^k C(q,i) C(p,k-i) <= C(q,i0) C(p+q-i0,k-i0)
            P = ri(0, 60)
            Q = ri(0, 60)
            k = ri(0, P + Q)
            i0 = ri(0, k)
            lhs_i = sum(comb(Q, i) * comb(P, k - i) for i in range(i0, k + 1))
            rep.checked[4] += 1
            if lhs_i > comb(Q, i0) * comb(P + Q - i0, k - i0):
                rep.violations.append({"estimate": 4, "p": P, "q": Q, "k": k, "i0": i0})

            # (5) C(n-s,t-i) <= C(n,t) (t/n)^i exp(-(s-i)(t-i)/n), i <= s, i <= t
            n = ri(1, n_max)
            s = ri(0, n)
            t = ri(0, n)
            i = ri(0, min(s, t))
            lhs_i = comb(n - s, t - i)
            rep.checked[5] += 1
            if lhs_i:
                rhs = _dln(comb(n, t)) - Decimal((s - i) * (t - i)) / n
                if i:
                    rhs += i * (_dln(t) - _dln(n))
                if _dln(lhs_i) > rhs + _TOL:
                    rep.violations.append({"estimate": 5, "n": n, "s": s, "t": t, "i": i})

            # (6) f(i) <= 2 f(i+1), f(i) = C(s,i) C(n-s,t-i), for i <= st/(8n) and st >= 8n
            while True:
                n = ri(8, n_max)
                s = ri(1, n)
                t = ri(1, n)
                if s * t >= 8 * n:
                    break
            i = ri(0, (s * t) // (8 * n))

            def f(j: int) -> int:
                return comb(s, j) * comb(n - s, t - j) if 0 <= j <= t else 0

            rep.checked[6] += 1
            if f(i) > 2 * f(i + 1):
                rep.violations.append({"estimate": 6, "n": n, "s": s, "t": t, "i": i})
    return rep


def binomial_tail_sweep(trials: int, seed: int = 0) -> list[dict]:
    """Random ``(n, p, t)`` with ``n <= 30`` where the bound falls below the
    exact tail (expected empty)."""
    gen = rng(seed, 0x7A11)
    bad = []
    for _ in range(trials):
        n = int(gen.integers(1, 31))
        t = int(gen.integers(0, n + 1))
        p = float(gen.integers(0, 1001)) / 1000
        tb = binomial_tail(n, p, t)
        if tb.exact is not None and tb.exact > tb.bound * (1 + 1e-12) + 1e-300:
            bad.append({"n": n, "p": p, "t": t, "bound": tb.bound, "exact": tb.exact})
    return bad

