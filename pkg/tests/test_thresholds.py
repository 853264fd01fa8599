import itertools
import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from hamhit.generators import complete, random_regular
from hamhit.graph import GraphInputError, cycle_graph, petersen_graph
from hamhit.process import sample_gp
from hamhit.thresholds import (
    adjacent_pair_joint,
    adjacent_pair_joint_exact,
    binomial_tail,
    binomial_tail_sweep,
    check_estimates,
    expected_low_degree,
    low_degree_probability,
    mindeg_probability_report,
    sharp_threshold,
    tau2_window,
)


def test_expected_low_degree_examples():
    # 1000 (2^-10 + 10 * 2^-10) as an exact rational
    assert expected_low_degree(1000, 10, 0.5) == float(Fraction(1000) * (Fraction(1, 2**10) + Fraction(10, 2**10)))
    assert expected_low_degree(1000, 10, 0.5) == 10.7421875
    assert expected_low_degree(50, 4, 0.0) == 50
    assert expected_low_degree(50, 4, 1.0) == 0


@given(st.integers(1, 30), st.integers(0, 100))
def test_low_degree_probability_matches_binomial_sum(d, k):
    p = Fraction(k, 100)
    exact = sum(math.comb(d, j) * p**j * (1 - p) ** (d - j) for j in range(0, min(d, 1) + 1))
    assert low_degree_probability(d, float(p)) == pytest.approx(float(exact), rel=1e-12, abs=1e-300)


def _pair_enumeration(d, p):
    # the 2d-1 edges at an adjacent pair: shared edge, d-1 private at u, d-1 private at v
    total = Fraction(0)
    for state in itertools.product((0, 1), repeat=2 * d - 1):
        shared, at_u, at_v = state[0], state[1:d], state[d:]
        if shared + sum(at_u) <= 1 and shared + sum(at_v) <= 1:
            k = sum(state)
            total += p**k * (1 - p) ** (2 * d - 1 - k)
    return total


@pytest.mark.parametrize("d", range(2, 7))
@pytest.mark.parametrize("p", [Fraction(1, 2), Fraction(1, 3), Fraction(3, 10), Fraction(0), Fraction(1)])
def test_pair_joint_matches_enumeration(d, p):
    exact = _pair_enumeration(d, p)
    assert adjacent_pair_joint_exact(d, p) == exact
    assert adjacent_pair_joint(10, d, float(p)).joint == pytest.approx(float(exact), abs=1e-15)


def test_pair_joint_examples():
    assert adjacent_pair_joint_exact(2, Fraction(1, 2)) == Fraction(5, 8)
    assert adjacent_pair_joint(10, 4, 0.0).joint == 1
    assert adjacent_pair_joint(10, 3, 1.0).joint == 0
    m = adjacent_pair_joint(100, 5, 0.2)
    assert m.covariance == pytest.approx(m.joint - m.q**2)
    assert m.covariance_sum == pytest.approx(100 * 5 * m.covariance)


def _exact_moments(g, p):
    """Mean and variance of the degree<=1 count over every subgraph."""
    m = g.m
    es = g.edge_array
    mean = Fraction(0)
    second = Fraction(0)
    for mask in range(1 << m):
        deg = np.zeros(g.n, dtype=int)
        k = 0
        for i in range(m):
            if mask >> i & 1:
                k += 1
                deg[es[i, 0]] += 1
                deg[es[i, 1]] += 1
        x = int((deg <= 1).sum())
        w = p**k * (1 - p) ** (m - k)
        mean += w * x
        second += w * x * x
    return mean, second - mean * mean


@pytest.mark.parametrize("g", [complete(4), cycle_graph(6), petersen_graph()], ids=["K4", "C6", "petersen"])
def test_mindeg_moments_match_full_enumeration(g):
    p = Fraction(1, 3)
    mean, var = _exact_moments(g, p)
    rep = mindeg_probability_report(g.n, g.regular_degree(), float(p))
    assert rep.mean == pytest.approx(float(mean), rel=1e-12)
    assert rep.variance == pytest.approx(float(var), rel=1e-12)


def test_mindeg_examples():
    rep = mindeg_probability_report(40, 2, 0.5)
    assert rep.q == 0.75 and rep.mean == 30
    rep = mindeg_probability_report(40, 6, 1.0)
    assert rep.mean == 0 and rep.diagonal == 0 and rep.pair_term == 0 and rep.variance == 0
    rep = mindeg_probability_report(1000, 10, 0.3)
    assert rep.mean == pytest.approx(1000 * (0.7**10 + 3 * 0.7**9))
    assert rep.mean == pytest.approx(149.308, abs=1e-3)


def test_low_degree_monte_carlo_within_four_standard_errors():
    g = random_regular(200, 4, 11)
    p = 0.35
    counts = []
    for s in range(3000):
        h = sample_gp(g, p, s)
        counts.append(int((h.degrees <= 1).sum()))
    rep = mindeg_probability_report(200, 4, p)
    se = math.sqrt(rep.variance / len(counts))
    assert abs(np.mean(counts) - rep.mean) < 4 * se
    # the sample variance agrees with the predicted variance to within 10%
    assert np.var(counts) == pytest.approx(rep.variance, rel=0.1)


def test_tau2_window_examples():
    w = tau2_window(10**6, 200)
    assert w.x == pytest.approx(0.0690776, abs=1e-7)
    assert w.p1 == pytest.approx(0.0667457, abs=1e-6)
    assert w.p2 == w.p1 and "10^(-10^10)" in w.p2_symbolic
    assert w.hypothesis and w.sandwich
    assert not tau2_window(10**6, 100).hypothesis
    n = 10**4
    d = math.ceil(10 * math.log(n))
    w = tau2_window(n, d)
    assert w.hypothesis and w.sandwich
    # at x = 0.1 exactly: 0.095 <= 1 - e^-0.1 <= 0.1
    assert 0.095 <= -math.expm1(-0.1) <= 0.1
    assert -math.expm1(-0.1) == pytest.approx(0.0951626, abs=1e-7)


@given(st.integers(3, 10**7), st.integers(1, 10**4))
def test_tau2_sandwich_holds_under_hypothesis(n, d):
    if d >= n:
        return
    w = tau2_window(n, d)
    if d >= 10 * math.log(n):
        assert 0.95 * w.x <= w.p1 <= w.x


def test_sharp_threshold_examples():
    r = sharp_threshold(10**6, 5, 0.0)
    assert r.regime == "sub-log"
    assert r.lower == pytest.approx(1 - (5 * 10**6) ** (-1 / 4), abs=1e-6)
    assert r.lower == pytest.approx(0.978853, abs=1e-6) and r.upper == r.lower

    L = math.log(10**6)
    lo, hi = sharp_threshold(10**6, 27, 0.1), sharp_threshold(10**6, 28, 0.1)
    assert lo.regime == hi.regime == "c-log"
    assert lo.p0 == pytest.approx(1 - math.exp(-L / 27))
    # d = 2 log n lies between 27 and 28, where p0 = 1 - e^(-1/2)
    assert hi.p0 < 1 - math.exp(-0.5) < lo.p0
    assert lo.lower < lo.p0 < lo.upper

    r = sharp_threshold(10**6, 400, 0.1)
    assert r.regime == "above-log2" and r.delta == 3.0
    LL = math.log(L)
    assert r.lower == pytest.approx((L + LL - 3) / 400) and r.upper == pytest.approx((L + LL + 3) / 400)

    r = sharp_threshold(10**6, 150, 0.1)
    assert r.regime == "between-log-and-log2"
    assert r.correction == pytest.approx(L * L / (2 * 150**2))
    assert sharp_threshold(10**6, 100, 0.1).regime == "c-log"
    with pytest.raises(GraphInputError):
        sharp_threshold(100, 5, 1.5)


def test_binomial_tail_examples():
    t = binomial_tail(4, 0.5, 4)
    assert t.bound == pytest.approx(0.0625) and t.exact == pytest.approx(0.0625)
    assert binomial_tail(10, 0.3, 0).bound == 1
    t = binomial_tail(10, 0.1, 3)
    assert t.bound == pytest.approx(0.12)
    assert t.exact == pytest.approx(0.0701908, abs=1e-6) and t.exact <= t.bound


def test_binomial_tail_sweep_is_clean():
    assert binomial_tail_sweep(2000, 3) == []


def test_estimates():
    # (1) at n=10, t=3
    assert math.comb(10, 3) == 120 <= (10 * math.e / 3) ** 3
    assert (10 * math.e / 3) ** 3 == pytest.approx(743.909, abs=1e-3)
    rep = check_estimates(2000, 5)
    assert rep.ok, rep.violations[:3]
    assert all(v == 2000 for v in rep.checked.values())
    with pytest.raises(GraphInputError):
        check_estimates(0)
