import math

import numpy as np
import pytest

from hamhit.generators import complete, random_regular
from hamhit.graph import GraphInputError, cycle_graph, path_graph, petersen_graph
from hamhit.spectral import certify_ndlambda, check_mixing, second_eigenvalue


def numpy_lambda(g):
    a = np.zeros((g.n, g.n))
    for u, v in g.edges:
        a[u, v] = a[v, u] = 1
    ev = np.linalg.eigvalsh(a)
    d = g.regular_degree()
    # drop one copy of the trivial eigenvalue d
    i = int(np.argmin(np.abs(ev - d)))
    return float(np.max(np.abs(np.delete(ev, i))))


@pytest.mark.parametrize("method", ["lanczos", "power"])
def test_named_graphs(method):
    assert abs(second_eigenvalue(petersen_graph(), method=method).lam - 2) < 1e-6
    assert abs(second_eigenvalue(cycle_graph(5), method=method).lam - 1.618034) < 1e-6
    assert abs(second_eigenvalue(complete(4), method=method).lam - 1) < 1e-6


@pytest.mark.parametrize("method", ["lanczos", "power"])
def test_matches_dense_oracle(method):
    cases = [(30, 3, 1), (50, 4, 2), (80, 6, 3), (200, 10, 4)]
    if method == "lanczos":
        cases.append((64, 2, 5))  # unions of long cycles: gap too small for power iteration
    for n, d, seed in cases:
        g = random_regular(n, d, seed)
        prof = second_eigenvalue(g, method=method)
        assert abs(prof.lam - numpy_lambda(g)) < 1e-6
        assert prof.d == d and prof.n == n
        assert math.isclose(prof.ratio, d / prof.lam)


def test_profile_json_and_errors():
    out = second_eigenvalue(petersen_graph()).to_dict()
    assert set(out) == {"n", "d", "lambda", "ratio", "iterations", "residual"}
    with pytest.raises(GraphInputError):
        second_eigenvalue(path_graph(4))
    # complete graph K_2: lambda is 1 but with n = 2 nothing else is left over
    assert second_eigenvalue(complete(3)).lam == pytest.approx(1.0)


def test_mixing_examples():
    k6 = complete(6)
    prof = second_eigenvalue(k6)
    r = check_mixing(k6, prof, {0, 1, 2})
    assert (r.observed, r.center, r.slack, r.passed) == (3, 3.75, pytest.approx(1.5), True)
    r = check_mixing(k6, prof, set())
    assert (r.observed, r.center, r.slack, r.passed) == (0, 0, 0, True)
    r = check_mixing(k6, prof, {0, 1}, {2, 3, 4})
    assert r.observed == 6 and r.center == 5 and r.slack == pytest.approx(math.sqrt(6)) and r.passed


def test_mixing_never_violated_on_random_sets():
    gen = np.random.default_rng(0)
    for n, d, seed in [(40, 4, 0), (100, 8, 1)]:
        g = random_regular(n, d, seed)
        prof = second_eigenvalue(g)
        for _ in range(300):
            s = set(gen.choice(n, gen.integers(1, n), replace=False).tolist())
            rest = [v for v in range(n) if v not in s]
            t = set(gen.choice(rest, gen.integers(0, len(rest) + 1), replace=False).tolist()) if rest else set()
            assert check_mixing(g, prof, s).passed
            assert check_mixing(g, prof, s, t).passed


def test_certify_examples():
    prof, ok = certify_ndlambda(petersen_graph(), 1.4)
    assert ok and prof.lam == pytest.approx(2) and prof.ratio == pytest.approx(1.5)
    assert not certify_ndlambda(petersen_graph(), 1.6)[1]
    # C_8 is bipartite, so -2 is an eigenvalue and lambda = 2
    prof, ok = certify_ndlambda(cycle_graph(8), 1)
    assert prof.lam == pytest.approx(2) and ok
