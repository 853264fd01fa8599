"""Second adjacency eigenvalue, (n, d, lambda) certification and the expander
mixing inequality."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from typing import Iterable, Optional

import numpy as np
import scipy.sparse as sps
import scipy.sparse.linalg as spla

from .graph import Graph, GraphInputError, count_edges, vertex_set
from .seeding import rng


class ConvergenceError(RuntimeError):
    def __init__(self, message: str, residual: float, iterations: int):
        super().__init__(message)
        self.residual = residual
        self.iterations = iterations


@dataclass(frozen=True)
class SpectralProfile:
    n: int
    d: int
    lam: float
    ratio: float
    iterations: int
    residual: float

    def to_dict(self) -> dict:
        out = asdict(self)
        out["lambda"] = out.pop("lam")
        if math.isinf(out["ratio"]):
            out["ratio"] = "inf"
        return out


def default_tol(n: int) -> float:
    return 1e-9 if n <= 10_000 else 1e-6


def adjacency_matrix(g: Graph) -> sps.csr_matrix:
    if g.m == 0:
        return sps.csr_matrix((g.n, g.n))
    e = g.edge_array
    rows = np.concatenate([e[:, 0], e[:, 1]])
    cols = np.concatenate([e[:, 1], e[:, 0]])
    data = np.ones(rows.size)
    return sps.csr_matrix((data, (rows, cols)), shape=(g.n, g.n))


def second_eigenvalue(
    g: Graph,
    tol: Optional[float] = None,
    *,
    method: str = "lanczos",
    seed: int = 0,
    max_iter: int = 100_000,
) -> SpectralProfile:
    """Largest ``|mu|`` over adjacency eigenvalues other than the trivial ``d``.

    Both methods work matrix-free on ``P A P`` where ``P`` projects out the
    all-ones direction, so the trivial eigenvalue is deflated to zero.
    ``lanczos`` (default) runs ARPACK on that operator; ``power`` runs power
    iteration on its square so that ``+lambda`` and ``-lambda`` are treated
    alike. The reported residual is ``||P A P x - theta x||`` for the returned
    Ritz pair (``power`` reports the analogous quantity scaled to lambda units).
    """
    d = g.regular_degree()
    if d is None:
        raise GraphInputError("second_eigenvalue needs a regular graph")
    tol = default_tol(g.n) if tol is None else tol
    if tol <= 0:
        raise GraphInputError("tol must be positive")
    n = g.n
    if n <= 1 or d == 0:
        return SpectralProfile(n, d, 0.0, math.inf, 0, 0.0)
    if method == "power":
        return _power(g, d, tol, seed, max_iter)
    if method != "lanczos":
        raise GraphInputError(f"unknown method {method!r}")
    if n <= 16:
        lam = second_eigenvalue_dense(g)
        return SpectralProfile(n, d, lam, _ratio(d, lam), 1, 0.0)

    adj = adjacency_matrix(g)
    calls = [0]

    def matvec(x: np.ndarray) -> np.ndarray:
        calls[0] += 1
        x = np.ravel(x)
        y = adj @ (x - x.mean())
        return y - y.mean()

    op = spla.LinearOperator((n, n), matvec=matvec, dtype=float)
    v0 = rng(seed).standard_normal(n)
    v0 -= v0.mean()
    try:
        vals, vecs = spla.eigsh(op, k=1, which="LM", tol=tol * 1e-2, v0=v0, maxiter=max_iter)
    except spla.ArpackNoConvergence as exc:
        raise ConvergenceError(str(exc), math.inf, max_iter) from None
    theta = float(vals[0])
    x = vecs[:, 0] / np.linalg.norm(vecs[:, 0])
    residual = float(np.linalg.norm(matvec(x) - theta * x))
    if residual > tol * max(1.0, d):
        raise ConvergenceError("Ritz residual above tolerance", residual, max_iter)
    lam = min(abs(theta), float(d))
    return SpectralProfile(n, d, lam, _ratio(d, lam), calls[0], residual)


def _power(g: Graph, d: int, tol: float, seed: int, max_iter: int) -> SpectralProfile:
    n = g.n
    adj = adjacency_matrix(g)
    gen = rng(seed)

    def project(x: np.ndarray) -> np.ndarray:
        return x - x.mean()

    def fresh() -> np.ndarray:
        x = project(gen.standard_normal(n))
        return x / np.linalg.norm(x)

    def apply(x: np.ndarray) -> np.ndarray:
        return project(adj @ project(adj @ x))

    x = fresh()
    mu_prev = -1.0
    stall = 0
    residual = math.inf
    for it in range(1, max_iter + 1):
        y = apply(x)
        mu = float(x @ y)
        norm_y = float(np.linalg.norm(y))
        if norm_y < 1e-300:
            # x fell into the kernel: either the whole complement is the kernel or restart
            x = fresh()
            if float(np.linalg.norm(apply(x))) < 1e-12:
                return SpectralProfile(n, d, 0.0, math.inf, it, 0.0)
            continue
        residual = float(np.linalg.norm(y - mu * x)) / (2.0 * math.sqrt(max(mu, 1e-300)))
        if abs(mu - mu_prev) <= 1e-15 * max(1.0, mu):
            stall += 1
        else:
            stall = 0
        # the Rayleigh quotient converges twice as fast as the vector, so a
        # quotient frozen at machine precision is accepted as converged
        if residual <= tol or stall > 50:
            lam = min(math.sqrt(max(mu, 0.0)), float(d))
            return SpectralProfile(n, d, lam, _ratio(d, lam), it, residual)
        mu_prev = mu
        x = y / norm_y
    raise ConvergenceError(f"no convergence in {max_iter} iterations", residual, max_iter)


def _ratio(d: int, lam: float) -> float:
    return math.inf if lam == 0 else d / lam


def second_eigenvalue_dense(g: Graph) -> float:
    """Reference value from a full symmetric eigendecomposition (small graphs)."""
    d = g.regular_degree()
    if d is None:
        raise GraphInputError("needs a regular graph")
    a = adjacency_matrix(g).toarray()
    ev = np.sort(np.linalg.eigvalsh(a))
    # drop one copy of the top eigenvalue d
    rest = ev[:-1]
    return float(np.max(np.abs(rest))) if rest.size else 0.0


@dataclass(frozen=True)
class MixingReport:
    observed: int
    center: float
    slack: float
    passed: bool


def check_mixing(
    g: Graph,
    profile: SpectralProfile,
    k_set: Iterable[int],
    l_set: Optional[Iterable[int]] = None,
    *,
    eps: float = 1e-7,
) -> MixingReport:
    """Compare ``e(K)`` (or ``e(K, L)``) with the mixing-lemma window."""
    k = vertex_set(g, k_set)
    n, d, lam = g.n, profile.d, profile.lam
    if l_set is None:
        obs = count_edges(g, k)
        center = d * len(k) ** 2 / (2 * n)
        slack = lam * len(k) / 2
    else:
        l_ = vertex_set(g, l_set)
        if k & l_:
            raise GraphInputError("K and L must be disjoint")
        obs = count_edges(g, k, l_)
        center = d * len(k) * len(l_) / n
        slack = lam * math.sqrt(len(k) * len(l_))
    # eps absorbs the eigenvalue tolerance and float rounding at equality
    passed = abs(obs - center) <= slack + eps * (1.0 + abs(center) + slack)
    return MixingReport(obs, center, slack, passed)


def certify_ndlambda(g: Graph, C: float, tol: Optional[float] = None, *, seed: int = 0):
    """``(profile, ok)``: ``ok`` iff ``g`` is regular with ``d / lambda >= C``."""
    if C <= 0:
        raise GraphInputError("C must be positive")
    profile = second_eigenvalue(g, tol, seed=seed)
    return profile, profile.ratio >= C
