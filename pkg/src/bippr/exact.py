"""Dense brute-force oracles: exact PPR, multi-step transition probabilities,
and truncated diffusions. Restricted to desk-scale graphs; every estimator in
this package is property-tested against these."""
from __future__ import annotations

import math

import numpy as np
import scipy.sparse as sp

from .graph import Graph

__all__ = ["transition_matrix", "exact_ppr", "exact_ppr_from", "exact_ppr_matrix",
           "exact_mstp", "exact_diffusion"]


def transition_matrix(g: Graph) -> sp.csr_matrix:
    """Row-stochastic random-walk matrix W = D^{-1} A (rows of isolated nodes are zero)."""
    rows = np.repeat(np.arange(g.n), np.diff(g.indptr))
    data = g.weights / g.degrees[rows]
    return sp.csr_matrix((data, g.indices, g.indptr), shape=(g.n, g.n))


def _check_alpha(alpha: float) -> None:
    # open interval: alpha = 0 and alpha = 1 are rejected everywhere
    if not (0.0 < alpha < 1.0):
        raise ValueError(f"alpha must be in (0, 1), got {alpha}")


def exact_ppr(g: Graph, alpha: float, s: int, tol: float = 1e-12) -> np.ndarray:
    """PPR vector of source s by power iteration.

    Iterates pi <- alpha*e_s + (1-alpha)*pi W from pi = e_s until the
    successive-iterate infinity-norm difference is <= tol*alpha; the (1-alpha)
    contraction then certifies an infinity-norm error <= tol.
    """
    g.require_walkable(s)
    e_s = np.zeros(g.n)
    e_s[s] = 1.0
    return exact_ppr_from(g, alpha, e_s, tol)


def exact_ppr_from(g: Graph, alpha: float, sigma: np.ndarray, tol: float = 1e-12) -> np.ndarray:
    """PPR vector for an arbitrary source distribution sigma (dense, sums to 1)."""
    _check_alpha(alpha)
    if tol <= 0:
        raise ValueError("tol must be positive")
    sigma = np.asarray(sigma, dtype=np.float64)
    if sigma.shape != (g.n,) or (sigma < 0).any() or abs(sigma.sum() - 1.0) > 1e-12:
        raise ValueError("sigma must be a length-n probability distribution")
    if g.n and (sigma[np.diff(g.indptr) == 0] > 0).any():
        raise ValueError("sigma puts mass on an isolated node")
    W = transition_matrix(g)
    pi = sigma.copy()
    max_iter = _iterations_for(alpha, tol)
    for _ in range(max_iter):
        nxt = alpha * sigma + (1.0 - alpha) * (pi @ W)
        if np.abs(nxt - pi).max() <= tol * alpha:
            return nxt
        pi = nxt
    return pi


def exact_ppr_matrix(g: Graph, alpha: float, tol: float = 1e-12) -> np.ndarray:
    """All-sources PPR matrix Pi with Pi[s] = exact_ppr(g, alpha, s).

    Same iteration and stopping rule as exact_ppr, run on all rows at once.
    Isolated sources yield zero rows.
    """
    _check_alpha(alpha)
    W = transition_matrix(g)
    I = np.eye(g.n)
    I[np.diff(g.indptr) == 0] = 0.0
    Pi = I.copy()
    for _ in range(_iterations_for(alpha, tol)):
        nxt = alpha * I + (1.0 - alpha) * (Pi @ W)
        if np.abs(nxt - Pi).max() <= tol * alpha:
            return nxt
        Pi = nxt
    return Pi


def _iterations_for(alpha: float, tol: float) -> int:
    # (1-alpha)^k <= tol*alpha guarantees the stopping rule fires
    return max(8, int(math.ceil(math.log(tol * alpha) / math.log1p(-alpha))) + 2)


def exact_mstp(g: Graph, s: int, ell_max: int) -> list[np.ndarray]:
    """[e_s W^0, ..., e_s W^ell_max] by repeated sparse matrix-vector products."""
    g.require_walkable(s)
    if ell_max < 0:
        raise ValueError("ell_max must be nonnegative")
    W = transition_matrix(g)
    p = np.zeros(g.n)
    p[s] = 1.0
    out = [p]
    for _ in range(ell_max):
        p = p @ W
        out.append(p)
    return out


def exact_diffusion(g: Graph, weights, s: int) -> np.ndarray:
    """Truncated diffusion sum_l alphas[l] * (e_s W^l); tail mass is the caller's."""
    alphas = np.asarray(weights.alphas, dtype=np.float64)
    levels = exact_mstp(g, s, len(alphas) - 1)
    out = np.zeros(g.n)
    for a, p in zip(alphas, levels):
        out += a * p
    return out
