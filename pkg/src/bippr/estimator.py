"""Bidirectional PPR estimator: forward push from the source combined with
reverse geometric-length walks from the target, plus the parameter selection
rules (Chernoff constant, residual threshold balancing, walk count)."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .graph import Graph
from .push import PushResult, approximate_pagerank
from .walk import RandomStream, geometric_terminals

__all__ = ["BipprParams", "PprEstimate", "PreparedSource", "chernoff_c",
           "choose_r_max", "num_walks", "significance_delta", "estimate_ppr",
           "estimate_ppr_batch"]


def chernoff_c(p_fail: float) -> float:
    """Concentration constant 3*ln(2/p_fail) for the two-sided Chernoff bound."""
    if not (0.0 < p_fail < 1.0):
        raise ValueError(f"p_fail must be in (0, 1), got {p_fail}")
    return 3.0 * math.log(2.0 / p_fail)


def choose_r_max(eps: float, delta: float, d_t: float, p_fail: float) -> float:
    """Residual threshold balancing push work against walk work.

    Returns eps*sqrt(delta/d_t)/sqrt(ln(1/p_fail)), clamped to at most 1
    (residual ratios start at <= 1, so larger values make the push a no-op).
    """
    if not (0.0 < eps <= 1.0):
        raise ValueError(f"eps must be in (0, 1], got {eps}")
    if not (delta > 0):
        raise ValueError(f"delta must be positive, got {delta}")
    if not (d_t > 0):
        raise ValueError(f"d_t must be positive, got {d_t}")
    if not (0.0 < p_fail < 1.0):
        raise ValueError(f"p_fail must be in (0, 1), got {p_fail}")
    value = eps * math.sqrt(delta / d_t) / math.sqrt(math.log(1.0 / p_fail))
    return min(value, 1.0)


def num_walks(c: float, d_t: float, r_max: float, eps: float, delta: float) -> int:
    """Walk count ceil(c*d_t*r_max/(eps^2*delta)), with a floor of one walk."""
    if min(c, d_t, r_max, eps, delta) <= 0:
        raise ValueError("all walk-count arguments must be positive")
    return max(1, math.ceil(c * d_t * r_max / (eps * eps * delta)))


def significance_delta(g: Graph, t: int) -> float:
    """Natural significance threshold d_t/m (weighted: d_t / total edge weight)."""
    if not (0 <= t < g.n):
        raise ValueError(f"node {t} out of range [0, {g.n})")
    denom = g.total_weight if g.weighted else float(g.m)
    if denom <= 0:
        raise ValueError("graph has no edges")
    return g.degree(t) / denom


@dataclass
class BipprParams:
    """Estimator parameters; derived fields follow the standard rules unless
    explicitly overridden."""

    alpha: float
    delta: float
    eps: float
    p_fail: float
    c: float
    r_max: float
    w: int

    @classmethod
    def derive(cls, alpha: float, delta: float, eps: float, p_fail: float,
               d_t: float, r_max: float | None = None, c: float | None = None,
               w: int | None = None) -> "BipprParams":
        if not (0.0 < alpha < 1.0):
            raise ValueError(f"alpha must be in (0, 1), got {alpha}")
        if c is None:
            c = chernoff_c(p_fail)
        if r_max is None:
            r_max = choose_r_max(eps, delta, d_t, p_fail)
        elif not (0.0 < r_max <= 1.0):
            raise ValueError(f"r_max must be in (0, 1], got {r_max}")
        if w is None:
            w = num_walks(c, d_t, r_max, eps, delta)
        elif w < 1:
            raise ValueError("w must be a positive integer")
        return cls(alpha=alpha, delta=delta, eps=eps, p_fail=p_fail,
                   c=c, r_max=r_max, w=int(w))


@dataclass
class PprEstimate:
    """An estimate with full provenance: both terms, parameters, and work counters."""

    value: float
    push_term: float
    walk_term: float
    params: BipprParams | None
    push_count: int
    push_work: float
    walk_steps: int
    d_t: float


class PreparedSource:
    """Two-phase estimator: run the forward push for a source once, then
    query any number of targets (or repeated trials) against the shared,
    immutable push state."""

    def __init__(self, g: Graph, alpha: float, s: int, r_max: float):
        g.require_walkable(s)
        self.graph = g
        self.source = s
        self.push: PushResult = approximate_pagerank(g, alpha, s, r_max)
        self._residual = self.push.residual_dense(g.n)

    def estimate(self, t: int, params: BipprParams, rng: RandomStream) -> PprEstimate:
        values, steps = self._walk_samples(t, params, rng, trials=1)
        return self._wrap(t, params, float(values[0]), steps)

    def estimate_many(self, t: int, params: BipprParams, rng: RandomStream,
                      trials: int) -> np.ndarray:
        """Estimates from ``trials`` independent walk batches over the shared push."""
        values, _ = self._walk_samples(t, params, rng, trials)
        return self.push.p.get(t, 0.0) + values

    def _walk_samples(self, t: int, params: BipprParams, rng: RandomStream,
                      trials: int) -> tuple[np.ndarray, int]:
        g = self.graph
        g.require_walkable(t)
        d_t = g.degree(t)
        terminals, steps = geometric_terminals(g, t, params.alpha,
                                               params.w * trials, rng)
        x = self._residual[terminals] * (d_t / g.degrees[terminals])
        bound = d_t * params.r_max
        if x.size and x.max() > bound * (1.0 + 1e-9):
            raise AssertionError(
                f"walk sample {x.max():g} exceeds d_t*r_max={bound:g}; "
                "push postcondition violated")
        return x.reshape(trials, params.w).mean(axis=1), steps

    def _wrap(self, t: int, params: BipprParams, walk_term: float,
              walk_steps: int) -> PprEstimate:
        push_term = self.push.p.get(t, 0.0)
        return PprEstimate(value=push_term + walk_term, push_term=push_term,
                           walk_term=walk_term, params=params,
                           push_count=self.push.push_count,
                           push_work=self.push.degree_work,
                           walk_steps=walk_steps, d_t=self.graph.degree(t))


def estimate_ppr(g: Graph, s: int, t: int, params: BipprParams,
                 rng: RandomStream) -> PprEstimate:
    """One-shot bidirectional estimate of the source-to-target PPR value.

    Unbiased; with probability >= 1-p_fail the error is within
    max(eps*true, 2e*delta) when parameters follow the derivation rules.
    """
    return PreparedSource(g, params.alpha, s, params.r_max).estimate(t, params, rng)


def estimate_ppr_batch(g: Graph, s: int, t: int, params: BipprParams,
                       rng: RandomStream, trials: int) -> np.ndarray:
    """Array of ``trials`` independent estimates sharing one forward push."""
    return PreparedSource(g, params.alpha, s, params.r_max).estimate_many(
        t, params, rng, trials)
