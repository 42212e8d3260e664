"""Plain Monte-Carlo PPR baseline: empirical frequency of the target among
terminals of geometric-length walks from the source."""
from __future__ import annotations

import math

from .estimator import PprEstimate, chernoff_c
from .graph import Graph
from .walk import RandomStream, geometric_terminals

__all__ = ["mc_num_walks", "mc_estimate"]


def mc_num_walks(delta: float, eps: float, p_fail: float) -> int:
    """Walk count c/(eps^2*delta) matching the bidirectional estimator's
    Chernoff constant, for apples-to-apples benchmarks."""
    if not (delta > 0):
        raise ValueError(f"delta must be positive, got {delta}")
    if not (0.0 < eps <= 1.0):
        raise ValueError(f"eps must be in (0, 1], got {eps}")
    return max(1, math.ceil(chernoff_c(p_fail) / (eps * eps * delta)))


def mc_estimate(g: Graph, s: int, t: int, alpha: float, num_walks: int,
                rng: RandomStream) -> PprEstimate:
    """Estimate the source-to-target PPR as a terminal-node hit frequency."""
    if num_walks <= 0:
        raise ValueError("num_walks must be positive")
    if not (0 <= t < g.n):
        raise ValueError(f"node {t} out of range [0, {g.n})")
    terminals, steps = geometric_terminals(g, s, alpha, num_walks, rng)
    value = float((terminals == t).sum()) / num_walks
    return PprEstimate(value=value, push_term=0.0, walk_term=value,
                       params=None, push_count=0, push_work=0.0,
                       walk_steps=steps, d_t=g.degree(t))
