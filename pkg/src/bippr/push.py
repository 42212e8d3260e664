"""Forward local-update (push) algorithm producing sparse PPR estimates and
residuals, with degree-weighted work accounting."""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

import numpy as np

from .graph import Graph

__all__ = ["PushResult", "approximate_pagerank", "push_from_distribution"]


@dataclass
class PushResult:
    """Sparse estimate vector p and residual vector r after forward push.

    On return every residual ratio r[v]/d_v is <= r_max, each sample drawn
    against r is bounded by d_t*r_max, and degree_work <= 1/(alpha*r_max).
    """

    p: dict[int, float]
    r: dict[int, float]
    push_count: int
    degree_work: float
    alpha: float
    r_max: float

    def residual_dense(self, n: int) -> np.ndarray:
        out = np.zeros(n)
        for v, rv in self.r.items():
            out[v] = rv
        return out


def approximate_pagerank(g: Graph, alpha: float, s: int, r_max: float,
                         on_push=None) -> PushResult:
    """Push from a unit of residual mass at s until all ratios r[v]/d_v <= r_max.

    Each push converts an alpha-fraction of the residual at the popped node
    into settled estimate and spreads the rest to its neighbors in proportion
    to edge weight. ``on_push(p, r)``, if given, is called after every push
    with the live dicts (read-only; used by invariant tests).
    """
    g.require_walkable(s)
    return push_from_distribution(g, alpha, {s: 1.0}, r_max, on_push=on_push)


def push_from_distribution(g: Graph, alpha: float, sigma: dict[int, float],
                           r_max: float, on_push=None) -> PushResult:
    """Identical push loop with the residual initialized to a distribution sigma."""
    if not (0.0 < alpha < 1.0):
        raise ValueError(f"alpha must be in (0, 1), got {alpha}")
    if not (r_max > 0):
        raise ValueError(f"r_max must be positive, got {r_max}")
    total = 0.0
    for v, mass in sigma.items():
        if mass < 0:
            raise ValueError("sigma entries must be nonnegative")
        if mass > 0:
            g.require_walkable(v)
        total += mass
    if abs(total - 1.0) > 1e-12:
        raise ValueError(f"sigma must sum to 1, got {total}")

    p: dict[int, float] = {}
    r: dict[int, float] = {v: m for v, m in sigma.items() if m > 0}
    degrees = g.degrees
    queue: deque[int] = deque()
    queued: set[int] = set()
    for v in r:
        if r[v] / degrees[v] > r_max:
            queue.append(v)
            queued.add(v)

    push_count = 0
    degree_work = 0.0
    indptr, indices, weights = g.indptr, g.indices, g.weights
    while queue:
        u = queue.popleft()
        queued.discard(u)
        ru = r.pop(u, 0.0)
        du = degrees[u]
        if ru / du <= r_max:
            # residual can only grow while queued, so this is unreachable in
            # practice; restore defensively rather than drop mass
            if ru > 0.0:
                r[u] = ru
            continue
        # residual is read once and zeroed before spreading, so a self-loop
        # routes its share back into r[u] like any other neighbor
        p[u] = p.get(u, 0.0) + alpha * ru
        spread = (1.0 - alpha) * ru / du
        for k in range(indptr[u], indptr[u + 1]):
            v = int(indices[k])
            rv = r.get(v, 0.0) + spread * weights[k]
            r[v] = rv
            if v not in queued and rv / degrees[v] > r_max:
                queue.append(v)
                queued.add(v)
        push_count += 1
        degree_work += float(du)
        if on_push is not None:
            on_push(p, r)

    return PushResult(p=p, r=r, push_count=push_count, degree_work=degree_work,
                      alpha=alpha, r_max=r_max)
