"""Random-walk samplers with a reproducible, splittable random-stream contract."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .graph import Graph, step_many

__all__ = ["RandomStream", "WalkRecord", "sample_geometric_walk",
           "sample_fixed_walk", "geometric_terminals", "fixed_walk_positions"]

_MASK64 = (1 << 64) - 1


class RandomStream:
    """Counter-based random stream keyed by (seed, stream_id).

    Identical (seed, stream_id) always yields the identical sample sequence;
    distinct stream_ids are statistically independent (Philox keying), so
    parallel workers can each own a derived child stream.
    """

    __slots__ = ("seed", "stream_id", "_gen")

    def __init__(self, seed: int, stream_id: int = 0):
        self.seed = seed & _MASK64
        self.stream_id = stream_id & _MASK64
        self._gen = np.random.Generator(
            np.random.Philox(key=np.array([self.seed, self.stream_id], dtype=np.uint64))
        )

    def child(self, index: int) -> "RandomStream":
        """Derive an independent stream, deterministic in (stream_id, index)."""
        mixed = (self.stream_id * 6364136223846793005
                 + (index + 1) * 1442695040888963407) & _MASK64
        return RandomStream(self.seed, mixed)

    def random(self, size=None):
        return self._gen.random(size)

    @property
    def generator(self) -> np.random.Generator:
        return self._gen


@dataclass
class WalkRecord:
    """A walk trajectory; every consecutive pair of positions is an edge."""

    positions: list[int]

    @property
    def length(self) -> int:
        return len(self.positions) - 1


def sample_geometric_walk(g: Graph, start: int, alpha: float, rng: RandomStream) -> int:
    """Terminal node of a walk whose length is Geometric(alpha) on {0,1,2,...}.

    The stop/continue decision is drawn before each step, so the walk may stop
    at the start with probability alpha. The terminal node is distributed as
    the personalized PageRank vector of ``start``.
    """
    g.require_walkable(start)
    _check_alpha(alpha)
    v = start
    while rng.random() >= alpha:
        v = int(step_many(g, np.array([v], dtype=np.int64), rng)[0])
    return v


def sample_fixed_walk(g: Graph, start: int, ell: int, rng: RandomStream) -> WalkRecord:
    """Walk of exactly ``ell`` steps; positions[k] is distributed as e_start W^k."""
    g.require_walkable(start)
    if ell < 0:
        raise ValueError("walk length must be nonnegative")
    positions = [start]
    v = start
    for _ in range(ell):
        v = int(step_many(g, np.array([v], dtype=np.int64), rng)[0])
        positions.append(v)
    return WalkRecord(positions)


def geometric_terminals(g: Graph, start: int, alpha: float, num: int,
                        rng: RandomStream, chunk: int = 1 << 20,
                        return_lengths: bool = False):
    """Terminals of ``num`` independent geometric-length walks, plus total steps.

    Vectorized batch version of :func:`sample_geometric_walk`; walks are
    advanced in lockstep with the still-active subset shrinking geometrically.
    With ``return_lengths`` also returns the per-walk length array.
    """
    g.require_walkable(start)
    _check_alpha(alpha)
    if num <= 0:
        raise ValueError("number of walks must be positive")
    out = np.empty(num, dtype=np.int64)
    lengths = np.zeros(num, dtype=np.int64) if return_lengths else None
    total_steps = 0
    done = 0
    while done < num:
        size = min(chunk, num - done)
        pos = np.full(size, start, dtype=np.int64)
        active = rng.random(size) >= alpha
        while True:
            idx = np.nonzero(active)[0]
            if idx.size == 0:
                break
            pos[idx] = step_many(g, pos[idx], rng)
            if lengths is not None:
                lengths[done + idx] += 1
            total_steps += idx.size
            active[idx] = rng.random(idx.size) >= alpha
        out[done:done + size] = pos
        done += size
    if return_lengths:
        return out, total_steps, lengths
    return out, total_steps


def fixed_walk_positions(g: Graph, start: int, ell: int, num: int,
                         rng: RandomStream) -> np.ndarray:
    """(num, ell+1) array of trajectories of exactly ``ell`` steps from start."""
    g.require_walkable(start)
    if ell < 0:
        raise ValueError("walk length must be nonnegative")
    if num <= 0:
        raise ValueError("number of walks must be positive")
    pos = np.empty((num, ell + 1), dtype=np.int64)
    pos[:, 0] = start
    for k in range(ell):
        pos[:, k + 1] = step_many(g, pos[:, k], rng)
    return pos


def _check_alpha(alpha: float) -> None:
    if not (0.0 < alpha < 1.0):
        raise ValueError(f"alpha must be in (0, 1), got {alpha}")
