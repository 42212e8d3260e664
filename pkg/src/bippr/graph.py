"""Undirected weighted graph storage, edge-list ingestion, and walk steps."""
from __future__ import annotations

from typing import Iterable, TextIO

import numpy as np

__all__ = ["Graph", "EdgeListParseError", "load_edge_list", "degree", "step"]


class EdgeListParseError(ValueError):
    """Malformed edge-list input; the message carries the 1-based line number."""

    def __init__(self, line_no: int, message: str):
        super().__init__(f"line {line_no}: {message}")
        self.line_no = line_no


class Graph:
    """Immutable undirected weighted graph in compressed adjacency form.

    Adjacency is CSR-style (indptr / indices / weights), with a global
    cumulative-weight array so weighted neighbor sampling is a single binary
    search. Node labels are remapped to dense integer ids at load time; hot
    loops only ever see integers.

    A self-loop is stored once in its node's row and contributes its weight
    once to that node's degree. Isolated nodes are storable, but any walk or
    push starting from one fails fast.
    """

    __slots__ = ("n", "m", "indptr", "indices", "weights", "degrees",
                 "labels", "label_ids", "weighted", "total_weight", "_cum")

    def __init__(self, n: int, edges: dict, labels: list[str] | None = None,
                 weighted: bool = False):
        # edges: merged undirected edge dict {(u, v): weight} with u <= v.
        adj: list[dict[int, float]] = [dict() for _ in range(n)]
        for (u, v), w in edges.items():
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge ({u}, {v}) out of range for n={n}")
            if w <= 0:
                raise ValueError(f"edge ({u}, {v}) has non-positive weight {w}")
            adj[u][v] = adj[u].get(v, 0.0) + w
            if v != u:
                adj[v][u] = adj[v].get(u, 0.0) + w

        indptr = np.zeros(n + 1, dtype=np.int64)
        for v in range(n):
            indptr[v + 1] = indptr[v] + len(adj[v])
        nnz = int(indptr[-1])
        indices = np.zeros(nnz, dtype=np.int64)
        weights = np.zeros(nnz, dtype=np.float64)
        for v in range(n):
            row = sorted(adj[v].items())
            base = indptr[v]
            for k, (u, w) in enumerate(row):
                indices[base + k] = u
                weights[base + k] = w

        self.n = n
        self.m = len(edges)
        self.indptr = indptr
        self.indices = indices
        self.weights = weights
        self.degrees = np.add.reduceat(
            np.concatenate([weights, [0.0]]), indptr[:-1]
        ) if n else np.zeros(0)
        # reduceat yields garbage for empty rows: zero them explicitly
        empty = indptr[:-1] == indptr[1:]
        if empty.any():
            self.degrees[empty] = 0.0
        self.labels = list(labels) if labels is not None else [str(i) for i in range(n)]
        if len(self.labels) != n:
            raise ValueError("label count does not match node count")
        self.label_ids = {lab: i for i, lab in enumerate(self.labels)}
        self.weighted = weighted
        self.total_weight = float(sum(edges.values()))
        self._cum = np.concatenate([[0.0], np.cumsum(weights)])

    @classmethod
    def from_edges(cls, edges: Iterable[tuple], n: int | None = None,
                   weighted: bool = False) -> "Graph":
        """Build from (u, v) or (u, v, w) integer tuples, merging duplicates."""
        merged: dict[tuple[int, int], float] = {}
        max_node = -1
        for e in edges:
            if len(e) == 3:
                u, v, w = e
            else:
                u, v = e
                w = 1.0
            key = (u, v) if u <= v else (v, u)
            merged[key] = merged.get(key, 0.0) + float(w)
            max_node = max(max_node, u, v)
        if n is None:
            n = max_node + 1
        return cls(n, merged, weighted=weighted)

    def degree(self, v: int) -> float:
        if not (0 <= v < self.n):
            raise ValueError(f"node {v} out of range [0, {self.n})")
        return float(self.degrees[v])

    def is_isolated(self, v: int) -> bool:
        return self.indptr[v] == self.indptr[v + 1]

    def require_walkable(self, v: int) -> None:
        """Reject out-of-range or isolated nodes as walk/push endpoints."""
        if not (0 <= v < self.n):
            raise ValueError(f"node {v} out of range [0, {self.n})")
        if self.is_isolated(v):
            raise ValueError(f"node {self.labels[v]!r} is isolated")

    def neighbors(self, v: int) -> tuple[np.ndarray, np.ndarray]:
        a, b = self.indptr[v], self.indptr[v + 1]
        return self.indices[a:b], self.weights[a:b]

    def node_id(self, label: str) -> int:
        if label not in self.label_ids:
            raise KeyError(f"unknown node label {label!r}")
        return self.label_ids[label]

    def check(self) -> None:
        """Verify adjacency symmetry and the degree-sum identity."""
        rows = np.repeat(np.arange(self.n), np.diff(self.indptr))
        fwd = np.lexsort((self.indices, rows))
        rev = np.lexsort((rows, self.indices))
        if not (np.array_equal(rows[fwd], self.indices[rev])
                and np.array_equal(self.indices[fwd], rows[rev])
                and np.allclose(self.weights[fwd], self.weights[rev], rtol=0, atol=0)):
            raise ValueError("adjacency is not symmetric")
        loop_mass = float(self.weights[rows == self.indices].sum())
        expected = 2.0 * self.total_weight - loop_mass
        if abs(float(self.degrees.sum()) - expected) > 1e-9 * max(1.0, expected):
            raise ValueError("degree sum does not match total edge weight")


def load_edge_list(source: TextIO | Iterable[str], weighted: bool = False) -> Graph:
    """Parse an edge-list text stream into a Graph.

    Each non-comment line is "u v" (or "u v w" when ``weighted``). '#' starts
    a comment; blank lines are ignored. Labels are arbitrary strings mapped to
    dense ids in first-appearance order; duplicate edges sum their weights.
    """
    labels: list[str] = []
    ids: dict[str, int] = {}
    merged: dict[tuple[int, int], float] = {}

    def intern(label: str) -> int:
        if label not in ids:
            ids[label] = len(labels)
            labels.append(label)
        return ids[label]

    for line_no, raw in enumerate(source, start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tokens = line.split()
        if weighted:
            if len(tokens) not in (2, 3):
                raise EdgeListParseError(line_no, f"expected 2 or 3 tokens, got {len(tokens)}")
        elif len(tokens) != 2:
            raise EdgeListParseError(line_no, f"expected 2 tokens, got {len(tokens)}")
        w = 1.0
        if len(tokens) == 3:
            try:
                w = float(tokens[2])
            except ValueError:
                raise EdgeListParseError(line_no, f"non-numeric weight {tokens[2]!r}") from None
            if not (w > 0) or not np.isfinite(w):
                raise EdgeListParseError(line_no, f"weight must be positive, got {tokens[2]}")
        u, v = intern(tokens[0]), intern(tokens[1])
        key = (u, v) if u <= v else (v, u)
        merged[key] = merged.get(key, 0.0) + w

    return Graph(len(labels), merged, labels=labels, weighted=weighted)


def degree(g: Graph, v: int) -> float:
    """Weighted degree d_v (neighbor count on unweighted graphs)."""
    return g.degree(v)


def step_many(g: Graph, nodes: np.ndarray, rng) -> np.ndarray:
    """Advance each walk position one transition, w_{vu}/d_v per neighbor.

    Vectorized over ``nodes`` via one binary search on the global cumulative
    weight array. All nodes must be non-isolated.
    """
    starts = g.indptr[nodes]
    targets = g._cum[starts] + rng.random(len(nodes)) * g.degrees[nodes]
    j = np.searchsorted(g._cum, targets, side="right") - 1
    # float roundoff near the row boundary can land one slot past the row
    j = np.minimum(j, g.indptr[nodes + 1] - 1)
    j = np.maximum(j, starts)
    return g.indices[j]


def step(g: Graph, v: int, rng) -> int:
    """Sample one neighbor of v with probability w_{vu}/d_v."""
    g.require_walkable(v)
    return int(step_many(g, np.array([v], dtype=np.int64), rng)[0])
