"""Undirected simple graphs and per-node spreading rates.

Graphs are dense 0/1 adjacency matrices with contiguous integer node ids.
Only connected simple graphs are accepted: self-loops, duplicate edges,
id gaps, and disconnected inputs are rejected at construction so every
downstream routine may assume irreducibility.
"""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass, field

import numpy as np

from .errors import InputError

__all__ = ["Graph", "RateConfig", "parse_edge_list", "format_edge_list", "walk_counts"]


def _frozen_array(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class Graph:
    """Connected simple undirected graph on nodes 0..n-1."""

    n: int
    adjacency: np.ndarray
    degrees: np.ndarray = field(repr=False)
    link_count: int

    @classmethod
    def from_edges(cls, edges, n: int | None = None) -> "Graph":
        """Build a graph from an iterable of (u, v) pairs.

        Node count defaults to max id + 1.  Every id in 0..n-1 must occur
        in at least one edge; a gap would silently create an isolated node.
        """
        edges = list(edges)
        if not edges:
            raise InputError("empty edge list", code="parse-error")
        seen: set[tuple[int, int]] = set()
        for u, v in edges:
            u, v = int(u), int(v)
            if u < 0 or v < 0:
                raise InputError(f"negative node id in edge ({u}, {v})", code="parse-error")
            if u == v:
                raise InputError(f"self-loop at node {u}", code="self-loop")
            key = (min(u, v), max(u, v))
            if key in seen:
                raise InputError(f"duplicate edge ({u}, {v})", code="duplicate-edge")
            seen.add(key)
        max_id = max(max(e) for e in seen)
        if n is None:
            n = max_id + 1
        elif max_id >= n:
            raise InputError(f"node id {max_id} exceeds declared size {n}", code="parse-error")
        used = {u for e in seen for u in e}
        missing = sorted(set(range(n)) - used)
        if missing:
            raise InputError(f"gap in node ids, unused: {missing}", code="gap-in-node-ids")
        adj = np.zeros((n, n))
        for u, v in seen:
            adj[u, v] = 1.0
            adj[v, u] = 1.0
        _require_connected(adj)
        degrees = adj.sum(axis=1).astype(np.int64)
        return cls(
            n=n,
            adjacency=_frozen_array(adj),
            degrees=_frozen_array(degrees),
            link_count=len(seen),
        )

    def edges(self) -> list[tuple[int, int]]:
        iu, iv = np.triu_indices(self.n, k=1)
        mask = self.adjacency[iu, iv] > 0
        return list(zip(iu[mask].tolist(), iv[mask].tolist()))

    def neighbors(self, i: int) -> np.ndarray:
        return np.flatnonzero(self.adjacency[i])


def _require_connected(adj: np.ndarray) -> None:
    n = adj.shape[0]
    seen = np.zeros(n, dtype=bool)
    queue: deque[int] = deque([0])
    seen[0] = True
    while queue:
        i = queue.popleft()
        for j in np.flatnonzero(adj[i]):
            if not seen[j]:
                seen[j] = True
                queue.append(int(j))
    if not seen.all():
        raise InputError("disconnected graph", code="disconnected-graph")


def parse_edge_list(text: str) -> Graph:
    """Parse a whitespace-separated edge list ("u v" per line, # comments)."""
    edges = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 2:
            raise InputError(f"line {lineno}: expected two node ids, got {raw!r}", code="parse-error")
        try:
            u, v = int(parts[0]), int(parts[1])
        except ValueError:
            raise InputError(f"line {lineno}: non-integer node id in {raw!r}", code="parse-error") from None
        edges.append((u, v))
    return Graph.from_edges(edges)


def format_edge_list(g: Graph) -> str:
    return "".join(f"{u} {v}\n" for u, v in g.edges())


def walk_counts(g: Graph) -> tuple[float, float]:
    """Total and closed walks of length three, by matrix powers.

    Returns (total, closed) where total counts all directed 3-step walks
    and closed counts those returning to their start node.  The closed
    count equals six times the number of triangles.
    """
    a = g.adjacency
    ones = np.ones(g.n)
    total = float(ones @ (a @ (a @ (a @ ones))))
    closed = float(np.sum((a @ a) * a))
    return total, closed


def _as_rate_vector(value, n: int, name: str) -> np.ndarray:
    arr = np.asarray(value, dtype=float)
    if arr.ndim == 0:
        arr = np.full(n, float(arr))
    if arr.shape != (n,):
        raise InputError(f"{name} must be a scalar or length-{n} vector, got shape {arr.shape}", code="length-mismatch")
    if not np.all(np.isfinite(arr)):
        raise InputError(f"{name} contains non-finite entries", code="invalid-rates")
    if np.any(arr <= 0):
        raise InputError(f"{name} must be strictly positive", code="invalid-rates")
    return arr


@dataclass(frozen=True)
class RateConfig:
    """Per-node infection rates beta, curing rates delta, and derived fields.

    tau is the per-node effective rate beta/delta; gamma[i] is the total
    infection pressure sum_j a_ij beta_j that node i sees when every
    neighbor is infected.
    """

    beta: np.ndarray
    delta: np.ndarray
    tau: np.ndarray = field(repr=False)
    gamma: np.ndarray = field(repr=False)

    @classmethod
    def for_graph(cls, g: Graph, beta, delta) -> "RateConfig":
        b = _as_rate_vector(beta, g.n, "beta")
        d = _as_rate_vector(delta, g.n, "delta")
        return cls(
            beta=_frozen_array(b),
            delta=_frozen_array(d),
            tau=_frozen_array(b / d),
            gamma=_frozen_array(g.adjacency @ b),
        )

    @classmethod
    def from_tau(cls, g: Graph, tau) -> "RateConfig":
        """Effective rates only: unit curing rates, beta = tau."""
        t = _as_rate_vector(tau, g.n, "tau")
        return cls.for_graph(g, t, np.ones(g.n))

    @classmethod
    def from_json(cls, g: Graph, text: str) -> "RateConfig":
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise InputError(f"rates file is not valid JSON: {exc}", code="parse-error") from None
        if not isinstance(doc, dict) or "beta" not in doc or "delta" not in doc:
            raise InputError('rates file must be an object with "beta" and "delta"', code="parse-error")
        return cls.for_graph(g, doc["beta"], doc["delta"])
