"""Simplicial walks and shortest-path distances at a fixed level k.

A level-k walk alternates k-simplices with (k-1)-simplex connectors; each
connector is a common face of its two neighbors and consecutive k-simplices
must not be upper adjacent. Folding both constraints into the combined
matrix, walks are plain walks on that matrix's graph, and the distance is
the hop count (number of connectors), so d(s, s) = 0. At level 0 walks are
ordinary graph walks and have no connectors.
"""
from __future__ import annotations

from collections import deque
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .adjacency import LevelAdjacency
from .complexes import Simplex, SimplicialComplex

__all__ = [
    "UNREACHABLE",
    "DistanceTable",
    "WalkSequence",
    "shortest_distances",
    "all_pairs_distances",
    "witness_walk",
    "format_walk",
]

# Sentinel distance for unreachable pairs; callers must branch on it rather
# than feed it into arithmetic.
UNREACHABLE: int = -1


@dataclass(frozen=True)
class WalkSequence:
    """A walk at level k: simplex steps plus (k-1)-connectors between them.

    ``connectors`` is empty at level 0, where the walk is the graph walk on
    vertices. ``length`` is the hop count.
    """

    k: int
    simplices: tuple[Simplex, ...]
    connectors: tuple[Simplex, ...]

    def __post_init__(self) -> None:
        if not self.simplices:
            raise ValueError("a walk needs at least one simplex")
        hops = len(self.simplices) - 1
        want = 0 if self.k == 0 else hops
        if len(self.connectors) != want:
            raise ValueError(
                f"level-{self.k} walk with {hops} hops needs {want} connectors,"
                f" got {len(self.connectors)}"
            )

    @property
    def length(self) -> int:
        return len(self.simplices) - 1


@dataclass(eq=False)
class DistanceTable:
    """Symmetric hop-distance matrix for one level; UNREACHABLE where no
    walk of finite length exists."""

    k: int
    dist: np.ndarray

    def is_reachable(self, i: int, j: int) -> bool:
        return self.dist[i, j] != UNREACHABLE

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, DistanceTable):
            return NotImplemented
        return self.k == other.k and np.array_equal(self.dist, other.dist)


def shortest_distances(adjacency: LevelAdjacency, source: int) -> np.ndarray:
    """Breadth-first hop distances from one simplex index over the combined
    matrix; UNREACHABLE marks indices with no finite walk."""
    n = adjacency.n
    if not (0 <= source < n):
        raise ValueError(f"source index {source} out of range for {n} simplices")
    dist = np.full(n, UNREACHABLE, dtype=int)
    dist[source] = 0
    queue = deque([source])
    combined = adjacency.combined
    while queue:
        v = queue.popleft()
        for w in combined.neighbors(v):
            if dist[w] == UNREACHABLE:
                dist[w] = dist[v] + 1
                queue.append(w)
    return dist


def all_pairs_distances(adjacency: LevelAdjacency, threads: int = 1) -> DistanceTable:
    """Hop distances between all pairs of k-simplices.

    Per-source searches are independent; with threads > 1 they run in a
    pool and are merged in source order, so the table is deterministic
    either way.
    """
    n = adjacency.n
    if threads > 1 and n > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            rows = list(pool.map(lambda s: shortest_distances(adjacency, s), range(n)))
    else:
        rows = [shortest_distances(adjacency, s) for s in range(n)]
    dist = np.vstack(rows) if rows else np.zeros((0, 0), dtype=int)
    return DistanceTable(k=adjacency.k, dist=dist)


def _least_parent_bfs(adjacency: LevelAdjacency, source: int) -> list[int]:
    """Parent indices for shortest walks from source, choosing the least
    simplex index at each BFS layer; -1 marks unreached (and the source)."""
    n = adjacency.n
    combined = adjacency.combined
    parent = [-1] * n
    visited = [False] * n
    visited[source] = True
    frontier = [source]
    while frontier:
        nxt: list[int] = []
        for v in frontier:  # ascending: first assignment is the least parent
            for w in combined.neighbors(v):
                if not visited[w]:
                    visited[w] = True
                    parent[w] = v
                    nxt.append(w)
        frontier = sorted(nxt)
    return parent


def witness_walk(
    complex_: SimplicialComplex,
    adjacency: LevelAdjacency,
    start: Simplex,
    end: Simplex,
) -> Optional[WalkSequence]:
    """A shortest walk from ``start`` to ``end``, or None if unreachable.

    Ties between equal-length walks are broken toward the lexicographically
    least simplex index at each BFS layer. Each connector is the unique
    common (k-1)-face of its two neighbors (their intersection).
    """
    k = adjacency.k
    for s in (start, end):
        if s not in complex_:
            raise ValueError(f"simplex {s} is not in the complex")
        if s.dim != k:
            raise ValueError(f"simplex {s} has dimension {s.dim}, expected {k}")
    positions = {s: i for i, s in enumerate(adjacency.simplices)}
    i, j = positions[start], positions[end]
    if i == j:
        return WalkSequence(k=k, simplices=(start,), connectors=())
    parent = _least_parent_bfs(adjacency, i)
    if parent[j] == -1:
        return None
    path = [j]
    while path[-1] != i:
        path.append(parent[path[-1]])
    path.reverse()
    steps = tuple(adjacency.simplices[p] for p in path)
    if k == 0:
        return WalkSequence(k=0, simplices=steps, connectors=())
    connectors = tuple(
        Simplex(a.intersection(b)) for a, b in zip(steps, steps[1:])
    )
    return WalkSequence(k=k, simplices=steps, connectors=connectors)


def format_walk(walk: WalkSequence) -> str:
    """One-line diagnostic form: simplices as {v1,v2,...}, connectors
    prefixed "via"."""
    if walk.k == 0:
        return "; ".join(repr(s) for s in walk.simplices)
    parts = [repr(walk.simplices[0])]
    for conn, nxt in zip(walk.connectors, walk.simplices[1:]):
        parts.append(f"via {conn!r}")
        parts.append(repr(nxt))
    return "; ".join(parts)
