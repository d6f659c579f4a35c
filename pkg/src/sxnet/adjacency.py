"""Level-k adjacency matrices over a simplicial complex.

Two k-simplices are lower adjacent when they share a (k-1)-face, upper
adjacent when both are faces of one stored (k+1)-simplex. The combined
level matrix keeps pairs that are lower adjacent and NOT upper adjacent
(k >= 1); at level 0 only upper adjacency is meaningful and the combined
matrix is plain graph adjacency of the 1-skeleton.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Iterator, Optional

import numpy as np

from .complexes import Simplex, SimplicialComplex

__all__ = [
    "BooleanMatrix",
    "LevelAdjacency",
    "lower_adjacency",
    "upper_adjacency",
    "level_adjacency",
    "simplicial_degree",
    "connected_components",
    "components_at_level",
    "is_irreducible",
]


class BooleanMatrix:
    """Sparse symmetric 0/1 matrix with a zero diagonal.

    Stored as per-row neighbor sets; rows are exposed as sorted tuples so
    every traversal is deterministic.
    """

    __slots__ = ("n", "_rows")

    def __init__(self, n: int, pairs: Iterable[tuple[int, int]] = ()) -> None:
        if n < 0:
            raise ValueError("matrix size must be >= 0")
        self.n = n
        rows: list[set[int]] = [set() for _ in range(n)]
        for i, j in pairs:
            if not (0 <= i < n and 0 <= j < n):
                raise ValueError(f"entry ({i},{j}) out of range for size {n}")
            if i == j:
                raise ValueError(f"diagonal entry ({i},{i}) is not allowed")
            rows[i].add(j)
            rows[j].add(i)
        self._rows: tuple[tuple[int, ...], ...] = tuple(
            tuple(sorted(r)) for r in rows
        )

    def entry(self, i: int, j: int) -> int:
        return 1 if j in self._rows[i] else 0

    def neighbors(self, i: int) -> tuple[int, ...]:
        return self._rows[i]

    def row_sum(self, i: int) -> int:
        return len(self._rows[i])

    def row_sums(self) -> np.ndarray:
        return np.array([len(r) for r in self._rows], dtype=int)

    def pairs(self) -> Iterator[tuple[int, int]]:
        """Canonical (i, j) with i < j, in row-major order."""
        for i, row in enumerate(self._rows):
            for j in row:
                if i < j:
                    yield (i, j)

    @property
    def nnz(self) -> int:
        return sum(len(r) for r in self._rows)

    def is_zero(self) -> bool:
        return self.nnz == 0

    def to_dense(self) -> np.ndarray:
        dense = np.zeros((self.n, self.n), dtype=float)
        for i, row in enumerate(self._rows):
            for j in row:
                dense[i, j] = 1.0
        return dense

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, BooleanMatrix):
            return NotImplemented
        return self.n == other.n and self._rows == other._rows

    def __hash__(self) -> int:
        return hash((self.n, self._rows))

    def __repr__(self) -> str:
        return f"BooleanMatrix(n={self.n}, nnz={self.nnz})"


@dataclass(frozen=True)
class LevelAdjacency:
    """The three level-k matrices plus the simplex index basis.

    For k = 0 there is no lower matrix and combined equals upper; for
    k >= 1, combined(i, j) = lower(i, j) AND NOT upper(i, j).
    """

    k: int
    simplices: tuple[Simplex, ...]
    lower: Optional[BooleanMatrix]
    upper: BooleanMatrix
    combined: BooleanMatrix

    @property
    def n(self) -> int:
        return len(self.simplices)


def _require_level(complex_: SimplicialComplex, k: int) -> tuple[Simplex, ...]:
    level = complex_.simplices(k)
    if not level:
        raise ValueError(f"complex has no {k}-simplices")
    return level


def lower_adjacency(complex_: SimplicialComplex, k: int) -> BooleanMatrix:
    """Lower adjacency at level k: entry (i, j) = 1 iff the two k-simplices
    share a common (k-1)-face, equivalently their intersection has size k.

    Not defined for k = 0 (there are no faces of dimension -1).
    """
    if k < 1:
        raise ValueError("lower adjacency is not defined for 0-simplices")
    level = _require_level(complex_, k)
    buckets: dict[tuple[int, ...], list[int]] = {}
    for idx, s in enumerate(level):
        for facet in itertools.combinations(s.vertices, k):
            buckets.setdefault(facet, []).append(idx)
    pairs: list[tuple[int, int]] = []
    for members in buckets.values():
        # two distinct k-simplices share at most one size-k subset, so each
        # lower-adjacent pair shows up in exactly one bucket
        pairs.extend(itertools.combinations(members, 2))
    return BooleanMatrix(len(level), pairs)


def upper_adjacency(complex_: SimplicialComplex, k: int) -> BooleanMatrix:
    """Upper adjacency at level k: entry (i, j) = 1 iff the two k-simplices
    are both faces of a single stored (k+1)-simplex. For k = 0 this is
    exactly the edge relation of the 1-skeleton.
    """
    if k < 0:
        raise ValueError(f"level must be >= 0, got {k}")
    level = _require_level(complex_, k)
    positions = {s: i for i, s in enumerate(level)}
    pairs: list[tuple[int, int]] = []
    for parent in complex_.simplices(k + 1):
        member_ids = []
        for face in itertools.combinations(parent.vertices, k + 1):
            idx = positions.get(Simplex(face))
            if idx is None:
                raise ValueError(
                    f"complex is not closed: face {face} of {parent} is missing"
                )
            member_ids.append(idx)
        pairs.extend(itertools.combinations(member_ids, 2))
    return BooleanMatrix(len(level), pairs)


def level_adjacency(complex_: SimplicialComplex, k: int) -> LevelAdjacency:
    """Lower, upper and combined matrices for level k.

    At k = dim the upper matrix is identically zero, so combined = lower.
    """
    level = _require_level(complex_, k)
    upper = upper_adjacency(complex_, k)
    if k == 0:
        return LevelAdjacency(k=0, simplices=level, lower=None, upper=upper,
                              combined=upper)
    lower = lower_adjacency(complex_, k)
    combined_pairs = [
        (i, j) for i, j in lower.pairs() if not upper.entry(i, j)
    ]
    combined = BooleanMatrix(len(level), combined_pairs)
    return LevelAdjacency(k=k, simplices=level, lower=lower, upper=upper,
                          combined=combined)


def simplicial_degree(adjacency: LevelAdjacency) -> np.ndarray:
    """Degree of each k-simplex: the row sum of the combined matrix."""
    return adjacency.combined.row_sums()


def connected_components(matrix: BooleanMatrix) -> list[list[int]]:
    """Components of the matrix's graph, ordered by smallest member index;
    members sorted. Isolated indices form singleton components."""
    seen = [False] * matrix.n
    components: list[list[int]] = []
    for start in range(matrix.n):
        if seen[start]:
            continue
        seen[start] = True
        queue = [start]
        comp = []
        while queue:
            v = queue.pop()
            comp.append(v)
            for w in matrix.neighbors(v):
                if not seen[w]:
                    seen[w] = True
                    queue.append(w)
        components.append(sorted(comp))
    return components


def components_at_level(complex_: SimplicialComplex, k: int,
                        adjacency: LevelAdjacency | None = None) -> list[list[int]]:
    """Connected components of k-simplex indices under the combined matrix.

    The complex is connected at level k iff there is exactly one component
    (a level holding a single simplex counts as connected).
    """
    if adjacency is None:
        adjacency = level_adjacency(complex_, k)
    elif adjacency.k != k:
        raise ValueError(f"adjacency is for level {adjacency.k}, not {k}")
    return connected_components(adjacency.combined)


def is_irreducible(matrix: BooleanMatrix) -> bool:
    """Whether no index bipartition zeroes the off-diagonal block.

    For a symmetric 0/1 matrix this is exactly connectivity of its graph
    with n >= 1; a 1x1 zero matrix counts as irreducible (single simplex).
    """
    if matrix.n == 0:
        return False
    return len(connected_components(matrix)) == 1
