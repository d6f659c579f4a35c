"""Simplicial centrality measures at a fixed level k.

All five measures read the combined level-k matrix, so a score speaks about
a simplex's position among its peers at that level: vertices at level 0,
edges at level 1, triangles at level 2. Scores come back aligned to the
level's simplex index basis together with per-simplex flags, and can be
turned into dense rankings.
"""
from __future__ import annotations

import itertools
import math
from collections import deque
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Mapping, Optional, Sequence

import numpy as np

from .adjacency import LevelAdjacency, connected_components
from .complexes import Simplex
from .walks import UNREACHABLE, DistanceTable

__all__ = [
    "MEASURES",
    "ISOLATED",
    "UNREACHABLE_RESTRICTED",
    "PowerIterationError",
    "CentralityScores",
    "RankedEntry",
    "Ranking",
    "LiftEntry",
    "ConcordanceEntry",
    "CrossLevelReport",
    "degree_centrality",
    "closeness_centrality",
    "betweenness_centrality",
    "eigenvector_centrality",
    "subgraph_centrality",
    "rank_simplices",
    "cross_level_report",
]

MEASURES = ("degree", "closeness", "betweenness", "eigenvector", "subgraph")

ISOLATED = "ISOLATED"
UNREACHABLE_RESTRICTED = "UNREACHABLE-RESTRICTED"


class PowerIterationError(RuntimeError):
    """Power iteration failed to reach the requested residual."""

    def __init__(self, message: str, residual: float, iterations: int) -> None:
        super().__init__(message)
        self.residual = residual
        self.iterations = iterations


@dataclass(frozen=True)
class CentralityScores:
    """Scores for one measure at one level, aligned to the simplex basis."""

    k: int
    measure: str
    simplices: tuple[Simplex, ...]
    values: np.ndarray
    flags: tuple[tuple[str, ...], ...]

    def __post_init__(self) -> None:
        if len(self.simplices) != len(self.values) or len(self.simplices) != len(self.flags):
            raise ValueError("simplices, values and flags must align")


def _no_flags(n: int) -> tuple[tuple[str, ...], ...]:
    return tuple(() for _ in range(n))


def degree_centrality(adjacency: LevelAdjacency) -> CentralityScores:
    """Number of other k-simplices each k-simplex is adjacent to.

    Equals the row sum of the combined matrix.
    """
    values = adjacency.combined.row_sums()
    return CentralityScores(
        k=adjacency.k,
        measure="degree",
        simplices=adjacency.simplices,
        values=values,
        flags=_no_flags(adjacency.n),
    )


def closeness_centrality(adjacency: LevelAdjacency,
                         distances: DistanceTable) -> CentralityScores:
    """Reciprocal of farness: 1 over the sum of hop distances to peers.

    On a disconnected level the sum runs over reachable peers only and the
    simplex is flagged UNREACHABLE-RESTRICTED; a simplex with no reachable
    peer at all scores 0 and is flagged ISOLATED.
    """
    if distances.k != adjacency.k:
        raise ValueError(
            f"distance table is for level {distances.k}, not {adjacency.k}"
        )
    n = adjacency.n
    values = np.zeros(n, dtype=float)
    flags: list[tuple[str, ...]] = []
    for i in range(n):
        row = distances.dist[i]
        reachable = [row[j] for j in range(n) if j != i and row[j] != UNREACHABLE]
        if not reachable:
            values[i] = 0.0
            flags.append((ISOLATED,))
        else:
            values[i] = 1.0 / float(sum(reachable))
            if len(reachable) < n - 1:
                flags.append((UNREACHABLE_RESTRICTED,))
            else:
                flags.append(())
    return CentralityScores(
        k=adjacency.k,
        measure="closeness",
        simplices=adjacency.simplices,
        values=values,
        flags=tuple(flags),
    )


def _betweenness_from_source(adjacency: LevelAdjacency, source: int) -> np.ndarray:
    """One source's dependency contribution (Brandes accumulation)."""
    combined = adjacency.combined
    n = adjacency.n
    dist = np.full(n, UNREACHABLE, dtype=int)
    sigma = np.zeros(n, dtype=float)
    preds: list[list[int]] = [[] for _ in range(n)]
    dist[source] = 0
    sigma[source] = 1.0
    order: list[int] = []
    queue = deque([source])
    while queue:
        v = queue.popleft()
        order.append(v)
        for w in combined.neighbors(v):
            if dist[w] == UNREACHABLE:
                dist[w] = dist[v] + 1
                queue.append(w)
            if dist[w] == dist[v] + 1:
                sigma[w] += sigma[v]
                preds[w].append(v)
    delta = np.zeros(n, dtype=float)
    for w in reversed(order):
        for v in preds[w]:
            delta[v] += sigma[v] / sigma[w] * (1.0 + delta[w])
    delta[source] = 0.0
    return delta


def betweenness_centrality(adjacency: LevelAdjacency, threads: int = 1) -> CentralityScores:
    """Fraction of shortest walks passing through each k-simplex.

    For every unordered pair of distinct, mutually reachable k-simplices
    (endpoints excluded) the count of shortest walks through the simplex is
    divided by the total count for the pair; the sums are unnormalized.
    Contributions are accumulated per source and reduced in index order, so
    the result is reproducible bit for bit regardless of ``threads``.
    """
    n = adjacency.n
    if threads > 1 and n > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            deltas = list(pool.map(
                lambda s: _betweenness_from_source(adjacency, s), range(n)
            ))
    else:
        deltas = [_betweenness_from_source(adjacency, s) for s in range(n)]
    totals = np.zeros(n, dtype=float)
    for delta in deltas:  # fixed source order: deterministic float sums
        totals += delta
    totals /= 2.0  # each unordered pair was visited from both endpoints
    return CentralityScores(
        k=adjacency.k,
        measure="betweenness",
        simplices=adjacency.simplices,
        values=totals,
        flags=_no_flags(n),
    )


def eigenvector_centrality(adjacency: LevelAdjacency, tol: float = 1e-10,
                           max_iter: int = 100_000) -> CentralityScores:
    """Principal-eigenvector scores of the combined matrix, max-normalized.

    Each connected component with at least two simplices gets the Perron
    eigenvector of its submatrix by power iteration (run on A + I so that
    bipartite components converge), scaled so the component maximum is
    exactly 1; isolated simplices score 0 and are flagged ISOLATED. The
    iteration stops once the residual max|A x - lambda x| (with x scaled to
    unit maximum) is at most ``tol``.

    Raises
    ------
    PowerIterationError
        If the residual has not reached ``tol`` after ``max_iter``
        iterations; the achieved residual is attached.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    n = adjacency.n
    values = np.zeros(n, dtype=float)
    flags: list[tuple[str, ...]] = [()] * n
    for component in connected_components(adjacency.combined):
        if len(component) == 1:
            flags[component[0]] = (ISOLATED,)
            continue
        sub = np.zeros((len(component), len(component)), dtype=float)
        local = {v: i for i, v in enumerate(component)}
        for v in component:
            for w in adjacency.combined.neighbors(v):
                sub[local[v], local[w]] = 1.0
        x = np.full(len(component), 1.0 / math.sqrt(len(component)))
        residual = math.inf
        converged = False
        for _ in range(max_iter):
            y = sub @ x
            lam = float(x @ y)
            scaled = x / x.max()
            residual = float(np.max(np.abs(sub @ scaled - lam * scaled)))
            if residual <= tol:
                converged = True
                break
            grown = y + x  # (A + I) x
            x = grown / np.linalg.norm(grown)
        if not converged:
            raise PowerIterationError(
                f"eigenvector power iteration did not converge below {tol} "
                f"after {max_iter} iterations (residual {residual:.3e})",
                residual=residual,
                iterations=max_iter,
            )
        component_values = x / x.max()
        for v in component:
            values[v] = component_values[local[v]]
    return CentralityScores(
        k=adjacency.k,
        measure="eigenvector",
        simplices=adjacency.simplices,
        values=values,
        flags=tuple(flags),
    )


def _subgraph_series(dense: np.ndarray, tol: float) -> np.ndarray:
    """Truncated power series for diag(exp(A)).

    Terms A^m/m! are added until the column-sum bound on the next term
    drops below tol times the smallest diagonal so far, after the terms
    have started shrinking (m beyond twice the 1-norm), which caps the
    remaining tail by a geometric series.
    """
    n = dense.shape[0]
    diag = np.ones(n, dtype=float)
    if n == 0:
        return diag
    norm1 = float(np.abs(dense).sum(axis=0).max())
    term = np.eye(n)
    bound = 1.0
    m = 0
    while True:
        m += 1
        if m > 10_000:
            raise RuntimeError("subgraph-centrality series failed to truncate")
        term = term @ dense / m
        diag = diag + np.diagonal(term)
        bound = bound * norm1 / m
        if m > 2 * norm1 and bound < tol * max(float(diag.min()), 1.0):
            break
    return diag


def subgraph_centrality(adjacency: LevelAdjacency, tol: float = 1e-12,
                        method: str = "eigh") -> CentralityScores:
    """Weighted count of closed walks at each k-simplex: diag(exp(A)).

    The sum over closed-walk counts of length m, each divided by m!, is the
    diagonal of the matrix exponential of the combined matrix. The "eigh"
    method evaluates it through the symmetric eigendecomposition
    (SC_i = sum_j q_ij^2 e^(lambda_j)); "series" sums the truncated power
    series with its remainder bounded below ``tol``. The length-0 walk
    contributes 1 to every simplex, so an isolated simplex scores exactly 1.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    dense = adjacency.combined.to_dense()
    if method == "eigh":
        if adjacency.n == 0:
            values = np.zeros(0, dtype=float)
        else:
            eigenvalues, vectors = np.linalg.eigh(dense)
            values = (vectors ** 2) @ np.exp(eigenvalues)
    elif method == "series":
        values = _subgraph_series(dense, tol)
    else:
        raise ValueError(f"unknown method {method!r}, want 'eigh' or 'series'")
    return CentralityScores(
        k=adjacency.k,
        measure="subgraph",
        simplices=adjacency.simplices,
        values=np.asarray(values, dtype=float),
        flags=_no_flags(adjacency.n),
    )


@dataclass(frozen=True)
class RankedEntry:
    simplex: Simplex
    score: float
    rank: int
    flags: tuple[str, ...]


@dataclass(frozen=True)
class Ranking:
    """Dense ranking by non-increasing score; tied scores share a rank and
    are listed lexicographically."""

    k: int
    measure: str
    entries: tuple[RankedEntry, ...]

    def top(self, n: int) -> tuple[RankedEntry, ...]:
        """All entries with dense rank <= n (ties included)."""
        return tuple(e for e in self.entries if e.rank <= n)


def rank_simplices(scores: CentralityScores, tie_tol: float = 0.0) -> Ranking:
    """Dense ranking of a score vector.

    Scores within ``tie_tol`` of the previous entry share its rank; the
    default 0.0 means exact ties only. Flags are carried through.
    """
    order = sorted(
        range(len(scores.simplices)),
        key=lambda i: (-float(scores.values[i]), scores.simplices[i].vertices),
    )
    entries: list[RankedEntry] = []
    rank = 0
    previous: Optional[float] = None
    for i in order:
        value = float(scores.values[i])
        if previous is None or previous - value > tie_tol:
            rank += 1
            previous = value
        entries.append(RankedEntry(
            simplex=scores.simplices[i],
            score=value,
            rank=rank,
            flags=scores.flags[i],
        ))
    return Ranking(k=scores.k, measure=scores.measure, entries=tuple(entries))


@dataclass(frozen=True)
class LiftEntry:
    """A top-ranked k-simplex (k >= 1) with the level-0 ranks of its
    constituent vertices (None when the vertex has no level-0 rank)."""

    k: int
    simplex: Simplex
    rank: int
    vertex_ranks: tuple[tuple[int, Optional[int]], ...]


@dataclass(frozen=True)
class ConcordanceEntry:
    """Pairwise rank agreement between two levels over shared vertices.

    A vertex's rank at a level is the best (smallest) rank among the
    simplices containing it there. The fraction counts vertex pairs whose
    order agrees (ties in both levels count as agreement); None when fewer
    than two shared vertices exist.
    """

    level_a: int
    level_b: int
    shared_vertices: int
    fraction: Optional[float]


@dataclass(frozen=True)
class CrossLevelReport:
    measure: str
    top_n: int
    lift: tuple[LiftEntry, ...]
    concordance: tuple[ConcordanceEntry, ...]


def _vertex_ranks(ranking: Ranking) -> dict[int, int]:
    best: dict[int, int] = {}
    for entry in ranking.entries:
        for v in entry.simplex.vertices:
            if v not in best or entry.rank < best[v]:
                best[v] = entry.rank
    return best


def cross_level_report(rankings: Mapping[int, Ranking], top_n: int = 5) -> CrossLevelReport:
    """Membership lift of top k-simplices into level-0 ranks, plus the
    cross-level rank concordance, for one measure's rankings."""
    if not rankings:
        raise ValueError("no rankings given")
    measures = {r.measure for r in rankings.values()}
    if len(measures) != 1:
        raise ValueError(f"rankings mix measures: {sorted(measures)}")
    measure = measures.pop()
    levels = sorted(rankings)
    per_level_vertex_ranks = {k: _vertex_ranks(rankings[k]) for k in levels}

    lift: list[LiftEntry] = []
    base = per_level_vertex_ranks.get(0)
    if base is not None:
        for k in levels:
            if k == 0:
                continue
            for entry in rankings[k].top(top_n):
                lift.append(LiftEntry(
                    k=k,
                    simplex=entry.simplex,
                    rank=entry.rank,
                    vertex_ranks=tuple(
                        (v, base.get(v)) for v in entry.simplex.vertices
                    ),
                ))

    concordance: list[ConcordanceEntry] = []
    for ka, kb in itertools.combinations(levels, 2):
        ra, rb = per_level_vertex_ranks[ka], per_level_vertex_ranks[kb]
        shared = sorted(set(ra) & set(rb))
        total = len(shared) * (len(shared) - 1) // 2
        if total == 0:
            concordance.append(ConcordanceEntry(ka, kb, len(shared), None))
            continue
        agree = 0
        for u, v in itertools.combinations(shared, 2):
            da = ra[u] - ra[v]
            db = rb[u] - rb[v]
            if (da > 0 and db > 0) or (da < 0 and db < 0) or (da == 0 and db == 0):
                agree += 1
        concordance.append(ConcordanceEntry(ka, kb, len(shared), agree / total))

    return CrossLevelReport(
        measure=measure,
        top_n=top_n,
        lift=tuple(lift),
        concordance=tuple(concordance),
    )
