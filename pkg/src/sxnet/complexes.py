"""Simple graphs, simplices, and clique complexes.

Vertex ids are small integers (row indices of the source matrix); labels
travel alongside so reports can show the original names. A complex stores
its simplices grouped by dimension, each level sorted lexicographically on
vertex tuples, which fixes the index basis used by every matrix downstream.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping

import numpy as np

__all__ = [
    "Simplex",
    "Graph",
    "SimplicialComplex",
    "normalize_graph",
    "clique_complex",
    "faces",
    "boundary_facets",
    "p_skeleton",
    "relabel",
    "validate_closure",
]


@dataclass(frozen=True, order=True)
class Simplex:
    """A nonempty set of vertex ids, stored as a strictly increasing tuple.

    A simplex on k+1 vertices has dimension k: single vertices are
    0-simplices, edges 1-simplices, triangles 2-simplices.
    """

    vertices: tuple[int, ...]

    def __init__(self, vertices: Iterable[int]) -> None:
        vs = tuple(sorted(vertices))
        if not vs:
            raise ValueError("a simplex needs at least one vertex")
        for a, b in zip(vs, vs[1:]):
            if a == b:
                raise ValueError(f"duplicate vertex {a} in simplex")
        object.__setattr__(self, "vertices", vs)

    @property
    def dim(self) -> int:
        return len(self.vertices) - 1

    def __len__(self) -> int:
        return len(self.vertices)

    def __iter__(self) -> Iterator[int]:
        return iter(self.vertices)

    def __contains__(self, vertex: int) -> bool:
        return vertex in self.vertices

    def __repr__(self) -> str:
        return "{%s}" % ",".join(str(v) for v in self.vertices)

    def is_face_of(self, other: "Simplex") -> bool:
        return set(self.vertices) <= set(other.vertices)

    def intersection(self, other: "Simplex") -> tuple[int, ...]:
        return tuple(sorted(set(self.vertices) & set(other.vertices)))

    def faces(self) -> set["Simplex"]:
        """All nonempty proper subsets; 2^(k+1) - 2 of them for dimension k."""
        out: set[Simplex] = set()
        for size in range(1, len(self.vertices)):
            for combo in itertools.combinations(self.vertices, size):
                out.add(Simplex(combo))
        return out

    def facets(self) -> set["Simplex"]:
        """The (k-1)-dimensional faces; empty for a 0-simplex."""
        if self.dim == 0:
            return set()
        return {
            Simplex(combo)
            for combo in itertools.combinations(self.vertices, len(self.vertices) - 1)
        }


@dataclass(frozen=True)
class Graph:
    """Simple undirected labeled graph: the 1-skeleton input.

    ``vertices`` is an ordered tuple of (id, label); ``edges`` holds
    unordered pairs canonicalized as (i, j) with i < j.
    """

    vertices: tuple[tuple[int, str], ...]
    edges: frozenset[tuple[int, int]]

    def __post_init__(self) -> None:
        ids = [v for v, _ in self.vertices]
        if len(set(ids)) != len(ids):
            raise ValueError("duplicate vertex ids")
        declared = set(ids)
        for e in self.edges:
            i, j = e
            if i == j:
                raise ValueError(f"self-loop ({i},{i}) is not allowed")
            if i > j:
                raise ValueError(f"edge {e} is not canonical (want i < j)")
            if i not in declared or j not in declared:
                raise ValueError(f"edge {e} references an undeclared vertex")

    @property
    def n_vertices(self) -> int:
        return len(self.vertices)

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    def vertex_ids(self) -> tuple[int, ...]:
        return tuple(v for v, _ in self.vertices)

    def labels(self) -> dict[int, str]:
        return {v: lab for v, lab in self.vertices}

    def neighbor_map(self) -> dict[int, set[int]]:
        nbrs: dict[int, set[int]] = {v: set() for v, _ in self.vertices}
        for i, j in self.edges:
            nbrs[i].add(j)
            nbrs[j].add(i)
        return nbrs

    def degree(self, vertex: int) -> int:
        return sum(1 for i, j in self.edges if vertex in (i, j))


def normalize_graph(
    matrix: np.ndarray | Iterable[Iterable[float]],
    labels: Iterable[str],
    *,
    keep_isolated: bool = False,
) -> Graph:
    """Turn a raw square 0/1 matrix into a simple undirected graph.

    An edge {i, j} exists iff matrix[i][j] or matrix[j][i] is nonzero and
    i != j; diagonal entries (loops) are discarded by edge deletion. Unless
    ``keep_isolated`` is set, vertices of degree zero are dropped. Vertex
    ids are the original row indices, so labels stay aligned even after
    dropping.
    """
    mat = np.asarray(matrix, dtype=float)
    labs = [str(x) for x in labels]
    if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
        raise ValueError(f"adjacency matrix must be square, got shape {mat.shape}")
    n = mat.shape[0]
    if n == 0:
        raise ValueError("empty adjacency matrix")
    if len(labs) != n:
        raise ValueError(f"{n}x{n} matrix needs {n} labels, got {len(labs)}")
    if len(set(labs)) != len(labs):
        dupes = sorted({x for x in labs if labs.count(x) > 1})
        raise ValueError(f"duplicate labels: {dupes}")

    edges = set()
    for i in range(n):
        for j in range(i + 1, n):
            if mat[i, j] != 0 or mat[j, i] != 0:
                edges.add((i, j))

    if keep_isolated:
        kept = list(range(n))
    else:
        touched = {v for e in edges for v in e}
        kept = [i for i in range(n) if i in touched]

    vertices = tuple((i, labs[i]) for i in kept)
    return Graph(vertices=vertices, edges=frozenset(edges))


def _bron_kerbosch(nbrs: dict[int, set[int]]) -> list[tuple[int, ...]]:
    """Maximal cliques of a simple graph, via pivoting on the largest
    candidate neighborhood. Output order is made deterministic by sorting."""
    cliques: list[tuple[int, ...]] = []

    def expand(r: set[int], p: set[int], x: set[int]) -> None:
        if not p and not x:
            cliques.append(tuple(sorted(r)))
            return
        pivot = max(p | x, key=lambda u: (len(nbrs[u] & p), -u))
        for v in sorted(p - nbrs[pivot]):
            expand(r | {v}, p & nbrs[v], x & nbrs[v])
            p.remove(v)
            x.add(v)

    expand(set(), set(nbrs), set())
    return sorted(cliques)


def clique_complex(g: Graph, max_dim: int | None = None) -> SimplicialComplex:
    """Build the clique complex of ``g``: every clique of size s becomes an
    (s-1)-simplex. ``max_dim`` caps the stored dimension (a p-skeleton at
    construction time); downward closure always holds for what is stored.
    """
    if max_dim is not None and max_dim < 1:
        raise ValueError(f"max_dim must be >= 1, got {max_dim}")
    nbrs = g.neighbor_map()
    by_dim: dict[int, set[tuple[int, ...]]] = {}
    for clique in _bron_kerbosch(nbrs):
        cap = len(clique) if max_dim is None else min(len(clique), max_dim + 1)
        for size in range(1, cap + 1):
            bucket = by_dim.setdefault(size - 1, set())
            bucket.update(itertools.combinations(clique, size))
    simplices = [Simplex(vs) for vss in by_dim.values() for vs in vss]
    return SimplicialComplex(simplices)


class SimplicialComplex:
    """Simplices grouped by dimension, each level in lexicographic order.

    Construction does not force downward closure (see validate_closure);
    clique_complex output is always closed.
    """

    def __init__(self, simplices: Iterable[Simplex]) -> None:
        by_dim: dict[int, set[Simplex]] = {}
        for s in simplices:
            by_dim.setdefault(s.dim, set()).add(s)
        self._levels: dict[int, tuple[Simplex, ...]] = {
            k: tuple(sorted(by_dim[k])) for k in sorted(by_dim)
        }
        self._index: dict[Simplex, tuple[int, int]] = {}
        for k, level in self._levels.items():
            for pos, s in enumerate(level):
                self._index[s] = (k, pos)

    @property
    def dim(self) -> int:
        """Largest k with a nonempty level; -1 for the empty complex."""
        return max(self._levels, default=-1)

    def __len__(self) -> int:
        return len(self._index)

    def __contains__(self, simplex: Simplex) -> bool:
        return simplex in self._index

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SimplicialComplex):
            return NotImplemented
        return self._levels == other._levels

    def __repr__(self) -> str:
        sizes = ", ".join(f"{k}:{len(v)}" for k, v in self._levels.items())
        return f"SimplicialComplex(dim={self.dim}, level sizes {{{sizes}}})"

    def level_dims(self) -> tuple[int, ...]:
        return tuple(self._levels)

    def simplices(self, k: int) -> tuple[Simplex, ...]:
        return self._levels.get(k, ())

    def level_sizes(self) -> dict[int, int]:
        return {k: len(v) for k, v in self._levels.items()}

    def index_of(self, simplex: Simplex) -> tuple[int, int]:
        """(dimension, position) of a stored simplex."""
        try:
            return self._index[simplex]
        except KeyError:
            raise ValueError(f"simplex {simplex} is not in the complex") from None

    def all_simplices(self) -> Iterator[Simplex]:
        for level in self._levels.values():
            yield from level

    def vertex_ids(self) -> tuple[int, ...]:
        seen: set[int] = set()
        for s in self.all_simplices():
            seen.update(s.vertices)
        return tuple(sorted(seen))


def faces(simplex: Simplex) -> set[Simplex]:
    """All nonempty proper subsets of a simplex."""
    return simplex.faces()


def boundary_facets(complex_: SimplicialComplex, simplex: Simplex) -> set[Simplex]:
    """The (dim-1)-faces of a simplex stored in the complex."""
    if simplex not in complex_:
        raise ValueError(f"simplex {simplex} is not in the complex")
    return simplex.facets()


def p_skeleton(complex_: SimplicialComplex, p: int) -> SimplicialComplex:
    """All simplices of dimension <= p. Closure is preserved."""
    if p < 0:
        raise ValueError(f"skeleton dimension must be >= 0, got {p}")
    return SimplicialComplex(
        s for k in complex_.level_dims() if k <= p for s in complex_.simplices(k)
    )


def relabel(complex_: SimplicialComplex, mapping: Mapping[int, int]) -> SimplicialComplex:
    """Apply a vertex-id bijection to every simplex.

    The result is isomorphic to the input: level sizes, adjacency and all
    derived scores are preserved up to the relabeling.
    """
    vids = complex_.vertex_ids()
    missing = [v for v in vids if v not in mapping]
    if missing:
        raise ValueError(f"mapping does not cover vertices {missing}")
    images = [mapping[v] for v in vids]
    if len(set(images)) != len(images):
        raise ValueError("mapping is not a bijection on the vertex set")
    return SimplicialComplex(
        Simplex(mapping[v] for v in s.vertices) for s in complex_.all_simplices()
    )


def validate_closure(complex_: SimplicialComplex) -> bool:
    """True iff every nonempty proper subset of every stored simplex is stored.

    Checking facets is sufficient: the store is scanned in full, so facet
    presence at every dimension chains down to all faces.
    """
    for s in complex_.all_simplices():
        for f in s.facets():
            if f not in complex_:
                return False
    return True
