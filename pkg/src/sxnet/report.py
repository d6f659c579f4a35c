"""Matrix ingestion, the analysis pipeline, and report serialization.

An AnalysisRun freezes one full pipeline pass into plain Python data
(lists, dicts, scalars), so JSON round-trips reproduce it exactly and two
runs on identical input compare equal byte for byte.
"""
from __future__ import annotations

import csv
import hashlib
import io
import json
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Mapping, Optional, Sequence

import numpy as np

from . import __version__
from .adjacency import (
    BooleanMatrix,
    LevelAdjacency,
    connected_components,
    level_adjacency,
)
from .centrality import (
    MEASURES,
    CentralityScores,
    CrossLevelReport,
    RankedEntry,
    Ranking,
    betweenness_centrality,
    closeness_centrality,
    cross_level_report,
    degree_centrality,
    eigenvector_centrality,
    rank_simplices,
    subgraph_centrality,
)
from .complexes import Graph, Simplex, SimplicialComplex, clique_complex, normalize_graph
from .validation import check_adjacency, check_labels
from .walks import DistanceTable, all_pairs_distances

__all__ = [
    "NO_SIMPLICES",
    "MeasureEntry",
    "LevelResult",
    "AnalysisRun",
    "PipelineState",
    "parse_matrix_csv",
    "analyze_network",
    "run_analysis",
    "write_report",
    "read_report",
    "cross_level_from_run",
    "dump_matrix",
]

NO_SIMPLICES = "NO-SIMPLICES"


@dataclass
class MeasureEntry:
    """One simplex's score within a (level, measure) ranking."""

    simplex: list[str]
    score: float
    rank: int
    flags: list[str]


@dataclass
class LevelResult:
    k: int
    simplex_count: int
    connected: Optional[bool]
    components: list[int]
    measures: dict[str, list[MeasureEntry]]
    note: Optional[str] = None


@dataclass
class AnalysisRun:
    """A completed analysis in plain data form."""

    network: str
    options: dict
    summary: dict
    levels: list[LevelResult]
    cross_level: dict
    provenance: dict
    warnings: list[str]


@dataclass
class PipelineState:
    """Rich in-memory objects behind an AnalysisRun (not serialized)."""

    graph: Graph
    complex: Optional[SimplicialComplex]
    adjacency: dict[int, LevelAdjacency]
    distances: dict[int, DistanceTable]
    scores: dict[int, dict[str, CentralityScores]]
    rankings: dict[int, dict[str, Ranking]]
    cross: dict[str, CrossLevelReport]


def parse_matrix_csv(path: str | Path) -> tuple[np.ndarray, list[str], list[str]]:
    """Read a labeled adjacency matrix from CSV.

    First row: header of N labels (an optional leading empty cell for the
    row-label column is accepted). Each following row: row label + N
    numeric entries. Nonzero entries mean 1; entries other than 0/1 are
    accepted with a warning record. Returns (matrix, labels, warnings).
    """
    path = Path(path)
    with open(path, newline="", encoding="utf-8") as fh:
        rows = list(csv.reader(fh))
    rows = [row for row in rows if row and any(cell.strip() for cell in row)]
    if not rows:
        raise ValueError(f"{path}: empty matrix file")
    header = [cell.strip() for cell in rows[0]]
    if header and header[0] == "" :
        header = header[1:]
    labels = header
    n = len(labels)
    if n == 0:
        raise ValueError(f"{path}: header row has no labels")
    if len(set(labels)) != n:
        dupes = sorted({x for x in labels if labels.count(x) > 1})
        raise ValueError(f"{path}: duplicate labels {dupes}")
    data_rows = rows[1:]
    if len(data_rows) != n:
        raise ValueError(
            f"{path}: header names {n} columns but file has {len(data_rows)} data rows"
        )
    matrix = np.zeros((n, n), dtype=float)
    warnings: list[str] = []
    for r, row in enumerate(data_rows):
        cells = [cell.strip() for cell in row]
        if len(cells) != n + 1:
            raise ValueError(
                f"{path}: row {r + 2} has {len(cells)} fields, expected {n + 1}"
                " (row label + one entry per column)"
            )
        row_label = cells[0]
        if row_label != labels[r]:
            raise ValueError(
                f"{path}: row {r + 2} label {row_label!r} does not match"
                f" header label {labels[r]!r}"
            )
        for c, cell in enumerate(cells[1:]):
            try:
                value = float(cell)
            except ValueError:
                raise ValueError(
                    f"{path}: row {r + 2}, column {c + 2}: non-numeric entry {cell!r}"
                ) from None
            if value not in (0.0, 1.0):
                warnings.append(
                    f"row {r + 2}, column {c + 2}: entry {cell} read as 1"
                )
            matrix[r, c] = 0.0 if value == 0.0 else 1.0
    return matrix, labels, warnings


def _content_digest(matrix: np.ndarray, labels: Sequence[str]) -> str:
    h = hashlib.sha256()
    h.update("\x1f".join(labels).encode("utf-8"))
    h.update(np.ascontiguousarray(matrix, dtype=float).tobytes())
    return h.hexdigest()


def file_digest(path: str | Path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def _simplex_labels(simplex: Simplex, labels: Mapping[int, str]) -> list[str]:
    return [labels[v] for v in simplex.vertices]


_MEASURE_FNS = {
    "degree": lambda adj, dist, tol, max_iter, threads: degree_centrality(adj),
    "closeness": lambda adj, dist, tol, max_iter, threads: closeness_centrality(adj, dist),
    "betweenness": lambda adj, dist, tol, max_iter, threads: betweenness_centrality(adj, threads=threads),
    "eigenvector": lambda adj, dist, tol, max_iter, threads: eigenvector_centrality(adj, tol=tol, max_iter=max_iter),
    "subgraph": lambda adj, dist, tol, max_iter, threads: subgraph_centrality(adj),
}


def analyze_network(
    matrix,
    labels: Sequence[str] | None = None,
    *,
    network: str = "network",
    keep_isolated: bool = False,
    max_dim: Optional[int] = None,
    levels: Sequence[int] = (0, 1, 2),
    measures: Sequence[str] = MEASURES,
    tol: float = 1e-10,
    max_iter: int = 100_000,
    top_n: int = 5,
    threads: int = 1,
    input_digest: Optional[str] = None,
) -> tuple[AnalysisRun, PipelineState]:
    """Run the full pipeline and freeze the results.

    Stages: normalize the matrix into a simple graph, build the clique
    complex, then per requested level build the combined adjacency,
    distances, the requested centralities and their rankings, and finally
    the cross-level comparison. Deterministic for identical inputs.
    """
    mat = check_adjacency(matrix)
    labs = check_labels(labels, mat.shape[0])
    requested_levels = sorted(set(int(k) for k in levels))
    if requested_levels and requested_levels[0] < 0:
        raise ValueError(f"levels must be >= 0, got {requested_levels[0]}")
    requested_measures = list(measures)
    unknown = [m for m in requested_measures if m not in MEASURES]
    if unknown:
        raise ValueError(f"unknown measures {unknown}; choose from {list(MEASURES)}")
    digest = input_digest or _content_digest(mat, labs)
    warnings: list[str] = []

    graph = normalize_graph(mat, labs, keep_isolated=keep_isolated)
    label_map = graph.labels()

    options = {
        "keep_isolated": bool(keep_isolated),
        "max_dim": max_dim,
        "levels": list(requested_levels),
        "measures": list(requested_measures),
        "tol": float(tol),
        "max_iter": int(max_iter),
        "top_n": int(top_n),
    }
    provenance = {"input_digest": digest, "tool_version": __version__}

    if graph.n_vertices == 0:
        warnings.append("graph is empty after normalization; nothing to analyze")
        empty_levels = [
            LevelResult(k=k, simplex_count=0, connected=None, components=[],
                        measures={}, note=NO_SIMPLICES)
            for k in requested_levels
        ]
        run = AnalysisRun(
            network=network,
            options=options,
            summary={"clique_counts": {}, "clique_number": 0},
            levels=empty_levels,
            cross_level={},
            provenance=provenance,
            warnings=warnings,
        )
        state = PipelineState(graph=graph, complex=None, adjacency={},
                              distances={}, scores={}, rankings={}, cross={})
        return run, state

    complex_ = clique_complex(graph, max_dim=max_dim)
    clique_counts = {str(k + 1): size for k, size in sorted(complex_.level_sizes().items())}
    summary = {"clique_counts": clique_counts, "clique_number": complex_.dim + 1}

    adjacency: dict[int, LevelAdjacency] = {}
    distances: dict[int, DistanceTable] = {}
    scores: dict[int, dict[str, CentralityScores]] = {}
    rankings: dict[int, dict[str, Ranking]] = {}
    level_results: list[LevelResult] = []

    for k in requested_levels:
        if not complex_.simplices(k):
            level_results.append(LevelResult(
                k=k, simplex_count=0, connected=None, components=[],
                measures={}, note=NO_SIMPLICES,
            ))
            continue
        adj = level_adjacency(complex_, k)
        adjacency[k] = adj
        comps = connected_components(adj.combined)
        dist = all_pairs_distances(adj, threads=threads)
        distances[k] = dist
        scores[k] = {}
        rankings[k] = {}
        measure_entries: dict[str, list[MeasureEntry]] = {}
        for measure in requested_measures:
            cs = _MEASURE_FNS[measure](adj, dist, tol, max_iter, threads)
            ranking = rank_simplices(cs)
            scores[k][measure] = cs
            rankings[k][measure] = ranking
            measure_entries[measure] = [
                MeasureEntry(
                    simplex=_simplex_labels(e.simplex, label_map),
                    score=int(e.score) if measure == "degree" else float(e.score),
                    rank=e.rank,
                    flags=list(e.flags),
                )
                for e in ranking.entries
            ]
        level_results.append(LevelResult(
            k=k,
            simplex_count=adj.n,
            connected=len(comps) == 1,
            components=[len(c) for c in comps],
            measures=measure_entries,
        ))

    cross: dict[str, CrossLevelReport] = {}
    cross_plain: dict[str, dict] = {}
    for measure in requested_measures:
        per_level = {k: rankings[k][measure] for k in rankings if measure in rankings[k]}
        if not per_level:
            continue
        report = cross_level_report(per_level, top_n=top_n)
        cross[measure] = report
        cross_plain[measure] = _cross_to_plain(report, label_map)

    run = AnalysisRun(
        network=network,
        options=options,
        summary=summary,
        levels=level_results,
        cross_level=cross_plain,
        provenance=provenance,
        warnings=warnings,
    )
    state = PipelineState(
        graph=graph,
        complex=complex_,
        adjacency=adjacency,
        distances=distances,
        scores=scores,
        rankings=rankings,
        cross=cross,
    )
    return run, state


def run_analysis(matrix, labels: Sequence[str] | None = None, **options) -> AnalysisRun:
    """analyze_network, returning only the frozen AnalysisRun."""
    run, _ = analyze_network(matrix, labels, **options)
    return run


def _cross_to_plain(report: CrossLevelReport, labels: Mapping[int, str]) -> dict:
    return {
        "top_n": report.top_n,
        "lift": [
            {
                "level": e.k,
                "simplex": [labels[v] for v in e.simplex.vertices],
                "rank": e.rank,
                "vertex_ranks": {labels[v]: r for v, r in e.vertex_ranks},
            }
            for e in report.lift
        ],
        "concordance": [
            {
                "level_a": c.level_a,
                "level_b": c.level_b,
                "shared_vertices": c.shared_vertices,
                "fraction": c.fraction,
            }
            for c in report.concordance
        ],
    }


def _run_to_dict(run: AnalysisRun) -> dict:
    return {
        "network": run.network,
        "options": run.options,
        "levels": [
            {
                "k": lv.k,
                "simplex_count": lv.simplex_count,
                "connected": lv.connected,
                "components": lv.components,
                "measures": {
                    name: [
                        {
                            "simplex": e.simplex,
                            "score": e.score,
                            "rank": e.rank,
                            "flags": e.flags,
                        }
                        for e in entries
                    ]
                    for name, entries in lv.measures.items()
                },
                **({"note": lv.note} if lv.note else {}),
            }
            for lv in run.levels
        ],
        "summary": run.summary,
        "cross_level": run.cross_level,
        "provenance": run.provenance,
        "warnings": run.warnings,
    }


def _slug(name: str) -> str:
    slug = re.sub(r"[^A-Za-z0-9._-]+", "-", name).strip("-")
    return slug or "network"


def write_report(run: AnalysisRun, format: str, path: str | Path) -> None:
    """Serialize a run: "json" writes one file; "csv" writes one file per
    (level, measure) into the directory ``path``. Output is byte-stable for
    identical runs."""
    path = Path(path)
    if format == "json":
        payload = json.dumps(_run_to_dict(run), indent=2, ensure_ascii=False) + "\n"
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(payload, encoding="utf-8")
    elif format == "csv":
        path.mkdir(parents=True, exist_ok=True)
        for lv in run.levels:
            for name, entries in lv.measures.items():
                out = path / f"{_slug(run.network)}_level{lv.k}_{name}.csv"
                with open(out, "w", newline="", encoding="utf-8") as fh:
                    writer = csv.writer(fh)
                    writer.writerow(["simplex", "score", "rank", "flags"])
                    for e in entries:
                        writer.writerow([
                            "{%s}" % ",".join(e.simplex),
                            repr(e.score) if isinstance(e.score, float) else e.score,
                            e.rank,
                            "|".join(e.flags),
                        ])
    else:
        raise ValueError(f"unknown report format {format!r}, want 'json' or 'csv'")


def read_report(path: str | Path) -> AnalysisRun:
    """Re-parse a JSON report into an AnalysisRun equal to the original."""
    with open(path, encoding="utf-8") as fh:
        data = json.load(fh)
    levels = [
        LevelResult(
            k=lv["k"],
            simplex_count=lv["simplex_count"],
            connected=lv["connected"],
            components=lv["components"],
            measures={
                name: [
                    MeasureEntry(
                        simplex=e["simplex"],
                        score=e["score"],
                        rank=e["rank"],
                        flags=e["flags"],
                    )
                    for e in entries
                ]
                for name, entries in lv["measures"].items()
            },
            note=lv.get("note"),
        )
        for lv in data["levels"]
    ]
    return AnalysisRun(
        network=data["network"],
        options=data["options"],
        summary=data["summary"],
        levels=levels,
        cross_level=data["cross_level"],
        provenance=data["provenance"],
        warnings=data["warnings"],
    )


def cross_level_from_run(run: AnalysisRun, measure: str, top_n: int) -> dict:
    """Recompute the cross-level comparison for one measure of a stored run,
    at a caller-chosen top-N, from the ranks already in the report."""
    all_labels: set[str] = set()
    per_level_entries: dict[int, list[MeasureEntry]] = {}
    for lv in run.levels:
        if measure in lv.measures:
            per_level_entries[lv.k] = lv.measures[measure]
            for e in lv.measures[measure]:
                all_labels.update(e.simplex)
    if not per_level_entries:
        raise ValueError(f"report has no {measure!r} rankings")
    ids = {label: i for i, label in enumerate(sorted(all_labels))}
    names = {i: label for label, i in ids.items()}
    rankings = {
        k: Ranking(
            k=k,
            measure=measure,
            entries=tuple(
                RankedEntry(
                    simplex=Simplex(ids[x] for x in e.simplex),
                    score=float(e.score),
                    rank=e.rank,
                    flags=tuple(e.flags),
                )
                for e in entries
            ),
        )
        for k, entries in per_level_entries.items()
    }
    return _cross_to_plain(cross_level_report(rankings, top_n=top_n), names)


def dump_matrix(matrix: BooleanMatrix, simplices: Sequence[Simplex],
                csv_path: str | Path, sidecar_path: str | Path) -> None:
    """Write a level matrix as 0/1 CSV plus a sidecar listing the simplex
    index basis, one simplex per line, vertices space-separated."""
    if matrix.n != len(simplices):
        raise ValueError("matrix size does not match the simplex basis")
    csv_path, sidecar_path = Path(csv_path), Path(sidecar_path)
    with open(csv_path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        for i in range(matrix.n):
            writer.writerow([matrix.entry(i, j) for j in range(matrix.n)])
    sidecar_path.write_text(
        "".join(" ".join(str(v) for v in s.vertices) + "\n" for s in simplices),
        encoding="utf-8",
    )
