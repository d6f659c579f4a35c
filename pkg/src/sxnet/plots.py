"""Static SVG charts for an analysis run, with re-derivable data CSVs."""
from __future__ import annotations

import csv
import logging
from pathlib import Path

import matplotlib
from matplotlib.figure import Figure

from .report import AnalysisRun, _slug

__all__ = ["emit_plots"]

logger = logging.getLogger(__name__)

# keep SVG output stable across runs: no timestamps, salted element ids
_SVG_METADATA = {"Date": None}


def _save(fig: Figure, path: Path, salt: str) -> None:
    with matplotlib.rc_context({"svg.hashsalt": salt}):
        fig.savefig(path, format="svg", metadata=_SVG_METADATA)


def emit_plots(run: AnalysisRun, out_dir: str | Path) -> list[Path]:
    """Write one bar chart per (level, measure) of ranked scores, one
    cross-level comparison chart per measure, and the underlying data as
    CSV. Returns the created file paths; an empty run produces nothing."""
    levels = [lv for lv in run.levels if lv.measures]
    if not levels:
        logger.warning("run %r has no scores; no plots emitted", run.network)
        return []
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    slug = _slug(run.network)
    created: list[Path] = []

    measures = sorted({name for lv in levels for name in lv.measures})
    for lv in levels:
        for name, entries in sorted(lv.measures.items()):
            stem = f"{slug}_level{lv.k}_{name}"
            data_path = out_dir / f"{stem}.csv"
            with open(data_path, "w", newline="", encoding="utf-8") as fh:
                writer = csv.writer(fh)
                writer.writerow(["simplex", "score", "rank", "flags"])
                for e in entries:
                    writer.writerow([
                        "{%s}" % ",".join(e.simplex),
                        repr(e.score) if isinstance(e.score, float) else e.score,
                        e.rank,
                        "|".join(e.flags),
                    ])
            created.append(data_path)

            fig = Figure(figsize=(max(4.0, 0.35 * len(entries) + 1.5), 3.2))
            ax = fig.add_subplot(111)
            ax.bar(range(len(entries)), [e.score for e in entries], color="#4878d0")
            ax.set_xticks(range(len(entries)))
            ax.set_xticklabels(
                ["{%s}" % ",".join(e.simplex) for e in entries],
                rotation=90, fontsize=6,
            )
            ax.set_ylabel(name)
            ax.set_title(f"{run.network}: {name} centrality, level {lv.k}")
            fig.tight_layout()
            svg_path = out_dir / f"{stem}.svg"
            _save(fig, svg_path, salt=run.network)
            created.append(svg_path)

    for name in measures:
        fig = Figure(figsize=(5.0, 3.2))
        ax = fig.add_subplot(111)
        for lv in levels:
            if name not in lv.measures:
                continue
            scores = [e.score for e in lv.measures[name]]
            ax.plot(range(1, len(scores) + 1), scores, marker="o",
                    markersize=3, label=f"level {lv.k}")
        ax.set_xlabel("rank position")
        ax.set_ylabel(name)
        ax.set_title(f"{run.network}: {name} ranking across levels")
        ax.legend(fontsize=7)
        fig.tight_layout()
        svg_path = out_dir / f"{slug}_compare_{name}.svg"
        _save(fig, svg_path, salt=run.network)
        created.append(svg_path)

    return created
