"""Input validation helpers shared by the estimator, pipeline and CLI."""
from __future__ import annotations

from typing import Iterable, Sequence

import numpy as np

__all__ = ["check_adjacency", "check_labels", "default_labels"]


def check_adjacency(X) -> np.ndarray:
    """Validate a raw adjacency matrix: 2-D, square, numeric, finite.

    Entries are not forced to 0/1 here; any nonzero entry is read as an
    interaction downstream.
    """
    mat = np.asarray(X, dtype=float)
    if mat.ndim != 2:
        raise ValueError(f"adjacency matrix must be 2-D, got {mat.ndim}-D")
    if mat.shape[0] != mat.shape[1]:
        raise ValueError(f"adjacency matrix must be square, got shape {mat.shape}")
    if mat.shape[0] == 0:
        raise ValueError("empty adjacency matrix")
    if not np.all(np.isfinite(mat)):
        raise ValueError("adjacency matrix contains NaN or infinite entries")
    return mat


def check_labels(labels: Iterable[str] | None, n: int) -> list[str]:
    """Validate labels against a matrix size, or make default ones."""
    if labels is None:
        return default_labels(n)
    labs = [str(x) for x in labels]
    if len(labs) != n:
        raise ValueError(f"need {n} labels, got {len(labs)}")
    if len(set(labs)) != len(labs):
        dupes = sorted({x for x in labs if labs.count(x) > 1})
        raise ValueError(f"duplicate labels: {dupes}")
    return labs


def default_labels(n: int) -> list[str]:
    return [f"v{i + 1}" for i in range(n)]
