"""Shared oracles and generators for the test suite."""

from __future__ import annotations

import random

from dihom import fixtures
from dihom.pcs import PrecubicalSet, closure


def parse_table(text: str, vertices: list[str]) -> dict:
    """Matrix-of-spaces rows as printed ("R", "R^3", "0") into {(row, col): dim}.

    Rows are sources and columns targets; zero entries are dropped.
    """
    rows = [r.split() for r in text.strip().splitlines()]
    assert len(rows) == len(vertices)
    out = {}
    for v, row in zip(vertices, rows):
        assert len(row) == len(vertices)
        for w, e in zip(vertices, row):
            d = 0 if e == "0" else 1 if e == "R" else int(e[2:])
            if d:
                out[(v, w)] = d
    return out


def brute_paths(X: PrecubicalSet) -> dict:
    """Count directed edge paths by plain DFS, including the empty ones."""
    out = {}

    def walk(start, v):
        out[(start, v)] = out.get((start, v), 0) + 1
        for e in X.edges:
            if X.source(e) == v:
                walk(start, X.target(e))

    for v in X.vertices:
        walk(v, v)
    return out


def random_grid_subset(seed: int) -> PrecubicalSet:
    """A face-closed random subcomplex of a small cubical grid."""
    rng = random.Random(seed)
    k = rng.choice([2, 2, 3])
    sizes = [rng.randint(1, 3 if k == 2 else 2) for _ in range(k)]
    G = fixtures.grid(*sizes)
    top = [c.id for c in G if c.dim >= 1]
    keep = [c for c in top if rng.random() < 0.6]
    ids = closure(G, keep) | set(G.vertices)
    return PrecubicalSet([G[c] for c in ids], f"grid{sizes}-{seed}")


ALL_FIXTURES = ["two-holes-diag", "two-holes-antidiag", "cube-3", "empty-cube", "matchbox",
                "empty-square", "kronecker", "d-2", "d-3", "s-1", "s-2"]
