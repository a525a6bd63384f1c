"""Bundled precubical sets and subcomplexes used by the tests and the CLI."""

from __future__ import annotations

import re

from .pcs import Cell, PrecubicalSet, subcomplex
from .tensor import SEP, tensor_product


def _set(name, vertices, edges, squares=()):
    cells = [Cell(v, 0) for v in vertices]
    cells += [Cell(e, 1, (s,), (t,)) for e, s, t in edges]
    cells += [Cell(c, 2, tuple(d0), tuple(d1)) for c, d0, d1 in squares]
    return PrecubicalSet(cells, name)


# 3x3 grid of vertices 9..1; face index 0 of a square is its vertical
# direction, so d0_0/d1_0 are the left/right vertical edges.
_GRID_EDGES = [
    ("i", "9", "8"), ("j", "8", "7"),
    ("d", "6", "5"), ("f", "5", "4"),
    ("a", "3", "2"), ("b", "2", "1"),
    ("k", "9", "6"), ("h", "8", "5"), ("l", "7", "4"),
    ("c", "6", "3"), ("e", "5", "2"), ("g", "4", "1"),
]
_GRID_SQUARES = {
    "C": (("k", "i"), ("h", "d")),
    "D": (("e", "f"), ("g", "b")),
    "E": (("h", "j"), ("l", "f")),
    "F": (("c", "d"), ("e", "a")),
}


def two_holes(which: str) -> PrecubicalSet:
    names = {"antidiag": "CD", "diag": "EF"}[which]
    sq = [(n, *_GRID_SQUARES[n]) for n in names]
    return _set(f"two-holes-{which}", [str(v) for v in range(1, 10)], _GRID_EDGES, sq)


def empty_square() -> PrecubicalSet:
    return _set("empty-square", ["1", "2", "3", "4"],
                [("a", "4", "2"), ("b", "4", "3"), ("c", "2", "1"), ("d", "3", "1")])


def kronecker() -> PrecubicalSet:
    return _set("kronecker", ["1", "2"], [("alpha", "2", "1"), ("beta", "2", "1")])


def interval() -> PrecubicalSet:
    """The directed interval K: one edge a from 0 to 1."""
    return _set("K", ["0", "1"], [("a", "0", "1")])


def point(name: str = "pt") -> PrecubicalSet:
    return PrecubicalSet([Cell(name, 0)], name)


def path_graph(n: int) -> PrecubicalSet:
    """Vertices 0..n joined by edges e0..e(n-1)."""
    return _set(f"P{n}", [str(i) for i in range(n + 1)],
                [(f"e{i}", str(i), str(i + 1)) for i in range(n)])


def grid(*sizes: int) -> PrecubicalSet:
    """The cubical grid P_{s1} ⊗ ... ⊗ P_{sk}."""
    X = path_graph(sizes[0])
    for s in sizes[1:]:
        X = tensor_product(X, path_graph(s))
    return X


def rename(X: PrecubicalSet, f, name: str | None = None) -> PrecubicalSet:
    cells = [Cell(f(c.id), c.dim, tuple(map(f, c.d0)), tuple(map(f, c.d1))) for c in X]
    return PrecubicalSet(cells, X.name if name is None else name)


def cube_power(n: int) -> PrecubicalSet:
    """D^n = K^n with ids written as words over {0, 1, a}, e.g. 0a1."""
    X = interval()
    for _ in range(n - 1):
        X = tensor_product(X, interval())
    return rename(X, lambda s: s.replace(SEP, ""), f"d-{n}")


def hollow_cube(n: int) -> PrecubicalSet:
    """S^(n-1): the boundary of D^n."""
    D = cube_power(n)
    top = "a" * n
    return PrecubicalSet([c for c in D if c.id != top], f"s-{n - 1}")


_CUBE_SQUARES = {"ab0": "A", "ab1": "A'", "a0c": "B", "a1c": "B'",
                 "0bc": "C", "1bc": "C'", "abc": "S"}


def _cube_name(word: str) -> str:
    word = "".join("abc"[k] if ch == "a" else ch for k, ch in enumerate(word))
    return _CUBE_SQUARES.get(word, word)


def cube3() -> PrecubicalSet:
    """The full 3-cube: edges aYZ run along x, XbZ along y, XYc along z."""
    return rename(cube_power(3), _cube_name, "cube-3")


def empty_cube() -> PrecubicalSet:
    X = cube3()
    return PrecubicalSet([c for c in X if c.id != "S"], "empty-cube")


def matchbox() -> PrecubicalSet:
    X = cube3()
    return PrecubicalSet([c for c in X if c.id not in ("S", "A")], "matchbox")


# -- subcomplexes -------------------------------------------------------------

SUBCOMPLEXES = {
    # good cover of the diagonal set
    "diag-cover-x1": ("two-holes-diag", ["i", "k", "h", "d", "c", "e", "a", "F"]),
    "diag-cover-x2": ("two-holes-diag", ["j", "h", "l", "f", "E", "g", "e", "b"]),
    # a cover of the antidiagonal set that splits the chain (C, D)
    "antidiag-cover-x1": ("two-holes-antidiag", ["i", "k", "h", "d", "c", "e", "a", "C"]),
    "antidiag-cover-x2": ("two-holes-antidiag", ["j", "h", "f", "l", "e", "b", "g", "D"]),
    # a good cover of the antidiagonal set whose halves are not relative pairs
    "antidiag-central-x1": ("two-holes-antidiag", ["i", "k", "h", "d", "C", "e", "f", "g", "D", "b"]),
    "antidiag-central-x2": ("two-holes-antidiag", ["j", "h", "l", "f", "d", "e", "c", "a"]),
    # the square y = 0 of the empty cube, without its 2-cell
    "red-square": ("empty-cube", ["a00", "00c", "10c", "a01"]),
    # a subcomplex of the diagonal set that a path leaves and re-enters
    "diag-if": ("two-holes-diag", ["i", "f"]),
    # the boundary circle inside the filled square
    "d-2-boundary": ("d-2", ["a0", "0a", "a1", "1a"]),
}


_BUILDERS = {
    "two-holes-diag": lambda: two_holes("diag"),
    "two-holes-antidiag": lambda: two_holes("antidiag"),
    "cube-3": cube3,
    "empty-cube": empty_cube,
    "matchbox": matchbox,
    "empty-square": empty_square,
    "kronecker": kronecker,
}


def fixture_names() -> list[str]:
    return sorted(_BUILDERS) + ["d-<n>", "s-<n>"]


def emit_fixture(name: str) -> PrecubicalSet:
    if name in _BUILDERS:
        return _BUILDERS[name]()
    m = re.fullmatch(r"([ds])-(\d+)", name)
    if m:
        n = int(m.group(2))
        if m.group(1) == "d" and n >= 1:
            return cube_power(n)
        if m.group(1) == "s" and n >= 1:
            return hollow_cube(n + 1)
    raise KeyError(f"unknown fixture {name!r}; available: {', '.join(fixture_names())}")


def emit_subcomplex(name: str) -> tuple[str, list[str]]:
    """Return ``(fixture name, face-closed ids)`` for a bundled subcomplex."""
    if name not in SUBCOMPLEXES:
        raise KeyError(f"unknown subcomplex {name!r}; available: {', '.join(sorted(SUBCOMPLEXES))}")
    of, gens = SUBCOMPLEXES[name]
    X = emit_fixture(of)
    return of, [c.id for c in subcomplex(X, gens).canonical]
