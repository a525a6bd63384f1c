"""Cube chains, their faces and the signed boundary; blockwise chain complexes.

A cube chain from v to w is a composable sequence of cells of positive
dimension.  Its dimension is sum(n_k) - l, and it sits in degree dim + 1 of
the complex R_*[X].  The empty chain at v is the idempotent e_v.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from itertools import combinations

from .linalg import QQ, Field, Matrix
from .pcs import PrecubicalSet


class ConventionError(RuntimeError):
    """The boundary failed to square to zero (an internal bug, not bad input)."""


@dataclass(frozen=True)
class Chain:
    cells: tuple
    start: str
    end: str
    type: tuple

    @property
    def dim(self) -> int:
        return sum(self.type) - len(self.type)

    @property
    def length(self) -> int:
        return sum(self.type)

    @property
    def key(self):
        return (self.length, self.cells, self.start)

    def __lt__(self, other):
        return self.key < other.key

    def __str__(self):
        if not self.cells:
            return f"()_{self.start}"
        return "(" + ",".join(self.cells) + ")"

    def __add__(self, other: "Chain") -> "Chain":
        # concatenation; the empty chains are the units
        if self.end != other.start:
            raise ValueError(f"{self} ends at {self.end}, {other} starts at {other.start}")
        return Chain(self.cells + other.cells, self.start, other.end, self.type + other.type)


def empty_chain(v: str) -> Chain:
    return Chain((), v, v, ())


def make_chain(X: PrecubicalSet, cells, start: str | None = None) -> Chain:
    """Build a chain from cell ids, checking composability."""
    cells = tuple(cells)
    if not cells:
        if start is None:
            raise ValueError("the empty chain needs its vertex")
        return empty_chain(start)
    for c in cells:
        if X[c].dim < 1:
            raise ValueError(f"{c} is a vertex, not a chain cell")
    for a, b in zip(cells, cells[1:]):
        if X.endpoints[a][1] != X.endpoints[b][0]:
            raise ValueError(f"{a} and {b} are not composable")
    return Chain(cells, X.endpoints[cells[0]][0], X.endpoints[cells[-1]][1],
                 tuple(X[c].dim for c in cells))


def parse_chain(X: PrecubicalSet, text: str) -> Chain:
    """Inverse of ``str(chain)``."""
    text = text.strip()
    if text.startswith("()_"):
        return empty_chain(text[3:])
    if not (text.startswith("(") and text.endswith(")")):
        raise ValueError(f"bad chain syntax {text!r}")
    return make_chain(X, [t.strip() for t in text[1:-1].split(",") if t.strip()])


class ChainIndex:
    """All cube chains of X up to a dimension bound, by start vertex."""

    def __init__(self, X: PrecubicalSet, max_dim: int | None = None):
        X.topological_order  # raises on cyclic input
        self.X = X
        self.max_dim = max_dim
        self._memo = {}

    def _from(self, v, budget):
        key = (v, budget)
        if key in self._memo:
            return self._memo[key]
        X = self.X
        out = [empty_chain(v)]
        for c in X.out_cells[v]:
            cd = X[c].dim - 1
            if budget is not None and cd > budget:
                continue
            head = Chain((c,), v, X.endpoints[c][1], (X[c].dim,))
            rest = None if budget is None else budget - cd
            out.extend(head + tail for tail in self._from(head.end, rest))
        self._memo[key] = out
        return out

    def chains_from(self, v: str) -> list[Chain]:
        return self._from(v, self.max_dim)


def enumerate_chains(X: PrecubicalSet, m: int) -> dict:
    """Map (v, w) to the sorted list of m-dimensional chains from v to w."""
    idx = ChainIndex(X, m)
    out = {}
    for v in X.vertices:
        for c in idx.chains_from(v):
            if c.dim == m:
                out.setdefault((v, c.end), []).append(c)
    return {k: sorted(cs) for k, cs in sorted(out.items())}


def top_degree(X: PrecubicalSet) -> int:
    """The largest degree i with R_i[X] != 0 (0 for the empty set)."""
    idx = ChainIndex(X)
    return max((c.dim + 1 for v in X.vertices for c in idx.chains_from(v)), default=0)


def face_dkI(X: PrecubicalSet, c: Chain, k: int, I) -> Chain:
    """d_{k,I}(c): split the k-th cell (1-based) into d^0 of the complement and d^1_I."""
    if not 1 <= k <= len(c.cells):
        raise IndexError(f"cell position {k} out of range for {c}")
    n = c.type[k - 1]
    I = tuple(sorted(I))
    if not I or len(I) >= n or I[0] < 0 or I[-1] >= n or len(set(I)) != len(I):
        raise IndexError(f"index set {I} must be a proper non-empty subset of range({n})")
    cell = c.cells[k - 1]
    comp = [i for i in range(n) if i not in I]
    lo = X.iterated_face(cell, 0, comp)
    hi = X.iterated_face(cell, 1, I)
    cells = c.cells[:k - 1] + (lo, hi) + c.cells[k:]
    typ = c.type[:k - 1] + (len(I), n - len(I)) + c.type[k:]
    return Chain(cells, c.start, c.end, typ)


def sgn(I, r: int) -> int:
    """+1 iff sum(I) and 1 + 2 + ... + r have the same parity."""
    return 1 if (sum(I) - r * (r + 1) // 2) % 2 == 0 else -1


def boundary_terms(X: PrecubicalSet, c: Chain):
    """Yield (sign, face chain) pairs of the boundary of c.

    The term d_{k,I} carries (-1)^(n_1 + ... + n_{k-1} + k + 1 + dim c) sgn(I).
    """
    before = 0
    for k, n in enumerate(c.type, start=1):
        if n >= 2:
            base = before + k + 1 + c.dim
            for r in range(1, n):
                for I in combinations(range(n), r):
                    s = sgn(I, r) * (-1 if base % 2 else 1)
                    yield s, face_dkI(X, c, k, I)
        before += n


def boundary(X: PrecubicalSet, c: Chain, field: Field = QQ) -> dict:
    """The boundary of c as a formal sum {chain: coefficient}."""
    out = {}
    for s, f in boundary_terms(X, c):
        out[f] = field.norm(out.get(f, field.zero) + s)
    return {f: a for f, a in out.items() if a != 0}


class BlockComplex:
    """Bases and boundary matrices of R_*[X] for every reachable vertex pair.

    ``bases[(v, w)][i]`` lists the (i-1)-dimensional chains from v to w for
    1 <= i <= max_degree + 1; ``d[(v, w)][i]`` is the matrix of
    R_{i+1} -> R_i in those bases for 1 <= i <= max_degree.
    """

    def __init__(self, X: PrecubicalSet, max_degree: int, field: Field = QQ, pairs=None):
        self.X = X
        self.max_degree = max_degree
        self.field = field
        idx = ChainIndex(X, max_degree)
        wanted = None if pairs is None else set(map(tuple, pairs))
        starts = X.vertices if wanted is None else sorted({v for v, _ in wanted})
        for v in set().union(*wanted) if wanted else ():
            if v not in X or X[v].dim != 0:
                raise KeyError(f"{v!r} is not a vertex")
        bases = {}
        for v in starts:
            for c in idx.chains_from(v):
                if wanted is not None and (v, c.end) not in wanted:
                    continue
                bases.setdefault((v, c.end), {}).setdefault(c.dim + 1, []).append(c)
        self.bases = {}
        for pair in sorted(bases):
            self.bases[pair] = {i: sorted(bases[pair].get(i, []))
                                for i in range(1, max_degree + 2)}
        self.index = {pair: {i: {c: n for n, c in enumerate(b)} for i, b in degs.items()}
                      for pair, degs in self.bases.items()}
        self.d = {pair: {i: self._matrix(pair, i) for i in range(1, max_degree + 1)}
                  for pair in self.bases}
        self._check()

    @cached_property
    def pairs(self):
        return list(self.bases)

    def basis(self, pair, i) -> list:
        return self.bases.get(pair, {}).get(i, [])

    def boundary_matrix(self, i, v, w) -> Matrix:
        if (v, w) in self.d:
            return self.d[(v, w)][i]
        return Matrix.zeros(0, 0, self.field)

    def _matrix(self, pair, i):
        F = self.field
        rows, cols = self.bases[pair][i], self.bases[pair][i + 1]
        at = self.index[pair][i]
        M = Matrix.zeros(len(rows), len(cols), F)
        for j, c in enumerate(cols):
            for f, a in boundary(self.X, c, F).items():
                M.data[at[f]][j] = a
        return M

    def _check(self):
        for pair, ds in self.d.items():
            for i in range(1, self.max_degree):
                if not (ds[i] @ ds[i + 1]).is_zero():
                    raise ConventionError(f"boundary does not square to zero on block {pair}, degree {i + 2}")

    def vector(self, pair, i, formal: dict) -> list:
        """Coordinates of a formal sum of chains in the degree-i basis."""
        F = self.field
        v = [F.zero] * len(self.basis(pair, i))
        at = self.index[pair][i]
        for c, a in formal.items():
            v[at[c]] = F.norm(v[at[c]] + a)
        return v

    def formal(self, pair, i, vec) -> dict:
        return {c: a for c, a in zip(self.basis(pair, i), vec) if a != 0}


def reachable_pairs(X: PrecubicalSet) -> set:
    """Pairs joined by a directed path (including the empty one)."""
    reach = {}
    for v in reversed(X.topological_order):
        out = {v}
        for e in X.out_cells[v]:
            if X[e].dim == 1:
                out |= reach[X.target(e)]
        reach[v] = out
    return {(v, w) for v, ws in reach.items() for w in ws}


def path_counts(X: PrecubicalSet) -> dict:
    """Number of dim-0 chains (empty chain included) for every reachable pair."""
    counts = {}
    for v in reversed(X.topological_order):
        row = {v: 1}
        for e in X.out_cells[v]:
            if X[e].dim == 1:
                for w, n in counts[X.target(e)].items():
                    row[w] = row.get(w, 0) + n
        counts[v] = row
    return {(v, w): n for v, row in counts.items() for w, n in row.items()}


def augmentation(X: PrecubicalSet, s: dict, field: Field = QQ) -> dict:
    """epsilon: dim-0 chains -> reachable pairs, (c_1..c_n) |-> (start, end)."""
    out = {}
    for c, a in s.items():
        if c.dim != 0:
            raise ValueError(f"augmentation is defined on 0-dimensional chains, got {c}")
        key = (c.start, c.end)
        out[key] = field.norm(out.get(key, field.zero) + a)
    return {k: a for k, a in out.items() if a != 0}


def free_generation_counts(X: PrecubicalSet, m: int) -> tuple[int, int]:
    """Count m-dim chains directly and via generators whiskered by paths.

    A generator is a chain whose first and last cells have dimension >= 2;
    every chain of positive dimension is p + g + q for unique paths p, q.
    Returns ``(direct, whiskered)``; they agree for every m >= 1.
    """
    pc = path_counts(X)
    into, out = {}, {}
    for (v, w), n in pc.items():
        into[w] = into.get(w, 0) + n
        out[v] = out.get(v, 0) + n
    direct = whiskered = 0
    for chains in enumerate_chains(X, m).values():
        for c in chains:
            direct += 1
            if c.type and c.type[0] >= 2 and c.type[-1] >= 2:
                whiskered += into[c.start] * out[c.end]
    return direct, whiskered
