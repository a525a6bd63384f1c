"""Homology bimodules HM_i, their action maps, FQ representations, rank invariants."""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field

from .chains import BlockComplex, Chain, empty_chain, make_chain, path_counts, reachable_pairs
from .linalg import (QQ, Field, Matrix, SubQuotient, Subspace, VectDiagram,
                     canonical_rank, image_basis, kernel_basis)
from .pcs import PrecubicalSet


@dataclass
class HomologyBlock:
    """Ker / Im on one vertex pair, in the given chain basis."""

    pair: tuple
    basis: list
    sq: SubQuotient

    def __post_init__(self):
        self.index = {c: n for n, c in enumerate(self.basis)}

    @property
    def dim(self) -> int:
        return self.sq.dim

    @property
    def reps(self) -> list[dict]:
        return [{c: a for c, a in zip(self.basis, r) if a != 0} for r in self.sq.reps]

    def coords(self, vec) -> list:
        return self.sq.coords(vec)

    def generators(self) -> list[str]:
        return [format_sum(r) for r in self.reps]


def format_sum(s: dict) -> str:
    """Render a formal sum of chains as e.g. ``(a,b) - 2(c,d)``."""
    parts = []
    for c in sorted(s):
        a = s[c]
        mag = abs(a) if not isinstance(a, int) else a
        sign = "-" if (not isinstance(a, int) and a < 0) else "+"
        coef = "" if mag == 1 else f"{mag}"
        parts.append((sign, f"{coef}{c}"))
    if not parts:
        return "0"
    out = ("-" if parts[0][0] == "-" else "") + parts[0][1]
    for sign, t in parts[1:]:
        out += f" {sign} {t}"
    return out


def homology_block(pair, basis, d_lower: Matrix | None, d_upper: Matrix | None, F: Field):
    n = len(basis)
    Z = Subspace.full(n, F) if d_lower is None else kernel_basis(d_lower)
    B = Subspace(n, [], [], F) if d_upper is None else image_basis(d_upper)
    return HomologyBlock(pair, basis, SubQuotient(Z, B))


@dataclass
class Bimodule:
    """A blockwise family of homology spaces; zero blocks are left out.

    ``quotient`` marks relative homology, where chains outside the block
    basis are zero rather than missing.
    """

    degree: int
    blocks: dict
    field: Field = QQ
    vertices: list = dc_field(default_factory=list)
    quotient: bool = False

    def dim(self, v, w=None) -> int:
        pair = v if w is None else (v, w)
        b = self.blocks.get(pair)
        return b.dim if b else 0

    def dims(self) -> dict:
        return {p: b.dim for p, b in self.blocks.items()}

    def is_zero(self) -> bool:
        return not self.blocks

    def table(self, order=None) -> str:
        return format_table(self.dims(), order or self.vertices)

    def to_json(self, generators: bool = False, actions: list | None = None):
        blocks = {}
        for (v, w), b in self.blocks.items():
            entry = {"dim": b.dim}
            if generators:
                entry["generators"] = b.generators()
            blocks[f"{v},{w}"] = entry
        return {"degree": self.degree, "field": self.field.name, "blocks": blocks,
                "actions": actions or []}


def _keep(blocks):
    return {p: b for p, b in blocks.items() if b.dim}


def homology_bimodule(C: BlockComplex, i: int) -> Bimodule:
    """HM_i = Ker(R_i -> R_{i-1}) / Im(R_{i+1} -> R_i), blockwise."""
    if not 1 <= i <= C.max_degree:
        raise ValueError(f"degree {i} outside 1..{C.max_degree} of this complex")
    blocks = {}
    for pair in C.pairs:
        lower = C.d[pair][i - 1] if i >= 2 else None
        blocks[pair] = homology_block(pair, C.basis(pair, i), lower, C.d[pair][i], C.field)
    return Bimodule(i, _keep(blocks), C.field, list(C.X.vertices))


def homology(X: PrecubicalSet, i: int, field: Field = QQ, pairs=None) -> Bimodule:
    return homology_bimodule(BlockComplex(X, i, field, pairs), i)


def homology_dims(X: PrecubicalSet, max_degree: int, field: Field = QQ) -> dict:
    """{i: {pair: dim HM_i}} for 1 <= i <= max_degree."""
    C = BlockComplex(X, max_degree, field)
    return {i: homology_bimodule(C, i).dims() for i in range(1, max_degree + 1)}


def action_map(B: Bimodule, p: Chain, q: Chain, pair) -> Matrix:
    """Matrix of [c] |-> [p c q] from block (a, b) to block (p.start, q.end).

    p must end at a and q start at b; otherwise the map is zero.
    """
    a, b = pair
    F = B.field
    src = B.blocks.get(pair)
    tgt_pair = (p.start, q.end)
    tgt = B.blocks.get(tgt_pair)
    ncols = src.dim if src else 0
    nrows = tgt.dim if tgt else 0
    M = Matrix.zeros(nrows, ncols, F)
    if not (src and tgt) or p.end != a or q.start != b:
        return M
    for j, rep in enumerate(src.reps):
        vec = [F.zero] * len(tgt.basis)
        for c, coef in rep.items():
            moved = p + c + q
            k = tgt.index.get(moved)
            if k is None:
                if B.quotient:
                    continue
                raise KeyError(f"{moved} missing from block {tgt_pair}")
            vec[k] = F.norm(vec[k] + coef)
        for r, x in enumerate(tgt.coords(vec)):
            M.data[r][j] = x
    return M


def path_algebra_dims(X: PrecubicalSet) -> dict:
    return path_counts(X)


# -- FQ graph and representations --------------------------------------------

@dataclass(frozen=True)
class Arrow:
    source: tuple
    target: tuple
    left: str | None = None    # edge u: a' -> a prepended
    right: str | None = None   # edge v: b -> b' appended


@dataclass
class FQGraph:
    nodes: list
    arrows: list

    @property
    def combined(self) -> list[Arrow]:
        """Arrows extending on both sides at once; composites of one-sided ones."""
        lefts = {}
        for a in self.arrows:
            if a.left is not None:
                lefts.setdefault(a.source, []).append(a)
        out = []
        for a in self.arrows:
            if a.right is None:
                continue
            for l in lefts.get(a.source, []):
                out.append(Arrow(a.source, (l.target[0], a.target[1]), l.left, a.right))
        return out

    def to_dot(self, dims: dict | None = None) -> str:
        ids = {n: f"n{k}" for k, n in enumerate(self.nodes)}
        lines = ["digraph FQ {"]
        for n in self.nodes:
            label = f"({n[0]},{n[1]})"
            if dims is not None:
                d = dims.get(n, 0)
                label += "\\n" + ("0" if d == 0 else "R" if d == 1 else f"R^{d}")
            lines.append(f'  {ids[n]} [label="{label}"];')
        for a in self.arrows:
            lab = f"{a.left}·" if a.left else f"·{a.right}"
            lines.append(f'  {ids[a.source]} -> {ids[a.target]} [label="{lab}"];')
        lines.append("}")
        return "\n".join(lines) + "\n"

    def to_json(self):
        return {"nodes": [list(n) for n in self.nodes],
                "arrows": [{"source": list(a.source), "target": list(a.target),
                            "left": a.left, "right": a.right} for a in self.arrows]}


def build_fq(X: PrecubicalSet) -> FQGraph:
    nodes = sorted(reachable_pairs(X))
    into = {v: [] for v in X.vertices}
    for e in X.edges:
        into[X.target(e)].append(e)
    arrows = []
    for a, b in nodes:
        for u in into[a]:
            arrows.append(Arrow((a, b), (X.source(u), b), left=u))
        for v in X.out_cells[b]:
            if X[v].dim == 1:
                arrows.append(Arrow((a, b), (a, X.target(v)), right=v))
    return FQGraph(nodes, arrows)


def to_representation(B: Bimodule, G: FQGraph, X: PrecubicalSet) -> VectDiagram:
    nodes = {n: B.dim(n) for n in G.nodes}
    arrows = []
    for ar in G.arrows:
        a, b = ar.source
        p = make_chain(X, [ar.left]) if ar.left else empty_chain(a)
        q = make_chain(X, [ar.right]) if ar.right else empty_chain(b)
        arrows.append((ar.source, ar.target, action_map(B, p, q, ar.source)))
    return VectDiagram(nodes, arrows, B.field)


def _reach(arrows, start, forward=True):
    nxt = {}
    for s, t, *_ in arrows:
        a, b = (s, t) if forward else (t, s)
        nxt.setdefault(a, []).append(b)
    seen, todo = {start}, [start]
    while todo:
        for m in nxt.get(todo.pop(), []):
            if m not in seen:
                seen.add(m)
                todo.append(m)
    return seen


def _edges(arrows):
    return [(a.source, a.target) if isinstance(a, Arrow) else (a[0], a[1]) for a in arrows]


def interval_nodes(arrows, p, q) -> set:
    """{r : p ~> r ~> q} in the graph spanned by ``arrows``."""
    es = _edges(arrows)
    fwd = _reach(es, p)
    if q not in fwd:
        raise ValueError(f"{q} is not reachable from {p}")
    return fwd & _reach(es, q, forward=False)


def interval(G: FQGraph, p, q) -> FQGraph:
    keep = interval_nodes(G.arrows, p, q)
    return FQGraph([n for n in G.nodes if n in keep],
                   [a for a in G.arrows if a.source in keep and a.target in keep])


def all_intervals(rep: VectDiagram) -> list:
    es = _edges(rep.arrows)
    return [(p, q) for p in rep.nodes for q in rep.nodes if q in _reach(es, p)]


def rank_invariant(rep: VectDiagram, intervals) -> dict:
    """canonical_rank of the restriction of ``rep`` to each interval [p, q]."""
    return {(p, q): canonical_rank(rep.restrict(interval_nodes(rep.arrows, p, q)))
            for p, q in intervals}


def dim_bisimulation(A: VectDiagram, B: VectDiagram) -> bool:
    """Greatest dimension-level bisimulation between two diagrams.

    A pair (c, d) survives when dims agree and every arrow out of one side
    is matched by a path (possibly empty) out of the other side that lands
    in a related pair.  The result is true when the surviving relation is
    total on both sides.
    """
    sa = _succ(A)
    sb = _succ(B)
    ra = {n: _reach(_edges(A.arrows), n) for n in A.nodes}
    rb = {n: _reach(_edges(B.arrows), n) for n in B.nodes}
    rel = {(c, d) for c in A.nodes for d in B.nodes if A.nodes[c] == B.nodes[d]}
    changed = True
    while changed:
        changed = False
        for c, d in list(rel):
            ok = all(any((c2, d2) in rel for d2 in rb[d]) for c2 in sa[c]) and \
                 all(any((c2, d2) in rel for c2 in ra[c]) for d2 in sb[d])
            if not ok:
                rel.discard((c, d))
                changed = True
    return ({c for c, _ in rel} == set(A.nodes)) and ({d for _, d in rel} == set(B.nodes))


def _succ(D: VectDiagram):
    out = {n: [] for n in D.nodes}
    for s, t, _ in D.arrows:
        out[s].append(t)
    return out


def format_table(dims: dict, vertices) -> str:
    """Matrix of spaces: rows are sources, columns targets, entries R^d."""
    vertices = list(vertices)

    def entry(d):
        return "0" if d == 0 else "R" if d == 1 else f"R^{d}"

    cells = [[entry(dims.get((v, w), 0)) for w in vertices] for v in vertices]
    width = max([len(v) for v in vertices] + [len(c) for row in cells for c in row] + [1])
    head = " " * width + " | " + " ".join(w.rjust(width) for w in vertices)
    lines = [head, "-" * len(head)]
    for v, row in zip(vertices, cells):
        lines.append(v.rjust(width) + " | " + " ".join(c.rjust(width) for c in row))
    return "\n".join(lines)
