"""Relative pairs, extended subcomplexes, relative homology, exact sequences.

For a subcomplex Y of X, ^X R_i[Y] is spanned by basis chains of R_i[X]:
in degree 1 the paths that meet a vertex of Y; in degree i >= 2 the chains
whose segment from the first to the last cell of dimension >= 2 lies in Y.
Both the sub- and the quotient complex are therefore coordinate complexes,
which keeps every map explicit.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .bimodule import Bimodule, homology_block
from .chains import BlockComplex, Chain, ChainIndex, top_degree
from .linalg import QQ, Field, Matrix, image_basis, kernel_basis, rank
from .pcs import PcsError, PrecubicalSet, PreconditionError, closure


def _idset(X: PrecubicalSet, Y) -> frozenset:
    ids = set(Y.cells) if isinstance(Y, PrecubicalSet) else set(Y)
    unknown = ids - set(X.cells)
    if unknown:
        raise PcsError(f"ids not in {X.name or 'X'}: {sorted(unknown)}")
    if closure(X, ids) != ids:
        raise PcsError("subcomplex ids are not closed under faces")
    return frozenset(ids)


def relative_pair_witness(X: PrecubicalSet, Y):
    """A path violating the relative-pair condition, or None.

    A path starting in Y_0 may not use an edge of Y after an edge outside
    Y; a path ending in Y_0 obeys the mirror rule.
    """
    Y = _idset(X, Y)
    for forward in (True, False):
        nxt = {v: [] for v in X.vertices}
        for e in X.edges:
            s, t = X.source(e), X.target(e)
            if forward:
                nxt[s].append((e, t))
            else:
                nxt[t].append((e, s))
        parent = {}
        todo = [(v, False) for v in X.vertices if v in Y]
        for st in todo:
            parent[st] = None
        while todo:
            v, left = todo.pop()
            for e, w in nxt[v]:
                inside = e in Y
                if left and inside:
                    path = [e]
                    st = (v, left)
                    while parent[st] is not None:
                        st, edge = parent[st]
                        path.append(edge)
                    if forward:
                        path.reverse()
                    return ("from" if forward else "into", path)
                st = (w, left or not inside)
                if st not in parent:
                    parent[st] = ((v, left), e)
                    todo.append(st)
    return None


def is_relative_pair(X: PrecubicalSet, Y) -> bool:
    return relative_pair_witness(X, Y) is None


def _core(c: Chain) -> tuple:
    """The segment between the first and last cells of dimension >= 2."""
    big = [k for k, n in enumerate(c.type) if n >= 2]
    return c.cells[big[0]:big[-1] + 1] if big else ()


def extended_member(X: PrecubicalSet, Y: frozenset, c: Chain) -> bool:
    """Whether c is a basis chain of ^X R_{dim c + 1}[Y]."""
    if c.dim == 0:
        return c.start in Y or any(X.endpoints[e][1] in Y for e in c.cells)
    return all(x in Y for x in _core(c))


def is_good_cover(X: PrecubicalSet, X1, X2) -> bool:
    """Every chain is a path-whiskering of a chain inside X1 or inside X2."""
    return good_cover_witness(X, X1, X2) is None


def good_cover_witness(X: PrecubicalSet, X1, X2):
    a, b = _idset(X, X1), _idset(X, X2)
    if a | b != set(X.cells):
        missing = sorted(set(X.cells) - (a | b))
        raise PcsError(f"X1 and X2 do not cover X; missing {missing}")
    idx = ChainIndex(X)
    for v in X.vertices:
        for c in idx.chains_from(v):
            core = _core(c)
            if not (all(x in a for x in core) or all(x in b for x in core)):
                return c
    return None


def extended_chain_basis(C: BlockComplex, Y, i: int) -> dict:
    """Per pair, the positions in the degree-i basis spanning ^X R_i[Y]."""
    X = C.X
    Ys = _idset(X, Y)
    if i == 1 and not is_relative_pair(X, Ys):
        raise PreconditionError("degree-1 extension needs a relative pair")
    return {pair: [k for k, c in enumerate(C.basis(pair, i)) if extended_member(X, Ys, c)]
            for pair in C.pairs}


def submatrix(M: Matrix, rows, cols) -> Matrix:
    return Matrix(len(rows), len(cols), [[M.data[r][c] for c in cols] for r in rows], M.field)


class RelativeComplex:
    """R_*[X] with the coordinate subcomplex ^X R_*[Y] and its quotient."""

    def __init__(self, X: PrecubicalSet, Y, max_degree: int, field: Field = QQ,
                 pairs=None, complex: BlockComplex | None = None, check_pair: bool = True):
        self.X = X
        self.Y = _idset(X, Y)
        if check_pair:
            w = relative_pair_witness(X, self.Y)
            if w is not None:
                raise PreconditionError(f"not a relative pair: path {w[1]} ({w[0]} Y)")
        self.C = complex or BlockComplex(X, max_degree, field, pairs)
        self.field = self.C.field
        self.max_degree = self.C.max_degree
        self.sub = {}
        self.rest = {}
        self.full = {}
        for pair in self.C.pairs:
            for i in range(1, self.max_degree + 2):
                basis = self.C.basis(pair, i)
                inside = [k for k, c in enumerate(basis) if extended_member(X, self.Y, c)]
                mask = set(inside)
                self.sub[pair, i] = inside
                self.rest[pair, i] = [k for k in range(len(basis)) if k not in mask]
                self.full[pair, i] = list(range(len(basis)))
        self._check_closed()

    def _check_closed(self):
        for pair in self.C.pairs:
            for i in range(1, self.max_degree + 1):
                d = self.C.d[pair][i]
                out = self.rest[pair, i]
                for j in self.sub[pair, i + 1]:
                    if any(d.data[r][j] != 0 for r in out):
                        raise RuntimeError(f"extended subcomplex not closed under the boundary on {pair}")

    def _block(self, pair, i, sel):
        C = self.C
        idx = sel[pair, i]
        basis = [C.basis(pair, i)[k] for k in idx]
        lower = submatrix(C.d[pair][i - 1], sel[pair, i - 1], idx) if i >= 2 else None
        upper = submatrix(C.d[pair][i], idx, sel[pair, i + 1])
        return homology_block(pair, basis, lower, upper, self.field)

    def _bimodule(self, i, sel, quotient):
        if not 1 <= i <= self.max_degree:
            raise ValueError(f"degree {i} outside 1..{self.max_degree}")
        blocks = {pair: self._block(pair, i, sel) for pair in self.C.pairs}
        return Bimodule(i, {p: b for p, b in blocks.items() if b.dim}, self.field,
                        list(self.X.vertices), quotient)

    def extended(self, i) -> Bimodule:
        return self._bimodule(i, self.sub, False)

    def relative(self, i) -> Bimodule:
        return self._bimodule(i, self.rest, True)

    def absolute(self, i) -> Bimodule:
        return self._bimodule(i, self.full, False)

    def block(self, kind, pair, i):
        """Homology block of kind 'sub' (extended), 'rest' (relative) or 'all'."""
        sel = {"sub": self.sub, "rest": self.rest, "all": self.full}[kind]
        return self._block(pair, i, sel)

    def connecting(self, i, pair) -> Matrix:
        """[c] in HM_{i+1}[X,Y] |-> [d c] in ^X HM_i[Y] on one block."""
        src = self.block("rest", pair, i + 1)
        tgt = self.block("sub", pair, i)
        return _connecting(self, pair, i, src, tgt)


def _embed(vec, positions, n, F):
    out = [F.zero] * n
    for x, k in zip(vec, positions):
        out[k] = x
    return out


def _connecting(R: RelativeComplex, pair, i, src, tgt) -> Matrix:
    F = R.field
    C = R.C
    M = Matrix.zeros(tgt.dim, src.dim, F)
    if i < 1 or not src.dim:
        return M
    n_hi = len(C.basis(pair, i + 1))
    d = C.d[pair][i]
    outside = R.rest[pair, i]
    for j, rep in enumerate(src.sq.reps):
        lifted = _embed(rep, R.rest[pair, i + 1], n_hi, F)
        image = d.apply(lifted)
        if any(image[r] != 0 for r in outside):
            raise RuntimeError("boundary of a relative cycle left the subcomplex")
        coords = tgt.coords([image[k] for k in R.sub[pair, i]])
        for r, x in enumerate(coords):
            M.data[r][j] = x
    return M


def relative_homology(X: PrecubicalSet, Y, i: int, field: Field = QQ, pairs=None) -> Bimodule:
    return RelativeComplex(X, Y, i, field, pairs).relative(i)


def extended_homology(X: PrecubicalSet, Y, i: int, field: Field = QQ, pairs=None) -> Bimodule:
    return RelativeComplex(X, Y, i, field, pairs).extended(i)


def connecting_hom(X: PrecubicalSet, Y, i: int, v: str, w: str, field: Field = QQ) -> Matrix:
    """The connecting map HM_{i+1}[X,Y](v,w) -> ^X HM_i[Y](v,w)."""
    R = RelativeComplex(X, Y, i + 1, field, pairs=[(v, w)])
    if (v, w) not in R.C.bases:
        return Matrix.zeros(0, 0, R.field)
    return R.connecting(i, (v, w))


# -- exact sequences ----------------------------------------------------------

def _dimstr(d):
    return "0" if d == 0 else "R" if d == 1 else f"R^{d}"


@dataclass
class BlockSequence:
    """One vertex pair's piece of a long exact sequence, left to right.

    ``incoming`` is the map into the first node from the next-higher
    degree (a zero-column matrix when that space vanishes); the sequence
    ends with 0.
    """

    pair: tuple
    labels: list
    dims: list
    maps: list
    incoming: Matrix
    short_exact: bool | None = None
    exact: list = field(default_factory=list)

    def __post_init__(self):
        F = self.incoming.field
        n = len(self.dims)
        self.exact = []
        for j in range(n):
            inc = self.maps[j - 1] if j else self.incoming
            out = self.maps[j] if j < n - 1 else Matrix.zeros(0, self.dims[j], F)
            self.exact.append(image_basis(inc) == kernel_basis(out))

    @property
    def alternating_sum(self) -> int:
        """Sum of (-1)^j dim_j minus the rank of the incoming map (0 when exact)."""
        return sum((-1) ** j * d for j, d in enumerate(self.dims)) - rank(self.incoming)

    @property
    def ok(self) -> bool:
        return all(self.exact) and self.alternating_sum == 0 and self.short_exact is not False

    def render(self, labels: bool = False) -> str:
        parts = ["0" if self.incoming.cols == 0 else "…"]
        for lab, d, ok in zip(self.labels, self.dims, self.exact):
            mark = "✓" if ok else "✗"
            parts.append(f"{lab} = {_dimstr(d)} {mark}" if labels else f"{_dimstr(d)}{mark}")
        parts.append("0")
        return " → ".join(parts)

    def to_json(self):
        return {"pair": list(self.pair), "labels": self.labels, "dims": self.dims,
                "exact": self.exact, "alternating_sum": self.alternating_sum,
                "short_exact": self.short_exact,
                "maps": [m.to_json() for m in self.maps], "incoming": self.incoming.to_json()}


@dataclass
class SequenceReport:
    kind: str
    max_degree: int
    blocks: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(b.ok for b in self.blocks.values())

    def to_json(self):
        return {"kind": self.kind, "max_degree": self.max_degree, "ok": self.ok,
                "blocks": {f"{v},{w}": b.to_json() for (v, w), b in self.blocks.items()}}


def profile_is_consistent(dims) -> bool:
    """Necessary condition for 0 -> V_1 -> ... -> V_n -> 0 to be exact."""
    return sum((-1) ** j * d for j, d in enumerate(dims)) == 0


def _hom_map(src, tgt, move, F) -> Matrix:
    """Matrix of a map on homology given a chain-level ``move`` on reps."""
    M = Matrix.zeros(tgt.dim, src.dim, F)
    for j, rep in enumerate(src.sq.reps):
        for r, x in enumerate(tgt.coords(move(rep))):
            M.data[r][j] = x
    return M


def _default_top(X, max_i):
    return max_i if max_i is not None else max(top_degree(X), 1)


def verify_les_relative(X: PrecubicalSet, Y, max_i: int | None = None,
                        field: Field = QQ, pairs=None) -> SequenceReport:
    """... -> ^X HM_i[Y] -> HM_i[X] -> HM_i[X,Y] -> ^X HM_{i-1}[Y] -> ... -> HM_1[X,Y] -> 0."""
    top = _default_top(X, max_i)
    R = RelativeComplex(X, Y, top + 1, field, pairs)
    F = R.field
    rep = SequenceReport("relative", top)
    for pair in R.C.pairs:
        n = {i: len(R.C.basis(pair, i)) for i in range(1, top + 3)}
        E = {i: R.block("sub", pair, i) for i in range(1, top + 2)}
        H = {i: R.block("all", pair, i) for i in range(1, top + 1)}
        Q = {i: R.block("rest", pair, i) for i in range(1, top + 2)}
        labels, dims, maps = [], [], []
        for i in range(top, 0, -1):
            sub, rest = R.sub[pair, i], R.rest[pair, i]
            iota = _hom_map(E[i], H[i], lambda v, s=sub, k=n[i]: _embed(v, s, k, F), F)
            pi = _hom_map(H[i], Q[i], lambda v, r=rest: [v[k] for k in r], F)
            labels += [f"^X HM_{i}[Y]", f"HM_{i}[X]", f"HM_{i}[X,Y]"]
            dims += [E[i].dim, H[i].dim, Q[i].dim]
            maps += [iota, pi]
            if i > 1:
                maps.append(_connecting(R, pair, i - 1, Q[i], E[i - 1]))
        incoming = _connecting(R, pair, top, Q[top + 1], E[top])
        rep.blocks[pair] = BlockSequence(pair, labels, dims, maps, incoming)
    return rep


def verify_les_mv(X: PrecubicalSet, X1, X2, max_i: int | None = None,
                  field: Field = QQ, pairs=None) -> SequenceReport:
    """... -> ^X HM_i[X1∩X2] -> ^X HM_i[X1] ⊕ ^X HM_i[X2] -> HM_i[X] -> ^X HM_{i-1}[X1∩X2] -> ...

    alpha(x) = (x, -x), beta(x, y) = x + y; the connecting map splits a
    cycle z as x + y along the cover and sends [z] to [d x].
    """
    a, b = _idset(X, X1), _idset(X, X2)
    bad = good_cover_witness(X, a, b)
    if bad is not None:
        raise PreconditionError(f"not a good cover: chain {bad} is not a whiskering of a chain in X1 or X2")
    for name, Z in (("X1", a), ("X2", b)):
        w = relative_pair_witness(X, Z)
        if w is not None:
            raise PreconditionError(f"(X, {name}) is not a relative pair: path {w[1]}")
    top = _default_top(X, max_i)
    C = BlockComplex(X, top + 1, field, pairs)
    F = C.field
    R1 = RelativeComplex(X, a, top + 1, complex=C, check_pair=False)
    R2 = RelativeComplex(X, b, top + 1, complex=C, check_pair=False)
    R12 = RelativeComplex(X, a & b, top + 1, complex=C, check_pair=False)
    rep = SequenceReport("mayer-vietoris", top)
    for pair in C.pairs:
        n = {i: len(C.basis(pair, i)) for i in range(1, top + 3)}
        I = {i: R12.block("sub", pair, i) for i in range(1, top + 2)}
        A = {i: R1.block("sub", pair, i) for i in range(1, top + 2)}
        B = {i: R2.block("sub", pair, i) for i in range(1, top + 2)}
        H = {i: R1.block("all", pair, i) for i in range(1, top + 2)}

        def delta(i):
            # H_i -> I_{i-1}
            M = Matrix.zeros(I[i - 1].dim if i > 1 else 0, H[i].dim, F)
            if i == 1:
                return M
            in1 = set(R1.sub[pair, i])
            d = C.d[pair][i - 1]
            for j, z in enumerate(H[i].sq.reps):
                x = [c if k in in1 else F.zero for k, c in enumerate(z)]
                bx = d.apply(x)
                s12 = R12.sub[pair, i - 1]
                if any(bx[k] != 0 for k in set(range(n[i - 1])) - set(s12)):
                    raise RuntimeError("connecting map left the intersection")
                for r, y in enumerate(I[i - 1].coords([bx[k] for k in s12])):
                    M.data[r][j] = y
            return M

        labels, dims, maps = [], [], []
        short = True
        for i in range(top, 0, -1):
            s12, s1, s2 = R12.sub[pair, i], R1.sub[pair, i], R2.sub[pair, i]
            pos1 = {k: t for t, k in enumerate(s1)}
            pos2 = {k: t for t, k in enumerate(s2)}
            alpha = Matrix.zeros(A[i].dim + B[i].dim, I[i].dim, F)
            for j, v in enumerate(I[i].sq.reps):
                full = _embed(v, s12, n[i], F)
                ca = A[i].coords([full[k] for k in s1])
                cb = B[i].coords([full[k] for k in s2])
                col = ca + [F.norm(-x) for x in cb]
                for r, x in enumerate(col):
                    alpha.data[r][j] = x
            beta = Matrix.zeros(H[i].dim, A[i].dim + B[i].dim, F)
            cols = [H[i].coords(_embed(v, s1, n[i], F)) for v in A[i].sq.reps]
            cols += [H[i].coords(_embed(v, s2, n[i], F)) for v in B[i].sq.reps]
            for j, col in enumerate(cols):
                for r, x in enumerate(col):
                    beta.data[r][j] = x
            labels += [f"^X HM_{i}[X1∩X2]", f"^X HM_{i}[X1] ⊕ ^X HM_{i}[X2]", f"HM_{i}[X]"]
            dims += [I[i].dim, A[i].dim + B[i].dim, H[i].dim]
            maps += [alpha, beta]
            if i > 1:
                maps.append(delta(i))
            short = short and _short_exact(s12, s1, s2, n[i], pos1, pos2, F)
        rep.blocks[pair] = BlockSequence(pair, labels, dims, maps, delta(top + 1), short)
    return rep


def _short_exact(s12, s1, s2, n, pos1, pos2, F) -> bool:
    """Chain-level 0 -> span(s12) -> span(s1) ⊕ span(s2) -> F^n -> 0."""
    alpha = Matrix.zeros(len(s1) + len(s2), len(s12), F)
    for j, k in enumerate(s12):
        if k not in pos1 or k not in pos2:
            return False
        alpha.data[pos1[k]][j] = F.one
        alpha.data[len(s1) + pos2[k]][j] = F.norm(-1)
    beta = Matrix.zeros(n, len(s1) + len(s2), F)
    for t, k in enumerate(s1):
        beta.data[k][t] = F.one
    for t, k in enumerate(s2):
        beta.data[k][len(s1) + t] = F.one
    return (rank(alpha) == len(s12) and rank(beta) == n
            and image_basis(alpha) == kernel_basis(beta))
