"""Exact linear algebra over the rationals or a prime field.

Vectors are plain lists of field elements.  Elements of the rationals are
``fractions.Fraction``; elements of GF(p) are ints in ``range(p)``.  All
routines take the field explicitly so that the same code serves both.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from fractions import Fraction


class Field:
    """The rationals (``p is None``) or the prime field GF(p)."""

    def __init__(self, p: int | None = None):
        if p is not None and not _is_prime(p):
            raise ValueError(f"{p} is not prime")
        self.p = p

    @property
    def name(self) -> str:
        return "rational" if self.p is None else f"fp:{self.p}"

    def __repr__(self):
        return f"Field({self.name})"

    def __eq__(self, other):
        return isinstance(other, Field) and other.p == self.p

    def __hash__(self):
        return hash(("Field", self.p))

    def __call__(self, x) -> Fraction | int:
        """Coerce an int or Fraction into the field."""
        if self.p is None:
            return Fraction(x)
        x = Fraction(x)
        return x.numerator * pow(x.denominator, -1, self.p) % self.p

    @property
    def zero(self):
        return self(0)

    @property
    def one(self):
        return self(1)

    def norm(self, x):
        # reduce the result of a ring operation back into canonical form
        return x if self.p is None else x % self.p

    def inv(self, x):
        if x == 0:
            raise ZeroDivisionError("inverse of zero")
        if self.p is None:
            return 1 / x
        return pow(x, -1, self.p)

    def to_json(self, x):
        if self.p is None:
            return [x.numerator, x.denominator]
        return int(x)


QQ = Field()


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    k = 2
    while k * k <= p:
        if p % k == 0:
            return False
        k += 1
    return True


def parse_field(text: str) -> Field:
    """Parse ``rational`` or ``fp:<p>``."""
    if text in ("rational", "QQ", "Q"):
        return QQ
    if text.startswith("fp:"):
        try:
            p = int(text[3:])
        except ValueError:
            raise ValueError(f"bad prime in field spec {text!r}") from None
        return Field(p)
    raise ValueError(f"unknown field {text!r}; expected 'rational' or 'fp:<p>'")


def rref(vectors, ncols: int, F: Field):
    """Reduced row echelon form of a list of vectors.

    Returns ``(rows, pivots)`` with the zero rows dropped.  The pivot of a
    row is its first non-zero entry; pivot columns increase strictly.
    """
    rows = [list(v) for v in vectors]
    pivots = []
    r = 0
    for c in range(ncols):
        piv = None
        for i in range(r, len(rows)):
            if rows[i][c] != 0:
                piv = i
                break
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        prow = rows[r]
        lead = prow[c]
        # boundary matrices are sparse: only touch the pivot row's support
        nz = [j for j in range(c, ncols) if prow[j] != 0]
        if lead != 1:
            s = F.inv(lead)
            for j in nz:
                prow[j] = F.norm(prow[j] * s)
        for i in range(len(rows)):
            if i != r:
                row = rows[i]
                f = row[c]
                if f != 0:
                    for j in nz:
                        row[j] = F.norm(row[j] - f * prow[j])
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    return rows[:r], pivots


class Matrix:
    """A dense ``rows x cols`` matrix over a field; treated as immutable."""

    __slots__ = ("rows", "cols", "data", "field")

    def __init__(self, rows: int, cols: int, data=None, field: Field = QQ):
        self.rows = rows
        self.cols = cols
        self.field = field
        if data is None:
            data = [[field.zero] * cols for _ in range(rows)]
        else:
            data = [[field(x) for x in row] for row in data]
            if len(data) != rows or any(len(row) != cols for row in data):
                raise ValueError("matrix data does not match its shape")
        self.data = data

    @classmethod
    def zeros(cls, rows, cols, field=QQ):
        return cls(rows, cols, None, field)

    @classmethod
    def identity(cls, n, field=QQ):
        m = cls(n, n, None, field)
        for i in range(n):
            m.data[i][i] = field.one
        return m

    @classmethod
    def from_columns(cls, columns, nrows, field=QQ):
        m = cls(nrows, len(columns), None, field)
        for j, col in enumerate(columns):
            for i in range(nrows):
                m.data[i][j] = col[i]
        return m

    @property
    def shape(self):
        return (self.rows, self.cols)

    def __repr__(self):
        return f"Matrix({self.rows}x{self.cols}, {self.data})"

    def __eq__(self, other):
        return (isinstance(other, Matrix) and self.shape == other.shape
                and self.data == other.data)

    def __getitem__(self, ij):
        i, j = ij
        return self.data[i][j]

    def column(self, j):
        return [row[j] for row in self.data]

    def transpose(self):
        return Matrix.from_columns(self.data, self.cols, self.field)

    def __matmul__(self, other):
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        F = self.field
        out = Matrix(self.rows, other.cols, None, F)
        for i, row in enumerate(self.data):
            acc = out.data[i]
            for k, a in enumerate(row):
                if a == 0:
                    continue
                for j, b in enumerate(other.data[k]):
                    if b != 0:
                        acc[j] = F.norm(acc[j] + a * b)
        return out

    def __add__(self, other):
        F = self.field
        return Matrix(self.rows, self.cols,
                      [[F.norm(a + b) for a, b in zip(r, s)]
                       for r, s in zip(self.data, other.data)], F)

    def __neg__(self):
        F = self.field
        return Matrix(self.rows, self.cols,
                      [[F.norm(-a) for a in r] for r in self.data], F)

    def apply(self, v):
        F = self.field
        return [F.norm(sum((a * x for a, x in zip(row, v) if a != 0 and x != 0), F.zero))
                for row in self.data]

    def is_zero(self):
        return all(x == 0 for row in self.data for x in row)

    def rank(self) -> int:
        return rank(self)

    def to_json(self):
        return {"rows": self.rows, "cols": self.cols,
                "entries": [[self.field.to_json(x) for x in row] for row in self.data]}


@dataclass
class Subspace:
    """A subspace of F^ambient held as a reduced echelon basis."""

    ambient: int
    basis: list = dc_field(default_factory=list)
    pivots: list = dc_field(default_factory=list)
    field: Field = QQ

    @classmethod
    def span(cls, vectors, ambient: int, F: Field = QQ) -> "Subspace":
        rows, piv = rref(vectors, ambient, F)
        return cls(ambient, rows, piv, F)

    @classmethod
    def full(cls, ambient: int, F: Field = QQ) -> "Subspace":
        return cls(ambient, [_unit(j, ambient, F) for j in range(ambient)],
                   list(range(ambient)), F)

    @property
    def dim(self) -> int:
        return len(self.basis)

    def reduce(self, v):
        """Subtract the basis multiples that clear the pivot coordinates."""
        F = self.field
        v = list(v)
        for row, p in zip(self.basis, self.pivots):
            f = v[p]
            if f != 0:
                for j in range(p, self.ambient):
                    if row[j] != 0:
                        v[j] = F.norm(v[j] - f * row[j])
        return v

    def contains(self, v) -> bool:
        return all(x == 0 for x in self.reduce(v))

    def __le__(self, other: "Subspace") -> bool:
        return all(other.contains(b) for b in self.basis)

    def __eq__(self, other):
        # reduced echelon form is unique, so equality is literal
        return (isinstance(other, Subspace) and self.ambient == other.ambient
                and self.pivots == other.pivots and self.basis == other.basis)


def _unit(j, n, F):
    v = [F.zero] * n
    v[j] = F.one
    return v


def rank(M: Matrix) -> int:
    return len(rref(M.data, M.cols, M.field)[1])


def kernel_basis(M: Matrix) -> Subspace:
    F = M.field
    rows, piv = rref(M.data, M.cols, F)
    pivset = set(piv)
    vecs = []
    for j in range(M.cols):
        if j in pivset:
            continue
        v = [F.zero] * M.cols
        v[j] = F.one
        for row, p in zip(rows, piv):
            if row[j] != 0:
                v[p] = F.norm(-row[j])
        vecs.append(v)
    return Subspace.span(vecs, M.cols, F)


def image_basis(M: Matrix) -> Subspace:
    return Subspace.span(M.transpose().data, M.rows, M.field)


class SubQuotient:
    """The quotient Z/B of nested subspaces B <= Z.

    Representatives are Z-vectors reduced modulo B and put in echelon form;
    when Z is the whole space they are the standard vectors at the non-pivot
    positions of B.
    """

    def __init__(self, Z: Subspace, B: Subspace):
        if not B <= Z:
            raise ValueError("subquotient needs B contained in Z")
        self.Z, self.B = Z, B
        F = Z.field
        rows, piv = rref([B.reduce(z) for z in Z.basis], Z.ambient, F)
        self.reps = rows
        self.rep_pivots = piv
        self.field = F

    @property
    def dim(self) -> int:
        return len(self.reps)

    def coords(self, v):
        """Coordinates of the class of ``v`` (which must lie in Z)."""
        r = self.B.reduce(v)
        return [r[p] for p in self.rep_pivots]

    def project(self) -> Matrix:
        n = self.Z.ambient
        F = self.field
        return Matrix.from_columns([self.coords(_unit(j, n, F)) for j in range(n)],
                                   self.dim, F)


def quotient(ambient: int, sub: Subspace):
    """Return ``(dim, representatives, projection)`` for F^ambient / sub."""
    sq = SubQuotient(Subspace.full(ambient, sub.field), sub)
    return sq.dim, sq.reps, sq.project()


@dataclass
class VectDiagram:
    """Finite diagram of vector spaces: node dims and arrow matrices.

    ``arrows`` holds ``(source, target, matrix)`` with the matrix of shape
    ``dim(target) x dim(source)``.
    """

    nodes: dict
    arrows: list = dc_field(default_factory=list)
    field: Field = QQ

    def __post_init__(self):
        for s, t, M in self.arrows:
            if M.shape != (self.nodes[t], self.nodes[s]):
                raise ValueError(f"arrow {s}->{t} has shape {M.shape}")

    def restrict(self, keep) -> "VectDiagram":
        keep = set(keep)
        return VectDiagram({n: d for n, d in self.nodes.items() if n in keep},
                           [a for a in self.arrows if a[0] in keep and a[1] in keep],
                           self.field)

    def _offsets(self):
        off, total = {}, 0
        for n, d in self.nodes.items():
            off[n] = total
            total += d
        return off, total

    def components(self):
        """Weakly connected components, each in node order."""
        parent = {n: n for n in self.nodes}

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for s, t, _ in self.arrows:
            parent[find(s)] = find(t)
        comps = {}
        for n in self.nodes:
            comps.setdefault(find(n), []).append(n)
        return list(comps.values())


def diagram_limit(D: VectDiagram):
    """Limit as the solution space of x_t = M x_s over all arrows."""
    F = D.field
    off, total = D._offsets()
    constraints = []
    for s, t, M in D.arrows:
        for r in range(M.rows):
            row = [F.zero] * total
            row[off[t] + r] = F.norm(row[off[t] + r] + 1)
            for c in range(M.cols):
                row[off[s] + c] = F.norm(row[off[s] + c] - M[r, c])
            constraints.append(row)
    K = kernel_basis(Matrix(len(constraints), total, constraints, F))
    cone = {n: Matrix(d, K.dim, [[b[off[n] + r] for b in K.basis] for r in range(d)], F)
            for n, d in D.nodes.items()}
    return K.dim, cone


def diagram_colimit(D: VectDiagram):
    """Colimit as the direct sum modulo iota_t(M x) - iota_s(x)."""
    F = D.field
    off, total = D._offsets()
    rel = []
    for s, t, M in D.arrows:
        for c in range(M.cols):
            v = [F.zero] * total
            for r in range(M.rows):
                v[off[t] + r] = M[r, c]
            v[off[s] + c] = F.norm(v[off[s] + c] - 1)
            rel.append(v)
    dim, _, proj = quotient(total, Subspace.span(rel, total, F))
    cocone = {n: Matrix(dim, d, [[proj[i, off[n] + c] for c in range(d)]
                                  for i in range(dim)], F)
              for n, d in D.nodes.items()}
    return dim, cocone


def canonical_map(D: VectDiagram) -> Matrix:
    """The map from the limit to the colimit.

    On each connected component it is cocone(n) @ cone(n) for any node n of
    the component (all choices agree); components are summed.
    """
    ldim, cone = diagram_limit(D)
    cdim, cocone = diagram_colimit(D)
    phi = Matrix.zeros(cdim, ldim, D.field)
    for comp in D.components():
        n = comp[0]
        phi = phi + cocone[n] @ cone[n]
    return phi


def canonical_rank(D: VectDiagram) -> int:
    if not D.nodes:
        return 0
    return rank(canonical_map(D))
