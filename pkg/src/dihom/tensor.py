"""Tensor products of precubical sets and Kunneth dimension checks."""

from __future__ import annotations

from dataclasses import dataclass, field

from .pcs import Cell, PrecubicalSet

SEP = "⊗"


def pair_id(x: str, y: str) -> str:
    return f"{x}{SEP}{y}"


def tensor_product(X: PrecubicalSet, Y: PrecubicalSet, name: str | None = None) -> PrecubicalSet:
    """Cells (x, y) of dimension dim x + dim y.

    Face index k < dim x acts on x, the others act on y at k - dim x.
    """
    cells = []
    for x in X.canonical:
        for y in Y.canonical:
            d = ([], [])
            for eps in (0, 1):
                d[eps].extend(pair_id(f, y.id) for f in x.faces(eps))
                d[eps].extend(pair_id(x.id, f) for f in y.faces(eps))
            cells.append(Cell(pair_id(x.id, y.id), x.dim + y.dim, tuple(d[0]), tuple(d[1])))
    return PrecubicalSet(cells, name if name is not None else f"{X.name}{SEP}{Y.name}")


def boxtensor_dims(A: dict, B: dict, n: int) -> dict:
    """Dimensions of the degree-n part of the box tensor of two families.

    ``A[i]`` maps vertex pairs (x, x') to dim A_i(x, x'), likewise ``B``.
    The result maps ((x⊗y), (x'⊗y')) to the sum over i + j = n + 1,
    i, j >= 1, of dim A_i(x, x') * dim B_j(y, y').
    """
    out = {}
    for i in range(1, n + 1):
        j = n + 1 - i
        for (x, x2), a in A.get(i, {}).items():
            if not a:
                continue
            for (y, y2), b in B.get(j, {}).items():
                if b:
                    key = (pair_id(x, y), pair_id(x2, y2))
                    out[key] = out.get(key, 0) + a * b
    return out


@dataclass
class KunnethReport:
    degrees: dict = field(default_factory=dict)   # n -> list of (pair, direct, predicted)
    blocks: int = 0

    @property
    def ok(self) -> bool:
        return all(not bad for bad in self.mismatches().values())

    def mismatches(self) -> dict:
        return {n: [r for r in rows if r[1] != r[2]] for n, rows in self.degrees.items()}

    def to_json(self):
        return {"ok": self.ok, "blocks": self.blocks,
                "degrees": {str(n): {"compared": len(rows),
                                     "mismatches": [{"pair": list(p), "direct": a, "predicted": b}
                                                    for p, a, b in rows if a != b]}
                            for n, rows in self.degrees.items()}}


def kunneth_check(X: PrecubicalSet, Y: PrecubicalSet, max_degree: int, field=None) -> KunnethReport:
    """Compare HM_n[X ⊗ Y] with the box tensor of HM_*[X] and HM_*[Y].

    Every ordered vertex pair of the product is compared, including the
    unreachable ones (both sides are 0 there).
    """
    from .bimodule import homology_dims
    from .linalg import QQ
    F = field or QQ
    P = tensor_product(X, Y)
    hx = homology_dims(X, max_degree, F)
    hy = homology_dims(Y, max_degree, F)
    hp = homology_dims(P, max_degree, F)
    rep = KunnethReport()
    verts = P.vertices
    rep.blocks = len(verts) ** 2
    for n in range(1, max_degree + 1):
        pred = boxtensor_dims(hx, hy, n)
        rows = []
        for v in verts:
            for w in verts:
                rows.append(((v, w), hp[n].get((v, w), 0), pred.get((v, w), 0)))
        rep.degrees[n] = rows
    return rep
