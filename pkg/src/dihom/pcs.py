"""Finite precubical sets: cells, face maps, validation and the .pcs format."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import cached_property
from graphlib import CycleError, TopologicalSorter
from itertools import product


class PcsError(ValueError):
    """Malformed input: syntax error, duplicate id, dangling face."""


class PreconditionError(Exception):
    """An operation was called outside its domain (cyclic input, ...)."""


@dataclass(frozen=True)
class Cell:
    id: str
    dim: int
    d0: tuple = ()
    d1: tuple = ()

    def faces(self, eps: int) -> tuple:
        return self.d1 if eps else self.d0


class PrecubicalSet:
    """An immutable finite precubical set.

    Cells keep their insertion order; ``canonical`` gives the (dim, id)
    order used for every deterministic output.
    """

    def __init__(self, cells=(), name: str = ""):
        self.name = name
        self.cells: dict[str, Cell] = {}
        for c in cells:
            if c.id in self.cells:
                raise PcsError(f"duplicate cell id {c.id!r}")
            self.cells[c.id] = c
        for c in self.cells.values():
            for f in c.d0 + c.d1:
                if f not in self.cells:
                    raise PcsError(f"cell {c.id!r} references undeclared face {f!r}")

    def __repr__(self):
        counts = ", ".join(str(n) for n in self.counts())
        return f"PrecubicalSet({self.name!r}, cells per dim: [{counts}])"

    def __getitem__(self, cid: str) -> Cell:
        return self.cells[cid]

    def __contains__(self, cid) -> bool:
        return cid in self.cells

    def __iter__(self):
        return iter(self.cells.values())

    def __len__(self):
        return len(self.cells)

    def __eq__(self, other):
        # dict equality ignores insertion order
        return isinstance(other, PrecubicalSet) and self.cells == other.cells

    def __hash__(self):
        return hash(frozenset(self.cells))

    @cached_property
    def canonical(self) -> list[Cell]:
        return sorted(self.cells.values(), key=lambda c: (c.dim, c.id))

    @property
    def dim(self) -> int:
        return max((c.dim for c in self.cells.values()), default=-1)

    def ids_of_dim(self, n: int) -> list[str]:
        return [c.id for c in self.canonical if c.dim == n]

    def counts(self) -> list[int]:
        return [len(self.ids_of_dim(n)) for n in range(self.dim + 1)]

    @cached_property
    def vertices(self) -> list[str]:
        return self.ids_of_dim(0)

    @cached_property
    def edges(self) -> list[str]:
        return self.ids_of_dim(1)

    def source(self, e: str) -> str:
        return self.cells[e].d0[0]

    def target(self, e: str) -> str:
        return self.cells[e].d1[0]

    def face(self, cid: str, eps: int, i: int) -> str:
        c = self.cells[cid]
        if not 0 <= i < c.dim:
            raise IndexError(f"face index {i} out of range for {c.dim}-cell {cid!r}")
        return c.faces(eps)[i]

    def iterated_face(self, cid: str, eps: int, I) -> str:
        """d^eps_I = d^eps_{i1} o ... o d^eps_{ik} for I = {i1 < ... < ik}.

        The largest index is applied first, so every later index is still
        below the current dimension and needs no shifting.
        """
        I = sorted(I)
        if not I:
            raise ValueError("empty index set")
        if len(set(I)) != len(I) or I[0] < 0 or I[-1] >= self.cells[cid].dim:
            raise IndexError(f"index set {I} invalid for {self.cells[cid].dim}-cell {cid!r}")
        for i in reversed(I):
            cid = self.cells[cid].faces(eps)[i]
        return cid

    def full_face(self, cid: str, eps: int) -> str:
        n = self.cells[cid].dim
        return cid if n == 0 else self.iterated_face(cid, eps, range(n))

    @cached_property
    def endpoints(self) -> dict[str, tuple[str, str]]:
        return {c: (self.full_face(c, 0), self.full_face(c, 1)) for c in self.cells}

    @cached_property
    def out_cells(self) -> dict[str, list[str]]:
        """Cells of positive dimension, grouped by their start vertex."""
        out = {v: [] for v in self.vertices}
        for c in self.canonical:
            if c.dim > 0:
                out[self.endpoints[c.id][0]].append(c.id)
        return out

    @cached_property
    def topological_order(self) -> list[str]:
        """Vertices in a topological order of the 1-skeleton.

        Raises PreconditionError on a directed cycle.
        """
        preds = {v: set() for v in self.vertices}
        for e in self.edges:
            preds[self.target(e)].add(self.source(e))
        try:
            # static_order is deterministic for a fixed insertion order
            return list(TopologicalSorter(preds).static_order())
        except CycleError as err:
            raise PreconditionError(f"1-skeleton has a directed cycle through {err.args[1]}") from None


@dataclass
class Violation:
    rule: str
    cells: tuple
    message: str


@dataclass
class ValidationReport:
    violations: list = field(default_factory=list)
    is_dag: bool = True
    is_proper: bool | None = None

    @property
    def ok(self) -> bool:
        return not self.violations

    def to_json(self):
        return {"ok": self.ok,
                "violations": [{"rule": v.rule, "cells": list(v.cells), "message": v.message}
                               for v in self.violations],
                "flags": {"is_dag": self.is_dag, "is_proper": self.is_proper}}


def validate(X: PrecubicalSet) -> ValidationReport:
    """Check face arities, face dimensions and the precubical identities."""
    rep = ValidationReport()
    shaped = set()
    for c in X.canonical:
        if len(c.d0) != c.dim or len(c.d1) != c.dim:
            rep.violations.append(Violation(
                "arity", (c.id,), f"{c.dim}-cell {c.id} needs {c.dim} faces of each kind"))
            continue
        bad = [f for f in c.d0 + c.d1 if X[f].dim != c.dim - 1]
        if bad:
            rep.violations.append(Violation(
                "face-dim", (c.id, *bad), f"faces of {c.id} must have dimension {c.dim - 1}"))
            continue
        shaped.add(c.id)
    for c in X.canonical:
        if c.id not in shaped or c.dim < 2:
            continue
        if any(f not in shaped for f in c.d0 + c.d1):
            continue
        for j in range(c.dim):
            for i in range(j):
                for k, l in product((0, 1), repeat=2):
                    lhs = X.face(X.face(c.id, l, j), k, i)
                    rhs = X.face(X.face(c.id, k, i), l, j - 1)
                    if lhs != rhs:
                        rep.violations.append(Violation(
                            "identity", (c.id, lhs, rhs),
                            f"d{k}_{i} d{l}_{j}({c.id}) = {lhs} but d{l}_{j - 1} d{k}_{i}({c.id}) = {rhs}"))
    if rep.ok:
        rep.is_dag = is_dag(X)
        rep.is_proper = check_properness(X) if rep.is_dag else None
    else:
        rep.is_dag = _edges_ok(X) and is_dag(X)
    return rep


def _edges_ok(X):
    return all(len(X[e].d0) == 1 and len(X[e].d1) == 1
               and X[X[e].d0[0]].dim == 0 and X[X[e].d1[0]].dim == 0 for e in X.edges)


def is_dag(X: PrecubicalSet) -> bool:
    try:
        X.topological_order
    except PreconditionError:
        return False
    return True


def check_properness(X: PrecubicalSet) -> bool:
    """Per-dimension injectivity of c -> (start, end).

    In the length covering a cell (c, k) of dimension n runs from
    (start c, k) to (end c, k + n), so two cells share both endpoints there
    exactly when they have equal dimension, shift and endpoints in X.
    """
    if not is_dag(X):
        raise PreconditionError("properness is only decided for acyclic 1-skeletons")
    seen = set()
    for c in X.canonical:
        if c.dim == 0:
            continue
        key = (c.dim, *X.endpoints[c.id])
        if key in seen:
            return False
        seen.add(key)
    return True


def closure(X: PrecubicalSet, ids) -> set[str]:
    out, todo = set(), list(ids)
    while todo:
        c = todo.pop()
        if c in out:
            continue
        if c not in X:
            raise PcsError(f"unknown cell id {c!r}")
        out.add(c)
        todo.extend(X[c].d0 + X[c].d1)
    return out


def subcomplex(X: PrecubicalSet, ids) -> PrecubicalSet:
    """The face closure of ``ids``, sharing X's cells."""
    keep = closure(X, _ids(ids))
    return PrecubicalSet([c for c in X if c.id in keep], X.name)


def is_face_closed(X: PrecubicalSet, ids) -> bool:
    ids = set(_ids(ids))
    return closure(X, ids) == ids


def intersect_subcomplexes(X: PrecubicalSet, ids1, ids2) -> PrecubicalSet:
    a, b = set(_ids(ids1)), set(_ids(ids2))
    for s in (a, b):
        if not is_face_closed(X, s):
            raise PcsError("intersect_subcomplexes needs face-closed id sets")
    return PrecubicalSet([c for c in X if c.id in a & b], X.name)


def _ids(ids):
    if isinstance(ids, PrecubicalSet):
        return list(ids.cells)
    return list(ids)


# -- the .pcs document format ------------------------------------------------

def parse_pcs(text: str) -> PrecubicalSet:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise PcsError(f"syntax error at line {e.lineno}, column {e.colno}: {e.msg}") from None
    if not isinstance(doc, dict) or not isinstance(doc.get("cells"), list):
        raise PcsError("expected an object with a 'cells' array")
    cells = []
    for k, raw in enumerate(doc["cells"]):
        if not isinstance(raw, dict) or not isinstance(raw.get("id"), str):
            raise PcsError(f"cell #{k} needs a string 'id'")
        dim = raw.get("dim")
        if not isinstance(dim, int) or isinstance(dim, bool) or dim < 0:
            raise PcsError(f"cell {raw['id']!r} needs a non-negative integer 'dim'")
        d0, d1 = raw.get("d0") or [], raw.get("d1") or []
        if not all(isinstance(f, str) for f in d0 + d1):
            raise PcsError(f"faces of {raw['id']!r} must be id strings")
        cells.append(Cell(raw["id"], dim, tuple(d0), tuple(d1)))
    name = doc.get("name") or ""
    return PrecubicalSet(cells, str(name))


def serialize_pcs(X: PrecubicalSet) -> str:
    lines = []
    for c in X.canonical:
        entry = {"id": c.id, "dim": c.dim}
        if c.dim:
            entry["d0"], entry["d1"] = list(c.d0), list(c.d1)
        lines.append("  " + json.dumps(entry, ensure_ascii=False))
    body = ",\n".join(lines)
    head = json.dumps(X.name, ensure_ascii=False)
    if not lines:
        return '{"name": %s, "cells": []}\n' % head
    return '{"name": %s, "cells": [\n%s\n]}\n' % (head, body)


def parse_ids(text: str) -> tuple[str | None, list[str]]:
    """Parse a subcomplex document: ``{"of": name, "ids": [...]}`` or ``[...]``."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise PcsError(f"syntax error at line {e.lineno}, column {e.colno}: {e.msg}") from None
    if isinstance(doc, list):
        of, ids = None, doc
    elif isinstance(doc, dict) and isinstance(doc.get("ids"), list):
        of, ids = doc.get("of"), doc["ids"]
    else:
        raise PcsError("a subcomplex is an id array or an object with an 'ids' array")
    if not all(isinstance(i, str) for i in ids):
        raise PcsError("subcomplex ids must be strings")
    return of, ids
