from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings, strategies as st
from sympy.polys.matrices import DomainMatrix

from dihom.linalg import (QQ, Field, Matrix, SubQuotient, Subspace, VectDiagram, canonical_rank,
                          diagram_colimit, diagram_limit, image_basis, kernel_basis, parse_field,
                          quotient, rank)

GF7 = Field(7)


def matrices(max_side=6, lo=-3, hi=3):
    return st.integers(0, max_side).flatmap(lambda r: st.integers(0, max_side).flatmap(
        lambda c: st.lists(st.lists(st.integers(lo, hi), min_size=c, max_size=c),
                           min_size=r, max_size=r).map(lambda d: (r, c, d))))


def _sympy_rank(r, c, data, p=None):
    if r == 0 or c == 0:
        return 0
    if p is None:
        return sympy.Matrix(data).rank()
    return DomainMatrix([[sympy.GF(p)(x) for x in row] for row in data], (r, c), sympy.GF(p)).rank()


def test_fields():
    assert parse_field("rational") is QQ
    assert parse_field("fp:32003").p == 32003
    for bad in ("fp:4", "fp:x", "reals", "fp:1"):
        with pytest.raises(ValueError):
            parse_field(bad)
    assert GF7(Fraction(1, 2)) == 4
    assert GF7.inv(3) == 5
    with pytest.raises(ZeroDivisionError):
        QQ.inv(QQ.zero)
    assert QQ.to_json(Fraction(-2, 3)) == [-2, 3] and GF7.to_json(GF7(3)) == 3


@settings(max_examples=150, deadline=None)
@given(matrices())
def test_rank_against_sympy(m):
    r, c, data = m
    assert rank(Matrix(r, c, data, QQ)) == _sympy_rank(r, c, data)
    assert rank(Matrix(r, c, data, GF7)) == _sympy_rank(r, c, data, 7)


@settings(max_examples=150, deadline=None)
@given(matrices(), st.sampled_from([QQ, GF7]))
def test_rank_nullity_and_kernel(m, F):
    r, c, data = m
    M = Matrix(r, c, data, F)
    K = kernel_basis(M)
    assert K.dim + rank(M) == c
    for v in K.basis:
        assert all(x == 0 for x in M.apply(v))
    assert image_basis(M).dim == rank(M)


@settings(max_examples=100, deadline=None)
@given(matrices(), st.sampled_from([QQ, GF7]))
def test_quotient_projection(m, F):
    r, c, data = m
    S = Subspace.span([[F(x) for x in row] for row in data], c, F)
    dim, reps, proj = quotient(c, S)
    assert dim == c - S.dim
    # the projection kills S and sends each representative to a unit vector
    for b in S.basis:
        assert all(x == 0 for x in proj.apply(b))
    for k, rep in enumerate(reps):
        assert proj.apply(rep) == [F.one if j == k else F.zero for j in range(dim)]
    assert proj.rows == dim and (dim == 0 or rank(proj) == dim)


def test_subquotient_requires_nesting():
    Z = Subspace.span([[1, 0, 0]], 3)
    B = Subspace.span([[0, 1, 0]], 3)
    with pytest.raises(ValueError):
        SubQuotient(Z, B)
    sq = SubQuotient(Subspace.full(3), Subspace.span([[QQ(1), QQ(1), QQ(0)]], 3))
    assert sq.dim == 2
    assert sq.coords([QQ(1), QQ(1), QQ(0)]) == [0, 0]


def test_subspace_equality_is_basis_free():
    a = Subspace.span([[QQ(1), QQ(2)], [QQ(0), QQ(1)]], 2)
    assert a == Subspace.full(2)
    assert Subspace.span([[QQ(2), QQ(4)]], 2) == Subspace.span([[QQ(-1), QQ(-2)]], 2)


def test_matrix_ops():
    A = Matrix(2, 2, [[1, 2], [3, 4]])
    assert A @ Matrix.identity(2) == A
    assert (A + -A).is_zero()
    assert A.transpose()[0, 1] == 3
    with pytest.raises(ValueError):
        A @ Matrix.zeros(3, 1)
    with pytest.raises(ValueError):
        Matrix(2, 2, [[1, 2]])


def _one(x):
    return Matrix(1, 1, [[x]])


def test_limits_on_small_diagrams():
    # a zigzag R --1--> R <--1-- R has 1-dim limit and colimit, the map is iso
    D = VectDiagram({"a": 1, "b": 1, "c": 1}, [("a", "b", _one(1)), ("c", "b", _one(1))])
    assert diagram_limit(D)[0] == 1 and diagram_colimit(D)[0] == 1
    assert canonical_rank(D) == 1
    # a zero arrow breaks it
    D0 = VectDiagram({"a": 1, "b": 1}, [("a", "b", _one(0))])
    assert diagram_limit(D0)[0] == 1 and diagram_colimit(D0)[0] == 1
    assert canonical_rank(D0) == 0
    # R^2 --[1 1]--> R with a second R^2 --[1 -1]--> R: limit dim 3, colimit 1
    M1, M2 = Matrix(1, 2, [[1, 1]]), Matrix(1, 2, [[1, -1]])
    D2 = VectDiagram({"x": 2, "y": 2, "t": 1}, [("x", "t", M1), ("y", "t", M2)])
    assert diagram_limit(D2)[0] == 3 and diagram_colimit(D2)[0] == 1
    assert canonical_rank(VectDiagram({})) == 0


def test_diagram_shape_check():
    with pytest.raises(ValueError):
        VectDiagram({"a": 2, "b": 1}, [("a", "b", _one(1))])


def test_disconnected_components_sum():
    D = VectDiagram({"a": 1, "b": 2}, [])
    assert len(D.components()) == 2
    assert canonical_rank(D) == 3
