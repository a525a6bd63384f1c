import random

import pytest
from hypothesis import given, settings, strategies as st

from dihom import fixtures
from dihom.bimodule import homology_dims
from dihom.chains import top_degree
from dihom.linalg import Field, Matrix
from dihom.pcs import PcsError, PreconditionError, closure
from dihom.relative import (RelativeComplex, connecting_hom, extended_homology, good_cover_witness,
                            is_good_cover, is_relative_pair, profile_is_consistent,
                            relative_homology, relative_pair_witness, verify_les_mv,
                            verify_les_relative)
from helpers import random_grid_subset


def sub(name):
    of, ids = fixtures.emit_subcomplex(name)
    return fixtures.emit_fixture(of), ids


def _edge_paths(X):
    out = []

    def walk(path, v):
        out.append(path)
        for e in X.edges:
            if X.source(e) == v:
                walk(path + [e], X.target(e))

    for v in X.vertices:
        walk([], v)
    return [p for p in out if p]


def _relative_pair_brute(X, Y):
    """Paths leaving a Y vertex use Y edges only as a prefix; paths into Y only as a suffix."""
    for p in _edge_paths(X):
        inside = [e in Y for e in p]
        if X.source(p[0]) in Y and inside != sorted(inside, reverse=True):
            return False
        if X.target(p[-1]) in Y and inside != sorted(inside):
            return False
    return True


def _random_sub(X, rng):
    cells = [c.id for c in X]
    return closure(X, rng.sample(cells, rng.randint(1, max(1, len(cells) // 3))))


@settings(max_examples=80, deadline=None)
@given(st.integers(0, 10**6))
def test_relative_pair_matches_brute_force(seed):
    rng = random.Random(seed)
    X = random_grid_subset(seed)
    Y = _random_sub(X, rng)
    assert is_relative_pair(X, Y) == _relative_pair_brute(X, Y)


def test_relative_pair_witness():
    X, Y = sub("diag-if")
    kind, path = relative_pair_witness(X, Y)
    assert kind == "from" and X.source(path[0]) in Y and path[-1] in Y
    assert any(e not in Y for e in path)
    assert is_relative_pair(*sub("red-square"))
    with pytest.raises(PcsError):
        is_relative_pair(X, ["E"])
    with pytest.raises(PcsError):
        is_relative_pair(X, ["nope"])


def test_red_square_sequence():
    X, Y = sub("red-square")
    rep = verify_les_relative(X, Y, 2, pairs=[("000", "111")])
    b = rep.blocks[("000", "111")]
    assert b.dims == [0, 1, 6, 6, 1, 0]
    assert all(b.exact) and b.alternating_sum == 0 and rep.ok
    assert connecting_hom(X, Y, 1, "000", "111").rank() == 5


def test_red_square_all_blocks_exact():
    X, Y = sub("red-square")
    assert verify_les_relative(X, Y).ok


def test_disk_mod_circle():
    X, Y = sub("d-2-boundary")
    b = verify_les_relative(X, Y, 2, pairs=[("00", "11")]).blocks[("00", "11")]
    # ^X HM_2[S1], HM_2[D2], HM_2[D2,S1], ^X HM_1[S1], HM_1[D2], HM_1[D2,S1]
    assert b.dims == [0, 0, 1, 2, 1, 0]
    assert all(b.exact) and b.alternating_sum == 0
    assert connecting_hom(X, Y, 1, "00", "11") == Matrix(2, 1, [[-1], [1]])
    assert homology_dims(X, 2)[2] == {}


def test_profile_consistency():
    assert profile_is_consistent([0, 1, 6, 6, 1, 0])
    assert profile_is_consistent([0, 0, 1, 2, 1, 0])
    # HM_2[D2](00,11) printed as R gives an inconsistent profile
    assert not profile_is_consistent([0, 1, 1, 2, 1, 0])
    assert not profile_is_consistent([1, 1, 2, 1, 0])


def test_relative_of_the_whole_set():
    X = fixtures.empty_cube()
    Y = [c.id for c in X]
    assert relative_homology(X, Y, 1).is_zero()
    assert extended_homology(X, Y, 1).dims() == homology_dims(X, 1)[1]


def test_not_a_relative_pair_is_rejected():
    X, Y = sub("diag-if")
    with pytest.raises(PreconditionError):
        verify_les_relative(X, Y)
    with pytest.raises(PreconditionError):
        RelativeComplex(X, Y, 1)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6))
def test_relative_sequence_exact_on_random_pairs(seed):
    rng = random.Random(seed)
    X = random_grid_subset(seed)
    for _ in range(20):
        Y = _random_sub(X, rng)
        if is_relative_pair(X, Y):
            break
    else:
        return
    rep = verify_les_relative(X, Y, max(top_degree(X), 1), Field(32003))
    assert rep.ok


def test_prime_field_sequence():
    X, Y = sub("red-square")
    b = verify_les_relative(X, Y, 2, Field(3), pairs=[("000", "111")]).blocks[("000", "111")]
    assert b.dims == [0, 1, 6, 6, 1, 0] and b.ok


def test_diag_cover_mayer_vietoris():
    X, X1 = sub("diag-cover-x1")
    _, X2 = sub("diag-cover-x2")
    assert is_good_cover(X, X1, X2)
    assert is_relative_pair(X, X1) and is_relative_pair(X, X2)
    rep = verify_les_mv(X, X1, X2, 1)
    b = rep.blocks[("9", "1")]
    assert b.dims == [6, 10, 4] and all(b.exact) and b.short_exact
    assert rep.ok


def test_antidiag_covers_rejected():
    X, A1 = sub("antidiag-cover-x1")
    _, A2 = sub("antidiag-cover-x2")
    assert is_relative_pair(X, A1) and is_relative_pair(X, A2)
    assert not is_good_cover(X, A1, A2)
    assert str(good_cover_witness(X, A1, A2)) == "(C,D)"
    with pytest.raises(PreconditionError, match="good cover"):
        verify_les_mv(X, A1, A2)
    _, C1 = sub("antidiag-central-x1")
    _, C2 = sub("antidiag-central-x2")
    assert is_good_cover(X, C1, C2)
    assert not is_relative_pair(X, C1)
    with pytest.raises(PreconditionError, match="relative pair"):
        verify_les_mv(X, C1, C2)


def test_cover_must_exhaust():
    X, X1 = sub("diag-cover-x1")
    with pytest.raises(PcsError, match="cover"):
        is_good_cover(X, X1, X1)


def _random_cover(X, rng):
    top = [c.id for c in X if not any(c.id in X[d].d0 + X[d].d1 for d in X.cells)]
    rng.shuffle(top)
    k = rng.randint(1, len(top))
    X1 = closure(X, top[:k])
    X2 = closure(X, top[k - rng.randint(0, k):]) | (set(X.cells) - X1)
    return X1, closure(X, X2)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6))
def test_mayer_vietoris_exact_on_random_covers(seed):
    rng = random.Random(seed)
    X = random_grid_subset(seed)
    for _ in range(30):
        X1, X2 = _random_cover(X, rng)
        if is_good_cover(X, X1, X2) and is_relative_pair(X, X1) and is_relative_pair(X, X2):
            break
    else:
        return
    rep = verify_les_mv(X, X1, X2, max(top_degree(X), 1), Field(32003))
    assert rep.ok
    assert all(b.short_exact for b in rep.blocks.values())
