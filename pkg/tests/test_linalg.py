import numpy as np
import pytest

from bilinear_census.census import gaussian_binomial
from bilinear_census.errors import BudgetExceeded, Degenerate, DimensionMismatch
from bilinear_census.gf import field_new
from bilinear_census.linalg import (
    Subspace,
    batch_rank,
    codewords,
    contains,
    coordinate_subspace,
    coordinates,
    count_rref_shapes,
    determinant,
    enumerate_subspaces,
    hamming_weight,
    intersect,
    inverse,
    iter_rref_blocks,
    kernel,
    mat_mul,
    message_vectors,
    rank,
    rref,
    subspace_sum,
    support,
)


def test_rref_and_rank(f2):
    r, pivots = rref(f2, [[1, 1, 0], [1, 1, 0], [0, 1, 1]])
    assert pivots == (0, 1)
    assert r.tolist() == [[1, 0, 1], [0, 1, 1]]
    assert rank(f2, [[1, 1], [1, 1]]) == 1


def test_determinant_and_inverse(f3):
    assert determinant(f3, [[1, 2], [2, 1]]) == 0
    assert determinant(f3, [[2, 1], [1, 1]]) == 1
    m = np.array([[2, 1], [1, 1]])
    assert mat_mul(f3, m, inverse(f3, m)).tolist() == [[1, 0], [0, 1]]
    with pytest.raises(Degenerate):
        inverse(f3, [[1, 2], [2, 1]])


@pytest.mark.parametrize("q", [2, 3, 4, 9])
def test_batch_rank_matches_rank(q):
    field = field_new(q)
    rng = np.random.default_rng(7)
    blocks = rng.integers(0, q, size=(200, 3, 5))
    blocks[:20, 2] = blocks[:20, 0]
    expected = [rank(field, b) for b in blocks]
    assert batch_rank(field, blocks).tolist() == expected


def test_mat_mul_extension_field(f4):
    a = np.array([[2, 1]])
    b = np.array([[2], [3]])
    # x*x + 1*(x+1) = (x+1) + (x+1) = 0
    assert mat_mul(f4, a, b).tolist() == [[0]]


def test_kernel_and_intersect(f2):
    assert kernel(f2, [[1, 1, 0]]).dim == 2
    a = Subspace.span(f2, [[1, 0, 0], [0, 1, 0]], 3)
    b = Subspace.span(f2, [[0, 1, 0], [0, 0, 1]], 3)
    assert intersect(a, b) == Subspace.span(f2, [[0, 1, 0]], 3)
    assert subspace_sum(a, b) == Subspace.full(f2, 3)
    assert contains(subspace_sum(a, b), a)
    assert not contains(a, b)


def test_span_is_canonical(f3):
    a = Subspace.span(f3, [[1, 2, 0], [0, 1, 1]], 3)
    b = Subspace.span(f3, [[1, 1, 2], [0, 2, 2]], 3)
    assert a == b
    assert hash(a) == hash(b)


def test_dimension_mismatch(f2, f3):
    with pytest.raises(DimensionMismatch):
        contains(Subspace.full(f2, 3), Subspace.full(f3, 3))
    with pytest.raises(DimensionMismatch):
        intersect(Subspace.full(f2, 3), Subspace.full(f2, 4))


def test_coordinates(f3):
    c = Subspace.span(f3, [[1, 0, 1], [0, 1, 2]], 3)
    assert coordinates(c, [[2, 1, 1]]).tolist() == [[2, 1]]
    with pytest.raises(ValueError):
        coordinates(c, [[1, 0, 0]])


def test_coordinate_subspace(f2):
    s = coordinate_subspace(f2, 4, [2, 0])
    assert s.dim == 2
    assert s.pivots == (0, 2)


def test_message_vectors_and_codewords(f2):
    assert message_vectors(2, 2).tolist() == [[0, 0], [0, 1], [1, 0], [1, 1]]
    words = codewords(f2, [[1, 1, 1, 1]])
    assert hamming_weight(words).tolist() == [0, 4]
    assert support([0, 3, 0, 1]) == (1, 3)


@pytest.mark.parametrize("q, n, k", [(2, 4, 2), (3, 4, 2), (2, 5, 3), (4, 3, 1), (2, 4, 0), (3, 3, 3)])
def test_enumeration_counts(q, n, k):
    field = field_new(q)
    assert count_rref_shapes(q, n, k) == gaussian_binomial(n, k, q)
    subspaces = list(enumerate_subspaces(field, n, k))
    assert len(subspaces) == gaussian_binomial(n, k, q)
    assert len(set(subspaces)) == len(subspaces)
    assert all(s.dim == k for s in subspaces)


def test_enumeration_order(f2):
    first = next(iter(enumerate_subspaces(f2, 4, 2)))
    assert first.rows == ((1, 0, 0, 0), (0, 1, 0, 0))
    pivots = [p for p, _ in iter_rref_blocks(f2, 4, 2)]
    assert pivots == sorted(pivots)


def test_enumeration_chunks(f3):
    blocks = [b for _, b in iter_rref_blocks(f3, 4, 2, chunk_size=5)]
    assert all(len(b) <= 5 for b in blocks)
    assert sum(len(b) for b in blocks) == gaussian_binomial(4, 2, 3)


def test_enumeration_budget(f2):
    with pytest.raises(BudgetExceeded) as excinfo:
        list(enumerate_subspaces(f2, 6, 3, budget=100))
    assert excinfo.value.q == 2
    assert excinfo.value.k == 3
