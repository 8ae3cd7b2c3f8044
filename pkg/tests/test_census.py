from fractions import Fraction

import pytest

from bilinear_census.bilinear import TypeTag, dot_type, witt_index_for_type
from bilinear_census.census import (
    CensusEntry,
    average_radical_dim,
    count_alternating_induced,
    count_so_containing,
    count_so_meeting_coordinate,
    cumulative_radical_dim,
    delta_coeff,
    gaussian_binomial,
    sigma_ell,
    sigma_lines,
    sigma_q,
    sigma_q_ell,
    sigma_so,
    sigma_so_recursive,
    so_vector_count,
    tau,
)
from bilinear_census.errors import PreconditionViolated, UnsupportedType

# (类型, n 的奇偶, q 的候选)
TYPE_CASES = [
    (TypeTag.P, 1, (3, 5, 7)),
    (TypeTag.H, 0, (3, 5, 9)),
    (TypeTag.E, 0, (3, 5, 7)),
    (TypeTag.N1, 1, (2, 4, 8)),
    (TypeTag.N0A, 0, (2, 4)),
    (TypeTag.N0NA, 0, (2, 4)),
]


def _grid(max_n=8):
    for tag, parity, qs in TYPE_CASES:
        for q in qs:
            for n in range(1, max_n + 1):
                if n % 2 != parity or (tag == TypeTag.E and n < 2):
                    continue
                yield tag, n, q


@pytest.mark.parametrize("n, k, q, expected", [
    (4, 2, 2, 35), (5, 2, 2, 155), (4, 2, 3, 130), (6, 3, 5, 6375106), (3, 0, 7, 1), (3, 4, 2, 0), (-1, 0, 2, 0),
])
def test_gaussian_binomial(n, k, q, expected):
    assert gaussian_binomial(n, k, q) == expected


def test_sigma_anchor_values():
    assert [sigma_ell(TypeTag.N0NA, 4, 2, l, 2) for l in range(3)] == [20, 12, 3]
    assert sigma_q(4, 2, 2) == 3
    assert sigma_q(4, 1, 2) == 7
    assert sigma_q(3, 1, 3) == 4
    assert sigma_q(4, 1, 3) == 16
    assert cumulative_radical_dim(TypeTag.N0NA, 4, 2, 2) == 18
    assert average_radical_dim(TypeTag.N0NA, 4, 2, 2) == Fraction(18, 35)


def test_sigma_beyond_witt_is_zero():
    assert sigma_so(TypeTag.E, 4, 2, 3) == 0
    assert sigma_so(TypeTag.P, 5, 0, 3) == 1
    assert sigma_q_ell(4, 3, 3, 2) == 0


@pytest.mark.parametrize("tag, n, q", list(_grid()))
def test_partition_identity(tag, n, q):
    for k in range(n + 1):
        assert sum(sigma_ell(tag, n, k, l, q) for l in range(k + 1)) == gaussian_binomial(n, k, q)


@pytest.mark.parametrize("tag, n, q", list(_grid()))
def test_sigma_lines_matches_closed_form(tag, n, q):
    assert sigma_lines(tag, n, q) == sigma_so(tag, n, 1, q)


@pytest.mark.parametrize("tag, n, q", [c for c in _grid() if c[0] != TypeTag.N0NA])
def test_recursion_matches_closed_form(tag, n, q):
    for k in range(witt_index_for_type(tag, n) + 1):
        assert sigma_so_recursive(tag, n, k, q) == sigma_so(tag, n, k, q)


def test_recursion_rejects_n0na():
    with pytest.raises(UnsupportedType):
        sigma_so_recursive(TypeTag.N0NA, 4, 1, 2)


def test_type_and_q_must_agree():
    with pytest.raises(PreconditionViolated):
        sigma_so(TypeTag.P, 4, 1, 3)
    with pytest.raises(PreconditionViolated):
        sigma_so(TypeTag.H, 4, 1, 2)
    with pytest.raises(PreconditionViolated):
        sigma_ell(TypeTag.N0NA, 4, 1, 2, 2)


def test_ell_above_min_is_empty():
    # ℓ > min(k, n - k) 时 σ = 0
    for k in range(5):
        for l in range(k + 1):
            if l > min(k, 4 - k):
                assert sigma_q_ell(4, k, l, 3) == 0


def test_tau():
    assert tau(4, 2, 2, 2) == 6
    assert tau(7, 0, 3, 2) == 1
    with pytest.raises(PreconditionViolated):
        tau(4, 3, 2, 2)


def test_tau_is_dot_sigma_for_odd_types():
    for q, n in [(3, 5), (5, 4), (3, 6), (7, 6)]:
        w = witt_index_for_type(dot_type(q, n), n)
        for k in range(1, w + 1):
            assert tau(n, k, w, q) == sigma_q(n, k, q)


def test_delta_and_meeting():
    assert delta_coeff(TypeTag.H, 6, 2, 1, 5) == 36
    assert count_so_meeting_coordinate(4, 2, 2, 2) == 1
    assert count_so_meeting_coordinate(6, 1, 3, 2) == 3
    with pytest.raises(PreconditionViolated):
        count_so_meeting_coordinate(4, 1, 4, 2)


def test_so_vector_count():
    # F_2^4 中偶重向量 8 个；F_3^3 中 1 + 8 个
    assert so_vector_count(2, 4) == 8
    assert so_vector_count(3, 3) == 9
    assert so_vector_count(5, 0) == 1


def test_count_so_containing_n0na():
    # F_2^4：包含全一向量的二维自正交子空间有 3 个
    assert count_so_containing(TypeTag.N0NA, 4, 2, 1, True, 2) == 3
    assert count_so_containing(TypeTag.N0NA, 4, 2, 1, False, 2) == 1
    assert count_so_containing(TypeTag.N0NA, 4, 1, 0, False, 2) == sigma_q(4, 1, 2)
    with pytest.raises(PreconditionViolated):
        count_so_containing(TypeTag.N0NA, 4, 1, 0, True, 2)


def test_count_alternating_induced():
    assert count_alternating_induced(4, 1, 2) == 1
    assert count_alternating_induced(4, 2, 2) == 3
    with pytest.raises(UnsupportedType):
        count_alternating_induced(5, 1, 2)


def test_census_entry_json():
    entry = CensusEntry(2, TypeTag.N0NA, 4, 2, 1, 12)
    data = entry.to_json()
    assert data == {'q': 2, 'type': 'N0na', 'n': 4, 'k': 2, 'l': 1, 'count': '12'}
    assert CensusEntry.from_json(data) == entry
