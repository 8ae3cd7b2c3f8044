from fractions import Fraction

import numpy as np
import pytest

from bilinear_census.bilinear import standard_dot_space
from bilinear_census.errors import NonIntegralResult, PreconditionViolated
from bilinear_census.gf import field_new
from bilinear_census.linalg import Subspace, rank
from bilinear_census.sampler import Sampler, sample_self_orthogonal
from bilinear_census.weights import (
    WeightDistribution,
    _bracket_difference,
    aggregate_ell,
    aggregate_so,
    krawtchouk,
    macwilliams,
    unrestricted_aggregate,
    unrestricted_average,
    zeta,
)


@pytest.mark.parametrize("q, n, i, expected", [
    (2, 4, 2, 6), (2, 4, 3, 0), (2, 4, 4, 1), (3, 3, 3, 8), (3, 5, 2, 0), (2, 5, 0, 1), (5, 4, 2, 48),
])
def test_zeta(q, n, i, expected):
    assert zeta(q, n, i) == expected


def test_zeta_precondition():
    with pytest.raises(PreconditionViolated):
        zeta(2, 4, 5)


def test_krawtchouk_values():
    # K(n,i,0) = C(n,i)(q-1)^i
    assert krawtchouk(3, 4, 2, 0) == 6 * 4
    assert krawtchouk(2, 3, 1, 3) == -3


def test_macwilliams():
    f2 = field_new(2)
    repetition = WeightDistribution.of_code(Subspace.span(f2, [[1, 1, 1]], 3))
    assert repetition.counts == (1, 0, 0, 1)
    assert macwilliams(repetition, 1, 2).counts == (1, 0, 3, 0)
    with pytest.raises(NonIntegralResult):
        macwilliams(WeightDistribution(3, (1, 2, 0, 0)), 1, 2)


def test_macwilliams_self_dual_fixed_point():
    f2 = field_new(2)
    code = Subspace.span(f2, [[1, 1, 0, 0], [0, 0, 1, 1]], 4)
    dist = WeightDistribution.of_code(code)
    assert macwilliams(dist, 2, 2) == dist


@pytest.mark.parametrize("q", [2, 3, 4])
def test_macwilliams_involution_on_random_codes(q):
    field = field_new(q)
    rng = np.random.default_rng(1000 + q)
    checked = 0
    while checked < 100:
        n = int(rng.integers(3, 8))
        k = int(rng.integers(1, n))
        generator = rng.integers(0, q, size=(k, n))
        if rank(field, generator) != k:
            continue
        code = Subspace.span(field, generator, n)
        dist = WeightDistribution.of_code(code)
        dual = macwilliams(dist, k, q)
        assert dual.total == q ** (n - k)
        assert macwilliams(dual, n - k, q) == dist
        if 2 * k == n and standard_dot_space(field, n).is_self_orthogonal(code):
            assert dual == dist
        checked += 1


@pytest.mark.parametrize("q", [2, 3, 4])
def test_self_dual_codes_are_fixed_points(q):
    rng = Sampler(seed=q)
    for _ in range(20):
        code = sample_self_orthogonal(q, 4, 2, rng)
        dist = WeightDistribution.of_code(code)
        assert macwilliams(dist, 2, q) == dist


def test_aggregate_so_anchor():
    assert aggregate_so(2, 4, 2) == (3, 0, 6, 0, 3)
    assert aggregate_so(2, 4, 1) == (7, 0, 6, 0, 1)
    assert aggregate_so(3, 4, 0) == (1, 0, 0, 0, 0)


def test_aggregate_ell_anchor():
    table = aggregate_ell(2, 4, 2, 2)
    assert table.aggregate == (3, 0, 6, 0, 3)
    assert table.count == 3
    assert table.average == (Fraction(1), Fraction(0), Fraction(2), Fraction(0), Fraction(1))


@pytest.mark.parametrize("q, n", [(2, 3), (2, 4), (3, 4), (2, 5), (3, 5)])
def test_average_sums_to_code_size(q, n):
    for k in range(1, n + 1):
        for l in range(k + 1):
            table = aggregate_ell(q, n, k, l)
            assert table.aggregate[0] == table.count
            if table.average:
                assert sum(table.average) == q ** k


def test_empty_stratum_has_no_average():
    table = aggregate_ell(2, 4, 3, 3)
    assert table.count == 0
    assert table.average == ()
    assert table.to_csv_rows()[1] == ['0', '0', '', '']


def test_small_n_goes_through_enumeration():
    table = aggregate_ell(2, 2, 1, 1)
    assert table.aggregate == (1, 0, 1)


def test_csv_and_json():
    table = aggregate_ell(2, 4, 2, 2)
    rows = table.to_csv_rows()
    assert rows[0] == ['i', 'aggregate', 'average_num', 'average_den']
    assert rows[3] == ['2', '6', '2', '1']
    data = table.to_json()
    assert data['aggregate'] == ['3', '0', '6', '0', '3']
    assert data['average'][2] == '2/1'


def test_unrestricted():
    assert unrestricted_aggregate(2, 4, 2, 0) == 35
    assert unrestricted_aggregate(2, 4, 2, 1) == 28
    assert sum(unrestricted_average(3, 4, 2, j) for j in range(5)) == 9


def test_bracket_difference_stays_integral():
    # s > k 时括号差为 0
    value = _bracket_difference(6, 1, 2, 2)
    assert value == 0
    assert isinstance(value, int)
    assert _bracket_difference(4, 2, 2, 3) == 1
    assert isinstance(_bracket_difference(5, 2, 1, 3), int)
