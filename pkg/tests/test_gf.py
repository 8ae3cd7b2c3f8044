import numpy as np
import pytest

from bilinear_census.errors import DivisionByZero, NotAPrimePower, OutOfRange, ZeroArgument
from bilinear_census.gf import field_new, least_irreducible, prime_power_decomposition


@pytest.mark.parametrize("q, expected", [(2, (2, 1)), (9, (3, 2)), (8, (2, 3)), (49, (7, 2)), (65536, (2, 16))])
def test_prime_power_decomposition(q, expected):
    assert prime_power_decomposition(q) == expected


@pytest.mark.parametrize("q", [1, 6, 12, 100])
def test_not_a_prime_power(q):
    with pytest.raises(NotAPrimePower):
        field_new(q)


def test_out_of_range():
    with pytest.raises(OutOfRange):
        field_new(2 ** 17)


def test_least_irreducible():
    assert least_irreducible(2, 1) == ()
    assert least_irreducible(2, 2) == (1, 1, 1)
    assert least_irreducible(2, 3) == (1, 1, 0, 1)
    assert least_irreducible(3, 2) == (1, 0, 1)


def test_f4_multiplication(f4):
    # 2 = x, 3 = x + 1，模 x^2 + x + 1
    assert f4.mul(2, 2) == 3
    assert f4.mul(2, 3) == 1
    assert f4.inv(2) == 3
    assert f4.div(1, 2) == 3
    assert f4.add(2, 3) == 1
    assert f4.sqrt(3) == 2


@pytest.mark.parametrize("q", [2, 3, 4, 5, 8, 9, 25, 27])
def test_field_axioms(q):
    field = field_new(q)
    a = np.repeat(np.arange(q), q)
    b = np.tile(np.arange(q), q)
    assert np.array_equal(field.add(a, b), field.add(b, a))
    assert np.array_equal(field.mul(a, b), field.mul(b, a))
    assert np.array_equal(field.sub(field.add(a, b), b), a)
    nonzero = np.arange(1, q)
    assert np.all(field.mul(nonzero, field.inv(nonzero)) == 1)
    c = (a * 7 + 3) % q
    assert np.array_equal(field.mul(a, field.add(b, c)), field.add(field.mul(a, b), field.mul(a, c)))


def test_scalar_in_scalar_out(f3):
    assert isinstance(f3.mul(2, 2), int)
    assert isinstance(f3.add(np.int64(1), 2), int)
    assert isinstance(f3.mul(np.array([1, 2]), 2), np.ndarray)


def test_zero_errors(f3):
    with pytest.raises(DivisionByZero):
        f3.inv(0)
    with pytest.raises(DivisionByZero):
        f3.div(1, 0)
    with pytest.raises(ZeroArgument):
        f3.is_square(0)


@pytest.mark.parametrize("q, squares", [(3, {1}), (5, {1, 4}), (7, {1, 2, 4})])
def test_is_square_prime(q, squares):
    field = field_new(q)
    assert {a for a in range(1, q) if field.is_square(a)} == squares


@pytest.mark.parametrize("q", [9, 25, 27])
def test_half_of_units_are_squares(q):
    field = field_new(q)
    assert sum(field.is_square(a) for a in range(1, q)) == (q - 1) // 2


@pytest.mark.parametrize("q", [2, 4, 8, 16])
def test_sqrt_even(q):
    field = field_new(q)
    for a in field.elements():
        assert field.mul(field.sqrt(a), field.sqrt(a)) == a


def test_field_cache_and_equality():
    assert field_new(9) is field_new(9)
    assert field_new(9) == field_new(9)
    assert field_new(9) != field_new(27)
