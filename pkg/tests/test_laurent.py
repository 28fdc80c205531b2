from fractions import Fraction as F

import pytest

from macgt.errors import ConsistencyError
from macgt.laurent import LaurentPoly


def x(i, n=2):
    return LaurentPoly.variable(i, n)


def test_arithmetic_and_evaluation():
    p = (x(0) + x(1)) * (x(0) - x(1))
    assert p == x(0) * x(0) - x(1) * x(1)
    assert p.evaluate([3, 2]) == 5
    assert p.coefficient((2, 0)) == 1
    assert (p - p).is_zero()


def test_negative_exponents():
    p = LaurentPoly.monomial((-1, 2), F(3, 2))
    assert p.evaluate([F(1, 2), 2]) == 12
    assert p.shift_all(1) == LaurentPoly.monomial((0, 3), F(3, 2))


def test_symmetry_and_permutation():
    p = x(0) * x(0) + x(1)
    assert not p.is_symmetric()
    assert p.swap(0, 1) == x(1) * x(1) + x(0)
    assert (p + p.swap(0, 1)).is_symmetric()


def test_exact_division_by_difference():
    a, b = x(0), x(1)
    f = a * a * a - b * b * b
    assert f.divide_by_difference(0, 1) == a * a + a * b + b * b
    with pytest.raises(ConsistencyError):
        (a * a + b).divide_by_difference(0, 1)


def test_scaling_variables():
    p = x(0) * x(1) * x(1)
    assert p.scale_variables([2, 3]) == p.scale(18)


def test_json_round_trip():
    p = LaurentPoly(3, {(1, 0, -2): F(-2, 3), (0, 0, 0): F(5)})
    assert LaurentPoly.from_json(p.to_json()) == p
    assert p.to_json()[0] == {"exponents": [1, 0, -2], "coeff": "-2/3"}
