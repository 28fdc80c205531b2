from fractions import Fraction as F

import mpmath
import pytest

from macgt.errors import DomainError, PoleError
from macgt.qkernel import (CertifiedReal, QParams, WORKPREC, as_fraction, format_rational, poch,
                           poch_infinite, q_binomial_finite_sides, q_binomial_partial, q_factorial,
                           q_gamma, q_number, qpoch_inf_ratio, qpoch_infinite, qq_finite,
                           truncation_depth)

HALF = QParams(F(1, 2), 1)

# (1/2; 1/2)_inf to 40 digits, from the tabulated value of the Euler function
with mpmath.workprec(WORKPREC):
    EULER_HALF = mpmath.mpf("0.2887880950866024212788997219292307800889")


def test_qparams_validation():
    assert QParams("1/3", 2).t == F(1, 9)
    with pytest.raises(DomainError):
        QParams(F(3, 2), 1)
    with pytest.raises(DomainError):
        QParams(F(1, 2), 0)
    with pytest.raises(DomainError):
        QParams(F(1, 2), True)


def test_rational_parsing():
    assert as_fraction("3/4") == F(3, 4)
    assert format_rational(F(6, 3)) == "2"
    assert format_rational(F(-1, 3)) == "-1/3"
    with pytest.raises(DomainError):
        as_fraction("x")
    with pytest.raises(DomainError):
        as_fraction(0.5)


def test_finite_pochhammer_values():
    assert poch(F(1, 2), 3, F(1, 2)) == F(21, 64)
    assert poch(5, 0, F(1, 2)) == 1
    assert q_number(3, HALF) == F(7, 4)
    assert q_factorial(3, HALF) == F(21, 8)
    assert qq_finite(2, HALF) == F(3, 8)


def test_infinite_ratio_is_a_finite_product():
    # (q; q)_inf / (q^3; q)_inf = (1 - q)(1 - q^2)
    assert qpoch_inf_ratio([1], [3], HALF) == F(3, 8)
    assert qpoch_inf_ratio([3], [1], HALF) == F(8, 3)
    assert qpoch_inf_ratio([2, 5], [4, 3], HALF) == (1 - F(1, 4)) / (1 - F(1, 16))


def test_euler_function_certified():
    r = qpoch_infinite(F(1, 2), HALF, mpmath.mpf("1e-30"))
    assert r.error_bound <= mpmath.mpf("1e-30")
    assert r.contains(EULER_HALF, mpmath.mpf("1e-39"))


def test_truncation_depth_and_stability():
    eps = mpmath.mpf("1e-25")
    K = truncation_depth(F(3, 4), F(2, 3), eps)
    assert K > 0
    a = poch_infinite(F(3, 4), F(2, 3), eps)
    b = poch_infinite(F(3, 4), F(2, 3), eps, depth=2 * K)
    assert abs(a.value - b.value) <= a.error_bound + b.error_bound


def test_q_binomial_geometric_case():
    # a = q collapses the series to sum z^n
    z = F(2, 5)
    assert q_binomial_partial(F(1, 2), z, 30, HALF) == (1 - z ** 30) / (1 - z)
    with pytest.raises(DomainError):
        q_binomial_partial(F(1, 3), F(1), 10, HALF)


def test_q_binomial_euler_case():
    # a = 0: sum z^n / (q;q)_n = 1 / (z; q)_inf
    z = F(1, 3)
    s = q_binomial_partial(0, z, 200, HALF)
    r = 1 / poch_infinite(z, F(1, 2))
    with mpmath.workprec(WORKPREC):
        assert abs(mpmath.mpf(s.numerator) / s.denominator - r.value) <= mpmath.mpf("1e-25")


def test_terminating_identity_small_cases():
    qp = QParams(F(1, 3), 1)
    for M in range(5):
        left, right = q_binomial_finite_sides(F(2, 7), M, qp)
        assert left == right
    # M = 1: 1 - z on both sides
    assert q_binomial_finite_sides(F(5), 1, qp) == (F(-4), F(-4))


def test_q_gamma():
    assert q_gamma(4, HALF).value == mpmath.mpf(q_factorial(3, HALF).numerator) / q_factorial(3, HALF).denominator
    with pytest.raises(PoleError):
        q_gamma(0, HALF)
    # Gamma_q(x + 1) = [x]_q Gamma_q(x)
    x = F(1, 2)
    g0 = q_gamma(x, HALF)
    g1 = q_gamma(x + 1, HALF)
    with mpmath.workprec(WORKPREC):
        bracket = (1 - mpmath.sqrt(mpmath.mpf(1) / 2)) / (1 - mpmath.mpf(1) / 2)
        assert abs(g1.value - bracket * g0.value) <= mpmath.mpf("1e-25")


def test_certified_arithmetic_keeps_precision():
    with mpmath.workprec(WORKPREC):
        third = CertifiedReal(mpmath.mpf(1) / 3, mpmath.mpf(0))
    # negation and subtraction must not round to the ambient 53 bits
    d = (third - third * F(1)) + (-third + third)
    assert abs(d.value) <= d.error_bound
    assert abs((-third).value + third.value) == 0
    with pytest.raises(PoleError):
        CertifiedReal(mpmath.mpf(1), mpmath.mpf(0)) / CertifiedReal(mpmath.mpf(0), mpmath.mpf("1e-9"))


def test_certified_json():
    j = CertifiedReal.exact(F(1, 4)).to_json()
    assert j == {"value": "0.25", "error_bound": "0.0"}
