from fractions import Fraction as F

import pytest

from macgt.errors import ConsistencyError, PoleError
from macgt.gtcombin import partitions_of_length
from macgt.jactrudi import (UpperTriMatrix, a_theta_recursion_check, c_row, c_row_vanishing_check,
                            c_tau_product, jacobi_trudi_Q, jing_jozefiak, shift_exponents,
                            t_basis_product, t_basis_signed_sum, theta_one_sign_check,
                            upper_tri_matrices)
from macgt.macpoly import dual_Q
from macgt.qkernel import QParams


def test_empty_and_zero_rows():
    qp = QParams(F(1, 2), 2)
    assert c_row([], [], qp) == 1
    assert c_row([0], [F(3)], qp) == 1


def test_one_row_closed_form():
    for theta in (1, 2, 3):
        qp = QParams(F(1, 2), theta)
        for n in range(theta + 2):
            for u in (F(3, 7), F(-5, 2), F(11, 3)):
                assert c_row([n], [u], qp) == jing_jozefiak(n, u, qp)


def test_one_row_theta_one_value():
    # theta = 1, n = 1: C_1(u) = -1 for every admissible u
    qp = QParams(F(1, 3), 1)
    assert c_row([1], [F(5, 2)], qp) == -1
    with pytest.raises(PoleError):
        jing_jozefiak(1, 1, qp)


def test_vanishing_above_theta():
    qp = QParams(F(1, 2), 2)
    assert c_row_vanishing_check([3, 0], [F(2), F(5, 3)], qp)
    assert not c_row_vanishing_check([2, 1], [F(2), F(5, 3)], qp)
    assert c_row([0, 4], [F(7), F(-2, 3)], qp) == 0


def test_theta_one_signs():
    q = F(1, 3)
    assert theta_one_sign_check([1, 0, 1], [F(2), F(3, 5), F(-7, 3)], q)
    assert theta_one_sign_check([1, 1], [F(2), F(3, 5)], q)
    assert c_row([1, 1], [F(2), F(3, 5)], QParams(q, 1)) == 1


def test_two_term_recursion():
    for theta in (1, 2, 3):
        for q in (F(1, 2), F(1, 3)):
            assert a_theta_recursion_check(QParams(q, theta), (F(3), F(5)))
            assert a_theta_recursion_check(QParams(q, theta), (F(-2, 7), F(9, 4)))


def test_upper_triangular_matrices():
    mats = list(upper_tri_matrices(3, 1))
    assert len(mats) == 2 ** 3
    tau = UpperTriMatrix.from_rows({(1, 2): 1, (2, 3): 2}, 3)
    assert (tau.plus(1), tau.minus(2), tau.plus(2), tau.minus(3)) == (1, 1, 2, 2)
    assert shift_exponents(tau, 2) == (1, 3, 2)


def test_signed_t_basis_sum_is_vandermonde():
    for m in (1, 2, 3, 4):
        assert t_basis_product(m) == t_basis_signed_sum(m)


def test_jacobi_trudi_equals_dual():
    for theta in (1, 2):
        qp = QParams(F(1, 2), theta)
        for N in (1, 2, 3):
            for lam in partitions_of_length(N, 4):
                assert jacobi_trudi_Q(lam, N, qp) == dual_Q(lam, N, qp)


def test_c_tau_product_identity_matrix():
    qp = QParams(F(1, 2), 2)
    zero = UpperTriMatrix.from_rows({}, 3)
    assert c_tau_product(zero, (F(2), F(3), F(5)), qp) == 1
