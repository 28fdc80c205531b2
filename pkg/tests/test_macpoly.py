from fractions import Fraction as F

import pytest

from macgt.errors import DomainError
from macgt.gtcombin import partitions_of_length, signatures_in_box
from macgt.laurent import LaurentPoly
from macgt.macpoly import (b_lambda, check_index_argument_symmetry, check_triangularity,
                           dual_Q, evaluate_at, evaluation_principal, evaluation_principal_hooks,
                           g_generating_oracle, g_poly, macdonald_poly, monomial_expansion,
                           monomial_symmetric, psi_branching, q_principal_dual)
from macgt.qkernel import QParams, poch


def test_two_row_schur_case():
    # theta = 1 gives Schur polynomials: s_(2,0) = x1^2 + x1 x2 + x2^2
    p = macdonald_poly((2, 0), 2, QParams(F(1, 2), 1))
    assert len(p.terms) == 3
    assert set(p.terms.values()) == {1}


def test_schur_21_in_three_variables():
    p = macdonald_poly((2, 1, 0), 3, QParams(F(1, 3), 1))
    assert monomial_expansion((2, 1, 0), 3, QParams(F(1, 3), 1)) == {(2, 1, 0): 1, (1, 1, 1): 2}
    assert p.is_symmetric()


def test_one_row_two_variables():
    # P_(2) = m_2 + (1+q)(1-t)/(1-qt) m_11
    q = F(1, 2)
    for theta in (1, 2, 3):
        t = q ** theta
        c = (1 + q) * (1 - t) / (1 - q * t)
        p = macdonald_poly((2, 0), 2, QParams(q, theta))
        assert p.coefficient((1, 1)) == c
        # the coefficient is stable in the number of variables
        assert macdonald_poly((2, 0, 0), 3, QParams(q, theta)).coefficient((1, 1, 0)) == c
    assert macdonald_poly((2, 0), 2, QParams(q, 2)).coefficient((1, 1)) == F(9, 7)


def test_elementary_columns():
    qp = QParams(F(2, 3), 2)
    assert macdonald_poly((1, 1, 0), 3, qp) == monomial_symmetric((1, 1, 0), 3)
    assert macdonald_poly((1, 1, 1), 3, qp) == monomial_symmetric((1, 1, 1), 3)


def test_negative_parts_shift():
    qp = QParams(F(1, 2), 2)
    p = macdonald_poly((1, -1), 2, qp)
    assert p == macdonald_poly((2, 0), 2, qp).shift_all(-1)


def test_principal_evaluation():
    qp = QParams(F(1, 2), 1)
    assert evaluation_principal((1, 0), 2, qp) == 1 + F(1, 2)
    for theta in (1, 2):
        qp = QParams(F(1, 3), theta)
        for N in (1, 2, 3):
            for lam in partitions_of_length(N, 4):
                v = evaluation_principal(lam, N, qp)
                assert v == evaluation_principal_hooks(lam, N, qp)
                t = qp.t
                assert v == evaluate_at(lam, [t ** (N - 1 - i) for i in range(N)], qp)


def test_principal_evaluation_negative():
    qp = QParams(F(1, 2), 2)
    lam = (1, 0, -2)
    t = qp.t
    assert evaluation_principal(lam, 3, qp) == evaluate_at(lam, [1, t, t * t], qp)
    with pytest.raises(DomainError):
        evaluation_principal_hooks(lam, 3, qp)


def test_branching_one_variable():
    # psi for one variable is 1
    qp = QParams(F(1, 2), 2)
    assert psi_branching((3,), (), qp) == 1
    with pytest.raises(DomainError):
        psi_branching((1, 0), (2,), qp)


def test_b_lambda_one_row():
    # b_(n) = (t; q)_n / (q; q)_n
    for theta in (1, 2):
        qp = QParams(F(1, 2), theta)
        for n in range(5):
            assert b_lambda((n,), qp) == poch(qp.t, n, qp.q) / poch(qp.q, n, qp.q)


def test_g_generating_function():
    for theta in (1, 2):
        qp = QParams(F(2, 3), theta)
        for N in (1, 2, 3):
            for n in range(4):
                assert g_poly(n, N, qp) == g_generating_oracle(n, N, qp)
    assert g_poly(-1, 2, QParams(F(1, 2), 1)).is_zero()


def test_dual_principal():
    qp = QParams(F(1, 3), 2)
    t = qp.t
    for lam in partitions_of_length(3, 3):
        assert q_principal_dual(lam, 3, qp) == dual_Q(lam, 3, qp).evaluate([t * t, t, 1])


def test_triangularity_and_symmetry():
    qp = QParams(F(1, 2), 2)
    for lam in partitions_of_length(3, 4):
        assert check_triangularity(lam, 3, qp)
        assert macdonald_poly(lam, 3, qp).is_symmetric()
    for lam in signatures_in_box(2, 0, 2):
        for mu in signatures_in_box(2, 0, 2):
            assert check_index_argument_symmetry(lam, mu, 2, qp)
