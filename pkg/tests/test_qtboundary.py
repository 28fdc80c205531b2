from fractions import Fraction as F

import mpmath
import pytest

from macgt.errors import DomainError, PoleError
from macgt.gtcombin import NuSpec, interlacings_below, signatures_in_box, stabilizing_signature
from macgt.qkernel import QParams, WORKPREC, to_mpf
from macgt.qtboundary import (FinitePath, Kernel, SparseMeasure, apply_links, boundary_measure_approx,
                              convergence_table, fourier_coefficient, generating_function_eval,
                              generating_function_poly, link_compose, link_kernel, link_one_step,
                              link_row, mass_lower_bound, path_probability, path_probability_links,
                              phi_nu_multi, phi_nu_one, prelimit_character, push_down,
                              pushforward_all_levels, pushforward_delta, residuals_nonincreasing,
                              verify_generating_relation)

HALF1 = QParams(F(1, 2), 1)
HALF2 = QParams(F(1, 2), 2)
NU = NuSpec((0, 0, 1, 2))


def test_two_level_link_values():
    # t/(1+t) and 1/(1+t) at t = 1/2
    assert link_one_step((1, 0), (1,), HALF1) == F(1, 3)
    assert link_one_step((1, 0), (0,), HALF1) == F(2, 3)
    assert link_one_step((1, 0), (2,), HALF1) == 0
    with pytest.raises(DomainError):
        link_one_step((1, 0), (1, 0), HALF1)


def test_rows_are_stochastic_and_shift_invariant():
    for qp in (HALF1, HALF2):
        for lam in signatures_in_box(3, -2, 2):
            row = link_row(lam, qp)
            assert row.is_probability()
            for mu, p in row.masses.items():
                assert link_one_step(tuple(v + 3 for v in lam), tuple(v + 3 for v in mu), qp) == p


def test_sparse_measure_basics():
    m = SparseMeasure(2, {(1, 0): F(1, 3), (0, 0): F(2, 3), (2, 2): 0})
    assert m.support() == [(0, 0), (1, 0)]
    assert m.is_probability()
    assert m[(5, 5)] == 0
    assert SparseMeasure.from_json(m.to_json()) == m
    assert m.to_json()[0] == {"signature": "0,0", "mass": "2/3"}
    assert m.shift(1)[(2, 1)] == F(1, 3)
    with pytest.raises(DomainError):
        SparseMeasure(2, {(1, 0): F(-1)})
    with pytest.raises(DomainError):
        SparseMeasure(2, {(1,): F(1)})


def test_kernel_composition_matches_push_down():
    qp = HALF2
    lam = (2, 0, -1, -1)
    k = link_compose(4, 1, qp)
    assert k.row(lam) == pushforward_delta(lam, 1, qp)
    two = link_kernel(4, qp).then(link_kernel(3, qp))
    assert two.row(lam) == push_down(SparseMeasure.delta(lam), 2, qp)
    levels = pushforward_all_levels(lam, qp)
    assert [m.level for m in levels] == [4, 3, 2, 1, 0]
    assert all(m.is_probability() for m in levels)


def test_paths():
    qp = HALF2
    path = FinitePath(((), (1,), (1, 0), (2, 0, 0)))
    assert path.length == 3
    top = SparseMeasure.delta((2, 0, 0))
    assert path_probability(top, path, qp) == path_probability_links(top, path, qp)
    with pytest.raises(DomainError):
        FinitePath(((), (3,), (1, 0)))
    # probabilities of all paths below a delta sum to one
    total = F(0)
    for b in interlacings_below((2, 0, 0)):
        for a in interlacings_below(b):
            total += path_probability(top, FinitePath(((), a, b, (2, 0, 0))), qp)
    assert total == 1


def test_generating_function_coherence():
    qp = HALF2
    lam = (2, 1, -1)
    below = apply_links(SparseMeasure.delta(lam), qp)
    for xs in ((F(3), F(-1, 2)), (F(2, 7), F(5))):
        assert generating_function_eval(below, xs, qp) == generating_function_eval(
            SparseMeasure.delta(lam), (1,) + xs, qp)
    poly = generating_function_poly(below, qp)
    assert poly.evaluate([F(3), F(-1, 2)]) == generating_function_eval(below, (F(3), F(-1, 2)), qp)
    assert generating_function_eval(below, (1, 1), qp) == 1


def test_generating_bound_inside_unit_disc():
    qp = HALF1
    meas = pushforward_delta((3, 1, 0, 0), 2, qp)
    for xs in ((F(1), F(-1)), (F(1, 2), F(-3, 4)), (F(-1), F(-1))):
        assert abs(generating_function_eval(meas, xs, qp)) <= 1


def test_fourier_coefficients_sum():
    qp = HALF1
    meas = pushforward_delta((2, 0, 0), 1, qp)
    total = sum(fourier_coefficient(meas, (k,), qp) for k in range(3))
    assert total == generating_function_eval(meas, (1,), qp) == 1


def test_boundary_measure_support_bounds():
    nu = NuSpec((-1, 0, 2))
    for m in (1, 2, 3):
        meas = boundary_measure_approx(nu, m, 8, HALF2)
        assert meas.is_probability()
        for mu in meas.support():
            assert all(mu[m - i] >= nu.entry(i) for i in range(1, m + 1))
    a = boundary_measure_approx(nu, 2, 6, HALF2)
    b = boundary_measure_approx(nu.shift(-2), 2, 6, HALF2)
    assert a.shift(-2) == b


def test_mass_lower_bound_value():
    r = mass_lower_bound(2, HALF1)
    with mpmath.workprec(WORKPREC):
        euler = mpmath.mpf("0.2887880950866024212788997219292307800889")
        assert abs(r.value - euler ** 2) <= r.error_bound + mpmath.mpf("1e-35")


def test_phi_constant_nu_is_one():
    for x in (F(1, 3), F(-2), F(7, 5)):
        assert phi_nu_one(NuSpec((0,)), x, HALF2).contains(1)
        with mpmath.workprec(WORKPREC):
            cube = to_mpf(x) ** 3
        assert phi_nu_one(NuSpec((3,)), x, HALF2).contains(cube)


def test_phi_values():
    assert phi_nu_one(NU, 1, HALF2).contains(1)
    phi = phi_nu_one(NU, F(1, 2), HALF2, mpmath.mpf("1e-15"))
    exact = prelimit_character(NU, 25, [F(1, 2)], HALF2)
    assert abs(to_mpf(exact) - phi.value) <= mpmath.mpf("1e-8")
    with pytest.raises(PoleError, match="pole: x = q"):
        phi_nu_one(NU, F(2), HALF2)


def test_phi_shift():
    for x in (F(1, 2), F(-3, 2), F(5, 3), F(7), F(-1, 9)):
        d = phi_nu_one(NU.shift(1), x, HALF2) - phi_nu_one(NU, x, HALF2) * x
        assert abs(d.value) <= d.error_bound


def test_phi_several_variables():
    qp = HALF1
    nu2 = NuSpec((0, 1, 1, 3))
    xs = [F(1, 3), F(1, 2)]
    ph = phi_nu_multi(nu2, xs, qp)
    assert abs(ph.value - to_mpf(prelimit_character(nu2, 20, xs, qp))) <= mpmath.mpf("1e-6")
    assert phi_nu_multi(NU, [F(1, 2)], HALF2).contains(phi_nu_one(NU, F(1, 2), HALF2).value,
                                                        mpmath.mpf("1e-25"))
    # symmetric in its arguments
    a = phi_nu_multi(NU, [F(1, 3), F(1, 2), F(2, 5)], HALF2)
    b = phi_nu_multi(NU, [F(2, 5), F(1, 3), F(1, 2)], HALF2)
    assert abs(a.value - b.value) <= a.error_bound + b.error_bound


def test_phi_at_principal_point():
    for qp in (HALF1, HALF2):
        for m in (2, 3):
            t = qp.t
            assert phi_nu_multi(NU, [t ** (i + 1 - m) for i in range(m)], qp).contains(1, mpmath.mpf("1e-15"))


def test_generating_relation():
    r = verify_generating_relation(NU, 1, 25, [F(1, 2)], HALF2)
    assert r["passed"] and r["residual"] <= mpmath.mpf("1e-6")
    r = verify_generating_relation(NU, 2, 14, [F(1, 2), F(1, 3)], HALF2, eps=mpmath.mpf("1e-3"))
    assert r["passed"]
    r = verify_generating_relation(NuSpec((0,)), 2, 4, [1, 1], HALF1, eps=mpmath.mpf("1e-16"))
    assert r["exact"] == 1 and r["residual"] <= mpmath.mpf("1e-15")


def test_convergence_table():
    rows = convergence_table(NU, [F(1, 2)], [10, 15, 20, 25], HALF2)
    assert [r["N"] for r in rows] == [10, 15, 20, 25]
    assert residuals_nonincreasing(rows)
    assert rows[-1]["residual"] < mpmath.mpf("1e-8")
    flat = convergence_table(NuSpec((0,)), [F(1, 3)], [2, 5], HALF1)
    assert all(r["exact"] == 1 and r["residual"] < mpmath.mpf("1e-15") for r in flat)
