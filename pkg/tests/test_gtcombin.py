from math import comb

import pytest

from macgt.errors import DomainError
from macgt.gtcombin import (NuSpec, a_k_shift, cells, conjugate, diagram_stats, dominance_leq,
                            interlaces, interlacings_above, interlacings_below, n_of, parse_nu,
                            parse_signature, partitions_of_length, phi_support_exponents,
                            signatures_in_box, stabilizing_signature)


def test_signature_parsing():
    assert parse_signature("2,0,-1") == (2, 0, -1)
    assert parse_signature("") == ()
    with pytest.raises(DomainError):
        parse_signature("0,1")
    with pytest.raises(DomainError):
        parse_signature("a,b")


def test_interlacing():
    assert interlaces((1,), (1, 0))
    assert not interlaces((2,), (1, 0))
    assert interlacings_below((2, 0)) == [(0,), (1,), (2,)]
    lam = (3, 1, -1)
    below = interlacings_below(lam)
    assert len(below) == (3 - 1 + 1) * (1 + 1 + 1)
    assert all(interlaces(mu, lam) for mu in below)
    above = interlacings_above((1, 0), -1, 2)
    assert all(interlaces((1, 0), lam) for lam in above)
    assert len(above) == 2 * 2 * 2


def test_box_counts():
    for N in range(1, 5):
        assert len(signatures_in_box(N, -2, 3)) == comb(N + 5, N)


def test_partitions():
    assert partitions_of_length(2, 2) == sorted(partitions_of_length(2, 2))
    assert set(partitions_of_length(2, 2)) == {(0, 0), (1, 0), (2, 0), (1, 1)}


def test_diagram_statistics():
    assert conjugate((3, 1)) == (2, 1, 1)
    assert n_of((2, 1)) == 1
    assert n_of((1, 1, 1)) == 3
    assert list(cells((2, 1))) == [(1, 1), (1, 2), (2, 1)]
    # cell (1,1) of (2,1): arm 1, coarm 0, leg 1, coleg 0
    s = diagram_stats((2, 1), (1, 1))
    assert tuple(s) == (1, 0, 1, 0)
    assert tuple(diagram_stats((2, 1), (2, 1))) == (0, 0, 0, 1)
    assert dominance_leq((1, 1), (2, 0))
    assert not dominance_leq((2, 0), (1, 1))


def test_nu_specs():
    nu = parse_nu("prefix=0,0,2;tail=const")
    assert nu == NuSpec((0, 0, 2)) == parse_nu("0,0,2")
    assert parse_nu(nu.to_text()) == nu
    assert nu.expand(5) == (0, 0, 2, 2, 2)
    assert stabilizing_signature(nu, 4) == (2, 2, 0, 0)
    assert a_k_shift(nu, -1) == NuSpec((-1, -1, 1))
    assert a_k_shift((1, 0), 2) == (3, 2)
    with pytest.raises(DomainError):
        NuSpec((1, 0))
    with pytest.raises(DomainError):
        parse_nu("prefix=0;tail=linear")


def test_support_exponents():
    assert phi_support_exponents(NuSpec((0, 0, 1, 2)), 2, 2) == [0, 1, 2, 3]
    assert phi_support_exponents(NuSpec((0, 1)), 1, 3) == [0, 2, 3]


def test_support_injectivity():
    nus = [NuSpec(p) for p in [(0, 0, 1), (0, 1, 1), (0, 0, 2), (-1, 0, 1), (0, 1, 2)]]
    for theta in (1, 2):
        seen = {}
        for nu in nus:
            key = tuple(phi_support_exponents(nu, theta, 3))
            assert key not in seen
            seen[key] = nu
