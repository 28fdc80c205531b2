from fractions import Fraction as F

import pytest

from macgt.errors import PoleError
from macgt.parallel import ordered_map, worker_count
from macgt.sampling import admissible_points, avoids_q_lattice, points, random_rational
from macgt.suites import Options, run_suite


def test_points_are_reproducible():
    a = points(3, 10, 2)
    assert a == points(3, 10, 2)
    assert a != points(4, 10, 2)
    for pt in a:
        assert len(set(pt)) == 2
        for v in pt:
            assert v != 0 and abs(v.numerator) <= 9 and v.denominator <= 7


def test_admissible_points_skip_poles():
    def fn(xs):
        if xs[0] > 0:
            raise PoleError("pole: positive")
        return xs[0]
    got = admissible_points(1, 5, 1, fn)
    assert len(got) == 5 and all(v < 0 for _, v in got)
    with pytest.raises(PoleError):
        admissible_points(1, 2, 1, lambda xs: (_ for _ in ()).throw(PoleError("always")), max_tries=10)


def test_q_lattice_check():
    assert not avoids_q_lattice([F(1), F(1, 4)], F(1, 2), 3)
    assert avoids_q_lattice([F(1), F(1, 3)], F(1, 2), 3)


def test_worker_count(monkeypatch):
    monkeypatch.setenv("MACB_THREADS", "3")
    assert worker_count() == 3
    monkeypatch.setenv("MACB_THREADS", "junk")
    assert worker_count() == 1
    assert ordered_map(lambda v: v * v, range(10), workers=4) == [v * v for v in range(10)]


@pytest.mark.parametrize("name", ["qseries", "appendixB", "example44"])
def test_small_suites_pass(name):
    rep = run_suite(name, Options(seed=2, points=3, max_N=2))
    assert rep["failed"] == 0 and rep["cases"] > 0


def test_unknown_suite():
    with pytest.raises(KeyError):
        run_suite("nope")
