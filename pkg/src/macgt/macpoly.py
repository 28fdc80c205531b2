"""Macdonald (Laurent) polynomials built from the branching rule.

With t = q^theta and theta a positive integer every infinite Pochhammer symbol
in the branching coefficients and in the principal evaluation has the form
(q^e; q)_inf with integer e, so all ratios reduce to exact finite products.
"""

from __future__ import annotations

import itertools
import threading
from fractions import Fraction
from functools import lru_cache

from .errors import DomainError
from .gtcombin import (cells, diagram_stats, dominance_leq, interlaces,
                       interlacings_below, is_positive, n_of)
from .laurent import LaurentPoly
from .qkernel import QParams, as_fraction, poch, qpoch_inf_ratio


def monomial_symmetric(lam, N: int) -> LaurentPoly:
    lam = tuple(lam)
    if len(lam) != N:
        raise DomainError(f"signature {lam} does not have length {N}")
    return LaurentPoly(N, {perm: Fraction(1) for perm in set(itertools.permutations(lam))})


@lru_cache(maxsize=200000)
def _psi(lam: tuple, mu: tuple, q: Fraction, theta: int) -> Fraction:
    qp = QParams(q, theta)
    n = len(lam)
    num, den = [], []
    for i in range(n - 1):
        for j in range(i, n - 1):
            w = theta * (j - i + 1)
            v = theta * (j - i)
            num += [mu[i] - mu[j] + w, lam[i] - lam[j + 1] + w,
                    lam[i] - mu[j] + 1 + v, mu[i] - lam[j + 1] + 1 + v]
            den += [lam[i] - mu[j] + w, mu[i] - lam[j + 1] + w,
                    mu[i] - mu[j] + 1 + v, lam[i] - lam[j + 1] + 1 + v]
    return qpoch_inf_ratio(num, den, qp)


def psi_branching(lam, mu, qp: QParams) -> Fraction:
    """Branching coefficient psi_{lam/mu}(q, t)."""
    lam, mu = tuple(lam), tuple(mu)
    if not interlaces(mu, lam):
        raise DomainError(f"{mu} does not interlace {lam}")
    return _psi(lam, mu, qp.q, qp.theta)


class BranchingCache:
    """Memo of P_lam keyed by (lam, q, theta); safe under concurrent use."""

    def __init__(self):
        self._memo: dict = {}
        self._lock = threading.Lock()

    def get(self, key):
        with self._lock:
            return self._memo.get(key)

    def put(self, key, value):
        with self._lock:
            # first writer wins so every reader sees the same object
            return self._memo.setdefault(key, value)

    def clear(self):
        with self._lock:
            self._memo.clear()

    def __len__(self):
        return len(self._memo)


CACHE = BranchingCache()


def macdonald_poly(lam, N: int, qp: QParams) -> LaurentPoly:
    """P_lam(x_1..x_N; q, t) as an exact Laurent polynomial."""
    lam = tuple(lam)
    if len(lam) != N:
        raise DomainError(f"signature {lam} does not have length {N}")
    if N == 0:
        return LaurentPoly.constant(1, 0)
    k = lam[-1]
    base = _positive_poly(tuple(p - k for p in lam), qp)
    return base.shift_all(k) if k else base


def _positive_poly(lam: tuple, qp: QParams) -> LaurentPoly:
    key = (lam, qp.q, qp.theta)
    hit = CACHE.get(key)
    if hit is not None:
        return hit
    N = len(lam)
    if N == 1:
        poly = LaurentPoly.monomial((lam[0],))
    else:
        terms: dict = {}
        total = sum(lam)
        for mu in interlacings_below(lam):
            c = psi_branching(lam, mu, qp)
            sub = macdonald_poly(mu, N - 1, qp)
            d = total - sum(mu)
            for exps, v in sub.terms.items():
                key2 = (d,) + exps
                terms[key2] = terms.get(key2, 0) + c * v
        poly = LaurentPoly(N, terms)
    return CACHE.put(key, poly)


@lru_cache(maxsize=200000)
def _principal(lam: tuple, q: Fraction, theta: int) -> Fraction:
    qp = QParams(q, theta)
    N = len(lam)
    num, den = [], []
    for i in range(N):
        for j in range(i + 1, N):
            d = lam[i] - lam[j]
            num += [d + theta * (j - i), theta * (j - i + 1)]
            den += [d + theta * (j - i + 1), theta * (j - i)]
    return qp.t ** n_of(lam) * qpoch_inf_ratio(num, den, qp)


def evaluation_principal(lam, N: int, qp: QParams) -> Fraction:
    """P_lam(t^{N-1}, ..., t, 1), valid for every signature."""
    lam = tuple(lam)
    if len(lam) != N:
        raise DomainError(f"signature {lam} does not have length {N}")
    return _principal(lam, qp.q, qp.theta)


def evaluation_principal_hooks(lam, N: int, qp: QParams) -> Fraction:
    """The same value from the cell-product form (positive signatures only)."""
    lam = tuple(lam)
    if not is_positive(lam):
        raise DomainError("the cell-product form needs a positive signature")
    q, t = qp.q, qp.t
    out = t ** n_of(lam)
    for cell in cells(lam):
        a, a1, l, l1 = diagram_stats(lam, cell)
        out *= (1 - q ** a1 * t ** (N - l1)) / (1 - q ** a * t ** (l + 1))
    return out


def b_lambda(lam, qp: QParams) -> Fraction:
    lam = tuple(lam)
    if not is_positive(lam):
        raise DomainError("b_lambda needs a positive signature")
    q, t = qp.q, qp.t
    out = Fraction(1)
    for cell in cells(lam):
        a, _, l, _ = diagram_stats(lam, cell)
        out *= (1 - q ** a * t ** (l + 1)) / (1 - q ** (a + 1) * t ** l)
    return out


def dual_Q(lam, N: int, qp: QParams) -> LaurentPoly:
    return macdonald_poly(lam, N, qp) * b_lambda(lam, qp)


def q_principal_dual(lam, N: int, qp: QParams) -> Fraction:
    """Q_lam(t^{N-1}, ..., 1) from the cell-product formula."""
    lam = tuple(lam)
    q, t = qp.q, qp.t
    out = t ** n_of(lam)
    for cell in cells(lam):
        a, a1, l, l1 = diagram_stats(lam, cell)
        out *= (1 - q ** a1 * t ** (N - l1)) / (1 - q ** (a + 1) * t ** l)
    return out


def g_poly(n: int, N: int, qp: QParams) -> LaurentPoly:
    """g_n = Q_(n) in N variables; zero for n < 0."""
    if n < 0:
        return LaurentPoly(N)
    lam = (n,) + (0,) * (N - 1)
    return dual_Q(lam, N, qp)


def g_generating_oracle(n: int, N: int, qp: QParams) -> LaurentPoly:
    """Degree-n part of prod_i (t x_i y; q)_inf/(x_i y; q)_inf, from finite data.

    Each factor expands as sum_r (t;q)_r/(q;q)_r (x_i y)^r.
    """
    if n < 0:
        return LaurentPoly(N)
    t = qp.t
    weights = [poch(t, r, qp.q) / poch(qp.q, r, qp.q) for r in range(n + 1)]
    terms = {}
    for comp in itertools.product(range(n + 1), repeat=N):
        if sum(comp) == n:
            c = Fraction(1)
            for r in comp:
                c *= weights[r]
            terms[comp] = c
    return LaurentPoly(N, terms)


def monomial_expansion(lam, N: int, qp: QParams) -> dict:
    """c_{lam, mu}: coefficient of x^mu for each weakly decreasing exponent mu."""
    poly = macdonald_poly(lam, N, qp)
    out = {}
    for exps, c in poly.terms.items():
        if all(exps[i] >= exps[i + 1] for i in range(N - 1)):
            out[exps] = c
    return dict(sorted(out.items(), reverse=True))


def check_triangularity(lam, N: int, qp: QParams) -> bool:
    lam = tuple(lam)
    coeffs = monomial_expansion(lam, N, qp)
    if coeffs.get(lam) != 1:
        return False
    return all(dominance_leq(mu, lam) and c > 0 for mu, c in coeffs.items())


def check_index_argument_symmetry(lam, mu, N: int, qp: QParams) -> bool:
    lam, mu = tuple(lam), tuple(mu)
    if not (is_positive(lam) and is_positive(mu)):
        raise DomainError("index-argument symmetry needs positive signatures")
    q, t = qp.q, qp.t
    pl = macdonald_poly(lam, N, qp)
    pm = macdonald_poly(mu, N, qp)
    left = pl.evaluate([q ** mu[i] * t ** (N - 1 - i) for i in range(N)]) / evaluation_principal(lam, N, qp)
    right = pm.evaluate([q ** lam[i] * t ** (N - 1 - i) for i in range(N)]) / evaluation_principal(mu, N, qp)
    return left == right


# ---------------------------------------------------------------------------
# point evaluation without expanding the polynomial


def _geometric_scale(point: tuple, t: Fraction):
    """If point is a permutation-free run c, ct, ..., return the smallest entry.

    Both increasing (ratio t) and decreasing (ratio 1/t) runs are accepted.
    """
    if not point:
        return Fraction(1)
    if any(v == 0 for v in point):
        return None
    if len(point) == 1:
        return point[0]
    r = point[1] / point[0]
    if r == t:
        ok = all(point[i + 1] == point[i] * t for i in range(len(point) - 1))
        return point[0] if ok else None
    if r * t == 1:
        ok = all(point[i + 1] * t == point[i] for i in range(len(point) - 1))
        return point[-1] if ok else None
    return None


@lru_cache(maxsize=500000)
def _evaluate(lam: tuple, point: tuple, q: Fraction, theta: int) -> Fraction:
    qp = QParams(q, theta)
    N = len(lam)
    if N == 0:
        return Fraction(1)
    c = _geometric_scale(point, qp.t)
    if c is not None:
        return c ** sum(lam) * _principal(lam, q, theta)
    x = point[0]
    rest = point[1:]
    total = Fraction(0)
    size = sum(lam)
    for mu in interlacings_below(lam):
        d = size - sum(mu)
        if x == 0:
            if d < 0:
                raise DomainError("pole: x = 0 with negative degree")
            if d > 0:
                continue
        total += _psi(lam, mu, q, theta) * x ** d * _evaluate(mu, rest, q, theta)
    return total


def evaluate_at(lam, point, qp: QParams) -> Fraction:
    """P_lam(point) by repeated branching, closing with the principal value."""
    lam = tuple(lam)
    point = tuple(as_fraction(v) for v in point)
    if len(point) != len(lam):
        raise DomainError(f"need {len(lam)} values, got {len(point)}")
    return _evaluate(lam, point, qp.q, qp.theta)


def clear_caches():
    CACHE.clear()
    _psi.cache_clear()
    _principal.cache_clear()
    _evaluate.cache_clear()
