"""Exact and certified q-series primitives.

Everything finite is computed with :class:`fractions.Fraction`.  Only genuinely
infinite products are evaluated numerically, and those come back as a
:class:`CertifiedReal` carrying an explicit error bound.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Union

import mpmath

from .errors import DomainError, PoleError

Rational = Union[Fraction, int]

# working precision (bits) for certified numerics
WORKPREC = 256


def as_fraction(value) -> Fraction:
    """Coerce ints, Fractions and ``"p/q"`` strings to a Fraction."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise DomainError(f"not a rational number: {value!r}") from exc
    raise DomainError(f"expected an exact rational, got {type(value).__name__}")


def format_rational(value: Fraction) -> str:
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


@dataclass(frozen=True)
class QParams:
    """The pair (q, theta) with t = q**theta."""

    q: Fraction
    theta: int

    def __post_init__(self):
        q = as_fraction(self.q)
        object.__setattr__(self, "q", q)
        if not (0 < q < 1):
            raise DomainError(f"q must satisfy 0 < q < 1, got {format_rational(q)}")
        if isinstance(self.theta, bool) or not isinstance(self.theta, int) or self.theta < 1:
            raise DomainError(f"theta must be a positive integer, got {self.theta!r}")

    @property
    def t(self) -> Fraction:
        return self.q ** self.theta

    def qpow(self, k: int) -> Fraction:
        return _qpow(self.q, k)


@lru_cache(maxsize=65536)
def _qpow(q: Fraction, k: int) -> Fraction:
    return q ** k


# ---------------------------------------------------------------------------
# certified reals


def _mpf(x) -> mpmath.mpf:
    if isinstance(x, Fraction):
        with mpmath.workprec(WORKPREC):
            return mpmath.mpf(x.numerator) / x.denominator
    return mpmath.mpf(x)


to_mpf = _mpf


def _ulp(x: mpmath.mpf) -> mpmath.mpf:
    # generous bound for one rounding step at WORKPREC
    return abs(x) * mpmath.mpf(2) ** (4 - WORKPREC)


@dataclass(frozen=True)
class CertifiedReal:
    """A real number known to lie in [value - error_bound, value + error_bound]."""

    value: mpmath.mpf
    error_bound: mpmath.mpf

    @classmethod
    def exact(cls, x) -> "CertifiedReal":
        v = _mpf(as_fraction(x) if not isinstance(x, mpmath.mpf) else x)
        err = mpmath.mpf(0) if isinstance(x, (int, Fraction)) and _is_dyadic(x) else _ulp(v)
        return cls(v, err)

    def __add__(self, other):
        other = _coerce(other)
        with mpmath.workprec(WORKPREC):
            v = self.value + other.value
            return CertifiedReal(v, self.error_bound + other.error_bound + _ulp(v))

    __radd__ = __add__

    def __neg__(self):
        # unary minus rounds to the ambient precision, so do it at WORKPREC
        with mpmath.workprec(WORKPREC):
            return CertifiedReal(-self.value, self.error_bound)

    def __sub__(self, other):
        return self + (-_coerce(other))

    def __rsub__(self, other):
        return _coerce(other) - self

    def __mul__(self, other):
        other = _coerce(other)
        with mpmath.workprec(WORKPREC):
            v = self.value * other.value
            err = (abs(self.value) * other.error_bound + abs(other.value) * self.error_bound
                   + self.error_bound * other.error_bound + _ulp(v))
            return CertifiedReal(v, err)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = _coerce(other)
        with mpmath.workprec(WORKPREC):
            b = abs(other.value)
            if b <= other.error_bound:
                raise PoleError("pole: divisor interval contains 0")
            v = self.value / other.value
            err = ((abs(self.value) * other.error_bound + b * self.error_bound)
                   / (b * (b - other.error_bound)) + _ulp(v))
            return CertifiedReal(v, err)

    def __rtruediv__(self, other):
        return _coerce(other) / self

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            raise DomainError("only nonnegative integer powers are supported")
        out = CertifiedReal(mpmath.mpf(1), mpmath.mpf(0))
        for _ in range(n):
            out = out * self
        return out

    def contains(self, x, slack=0) -> bool:
        with mpmath.workprec(WORKPREC):
            return abs(self.value - _mpf(x)) <= self.error_bound + _mpf(slack)

    def to_json(self, digits: int = 30) -> dict:
        return {"value": mpmath.nstr(self.value, digits),
                "error_bound": mpmath.nstr(self.error_bound, 6)}

    def __float__(self):
        return float(self.value)


def _is_dyadic(x) -> bool:
    d = as_fraction(x).denominator
    return d & (d - 1) == 0


def _coerce(x) -> CertifiedReal:
    if isinstance(x, CertifiedReal):
        return x
    return CertifiedReal.exact(x)


# ---------------------------------------------------------------------------
# exact finite q-analysis


def q_number(n: int, qp: QParams) -> Fraction:
    """[n]_q = (1 - q^n)/(1 - q), for any integer n."""
    return (1 - qp.qpow(n)) / (1 - qp.q)


def q_factorial(n: int, qp: QParams) -> Fraction:
    if n < 0:
        raise DomainError(f"q-factorial of negative integer {n}")
    return _q_factorial(qp.q, n)


@lru_cache(maxsize=4096)
def _q_factorial(q: Fraction, n: int) -> Fraction:
    if n == 0:
        return Fraction(1)
    return _q_factorial(q, n - 1) * (1 - q ** n) / (1 - q)


def poch(z, n: int, base) -> Fraction:
    """(z; base)_n as an exact product."""
    if n < 0:
        raise DomainError(f"Pochhammer length must be nonnegative, got {n}")
    out = Fraction(1)
    w = as_fraction(z)
    b = as_fraction(base)
    for _ in range(n):
        out *= 1 - w
        w *= b
    return out


def qpoch_finite(z, n: int, qp: QParams) -> Fraction:
    return poch(z, n, qp.q)


@lru_cache(maxsize=65536)
def _qq(q: Fraction, n: int) -> Fraction:
    """(q; q)_n, memoized."""
    if n == 0:
        return Fraction(1)
    return _qq(q, n - 1) * (1 - q ** n)


def qq_finite(n: int, qp: QParams) -> Fraction:
    return _qq(qp.q, n)


def qpoch_ratio_integer_gap(z, k: int, qp: QParams) -> Fraction:
    """(z q^k; q)_inf / (z; q)_inf as an exact finite product."""
    z = as_fraction(z)
    if k >= 0:
        den = Fraction(1)
        for i in range(k):
            f = 1 - z * qp.qpow(i)
            if f == 0:
                raise PoleError(f"pole: z = q^{-i}")
            den *= f
        return 1 / den
    out = Fraction(1)
    for i in range(1, -k + 1):
        out *= 1 - z * qp.qpow(-i)
    return out


def qpoch_inf_ratio(num_exps: Iterable[int], den_exps: Iterable[int], qp: QParams) -> Fraction:
    """prod (q^a; q)_inf over num / prod (q^b; q)_inf over den, exactly.

    The two lists must have the same length so that (q;q)_inf cancels.  An
    exponent a <= 0 gives a vanishing factor (1 - q^0); in the numerator this
    makes the result 0, in the denominator it is a pole.
    """
    num = list(num_exps)
    den = list(den_exps)
    if len(num) != len(den):
        raise DomainError("unbalanced infinite Pochhammer ratio")
    for e in den:
        if not isinstance(e, int):
            raise DomainError(f"non-integer q-exponent {e!r}")
        if e <= 0:
            raise PoleError(f"pole: (q^{e}; q)_inf = 0 in a denominator")
    for e in num:
        if not isinstance(e, int):
            raise DomainError(f"non-integer q-exponent {e!r}")
        if e <= 0:
            return Fraction(0)
    # (q^a; q)_inf = (q; q)_inf / (q; q)_{a-1}, so the answer is
    # prod_k (1 - q^k)^{c_k} with c_k = #{den e > k} - #{num e > k}
    top = max(num + den, default=1)
    diff = [0] * (top + 1)
    for e in den:
        diff[e - 1] += 1
    for e in num:
        diff[e - 1] -= 1
    a, b = qp.q.numerator, qp.q.denominator
    up, down = 1, 1
    c = 0
    for k in range(top - 1, 0, -1):
        c += diff[k]
        if c:
            # 1 - q^k = (b^k - a^k) / b^k
            f = (b ** k - a ** k) ** abs(c)
            g = b ** (k * abs(c))
            if c > 0:
                up, down = up * f, down * g
            else:
                up, down = up * g, down * f
    return Fraction(up, down)


def q_binomial_partial(a, z, terms: int, qp: QParams) -> Fraction:
    """sum_{n < terms} (a;q)_n/(q;q)_n z^n."""
    a, z = as_fraction(a), as_fraction(z)
    if abs(z) >= 1:
        raise DomainError("q-binomial series needs |z| < 1")
    if terms < 1:
        raise DomainError("terms must be positive")
    total = Fraction(0)
    coeff = Fraction(1)
    zn = Fraction(1)
    for n in range(terms):
        total += coeff * zn
        coeff = coeff * (1 - a * qp.qpow(n)) / (1 - qp.qpow(n + 1))
        zn *= z
        if coeff == 0:
            break
    return total


def q_binomial_finite_sides(z, M: int, qp: QParams) -> tuple[Fraction, Fraction]:
    """Both sides of the terminating q-binomial identity in base 1/q.

    Left: sum_n [M, n]_{1/q} (-1)^n q^{-n(n-1)/2} z^n.  Right: (z; 1/q)_M.
    """
    z = as_fraction(z)
    p = 1 / qp.q
    left = Fraction(0)
    for n in range(M + 1):
        binom = poch(p, M, p) / (poch(p, n, p) * poch(p, M - n, p))
        left += binom * (-1) ** n * qp.qpow(-(n * (n - 1) // 2)) * z ** n
    return left, poch(z, M, p)


# ---------------------------------------------------------------------------
# certified infinite products


def truncation_depth(z, base, eps) -> int:
    """Smallest K with |z| b^K <= 1/2 and 2|z| b^K/(1-b) < eps."""
    az = abs(as_fraction(z)) if not isinstance(z, mpmath.mpf) else abs(z)
    b = as_fraction(base)
    eps = _mpf(eps)
    if az == 0:
        return 0
    with mpmath.workprec(WORKPREC):
        azf = _mpf(az) if not isinstance(az, mpmath.mpf) else az
        bf = _mpf(b)
        k = 0
        w = azf
        while w > 0.5 or 2 * w / (1 - bf) >= eps:
            w *= bf
            k += 1
        return k


def poch_infinite(z, base, eps=mpmath.mpf("1e-30"), depth: int | None = None) -> CertifiedReal:
    """(z; base)_inf with a certified tail bound.

    ``z`` may be a Fraction (exact factors) or an mpf.  If ``depth`` is given
    the product is truncated there, provided the tail estimate applies.
    """
    b = as_fraction(base)
    if not (0 < b < 1):
        raise DomainError("base must lie in (0, 1)")
    eps = _mpf(eps)
    if eps <= 0:
        raise DomainError("eps must be positive")
    exact_z = not isinstance(z, mpmath.mpf)
    if exact_z:
        z = as_fraction(z)
        if z == 0:
            return CertifiedReal(mpmath.mpf(1), mpmath.mpf(0))
    K = truncation_depth(z, b, eps) if depth is None else depth
    with mpmath.workprec(WORKPREC):
        bf = _mpf(b)
        # tail: sum_{i>=K} 2|z| b^i = 2|z| b^K/(1-b), valid when |z| b^K <= 1/2
        while True:
            wK = abs(_mpf(z) if exact_z else z) * bf ** K
            if wK <= 0.5:
                break
            K += 1
        delta = 2 * wK / (1 - bf)
        if exact_z:
            prod = Fraction(1)
            w = z
            for _ in range(K):
                prod *= 1 - w
                w *= b
            if prod == 0:
                return CertifiedReal(mpmath.mpf(0), mpmath.mpf(0))
            value = _mpf(prod)
            round_err = _ulp(value)
        else:
            value = mpmath.mpf(1)
            w = z
            for _ in range(K):
                value *= 1 - w
                w *= bf
            round_err = _ulp(value) * (K + 1)
        err = abs(value) * (mpmath.exp(delta) - 1) + round_err
        if depth is None and err > eps:
            # |prefix| > 1 can inflate the bound; deepen until it fits
            return poch_infinite(z, b, eps, depth=K + max(1, K // 4))
        return CertifiedReal(value, err)


def qpoch_infinite(z, qp: QParams, eps=mpmath.mpf("1e-30"), depth: int | None = None) -> CertifiedReal:
    return poch_infinite(z, qp.q, eps, depth)


def q_gamma(x, qp: QParams, eps=mpmath.mpf("1e-30")) -> CertifiedReal:
    """Gamma_q(x) = (1-q)^{1-x} (q;q)_inf/(q^x;q)_inf."""
    x = as_fraction(x)
    if x.denominator == 1 and x <= 0:
        raise PoleError(f"pole: Gamma_q at x = {x}")
    if x.denominator == 1:
        return CertifiedReal.exact(q_factorial(int(x) - 1, qp))
    with mpmath.workprec(2 * WORKPREC):
        qx = mpmath.exp(_mpf(x) * mpmath.log(_mpf(qp.q)))
        pre = mpmath.exp((1 - _mpf(x)) * mpmath.log(1 - _mpf(qp.q)))
    # the doubled precision makes these rounding errors negligible next to _ulp
    num = qpoch_infinite(qp.q, qp, eps)
    den = poch_infinite(qx, qp.q, eps)
    pre_c = CertifiedReal(pre, _ulp(pre))
    return pre_c * num / den


