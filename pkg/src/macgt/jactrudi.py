"""The C^{(q,t)} coefficient functions and the Jacobi-Trudi expansion of Q_lam.

At t = q^theta the defining expression of C has one removable 0 * inf product
(the factor (q/t; q)_tau vanishes at tau = theta while a determinant entry has a
simple pole there); it is cancelled by hand.  What remains is a rational function
of u with exact coefficients.  At a removable 0/0 in u we move u along a generic
line u(1 + c eps), compute in truncated Laurent series in eps and keep the eps^0
coefficient.  A genuine pole shows up as a negative leading power and is reported
as a PoleError.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

from .errors import ConsistencyError, DomainError, PoleError
from .laurent import LaurentPoly
from .macpoly import g_poly
from .qkernel import QParams, as_fraction, poch, qq_finite

_INF = 1 << 30
MAXREL = 10


class Eps:
    """Truncated Laurent series in eps with exact coefficients.

    ``coeffs[k]`` is the coefficient of eps^(val + k); the series is known up to
    (but excluding) eps^ap.
    """

    __slots__ = ("val", "coeffs", "ap")

    def __init__(self, val: int, coeffs: list, ap: int = _INF):
        self.val = val
        self.coeffs = coeffs
        self.ap = ap
        self._normalize()

    def _normalize(self):
        c = self.coeffs
        k = 0
        while k < len(c) and c[k] == 0:
            k += 1
        if k:
            del c[:k]
            self.val += k
        if not c:
            self.val = min(self.val, self.ap)
        room = self.ap - self.val
        if room < len(c):
            del c[max(room, 0):]

    @classmethod
    def const(cls, x) -> "Eps":
        return cls(0, [as_fraction(x)])

    def is_zero_to_precision(self) -> bool:
        return not self.coeffs

    def __add__(self, other):
        if not isinstance(other, Eps):
            other = Eps.const(other)
        val = min(self.val if self.coeffs else self.ap, other.val if other.coeffs else other.ap)
        ap = min(self.ap, other.ap)
        hi = max([x.val + len(x.coeffs) for x in (self, other) if x.coeffs], default=val)
        hi = min(hi, ap)
        if hi <= val:
            return Eps(ap, [], ap)
        out = [Fraction(0)] * (hi - val)
        for s in (self, other):
            for k, c in enumerate(s.coeffs):
                idx = s.val + k - val
                if 0 <= idx < len(out):
                    out[idx] += c
        return Eps(val, out, ap)

    __radd__ = __add__

    def __neg__(self):
        return Eps(self.val, [-c for c in self.coeffs], self.ap)

    def __sub__(self, other):
        if not isinstance(other, Eps):
            other = Eps.const(other)
        return self + (-other)

    def __rsub__(self, other):
        return Eps.const(other) - self

    def __mul__(self, other):
        if not isinstance(other, Eps):
            x = as_fraction(other)
            if x == 0:
                return Eps(_INF, [], _INF)
            return Eps(self.val, [c * x for c in self.coeffs], self.ap)
        if not self.coeffs or not other.coeffs:
            ap = min(self.val + other.ap, other.val + self.ap)
            return Eps(ap, [], ap)
        val = self.val + other.val
        ap = min(self.val + other.ap, other.val + self.ap, val + MAXREL)
        n = min(len(self.coeffs) + len(other.coeffs) - 1, ap - val)
        out = [Fraction(0)] * n
        for i, a in enumerate(self.coeffs[:n]):
            if a:
                for j, b in enumerate(other.coeffs[: n - i]):
                    out[i + j] += a * b
        return Eps(val, out, ap)

    __rmul__ = __mul__

    def inverse(self, label: str = "factor") -> "Eps":
        if not self.coeffs:
            raise PoleError(f"pole: {label} vanishes")
        rel = min(self.ap - self.val, MAXREL)
        c = self.coeffs
        a0 = c[0]
        inv = [1 / a0]
        for k in range(1, rel):
            s = Fraction(0)
            for j in range(1, min(k, len(c) - 1) + 1):
                s += c[j] * inv[k - j]
            inv.append(-s / a0)
        return Eps(-self.val, inv, -self.val + rel)

    def __truediv__(self, other):
        if not isinstance(other, Eps):
            return self * (1 / as_fraction(other))
        return self * other.inverse()

    def __rtruediv__(self, other):
        return Eps.const(other) * self.inverse()

    def __pow__(self, n: int):
        out = Eps.const(1)
        base = self if n >= 0 else self.inverse()
        for _ in range(abs(n)):
            out = out * base
        return out

    def limit(self, label: str = "expression") -> Fraction:
        """Value at eps = 0; raises if the series has a pole there."""
        if self.coeffs and self.val < 0:
            raise PoleError(f"pole: {label} is singular at this point")
        if self.ap <= 0:
            raise ConsistencyError(f"series precision exhausted while evaluating {label}")
        if not self.coeffs or self.val > 0:
            return Fraction(0)
        return self.coeffs[0]


def _poch_eps(z: Eps, n: int, q: Fraction) -> Eps:
    out = Eps.const(1)
    qi = Fraction(1)
    for _ in range(n):
        out = out * (1 - z * qi)
        qi *= q
    return out


def _det(rows: list) -> Eps:
    n = len(rows)
    if n == 0:
        return Eps.const(1)
    total = Eps.const(0)
    for perm in itertools.permutations(range(n)):
        inv = sum(1 for i in range(n) for j in range(i + 1, n) if perm[i] > perm[j])
        term = Eps.const(-1 if inv % 2 else 1)
        for i, p in enumerate(perm):
            term = term * rows[i][p]
        total = total + term
    return total


def c_row_series(taus: Sequence[int], us: Sequence[Eps], qp: QParams) -> Eps:
    """The defining expression of C_{tau}(u) at t = q^theta, with series-valued u.

    For tau_k = theta the prefactor (q/t; q)_tau contains the zero 1 - q^theta/t
    while row k of the determinant has the pole (1 - q^tau)/(t - q^tau).  Their
    product is 1/t, so that factor is moved into row k before specializing t.
    """
    n = len(taus)
    if n != len(us):
        raise DomainError("taus and us must have equal length")
    if any(tk < 0 for tk in taus):
        raise DomainError("taus must be nonnegative")
    q, theta = qp.q, qp.theta
    t = qp.t
    out = Eps.const(1)
    for k in range(n):
        tk, uk = taus[k], us[k]
        if tk == 0:
            continue
        pre = t ** tk / poch(q, tk, q)
        for j in range(1, tk + 1):
            if not (j == theta and tk == theta):
                pre *= 1 - q ** j / t
        out = out * pre
        out = out * _poch_eps(uk * q, tk, q) * _poch_eps(uk * (q * t), tk, q).inverse(
            f"(q t u_{k + 1}; q)_{tk}")
    for i in range(n):
        ti = taus[i]
        if ti == 0:
            continue
        for j in range(i + 1, n):
            # the shift in the second pair uses tau_j (v_j = q^{tau_j} u_j)
            qtj = q ** taus[j]
            ratio = us[i] * us[j].inverse(f"u_{j + 1}")
            out = out * _poch_eps(ratio * (q / t), ti, q) * _poch_eps(ratio * q, ti, q).inverse(
                f"(q u_{i + 1}/u_{j + 1}; q)_{ti}")
            out = out * _poch_eps(ratio * (t / qtj), ti, q) * _poch_eps(ratio / qtj, ti, q).inverse(
                f"(u_{i + 1}/v_{j + 1}; q)_{ti}")
    vs = [us[i] * q ** taus[i] for i in range(n)]
    rows = []
    for i in range(n):
        v, ti = vs[i], taus[i]
        if ti == 0:
            # (u_i - v_i) = 0 exactly, so each entry is just v_i^{n-j}
            rows.append([v ** (n - j) for j in range(1, n + 1)])
            continue
        prod = Eps.const(1)
        for k in range(n):
            if k == i:
                # (u_i - q^tau u_i)/(t u_i - q^tau u_i); at tau = theta only the 1/t survives
                prod = prod * ((1 - q ** ti) / t if ti == theta else (1 - q ** ti) / (t - q ** ti))
            else:
                prod = prod * (us[k] - v) * (us[k] * t - v).inverse(f"t u_{k + 1} - q^tau u_{i + 1}")
        frac = (1 - v * t) * (1 - v).inverse(f"1 - q^tau u_{i + 1}")
        row = []
        for j in range(1, n + 1):
            tail = frac * prod * t ** (j - 1)
            entry = -tail if ti == theta else 1 - tail
            row.append(v ** (n - j) * entry)
        rows.append(row)
    vander = Eps.const(1)
    for i in range(n):
        for j in range(i + 1, n):
            vander = vander * (vs[i] - vs[j])
    return out * _det(rows) * vander.inverse("Vandermonde of q^tau u")


def c_row(taus: Sequence[int], us: Sequence, qp: QParams) -> Fraction:
    """C^{(q, q^theta)}_{taus}(us) at exact rational points."""
    taus = tuple(int(t) for t in taus)
    us = tuple(as_fraction(u) for u in us)
    return _c_row_cached(taus, us, qp.q, qp.theta)


# generic slopes for approaching a removable singularity in u
_U_SLOPES = (Fraction(3, 7), Fraction(-5, 11), Fraction(13, 17), Fraction(-19, 23), Fraction(29, 31))


def _perturbed(us: Sequence[Eps]) -> list:
    return [u * Eps(0, [Fraction(1), _U_SLOPES[k % len(_U_SLOPES)] * (k + 1)]) for k, u in enumerate(us)]


def c_row_limit(taus, us: Sequence[Eps], qp: QParams) -> Eps:
    """c_row_series, retried along a generic line in u if the direct reading hits 0/0."""
    try:
        return c_row_series(taus, us, qp)
    except PoleError:
        return c_row_series(taus, _perturbed(us), qp)


@lru_cache(maxsize=200000)
def _c_row_cached(taus, us, q, theta) -> Fraction:
    qp = QParams(q, theta)
    val = c_row_limit(taus, [Eps.const(u) for u in us], qp).limit("C")
    if any(t > theta for t in taus) and val != 0:
        # the factor (q/t; q)_tau has the zero (1 - q^theta/t) and nothing cancels it
        raise ConsistencyError("C with an entry above theta did not vanish")
    return val


def jing_jozefiak(n: int, u, qp: QParams) -> Fraction:
    """Closed form of the one-variable C_n(u)."""
    u = as_fraction(u)
    q, t = qp.q, qp.t
    den = poch(q * t * u, n, q) * (1 - u)
    if den == 0:
        raise PoleError(f"pole: u = {u} in the one-row closed form")
    return (t ** n * poch(1 / t, n, q) / poch(q, n, q) * poch(u, n, q) / poch(q * t * u, n, q)
            * (1 - q ** (2 * n) * u) / (1 - u))


def c_row_vanishing_check(taus: Sequence[int], us: Sequence, qp: QParams) -> bool:
    """True iff some tau_k > theta; in that case C is checked to be exactly 0."""
    big = any(t > qp.theta for t in taus)
    if big and c_row(taus, us, qp) != 0:
        raise ConsistencyError("vanishing lemma violated")
    return big


# ---------------------------------------------------------------------------
# strictly upper-triangular index matrices


@dataclass(frozen=True)
class UpperTriMatrix:
    """Entries tau_{i,j}, 1 <= i < j <= n, stored row by row."""

    n: int
    entries: tuple

    def __post_init__(self):
        if len(self.entries) != self.n * (self.n - 1) // 2:
            raise DomainError("wrong number of entries for a strictly upper-triangular matrix")
        if any(e < 0 for e in self.entries):
            raise DomainError("entries must be nonnegative")

    def __getitem__(self, ij) -> int:
        i, j = ij
        if not (1 <= i < j <= self.n):
            raise DomainError(f"index {ij} is not strictly upper-triangular")
        # row i starts after rows 1..i-1 of lengths n-1, ..., n-i+1
        start = (i - 1) * self.n - (i - 1) * i // 2
        return self.entries[start + (j - i - 1)]

    def plus(self, s: int) -> int:
        return sum(self[s, j] for j in range(s + 1, self.n + 1))

    def minus(self, s: int) -> int:
        return sum(self[i, s] for i in range(1, s))

    def total(self) -> int:
        return sum(self.entries)

    @classmethod
    def from_rows(cls, rows: dict, n: int) -> "UpperTriMatrix":
        return cls(n, tuple(rows.get((i, j), 0) for i in range(1, n + 1) for j in range(i + 1, n + 1)))


def upper_tri_matrices(n: int, max_entry: int):
    k = n * (n - 1) // 2
    for entries in itertools.product(range(max_entry + 1), repeat=k):
        yield UpperTriMatrix(n, entries)


def shift_exponents(tau: UpperTriMatrix, theta: int) -> tuple:
    """(i-1) theta + tau_i^+ - tau_i^- for i = 1..m."""
    return tuple((i - 1) * theta + tau.plus(i) - tau.minus(i) for i in range(1, tau.n + 1))


def c_tau_product(tau: UpperTriMatrix, xs: Sequence, qp: QParams) -> Fraction:
    """prod_s C_{tau_{1,s+1},...,tau_{s,s+1}} at u_i = x_i/x_{s+1} q^{-theta + ...}."""
    xs = tuple(as_fraction(x) for x in xs)
    if len(xs) != tau.n:
        raise DomainError("need one point per matrix row")
    return _c_tau_cached(tau, xs, qp.q, qp.theta)


@lru_cache(maxsize=200000)
def _c_tau_cached(tau, xs, q, theta) -> Fraction:
    qp = QParams(q, theta)
    m = tau.n
    out = Fraction(1)
    for s in range(1, m):
        taus = [tau[i, s + 1] for i in range(1, s + 1)]
        us = []
        for i in range(1, s + 1):
            e = -theta + sum(tau[i, j] - tau[s + 1, j] for j in range(s + 2, m + 1))
            if xs[s] == 0:
                raise PoleError(f"pole: x_{s + 1} = 0")
            us.append(xs[i - 1] / xs[s] * q ** e)
        try:
            out *= c_row(taus, us, qp)
        except PoleError as exc:
            raise PoleError(f"{exc} (in factor s = {s})") from exc
        if out == 0:
            return out
    return out


# ---------------------------------------------------------------------------
# Jacobi-Trudi


def jt_index_set(lam, N: int, max_entry: int):
    """Matrices with entries <= max_entry and lam_s + tau_s^+ - tau_s^- >= 0, sorted."""
    out = []
    for tau in upper_tri_matrices(N, max_entry):
        if all(lam[s - 1] + tau.plus(s) - tau.minus(s) >= 0 for s in range(1, N + 1)):
            out.append(tau)
    return sorted(out, key=lambda t: t.entries)


def jt_coefficient(lam, tau: UpperTriMatrix, qp: QParams) -> Fraction:
    """prod_s C(u_i = q^{lam_i - lam_{s+1} + sum_j (tau_ij - tau_{s+1,j})} t^{s-i})."""
    N = tau.n
    q, t = qp.q, qp.t
    total = Eps.const(1)
    for s in range(1, N):
        taus = [tau[i, s + 1] for i in range(1, s + 1)]
        us = []
        for i in range(1, s + 1):
            e = lam[i - 1] - lam[s] + sum(tau[i, j] - tau[s + 1, j] for j in range(s + 2, N + 1))
            us.append(Eps.const(t ** (s - i) * q ** e))
        total = total * c_row_limit(taus, us, qp)
    return total.limit(f"Jacobi-Trudi coefficient of {tau.entries}")


def jacobi_trudi_Q(lam, N: int, qp: QParams, max_entry: int | None = None) -> LaurentPoly:
    """Q_lam as a sum over index matrices of C-coefficients times products of g_n."""
    lam = tuple(lam)
    if len(lam) != N or (lam and lam[-1] < 0):
        raise DomainError("Jacobi-Trudi needs a positive signature of length N")
    bound = qp.theta if max_entry is None else max_entry
    total = LaurentPoly(N)
    for tau in jt_index_set(lam, N, bound):
        c = jt_coefficient(lam, tau, qp)
        if c == 0:
            continue
        term = LaurentPoly.constant(c, N)
        for s in range(1, N + 1):
            term = term * g_poly(lam[s - 1] + tau.plus(s) - tau.minus(s), N, qp)
        total = total + term
    return total


# ---------------------------------------------------------------------------
# checks of the appendix lemmas


def theta_one_sign_check(taus: Sequence[int], us: Sequence, q) -> bool:
    qp = QParams(as_fraction(q), 1)
    val = c_row(taus, us, qp)
    if any(t > 1 for t in taus):
        return val == 0
    return val == (-1) ** sum(taus)


def _a_n(n: int, theta: int, q: Fraction, x1: Fraction, x2: Fraction) -> Fraction:
    qp = QParams(q, theta)
    den = Fraction(1)
    for i in range(theta):
        f = x1 - q ** i * x2
        if f == 0:
            raise PoleError(f"pole: x1 = q^{i} x2")
        den *= f
    return c_row([n], [x1 / (x2 * q ** theta)], qp) / den


def a_theta_recursion_check(qp: QParams, xs: Sequence) -> bool:
    """The two-term recursion of a_n^{(theta)} and its boundary values."""
    q, theta = qp.q, qp.theta
    x1, x2 = (as_fraction(x) for x in xs)
    for i in range(theta):
        if x1 == q ** i * x2 or x2 == q ** i * x1:
            raise PoleError(f"pole: x1/x2 = q^(+-{i})")
    a0 = Fraction(1)
    at = Fraction(1)
    for i in range(theta):
        a0 /= x1 - q ** i * x2
        at /= x2 - q ** i * x1
    if _a_n(0, theta, q, x1, x2) != a0 or _a_n(theta, theta, q, x1, x2) != at:
        return False
    for n in range(1, theta):
        lhs = _a_n(n, theta, q, x1, x2)
        rhs = (_a_n(n, theta - 1, q, x1, q * x2) - _a_n(n - 1, theta - 1, q, q * x1, x2)) / (x1 - x2)
        if lhs != rhs:
            return False
    return True


def t_basis_product(m: int) -> LaurentPoly:
    """prod_{i<j} (T_j - T_i) expanded in commuting variables T_1..T_m."""
    out = LaurentPoly.constant(1, m)
    for i in range(m):
        for j in range(i + 1, m):
            out = out * (LaurentPoly.variable(j, m) - LaurentPoly.variable(i, m))
    return out


def t_basis_signed_sum(m: int) -> LaurentPoly:
    """sum over 0/1 matrices of (-1)^{|tau|} prod_k T_k^{k-1+tau_k^+-tau_k^-}."""
    out = LaurentPoly(m)
    for tau in upper_tri_matrices(m, 1):
        out = out + LaurentPoly.monomial(shift_exponents(tau, 1), (-1) ** tau.total())
    return out
