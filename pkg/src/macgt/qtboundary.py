"""Cotransition kernels on the (q,t)-Gelfand-Tsetlin graph, coherent measures,
Macdonald generating functions and the limit functions Phi^nu.

Everything on finite levels is exact.  Phi^nu is an infinite series and comes
back as a CertifiedReal.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb
from typing import Callable, Mapping, Sequence, Union

import mpmath

from .errors import ConsistencyError, DomainError, PoleError
from .gtcombin import (NuSpec, a_k_shift, format_signature, interlaces,
                       interlacings_below, n_of, parse_signature,
                       phi_support_exponents, stabilizing_signature)
from .jactrudi import c_tau_product, shift_exponents, upper_tri_matrices
from .laurent import LaurentPoly
from .macpoly import _principal, _psi, macdonald_poly
from .parallel import ordered_map
from .qchar import character_adapter
from .qkernel import (WORKPREC, CertifiedReal, QParams, _mpf, as_fraction,
                      format_rational, poch_infinite, qq_finite)


# ---------------------------------------------------------------------------
# measures and paths


@dataclass(frozen=True)
class SparseMeasure:
    """Finitely supported nonnegative masses on GT_level."""

    level: int
    masses: Mapping

    def __post_init__(self):
        clean = {}
        for lam, mass in self.masses.items():
            lam = tuple(lam)
            mass = as_fraction(mass)
            if len(lam) != self.level:
                raise DomainError(f"signature {lam} is not on level {self.level}")
            if mass < 0:
                raise DomainError(f"negative mass at {lam}")
            if mass:
                clean[lam] = mass
        object.__setattr__(self, "masses", dict(sorted(clean.items())))

    @classmethod
    def delta(cls, lam) -> "SparseMeasure":
        lam = tuple(lam)
        return cls(len(lam), {lam: Fraction(1)})

    def total(self) -> Fraction:
        return sum(self.masses.values(), Fraction(0))

    def is_probability(self) -> bool:
        return self.total() == 1

    def __getitem__(self, lam) -> Fraction:
        return self.masses.get(tuple(lam), Fraction(0))

    def support(self) -> list:
        return list(self.masses)

    def shift(self, k: int) -> "SparseMeasure":
        return SparseMeasure(self.level, {a_k_shift(lam, k): m for lam, m in self.masses.items()})

    def to_json(self) -> list:
        return [{"signature": format_signature(lam), "mass": format_rational(m)}
                for lam, m in self.masses.items()]

    @classmethod
    def from_json(cls, data: list, level: int | None = None) -> "SparseMeasure":
        masses = {parse_signature(d["signature"]): as_fraction(d["mass"]) for d in data}
        if level is None:
            if not masses:
                raise DomainError("cannot infer the level of an empty measure")
            level = len(next(iter(masses)))
        return cls(level, masses)


@dataclass(frozen=True)
class FinitePath:
    """phi^(0) < phi^(1) < ... < phi^(n) with phi^(0) the empty signature."""

    signatures: tuple

    def __post_init__(self):
        sigs = tuple(tuple(s) for s in self.signatures)
        if not sigs or sigs[0] != ():
            raise DomainError("a path starts at the empty signature")
        for k in range(1, len(sigs)):
            if not interlaces(sigs[k - 1], sigs[k]):
                raise DomainError(f"{sigs[k - 1]} does not interlace {sigs[k]}")
        object.__setattr__(self, "signatures", sigs)

    @property
    def length(self) -> int:
        return len(self.signatures) - 1

    @property
    def top(self) -> tuple:
        return self.signatures[-1]

    def extensions(self, low: int, high: int) -> list:
        from .gtcombin import interlacings_above
        return [FinitePath(self.signatures + (lam,)) for lam in interlacings_above(self.top, low, high)]

    def shift(self, k: int) -> "FinitePath":
        return FinitePath(tuple(a_k_shift(s, k) for s in self.signatures))


# ---------------------------------------------------------------------------
# links


@lru_cache(maxsize=1_000_000)
def _link(lam: tuple, mu: tuple, q: Fraction, theta: int) -> Fraction:
    if len(lam) == 1:
        return Fraction(1)
    t = q ** theta
    # psi * P_mu(t, ..., t^N) / P_lam(1, ..., t^N), with P_mu(t, ...) = t^{|mu|} P_mu(1, ...)
    return _psi(lam, mu, q, theta) * t ** sum(mu) * _principal(mu, q, theta) / _principal(lam, q, theta)


def link_one_step(lam, mu, qp: QParams) -> Fraction:
    """Lambda^{N+1}_N(lam, mu); zero unless mu interlaces lam."""
    lam, mu = tuple(lam), tuple(mu)
    if len(mu) != len(lam) - 1:
        raise DomainError("mu must be one level below lam")
    if not interlaces(mu, lam):
        return Fraction(0)
    return _link(lam, mu, qp.q, qp.theta)


def link_row(lam, qp: QParams) -> SparseMeasure:
    """Lambda^{N+1}_N(lam, .) as a measure on GT_N."""
    lam = tuple(lam)
    if not lam:
        raise DomainError("the empty signature has no level below it")
    return SparseMeasure(len(lam) - 1, {mu: _link(lam, mu, qp.q, qp.theta) for mu in interlacings_below(lam)})


def apply_links(measure: SparseMeasure, qp: QParams, workers: int | None = None) -> SparseMeasure:
    """One step down: sum_lam M(lam) Lambda(lam, .)."""
    if measure.level == 0:
        raise DomainError("level 0 has no level below it")
    items = list(measure.masses.items())
    rows = ordered_map(lambda item: (item[1], link_row(item[0], qp)), items, workers)
    out: dict = {}
    for mass, row in rows:
        for mu, p in row.masses.items():
            out[mu] = out.get(mu, 0) + mass * p
    return SparseMeasure(measure.level - 1, out)


def push_down(measure: SparseMeasure, m: int, qp: QParams, workers: int | None = None) -> SparseMeasure:
    if not 0 <= m <= measure.level:
        raise DomainError(f"cannot push level {measure.level} down to level {m}")
    while measure.level > m:
        measure = apply_links(measure, qp, workers)
    return measure


def pushforward_delta(lam, m: int, qp: QParams, workers: int | None = None) -> SparseMeasure:
    """Lambda^N_m delta_lam."""
    return push_down(SparseMeasure.delta(lam), m, qp, workers)


def pushforward_all_levels(lam, qp: QParams) -> list:
    """[Lambda^N_m delta_lam for m = N, N-1, ..., 0]."""
    out = [SparseMeasure.delta(lam)]
    while out[-1].level > 0:
        out.append(apply_links(out[-1], qp))
    return out


class Kernel:
    """A Markov kernel GT_top -> GT_bottom given by its rows."""

    def __init__(self, top: int, bottom: int, row: Callable[[tuple], SparseMeasure]):
        if bottom > top:
            raise DomainError("kernels go down in level")
        self.top, self.bottom = top, bottom
        self._row = row
        self._cache: dict = {}

    def row(self, lam) -> SparseMeasure:
        lam = tuple(lam)
        if len(lam) != self.top:
            raise DomainError(f"{lam} is not on level {self.top}")
        hit = self._cache.get(lam)
        if hit is None:
            hit = self._row(lam)
            self._cache[lam] = hit
        return hit

    def __call__(self, lam, mu) -> Fraction:
        return self.row(lam)[mu]

    def apply(self, measure: SparseMeasure) -> SparseMeasure:
        out: dict = {}
        for lam, mass in measure.masses.items():
            for mu, p in self.row(lam).masses.items():
                out[mu] = out.get(mu, 0) + mass * p
        return SparseMeasure(self.bottom, out)

    def then(self, other: "Kernel") -> "Kernel":
        """self followed by other (self first)."""
        if other.top != self.bottom:
            raise DomainError("kernel levels do not match")
        return Kernel(self.top, other.bottom, lambda lam: other.apply(self.row(lam)))


def link_kernel(N: int, qp: QParams) -> Kernel:
    """Lambda^{N}_{N-1}."""
    return Kernel(N, N - 1, lambda lam: link_row(lam, qp))


def link_compose(N: int, m: int, qp: QParams) -> Kernel:
    """Lambda^N_m = Lambda^N_{N-1} ... Lambda^{m+1}_m."""
    if not N > m >= 0:
        raise DomainError("need N > m >= 0")
    k = link_kernel(N, qp)
    for level in range(N - 1, m, -1):
        k = k.then(link_kernel(level, qp))
    return k


# ---------------------------------------------------------------------------
# generating functions


def generating_function_eval(measure: SparseMeasure, xs: Sequence, qp: QParams) -> Fraction:
    """sum_lam M(lam) P_lam(x_1, x_2 t, ..., x_m t^{m-1}) / P_lam(1, t, ..., t^{m-1})."""
    xs = [as_fraction(x) for x in xs]
    m = measure.level
    if len(xs) != m:
        raise DomainError(f"need {m} arguments for a level-{m} measure")
    if m == 0:
        return measure.total()
    total = Fraction(0)
    for lam, mass in measure.masses.items():
        total += mass * character_adapter(lam, m, xs, qp, "twisted")
    return total


def generating_function_poly(measure: SparseMeasure, qp: QParams) -> LaurentPoly:
    """The generating function as a Laurent polynomial, from the monomial expansions."""
    m = measure.level
    t = qp.t
    out = LaurentPoly(m)
    for lam, mass in measure.masses.items():
        poly = macdonald_poly(lam, m, qp).scale_variables([t ** i for i in range(m)])
        out = out + poly.scale(mass / _principal(lam, qp.q, qp.theta))
    return out


def fourier_coefficient(measure: SparseMeasure, kappa, qp: QParams) -> Fraction:
    """t^{n(kappa)} sum_lam c_{lam,kappa} M(lam) / P_lam(1, ..., t^{m-1})."""
    kappa = tuple(kappa)
    m = measure.level
    if len(kappa) != m:
        raise DomainError("exponent has the wrong length")
    total = Fraction(0)
    for lam, mass in measure.masses.items():
        c = macdonald_poly(lam, m, qp).coefficient(kappa)
        if c:
            total += c * mass / _principal(lam, qp.q, qp.theta)
    return qp.t ** n_of(kappa) * total


# ---------------------------------------------------------------------------
# paths


def _top_measure(nu_or_measure, level: int, qp: QParams, cutoff: int | None) -> SparseMeasure:
    if isinstance(nu_or_measure, SparseMeasure):
        if nu_or_measure.level != level:
            raise DomainError(f"top measure is on level {nu_or_measure.level}, path ends on {level}")
        return nu_or_measure
    if isinstance(nu_or_measure, NuSpec):
        if cutoff is None:
            raise DomainError("a nu needs a cutoff N to approximate its boundary measure")
        return boundary_measure_approx(nu_or_measure, level, cutoff, qp)
    raise DomainError("expected a SparseMeasure or a NuSpec")


def path_probability(nu_or_measure, phi: FinitePath, qp: QParams, cutoff: int | None = None) -> Fraction:
    """M(S_phi) = t^{sum_{k<n} |phi^(k)|} prod_k psi_{phi^(k)/phi^(k-1)} / P_{phi^(n)}(1..t^{n-1}) * M_n(phi^(n))."""
    top = _top_measure(nu_or_measure, phi.length, qp, cutoff)
    n = phi.length
    if n == 0:
        return top.total()
    sigs = phi.signatures
    out = Fraction(1)
    for k in range(2, n + 1):
        out *= _psi(sigs[k], sigs[k - 1], qp.q, qp.theta)
    out *= qp.t ** sum(sum(s) for s in sigs[:n])
    # the first step contributes psi_{(a)/()} = 1 and no t power
    return out / _principal(sigs[n], qp.q, qp.theta) * top[sigs[n]]


def path_probability_links(nu_or_measure, phi: FinitePath, qp: QParams, cutoff: int | None = None) -> Fraction:
    """The same quantity as a product of one-step links."""
    top = _top_measure(nu_or_measure, phi.length, qp, cutoff)
    out = top[phi.top] if phi.length else top.total()
    for k in range(phi.length, 0, -1):
        out *= link_one_step(phi.signatures[k], phi.signatures[k - 1], qp)
    return out


# ---------------------------------------------------------------------------
# boundary measures


def boundary_measure_approx(nu: NuSpec, m: int, N: int, qp: QParams, workers: int | None = None) -> SparseMeasure:
    """Lambda^N_m delta_{lam(N)} with lam(N) the stabilizing signature of nu."""
    if not N > m >= 0:
        raise DomainError("need N > m >= 0")
    return pushforward_delta(stabilizing_signature(nu, N), m, qp, workers)


def mass_lower_bound(m: int, qp: QParams, eps=mpmath.mpf("1e-30")) -> CertifiedReal:
    """((t;t)_inf)^{theta m}."""
    base = poch_infinite(qp.t, qp.t, eps)
    return base ** (qp.theta * m)


# ---------------------------------------------------------------------------
# Phi^nu


MAX_TERMS = 5000


@dataclass(frozen=True)
class _ResidueSeries:
    """sum_p x^p R_p over the support of nu, split as a finite head plus an
    arithmetic progression n0, n0 + 1, ... (the constant tail of nu)."""

    head: tuple  # exponents p with r < L
    n0: int
    q: Fraction


@lru_cache(maxsize=4096)
def _series(nu: NuSpec, q: Fraction, theta: int) -> _ResidueSeries:
    L = nu.length
    head = tuple(phi_support_exponents(nu, theta, L - 1)) if L > 1 else ()
    n0 = nu.entry(L) + theta * (L - 1)
    if head and head[-1] >= n0:
        raise ConsistencyError("head exponents must lie below the tail")
    return _ResidueSeries(head, n0, q)


@lru_cache(maxsize=100000)
def _head_weight(ser: _ResidueSeries, p: int) -> Fraction:
    """R_p = (q;q)_inf / prod_{p' != p} (1 - q^{p'-p}) for p in the head."""
    q = ser.q
    out = _qq_cached(q, ser.n0 - p - 1)
    for p2 in ser.head:
        if p2 != p:
            out /= 1 - q ** (p2 - p)
    return out


@lru_cache(maxsize=100000)
def _tail_weight(ser: _ResidueSeries, K: int) -> Fraction:
    """R_{n0+K} = 1 / (prod_{k=1}^K (1 - q^{-k}) prod_{head} (1 - q^{p'-n0-K}))."""
    q = ser.q
    if K == 0:
        den = Fraction(1)
        for p2 in ser.head:
            den *= 1 - q ** (p2 - ser.n0)
        return 1 / den
    prev = _tail_weight(ser, K - 1)
    p = ser.n0 + K
    ratio = 1 / (1 - q ** (-K))
    for p2 in ser.head:
        ratio *= (1 - q ** (p2 - p + 1)) / (1 - q ** (p2 - p))
    return prev * ratio


@lru_cache(maxsize=4096)
def _qq_cached(q: Fraction, n: int) -> Fraction:
    return qq_finite(n, QParams(q, 1))


def residue_series(nu: NuSpec, y, qp: QParams, eps) -> CertifiedReal:
    """S(y) = sum_{r,s} y^{nu_r + theta(r-1) + s} R_{r,s}, so that Phi^nu(y) = S(y)/(yq;q)_inf.

    The weights are exact.  For consecutive tail terms the ratio is at most
    rho_K = |y| q^{K+1+h} / (1 - q^{K+1}), h the head size, which decreases in K;
    the tail after term K is at most |term_K| rho_K / (1 - rho_K).
    """
    y = as_fraction(y)
    eps = _mpf(eps)
    ser = _series(nu, qp.q, qp.theta)
    q = qp.q
    if y == 0:
        if ser.head and ser.head[0] < 0 or ser.n0 < 0:
            raise PoleError("pole: y = 0 with negative exponents in the series")
    total = Fraction(0)
    for p in ser.head:
        total += y ** p * _head_weight(ser, p)
    h = len(ser.head)
    ay = abs(y)
    K = 0
    while True:
        term = y ** (ser.n0 + K) * _tail_weight(ser, K)
        total += term
        rho = ay * q ** (K + 1 + h) / (1 - q ** (K + 1))
        if rho < Fraction(1, 2):
            with mpmath.workprec(WORKPREC):
                bound = _mpf(abs(term)) * _mpf(rho) / (1 - _mpf(rho))
            if bound <= eps:
                break
        K += 1
        if K > MAX_TERMS:
            r_needed = nu.length + K // qp.theta
            raise DomainError(f"truncation needs more than {MAX_TERMS} tail terms (R > {r_needed}) at |x| = {float(ay):.3g}")
    with mpmath.workprec(WORKPREC):
        value = _mpf(total)
        return CertifiedReal(value, bound + abs(value) * mpmath.mpf(2) ** (4 - WORKPREC))


def _check_phi_pole(y: Fraction, q: Fraction, label: str):
    # (y q; q)_inf vanishes exactly at y = q^{-k}, k >= 1
    if y > 1:
        k = 0
        w = y
        while w > 1:
            w *= q
            k += 1
        if w == 1:
            raise PoleError(f"pole: {label} = q^-{k}")


def phi_nu_one(nu: NuSpec, x, qp: QParams, eps=mpmath.mpf("1e-20")) -> CertifiedReal:
    """Phi^nu(x) = S(x) / (xq; q)_inf with a certified error bound <= eps."""
    x = as_fraction(x)
    eps = _mpf(eps)
    _check_phi_pole(x, qp.q, "x")
    inner = eps
    for _ in range(20):
        den = poch_infinite(x * qp.q, qp.q, inner)
        num = residue_series(nu, x, qp, inner)
        out = num / den
        if out.error_bound <= eps:
            return out
        inner = inner / 16
    raise ConsistencyError("could not reach the requested accuracy")


def phi_nu_multi(nu: NuSpec, xs: Sequence, qp: QParams, eps=mpmath.mpf("1e-20")) -> CertifiedReal:
    """The m-variable Phi^nu from shifted one-variable residue series.

    Phi is symmetric but the formula is not termwise: a single coefficient can
    be singular where the sum is not.  Other orderings of xs are tried then.
    """
    xs = tuple(as_fraction(x) for x in xs)
    m = len(xs)
    if m == 0:
        raise DomainError("need at least one variable")
    if m == 1:
        return phi_nu_one(nu, xs[0], qp, eps)
    first = None
    for perm in itertools.permutations(range(m)):
        try:
            return _phi_multi_ordered(nu, tuple(xs[i] for i in perm), qp, eps)
        except PoleError as exc:
            if first is None:
                first = exc
    raise first


def _phi_multi_ordered(nu: NuSpec, xs: tuple, qp: QParams, eps) -> CertifiedReal:
    m = len(xs)
    q, theta, t = qp.q, qp.theta, qp.t
    eps = _mpf(eps)
    pre = q ** (-2 * theta ** 2 * comb(m, 3) - comb(theta + 1, 2) * comb(m, 2))
    for i in range(m):
        if xs[i] == 0:
            raise PoleError(f"pole: x_{i + 1} = 0")
        for j in range(i + 1, m):
            for k in range(theta):
                f = q ** k * xs[j] - xs[i]
                if f == 0:
                    raise PoleError(f"pole: x_{i + 1} = q^{k} x_{j + 1}")
                pre /= f
    for i, x in enumerate(xs):
        _check_phi_pole(x * t ** (m - 1), q, f"x_{i + 1} t^{m - 1}")
    terms = []
    for tau in upper_tri_matrices(m, theta):
        c = c_tau_product(tau, xs, qp)
        if c:
            terms.append((c, shift_exponents(tau, theta)))
    inner = eps
    for _ in range(20):
        cache: dict = {}

        def S(y):
            v = cache.get(y)
            if v is None:
                v = residue_series(nu, y, qp, inner)
                cache[y] = v
            return v

        total = CertifiedReal(mpmath.mpf(0), mpmath.mpf(0))
        for c, exps in terms:
            prod = CertifiedReal.exact(c)
            for x, e in zip(xs, exps):
                prod = prod * S(x * q ** e)
            total = total + prod
        den = CertifiedReal(mpmath.mpf(1), mpmath.mpf(0))
        for x in xs:
            den = den * poch_infinite(x * q * t ** (m - 1), q, inner)
        out = CertifiedReal.exact(pre) * total / den
        if out.error_bound <= eps:
            return out
        inner = inner / 1024
    raise ConsistencyError("could not reach the requested accuracy")


def prelimit_character(nu: NuSpec, N: int, xs: Sequence, qp: QParams) -> Fraction:
    """P_{lam(N)}(x_1..x_m, t^{-m}, ..., t^{1-N}) / P_{lam(N)}(1, t^{-1}, ..., t^{1-N})."""
    return character_adapter(stabilizing_signature(nu, N), N, xs, qp, "inverse")


def verify_generating_relation(nu: NuSpec, m: int, N: int, xs: Sequence, qp: QParams,
                               eps=mpmath.mpf("1e-6")) -> dict:
    """Compare the generating function of Lambda^N_m delta_{lam(N)} with Phi^nu(x_1 t^{1-m}, ..., x_m).

    Never raises on a mismatch; the verdict and residual are reported.
    """
    xs = tuple(as_fraction(x) for x in xs)
    if len(xs) != m:
        raise DomainError(f"need {m} arguments")
    eps = _mpf(eps)
    t = qp.t
    left = generating_function_eval(boundary_measure_approx(nu, m, N, qp), xs, qp)
    right = phi_nu_multi(nu, [x * t ** (i + 1 - m) for i, x in enumerate(xs)], qp, eps / 100)
    with mpmath.workprec(WORKPREC):
        residual = abs(_mpf(left) - right.value)
        ok = residual <= eps + right.error_bound
    return {"passed": bool(ok), "residual": residual, "exact": left, "phi": right}


def convergence_table(nu: NuSpec, xs: Sequence, Ns: Sequence[int], qp: QParams,
                      eps=mpmath.mpf("1e-20")) -> list:
    """Rows (N, exact prelimit character, Phi value, residual) in the Phi normalization."""
    xs = tuple(as_fraction(x) for x in xs)
    phi = phi_nu_multi(nu, xs, qp, eps)
    rows = []
    for N in Ns:
        if N < len(xs):
            raise DomainError(f"N = {N} is below the number of variables")
        exact = prelimit_character(nu, N, xs, qp)
        with mpmath.workprec(WORKPREC):
            residual = abs(_mpf(exact) - phi.value)
        rows.append({"N": N, "exact": exact, "phi": phi, "residual": residual})
    return rows


def residuals_nonincreasing(rows: list) -> bool:
    return all(rows[i + 1]["residual"] <= rows[i]["residual"] for i in range(len(rows) - 1))
